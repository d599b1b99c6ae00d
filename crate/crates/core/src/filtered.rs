//! Finite filtered cochain complexes over an exact field, their spectral
//! sequences, and the functors between them: suspension/loops, shift and
//! décalage, mapping cones, kernels/cokernels, pushouts/pullbacks, and the
//! small representing objects for cycle and boundary functors.
//!
//! The filtration is stored as one integer weight per basis vector (an
//! adapted basis): `F_p` of a degree is the span of the basis vectors of
//! weight ≤ p. Operations whose natural output is not adapted to the old
//! basis (décalage, quotients) re-compute an adapted basis by elimination
//! in increasing weight order, which keeps serialization canonical.

use std::collections::BTreeMap;

use crate::field::Field;
use crate::matrix::Matrix;
use crate::subspace::{adapted_basis, Subspace};
use crate::Error;

/// A bounded filtered cochain complex: finitely many nonzero cohomological
/// degrees, each with a weighted basis, and differentials raising degree
/// by one while not raising weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    field: Field,
    degrees: BTreeMap<i64, DegreeData>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct DegreeData {
    weights: Vec<i64>,
    /// Differential out of this degree, `dim(n+1) × dim(n)`.
    d: Matrix,
}

impl FilteredComplex {
    pub fn zero(field: Field) -> FilteredComplex {
        FilteredComplex {
            field,
            degrees: BTreeMap::new(),
        }
    }

    /// Builds a complex from per-degree weights and differentials, dropping
    /// zero-dimensional degrees and validating every invariant.
    pub fn new(
        field: Field,
        weights: BTreeMap<i64, Vec<i64>>,
        diffs: BTreeMap<i64, Matrix>,
    ) -> Result<FilteredComplex, Error> {
        field.validate()?;
        let weights: BTreeMap<i64, Vec<i64>> =
            weights.into_iter().filter(|(_, w)| !w.is_empty()).collect();
        let mut degrees = BTreeMap::new();
        for (&n, w) in &weights {
            let rows = weights.get(&(n + 1)).map_or(0, |v| v.len());
            let d = match diffs.get(&n) {
                Some(m) => {
                    if m.field() != field {
                        return Err(Error::FieldMismatch);
                    }
                    if m.rows() != rows || m.cols() != w.len() {
                        return Err(Error::Shape(format!(
                            "differential at degree {n}: got {}×{}, expected {}×{}",
                            m.rows(),
                            m.cols(),
                            rows,
                            w.len()
                        )));
                    }
                    m.clone()
                }
                None => Matrix::zero(field, rows, w.len()),
            };
            degrees.insert(
                n,
                DegreeData {
                    weights: w.clone(),
                    d,
                },
            );
        }
        for (&n, m) in &diffs {
            if !weights.contains_key(&n) && !m.is_zero() {
                return Err(Error::Shape(format!(
                    "differential at degree {n} without a source degree"
                )));
            }
        }
        let c = FilteredComplex { field, degrees };
        let violations = c.validate();
        if violations.is_empty() {
            Ok(c)
        } else {
            Err(Error::Validation(violations.join("; ")))
        }
    }

    /// Checks d² = 0 and that differentials never raise weight; returns one
    /// message per violation, with its location.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (&n, deg) in &self.degrees {
            let d_next = self.d(n + 1);
            if !d_next.mul(&deg.d).is_zero() {
                out.push(format!("d·d ≠ 0 out of degree {n}"));
            }
            let next = self.weights(n + 1);
            for j in 0..deg.weights.len() {
                for i in 0..deg.d.rows() {
                    if !deg.d.get(i, j).is_zero() && next[i] > deg.weights[j] {
                        out.push(format!(
                            "differential raises weight at degree {n}: basis vector {j} \
                             (weight {}) hits target vector {i} (weight {})",
                            deg.weights[j], next[i]
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, n: i64) -> usize {
        self.degrees.get(&n).map_or(0, |d| d.weights.len())
    }

    pub fn weights(&self, n: i64) -> Vec<i64> {
        self.degrees.get(&n).map_or_else(Vec::new, |d| d.weights.clone())
    }

    /// Differential `A^n → A^{n+1}`, zero-filled outside the support.
    pub fn d(&self, n: i64) -> Matrix {
        match self.degrees.get(&n) {
            Some(deg) => deg.d.clone(),
            None => Matrix::zero(self.field, self.dim(n + 1), 0),
        }
    }

    pub fn support(&self) -> Vec<i64> {
        self.degrees.keys().copied().collect()
    }

    pub fn is_zero_complex(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.degrees
            .values()
            .flat_map(|d| d.weights.iter().copied())
            .min()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.degrees
            .values()
            .flat_map(|d| d.weights.iter().copied())
            .max()
    }

    /// `F_pA^n` as a coordinate subspace of `A^n`.
    pub fn filt(&self, n: i64, p: i64) -> Subspace {
        let w = self.weights(n);
        let idx: Vec<usize> = (0..w.len()).filter(|&i| w[i] <= p).collect();
        Subspace::coordinate(self.field, w.len(), &idx)
    }

    /// `Z_r^{p,p+n} = F_pA^n ∩ d^{-1}(F_{p-r}A^{n+1})`.
    pub fn cycles(&self, r: u32, p: i64, n: i64) -> Subspace {
        let fp = self.filt(n, p);
        let target = self.filt(n + 1, p - r as i64);
        let pre = target.preimage(&self.d(n)).expect("ambient dims agree");
        fp.intersect(&pre).expect("ambient dims agree")
    }

    /// `B_r^{p,p+n} = d(Z_{r-1}^{p+r-1, n-1}) + Z_{r-1}^{p-1, n}` for r ≥ 1,
    /// and `F_{p-1}A^n` for r = 0. Contained in the r-cycles by construction;
    /// the containment is asserted.
    pub fn boundaries(&self, r: u32, p: i64, n: i64) -> Subspace {
        let b = if r == 0 {
            self.filt(n, p - 1)
        } else {
            let dz = self
                .cycles(r - 1, p + r as i64 - 1, n - 1)
                .image_under(&self.d(n - 1));
            let z = self.cycles(r - 1, p - 1, n);
            dz.sum(&z).expect("ambient dims agree")
        };
        assert!(
            self.cycles(r, p, n).contains(&b),
            "boundaries not contained in cycles at r={r}, p={p}, n={n}"
        );
        b
    }

    /// Weight window `[min-r-1, max+r+1]` covering every bidegree a page-`r`
    /// computation can reference.
    pub fn weight_window(&self, r: u32) -> Option<(i64, i64)> {
        Some((
            self.min_weight()? - r as i64 - 1,
            self.max_weight()? + r as i64 + 1,
        ))
    }

    pub fn page(&self, r: u32) -> PageTable {
        let mut entries = BTreeMap::new();
        if let Some((lo, hi)) = self.weight_window(r) {
            for &n in self.degrees.keys() {
                for p in lo..=hi {
                    let z = self.cycles(r, p, n);
                    if z.dim() == 0 {
                        continue;
                    }
                    let b = self.boundaries(r, p, n);
                    let q = z.quotient(&b).expect("boundaries inside cycles");
                    if q.dim == 0 {
                        continue;
                    }
                    entries.insert(
                        (p, p + n),
                        PageEntry {
                            dim: q.dim,
                            z_basis: z.basis().clone(),
                            projector: q.projector,
                            section: q.section,
                        },
                    );
                }
            }
        }
        let keys: Vec<(i64, i64)> = entries.keys().copied().collect();
        let mut diffs = BTreeMap::new();
        for (p, q) in keys {
            let n = q - p;
            let src = &entries[&(p, q)];
            let tgt_key = (p - r as i64, q + 1 - r as i64);
            let Some(tgt) = entries.get(&tgt_key) else {
                continue;
            };
            // map each representative by d and read it off in the target's
            // cycle coordinates
            let reps = src.z_basis.mul(&src.section);
            let image = self.d(n).mul(&reps);
            let in_z = tgt
                .z_basis
                .solve(&image)
                .expect("d of an r-cycle is an r-cycle");
            diffs.insert((p, q), tgt.projector.mul(&in_z));
        }
        PageTable { r, entries, diffs }
    }
}

/// One entry of a spectral-sequence page: the quotient `Z_r/B_r` at a
/// bidegree, with a section picking cycle representatives in the ambient
/// degree and a projector sending a cycle (in `z_basis` coordinates) to its
/// class.
#[derive(Debug, Clone)]
pub struct PageEntry {
    pub dim: usize,
    pub z_basis: Matrix,
    pub projector: Matrix,
    pub section: Matrix,
}

impl PageEntry {
    /// Ambient-coordinate representatives of the page basis.
    pub fn representatives(&self) -> Matrix {
        self.z_basis.mul(&self.section)
    }
}

/// A full page: entries indexed by bidegree `(p, q)` with `q = p + n`, and
/// the page differentials of bidegree `(-r, 1-r)`. Zero entries are omitted.
#[derive(Debug, Clone)]
pub struct PageTable {
    pub r: u32,
    pub entries: BTreeMap<(i64, i64), PageEntry>,
    pub diffs: BTreeMap<(i64, i64), Matrix>,
}

impl PageTable {
    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.entries.get(&(p, q)).map_or(0, |e| e.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.entries.values().map(|e| e.dim).sum()
    }

    /// Differential leaving `(p, q)`, zero-filled when absent.
    pub fn diff(&self, field: Field, p: i64, q: i64) -> Matrix {
        match self.diffs.get(&(p, q)) {
            Some(m) => m.clone(),
            None => {
                let r = self.r as i64;
                Matrix::zero(field, self.dim(p - r, q + 1 - r), self.dim(p, q))
            }
        }
    }

    /// Homology dimension of the page at `(p, q)` viewed as a bigraded
    /// complex under its own differential. By the page recursion this equals
    /// the next page's dimension there.
    pub fn homology_dim(&self, field: Field, p: i64, q: i64) -> usize {
        let r = self.r as i64;
        let out = self.diff(field, p, q);
        let inc = self.diff(field, p + r, q - 1 + r);
        let ker = self.dim(p, q) - out.rank();
        ker - inc.rank()
    }
}

/// A filtration-preserving chain map between filtered complexes. Owns clones
/// of its endpoints so it can be validated and moved around freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: FilteredComplex,
    target: FilteredComplex,
    maps: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn new(
        source: FilteredComplex,
        target: FilteredComplex,
        maps: BTreeMap<i64, Matrix>,
    ) -> Result<ChainMap, Error> {
        if source.field != target.field {
            return Err(Error::FieldMismatch);
        }
        let maps: BTreeMap<i64, Matrix> = maps.into_iter().filter(|(_, m)| m.cols() > 0 && m.rows() > 0).collect();
        for (&n, m) in &maps {
            if m.rows() != target.dim(n) || m.cols() != source.dim(n) {
                return Err(Error::Shape(format!(
                    "map at degree {n}: got {}×{}, expected {}×{}",
                    m.rows(),
                    m.cols(),
                    target.dim(n),
                    source.dim(n)
                )));
            }
            if m.field() != source.field {
                return Err(Error::FieldMismatch);
            }
        }
        let f = ChainMap {
            source,
            target,
            maps,
        };
        // chain condition
        for &n in f.source.degrees.keys() {
            let lhs = f.map(n + 1).mul(&f.source.d(n));
            let rhs = f.target.d(n).mul(&f.map(n));
            if lhs != rhs {
                return Err(Error::Validation(format!(
                    "does not commute with the differentials at degree {n}"
                )));
            }
            // filtration: in adapted bases this is entrywise
            let sw = f.source.weights(n);
            let tw = f.target.weights(n);
            let m = f.map(n);
            for j in 0..sw.len() {
                for i in 0..tw.len() {
                    if !m.get(i, j).is_zero() && tw[i] > sw[j] {
                        return Err(Error::Validation(format!(
                            "raises weight at degree {n}: source vector {j} (weight {}) \
                             hits target vector {i} (weight {})",
                            sw[j], tw[i]
                        )));
                    }
                }
            }
        }
        Ok(f)
    }

    pub fn identity(a: &FilteredComplex) -> ChainMap {
        let maps = a
            .degrees
            .keys()
            .map(|&n| (n, Matrix::identity(a.field, a.dim(n))))
            .collect();
        ChainMap::new(a.clone(), a.clone(), maps).expect("identity is valid")
    }

    pub fn zero(source: &FilteredComplex, target: &FilteredComplex) -> ChainMap {
        ChainMap::new(source.clone(), target.clone(), BTreeMap::new())
            .expect("zero map is valid")
    }

    pub fn source(&self) -> &FilteredComplex {
        &self.source
    }

    pub fn target(&self) -> &FilteredComplex {
        &self.target
    }

    pub fn map(&self, n: i64) -> Matrix {
        match self.maps.get(&n) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.source.field, self.target.dim(n), self.source.dim(n)),
        }
    }

    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap, Error> {
        if inner.target != self.source {
            return Err(Error::Validation(
                "composition endpoints do not match".into(),
            ));
        }
        let mut maps = BTreeMap::new();
        for &n in inner.source.degrees.keys() {
            maps.insert(n, self.map(n).mul(&inner.map(n)));
        }
        ChainMap::new(inner.source.clone(), self.target.clone(), maps)
    }

    /// Matrices induced on the page-`r` entries, indexed over the union of
    /// the two supports (absent entries are zero-dimensional).
    pub fn page_map(&self, r: u32) -> BTreeMap<(i64, i64), Matrix> {
        let ps = self.source.page(r);
        let pt = self.target.page(r);
        let mut keys: Vec<(i64, i64)> = ps.entries.keys().copied().collect();
        keys.extend(pt.entries.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        let field = self.source.field;
        let mut out = BTreeMap::new();
        for (p, q) in keys {
            let sdim = ps.dim(p, q);
            let tdim = pt.dim(p, q);
            let m = match (ps.entries.get(&(p, q)), pt.entries.get(&(p, q))) {
                (Some(se), Some(te)) => {
                    let reps = se.representatives();
                    let image = self.map(q - p).mul(&reps);
                    let in_z = te
                        .z_basis
                        .solve(&image)
                        .expect("a chain map sends r-cycles to r-cycles");
                    te.projector.mul(&in_z)
                }
                _ => Matrix::zero(field, tdim, sdim),
            };
            out.insert((p, q), m);
        }
        out
    }

    /// True when the induced map on page r+1 is an isomorphism everywhere.
    pub fn is_r_weq(&self, r: u32) -> bool {
        self.page_map(r + 1).values().all(|m| m.is_invertible())
    }

    /// Whether the induced map `Z_k(source) → Z_k(target)` is surjective at
    /// bidegree `(p, p+n)`.
    pub fn cycle_surjective_at(&self, k: u32, p: i64, n: i64) -> bool {
        let zt = self.target.cycles(k, p, n);
        if zt.dim() == 0 {
            return true;
        }
        let zs = self.source.cycles(k, p, n);
        self.map(n).mul(zs.basis()).rank() == zt.dim()
    }

    /// `Z_k`-surjectivity over the whole (finite) support window of both
    /// endpoints.
    pub fn cycle_surjective(&self, k: u32) -> bool {
        let mut degs = self.source.support();
        degs.extend(self.target.support());
        degs.sort_unstable();
        degs.dedup();
        let lo = [
            self.source.weight_window(k),
            self.target.weight_window(k),
        ];
        let (min, max) = match lo.iter().flatten().fold(None, |acc, &(a, b)| match acc {
            None => Some((a, b)),
            Some((x, y)) => Some((x.min(a), y.max(b))),
        }) {
            Some(w) => w,
            None => return true,
        };
        degs.iter().all(|&n| {
            (min..=max).all(|p| self.cycle_surjective_at(k, p, n))
        })
    }

    /// Strictness: any element mapping into `F_p` already lives in `F_p`.
    pub fn is_strict(&self) -> bool {
        let lo = self
            .source
            .min_weight()
            .into_iter()
            .chain(self.target.min_weight())
            .min();
        let hi = self
            .source
            .max_weight()
            .into_iter()
            .chain(self.target.max_weight())
            .max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return true;
        };
        for &n in self.source.degrees.keys() {
            for p in lo - 1..=hi {
                let pre = self
                    .target
                    .filt(n, p)
                    .preimage(&self.map(n))
                    .expect("ambient dims agree");
                if !self.source.filt(n, p).contains(&pre) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_injective(&self) -> bool {
        self.source
            .degrees
            .keys()
            .all(|&n| self.map(n).rank() == self.source.dim(n))
    }

    pub fn is_surjective(&self) -> bool {
        self.target
            .degrees
            .keys()
            .all(|&n| self.map(n).rank() == self.target.dim(n))
    }

    /// Kernel subcomplex with the induced (intersection) filtration, plus
    /// its inclusion.
    pub fn kernel(&self) -> (FilteredComplex, ChainMap) {
        let bases: BTreeMap<i64, Matrix> = self
            .source
            .degrees
            .keys()
            .map(|&n| (n, self.map(n).kernel()))
            .collect();
        sub_complex(&self.source, &bases)
    }

    /// Cokernel with the image filtration, plus the projection onto it.
    pub fn cokernel(&self) -> (FilteredComplex, ChainMap) {
        let bases: BTreeMap<i64, Matrix> = self
            .target
            .degrees
            .keys()
            .map(|&n| (n, self.map(n)))
            .collect();
        quotient_complex(&self.target, &bases)
    }

    /// Effective monomorphism: injective and canonically isomorphic (as a
    /// filtered complex) to the kernel of its cokernel.
    pub fn is_effective_mono(&self) -> bool {
        if !self.is_injective() {
            return false;
        }
        let (_, proj) = self.cokernel();
        let (ker, incl) = proj.kernel();
        // factor self through the kernel inclusion and demand a filtered iso
        let mut maps = BTreeMap::new();
        for &n in self.source.degrees.keys() {
            match incl.map(n).solve(&self.map(n)) {
                Some(h) => {
                    maps.insert(n, h);
                }
                None => return false,
            }
        }
        let Ok(h) = ChainMap::new(self.source.clone(), ker, maps) else {
            return false;
        };
        h.is_filtered_iso()
    }

    /// Isomorphism of filtered complexes: bijective with a filtration-
    /// preserving inverse (equivalently, bijective and strict).
    pub fn is_filtered_iso(&self) -> bool {
        let mut degs = self.source.support();
        degs.extend(self.target.support());
        degs.sort_unstable();
        degs.dedup();
        degs.iter()
            .all(|&n| self.map(n).is_invertible())
            && self.is_strict()
    }
}

/// Direct sum, with canonical inclusions available through block indices:
/// the `a` summand occupies the first `a.dim(n)` coordinates in each degree.
pub fn direct_sum(a: &FilteredComplex, b: &FilteredComplex) -> FilteredComplex {
    assert_eq!(a.field, b.field);
    let mut degs: Vec<i64> = a.support();
    degs.extend(b.support());
    degs.sort_unstable();
    degs.dedup();
    let mut weights = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for &n in &degs {
        let mut w = a.weights(n);
        w.extend(b.weights(n));
        weights.insert(n, w);
        diffs.insert(n, a.d(n).direct_sum(&b.d(n)));
    }
    FilteredComplex::new(a.field, weights, diffs).expect("direct sum of valid complexes")
}

/// Subcomplex spanned degreewise by the given column spans (must be stable
/// under the differential), with the intersection filtration re-adapted.
/// Returns the subcomplex and its inclusion.
pub fn sub_complex(
    ambient: &FilteredComplex,
    bases: &BTreeMap<i64, Matrix>,
) -> (FilteredComplex, ChainMap) {
    let field = ambient.field;
    let (lo, hi) = match (ambient.min_weight(), ambient.max_weight()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let z = FilteredComplex::zero(field);
            return (z.clone(), ChainMap::zero(&z, ambient));
        }
    };
    let mut weights = BTreeMap::new();
    let mut incls = BTreeMap::new();
    for (&n, basis) in bases {
        let k = Subspace::from_columns(basis);
        if k.dim() == 0 {
            continue;
        }
        let flag: Vec<(i64, Subspace)> = (lo..=hi)
            .map(|p| {
                (
                    p,
                    k.intersect(&ambient.filt(n, p)).expect("same ambient"),
                )
            })
            .collect();
        let (w, cols) = adapted_basis(&flag);
        assert_eq!(w.len(), k.dim(), "filtration flag must exhaust the subspace");
        weights.insert(n, w);
        incls.insert(n, cols);
    }
    let mut diffs = BTreeMap::new();
    for (&n, cols) in &incls {
        let next = match incls.get(&(n + 1)) {
            Some(c) => c.clone(),
            None => Matrix::zero(field, ambient.dim(n + 1), 0),
        };
        let image = ambient.d(n).mul(cols);
        let d = next
            .solve(&image)
            .expect("span is not stable under the differential");
        diffs.insert(n, d);
    }
    let sub = FilteredComplex::new(field, weights, diffs).expect("subcomplex is valid");
    let incl = ChainMap::new(sub.clone(), ambient.clone(), incls).expect("inclusion is valid");
    (sub, incl)
}

/// Quotient of `ambient` by the subcomplex spanned degreewise by the given
/// columns (must be d-stable), carrying the image filtration. Returns the
/// quotient and the projection onto it.
pub fn quotient_complex(
    ambient: &FilteredComplex,
    sub_bases: &BTreeMap<i64, Matrix>,
) -> (FilteredComplex, ChainMap) {
    let field = ambient.field;
    let (lo, hi) = match (ambient.min_weight(), ambient.max_weight()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let z = FilteredComplex::zero(field);
            return (z.clone(), ChainMap::zero(ambient, &z));
        }
    };
    let mut weights = BTreeMap::new();
    let mut projs = BTreeMap::new();
    for &n in ambient.degrees.keys() {
        let dim = ambient.dim(n);
        let sub = match sub_bases.get(&n) {
            Some(b) => Subspace::from_columns(b),
            None => Subspace::zero(field, dim),
        };
        let full = Subspace::full(field, dim);
        let q = full.quotient(&sub).expect("subspace of the full space");
        if q.dim == 0 {
            continue;
        }
        // image filtration, re-adapted
        let flag: Vec<(i64, Subspace)> = (lo..=hi)
            .map(|p| (p, ambient.filt(n, p).image_under(&q.projector)))
            .collect();
        let (w, cols) = adapted_basis(&flag);
        assert_eq!(w.len(), q.dim, "image filtration must exhaust the quotient");
        let t_inv = cols.inverse().expect("adapted basis is invertible");
        weights.insert(n, w);
        projs.insert(n, t_inv.mul(&q.projector));
    }
    let mut diffs = BTreeMap::new();
    for (&n, proj) in &projs {
        let next = match projs.get(&(n + 1)) {
            Some(m) => m.clone(),
            None => Matrix::zero(field, 0, ambient.dim(n + 1)),
        };
        // lift a quotient basis through the projection, push by d, project
        let lift = proj
            .solve(&Matrix::identity(field, proj.rows()))
            .expect("projection is surjective");
        diffs.insert(n, next.mul(&ambient.d(n)).mul(&lift));
    }
    let quot = FilteredComplex::new(field, weights, diffs).expect("quotient is valid");
    let proj = ChainMap::new(ambient.clone(), quot.clone(), projs).expect("projection is valid");
    (quot, proj)
}

/// `Σ^r`: degree shift down by one on indices ((Σ^rA)^n = A^{n+1}), negated
/// differential, all weights raised by r.
pub fn suspension(a: &FilteredComplex, r: u32) -> FilteredComplex {
    let mut weights = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (&n, deg) in &a.degrees {
        weights.insert(
            n - 1,
            deg.weights.iter().map(|w| w + r as i64).collect(),
        );
        diffs.insert(n - 1, deg.d.neg());
    }
    FilteredComplex::new(a.field, weights, diffs).expect("suspension of a valid complex")
}

/// `Ω^r`, the exact inverse of [`suspension`].
pub fn loops(a: &FilteredComplex, r: u32) -> FilteredComplex {
    let mut weights = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (&n, deg) in &a.degrees {
        weights.insert(
            n + 1,
            deg.weights.iter().map(|w| w - r as i64).collect(),
        );
        diffs.insert(n + 1, deg.d.neg());
    }
    FilteredComplex::new(a.field, weights, diffs).expect("loops of a valid complex")
}

/// Shift `S^r`: same underlying complex, degree-n weights lowered by `r·n`.
pub fn shift(a: &FilteredComplex, r: u32) -> FilteredComplex {
    let mut weights = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (&n, deg) in &a.degrees {
        weights.insert(
            n,
            deg.weights.iter().map(|w| w - r as i64 * n).collect(),
        );
        diffs.insert(n, deg.d.clone());
    }
    FilteredComplex::new(a.field, weights, diffs).expect("shift of a valid complex")
}

/// Décalage `Dec^r`: same underlying complex with `F_p(Dec^rA)^n =
/// Z_r^{p-rn}` in degree n. When the original basis is adapted to the new
/// filtration it is kept (so `Dec^r ∘ S^r` is the identity on the nose);
/// otherwise an adapted basis is recomputed and the complex rewritten in it.
pub fn decalage(a: &FilteredComplex, r: u32) -> FilteredComplex {
    if a.is_zero_complex() {
        return a.clone();
    }
    let field = a.field;
    let lo = a.min_weight().unwrap();
    let hi = a.max_weight().unwrap();
    let nspan: Vec<i64> = a.support();
    let nmax = nspan.iter().map(|n| n.abs()).max().unwrap();
    let margin = (r as i64) * (nmax + 1) + r as i64 + 1;
    let (plo, phi) = (lo - margin, hi + margin);

    // candidate weight of each original basis vector: the least p with
    // e_i ∈ Z_r^{p-rn}
    let mut new_weights: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    let mut adapted = true;
    for (&n, deg) in &a.degrees {
        let next_w = a.weights(n + 1);
        let mut ws = Vec::with_capacity(deg.weights.len());
        for j in 0..deg.weights.len() {
            let mut s = deg.weights[j];
            for i in 0..deg.d.rows() {
                if !deg.d.get(i, j).is_zero() {
                    s = s.max(next_w[i] + r as i64);
                }
            }
            ws.push(s + r as i64 * n);
        }
        // adapted iff the coordinate flag matches the cycle flag in dimension
        for p in plo..=phi {
            let claimed = ws.iter().filter(|&&w| w <= p).count();
            let actual = a.cycles(r, p - r as i64 * n, n).dim();
            if claimed != actual {
                adapted = false;
                break;
            }
        }
        new_weights.insert(n, ws);
        if !adapted {
            break;
        }
    }
    if adapted {
        let diffs = a
            .degrees
            .iter()
            .map(|(&n, deg)| (n, deg.d.clone()))
            .collect();
        return FilteredComplex::new(field, new_weights, diffs)
            .expect("décalage filtration is differential-compatible");
    }

    // general case: eliminate an adapted basis per degree and rewrite
    let mut weights = BTreeMap::new();
    let mut trans: BTreeMap<i64, Matrix> = BTreeMap::new();
    for &n in &nspan {
        let flag: Vec<(i64, Subspace)> = (plo..=phi)
            .map(|p| (p, a.cycles(r, p - r as i64 * n, n)))
            .collect();
        let (w, t) = adapted_basis(&flag);
        assert_eq!(w.len(), a.dim(n), "cycle flag must exhaust the degree");
        weights.insert(n, w);
        trans.insert(n, t);
    }
    let mut diffs = BTreeMap::new();
    for &n in &nspan {
        let t = &trans[&n];
        let t_next = match trans.get(&(n + 1)) {
            Some(m) => m.clone(),
            None => Matrix::zero(field, a.dim(n + 1), 0),
        };
        let d = t_next
            .solve(&a.d(n).mul(t))
            .expect("differential lands in the new basis span");
        diffs.insert(n, d);
    }
    FilteredComplex::new(field, weights, diffs).expect("décalage is valid")
}

/// The r-cone of a chain map: `C_r(f) = Σ^r A ⊕ B` with differential
/// `(a, b) ↦ (-da, fa + db)` and `F_p C^n = F_{p-r}A^{n+1} ⊕ F_p B^n`.
pub struct Cone {
    pub complex: FilteredComplex,
    /// Inclusion of the target `B` into the cone.
    pub incl: ChainMap,
    /// Projection of the cone onto `Σ^r A`.
    pub proj: ChainMap,
}

pub fn cone(f: &ChainMap, r: u32) -> Cone {
    let a = f.source();
    let b = f.target();
    let field = a.field;
    let sa = suspension(a, r);
    let mut degs: Vec<i64> = sa.support();
    degs.extend(b.support());
    degs.sort_unstable();
    degs.dedup();
    let mut weights = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for &n in &degs {
        let mut w = sa.weights(n);
        w.extend(b.weights(n));
        weights.insert(n, w);
        // block differential: [[-d_A, 0], [f, d_B]] on (a, b) with a in
        // degree n+1 of A
        let top = a.d(n + 1).neg().hstack(&Matrix::zero(
            field,
            a.dim(n + 2),
            b.dim(n),
        ));
        let bottom = f.map(n + 1).hstack(&b.d(n));
        diffs.insert(n, top.vstack(&bottom));
    }
    let complex = FilteredComplex::new(field, weights, diffs).expect("cone is valid");
    let mut incl_maps = BTreeMap::new();
    let mut proj_maps = BTreeMap::new();
    for &n in &degs {
        let (adim, bdim) = (a.dim(n + 1), b.dim(n));
        let incl = Matrix::zero(field, adim, bdim).vstack(&Matrix::identity(field, bdim));
        let proj = Matrix::identity(field, adim).hstack(&Matrix::zero(field, adim, bdim));
        incl_maps.insert(n, incl);
        proj_maps.insert(n, proj);
    }
    let incl = ChainMap::new(b.clone(), complex.clone(), incl_maps).expect("inclusion is valid");
    let proj = ChainMap::new(complex.clone(), sa, proj_maps).expect("projection is valid");
    Cone {
        complex,
        incl,
        proj,
    }
}

/// The loop fibration `π₁: Ω^r C_r(id_A) → A`, projection onto the `A`
/// summand; its cycles surject onto those of `A` for every stage up to r.
pub fn omega_cone_fibration(a: &FilteredComplex, r: u32) -> ChainMap {
    let c = cone(&ChainMap::identity(a), r);
    let d = loops(&c.complex, r);
    // (Ω^r C)^n = A^n ⊕ (Ω^r A)^n, so π₁ is [I | 0] in each degree
    let mut maps = BTreeMap::new();
    for &n in a.degrees.keys() {
        let proj = Matrix::identity(a.field, a.dim(n)).hstack(&Matrix::zero(
            a.field,
            a.dim(n),
            a.dim(n - 1),
        ));
        maps.insert(n, proj);
    }
    ChainMap::new(d, a.clone(), maps).expect("loop fibration is valid")
}

/// The representing object of `Z_r^{p,p+n}`: generators `u` (degree n,
/// weight p) and `v = du` (degree n+1, weight p-r).
pub fn rep_cycle(field: Field, r: u32, p: i64, n: i64) -> FilteredComplex {
    let mut weights = BTreeMap::new();
    weights.insert(n, vec![p]);
    weights.insert(n + 1, vec![p - r as i64]);
    let mut diffs = BTreeMap::new();
    diffs.insert(n, Matrix::from_i64(field, &[&[1]]));
    FilteredComplex::new(field, weights, diffs).expect("cycle representative is valid")
}

/// The representing object of `B_r^{p,p+n}` for r ≥ 1: the sum of a length-1
/// complex in degrees (n-1, n) with weights (p+r-1, p) and one in degrees
/// (n, n+1) with weights (p-1, p-r). Basis order in degree n: the target of
/// the first summand, then the source of the second.
pub fn rep_boundary(field: Field, r: u32, p: i64, n: i64) -> Result<FilteredComplex, Error> {
    if r == 0 {
        return Err(Error::Validation(
            "boundary representative needs r ≥ 1".into(),
        ));
    }
    let mut weights = BTreeMap::new();
    weights.insert(n - 1, vec![p + r as i64 - 1]);
    weights.insert(n, vec![p, p - 1]);
    weights.insert(n + 1, vec![p - r as i64]);
    let mut diffs = BTreeMap::new();
    diffs.insert(n - 1, Matrix::from_i64(field, &[&[1], &[0]]));
    diffs.insert(n, Matrix::from_i64(field, &[&[0, 1]]));
    FilteredComplex::new(field, weights, diffs)
}

/// `φ_r: 𝒵_r(p,n) → ℬ_r(p,n)`, the diagonal in degree n and the identity in
/// degree n+1. Pushouts along `φ_{r+1}` generate the cofibrations.
pub fn phi(field: Field, r: u32, p: i64, n: i64) -> Result<ChainMap, Error> {
    let z = rep_cycle(field, r, p, n);
    let b = rep_boundary(field, r, p, n)?;
    let mut maps = BTreeMap::new();
    maps.insert(n, Matrix::from_i64(field, &[&[1], &[1]]));
    maps.insert(n + 1, Matrix::from_i64(field, &[&[1]]));
    ChainMap::new(z, b, maps)
}

/// `α_s^{p,p+n}: 𝒵_{s+1}(p+1, n) → 𝒵_s(p, n)`, the identity on both
/// generators. Cycle-surjective exactly for stages k ≥ s+1.
pub fn alpha_morphism(field: Field, s: u32, p: i64, n: i64) -> ChainMap {
    let src = rep_cycle(field, s + 1, p + 1, n);
    let tgt = rep_cycle(field, s, p, n);
    let mut maps = BTreeMap::new();
    maps.insert(n, Matrix::from_i64(field, &[&[1]]));
    maps.insert(n + 1, Matrix::from_i64(field, &[&[1]]));
    ChainMap::new(src, tgt, maps).expect("alpha is a valid chain map")
}

/// `β_s^{p,p+n}: 𝒵_{s-1}(p, n) ⊕ R_(p-s) in degree n+1 → 𝒵_s(p, n)`, the
/// fold in degree n+1. Cycle-surjective exactly for stages k ≤ s-1.
pub fn beta_morphism(field: Field, s: u32, p: i64, n: i64) -> Result<ChainMap, Error> {
    if s == 0 {
        return Err(Error::Validation("beta needs s ≥ 1".into()));
    }
    let z = rep_cycle(field, s - 1, p, n);
    let mut extra_w = BTreeMap::new();
    extra_w.insert(n + 1, vec![p - s as i64]);
    let extra = FilteredComplex::new(field, extra_w, BTreeMap::new())?;
    let src = direct_sum(&z, &extra);
    let tgt = rep_cycle(field, s, p, n);
    let mut maps = BTreeMap::new();
    maps.insert(n, Matrix::from_i64(field, &[&[1]]));
    maps.insert(n + 1, Matrix::from_i64(field, &[&[1, 1]]));
    ChainMap::new(src, tgt, maps)
}

/// `γ_s = ∇ ∘ (α_s ⊕ β_s)`, cycle-surjective at every stage except s.
pub fn gamma_morphism(field: Field, s: u32, p: i64, n: i64) -> Result<ChainMap, Error> {
    let alpha = alpha_morphism(field, s, p, n);
    let beta = beta_morphism(field, s, p, n)?;
    let src = direct_sum(alpha.source(), beta.source());
    let tgt = rep_cycle(field, s, p, n);
    let mut maps = BTreeMap::new();
    for &deg in &[n, n + 1] {
        maps.insert(deg, alpha.map(deg).hstack(&beta.map(deg)));
    }
    ChainMap::new(src, tgt, maps)
}

/// All chain maps X → A as a basis of the solution space of the combined
/// chain-condition and filtration constraints.
pub fn hom_space(x: &FilteredComplex, a: &FilteredComplex) -> Vec<ChainMap> {
    let field = x.field;
    assert_eq!(field, a.field);
    // variables: entries of f_n for degrees present in both, minus those
    // forced to zero by the filtration
    let mut var_index: BTreeMap<(i64, usize, usize), usize> = BTreeMap::new();
    for &n in x.degrees.keys() {
        let (xw, aw) = (x.weights(n), a.weights(n));
        for j in 0..xw.len() {
            for i in 0..aw.len() {
                if aw[i] <= xw[j] {
                    let k = var_index.len();
                    var_index.insert((n, i, j), k);
                }
            }
        }
    }
    let nvars = var_index.len();
    if nvars == 0 {
        return Vec::new();
    }
    // one row per entry of each chain-condition equation
    // f_{n+1}·d_X^n - d_A^n·f_n = 0
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    use crate::field::Scalar;
    for &n in x.degrees.keys() {
        let dx = x.d(n);
        let da = a.d(n);
        for i in 0..a.dim(n + 1) {
            for j in 0..x.dim(n) {
                let mut row = vec![field.zero(); nvars];
                // Σ_k f_{n+1}[i][k]·dx[k][j]
                for k in 0..x.dim(n + 1) {
                    if let Some(&v) = var_index.get(&(n + 1, i, k)) {
                        row[v] = row[v].add(dx.get(k, j));
                    }
                }
                // - Σ_k da[i][k]·f_n[k][j]
                for k in 0..a.dim(n) {
                    if let Some(&v) = var_index.get(&(n, k, j)) {
                        row[v] = row[v].sub(da.get(i, k));
                    }
                }
                if row.iter().any(|s| !s.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system = Matrix::from_rows(field, rows).unwrap_or_else(|_| Matrix::zero(field, 0, nvars));
    let system = if system.rows() == 0 {
        Matrix::zero(field, 0, nvars)
    } else {
        system
    };
    let kernel = system.kernel();
    let mut out = Vec::new();
    for c in 0..kernel.cols() {
        let col = kernel.column(c);
        let mut maps: BTreeMap<i64, Matrix> = BTreeMap::new();
        for &n in x.degrees.keys() {
            let mut m = Matrix::zero(field, a.dim(n), x.dim(n));
            for i in 0..a.dim(n) {
                for j in 0..x.dim(n) {
                    if let Some(&v) = var_index.get(&(n, i, j)) {
                        m.set(i, j, col[v].clone());
                    }
                }
            }
            maps.insert(n, m);
        }
        out.push(ChainMap::new(x.clone(), a.clone(), maps).expect("solution satisfies all constraints"));
    }
    out
}

/// Pushout of `f: X → A` along a strict injective `g: X → B`; returns the
/// pushout with its two legs (from A, from B).
pub fn pushout(f: &ChainMap, g: &ChainMap) -> Result<(FilteredComplex, ChainMap, ChainMap), Error> {
    if f.source() != g.source() {
        return Err(Error::Validation("pushout legs must share a source".into()));
    }
    if !g.is_injective() || !g.is_strict() {
        return Err(Error::Validation(
            "pushout requires the cofibration leg to be strict and injective".into(),
        ));
    }
    let (a, b) = (f.target(), g.target());
    let sum = direct_sum(a, b);
    let field = sum.field();
    // the subcomplex im(f, -g) of A ⊕ B
    let mut sub = BTreeMap::new();
    for &n in f.source().support().iter() {
        let col = f.map(n).vstack(&g.map(n).neg());
        sub.insert(n, col);
    }
    let (p, proj) = quotient_complex(&sum, &sub);
    let mut leg_a_maps = BTreeMap::new();
    let mut leg_b_maps = BTreeMap::new();
    for &n in sum.support().iter() {
        let ia = Matrix::identity(field, a.dim(n)).vstack(&Matrix::zero(field, b.dim(n), a.dim(n)));
        let ib = Matrix::zero(field, a.dim(n), b.dim(n)).vstack(&Matrix::identity(field, b.dim(n)));
        leg_a_maps.insert(n, proj.map(n).mul(&ia));
        leg_b_maps.insert(n, proj.map(n).mul(&ib));
    }
    let leg_a = ChainMap::new(a.clone(), p.clone(), leg_a_maps)?;
    let leg_b = ChainMap::new(b.clone(), p.clone(), leg_b_maps)?;
    Ok((p, leg_a, leg_b))
}

/// Pullback of `f: A → X` and `g: B → X`: the degreewise fiber product with
/// the restricted filtration, with its two legs (to A, to B).
pub fn pullback(f: &ChainMap, g: &ChainMap) -> Result<(FilteredComplex, ChainMap, ChainMap), Error> {
    if f.target() != g.target() {
        return Err(Error::Validation("pullback legs must share a target".into()));
    }
    let (a, b) = (f.source(), g.source());
    let sum = direct_sum(a, b);
    let field = sum.field();
    let mut bases = BTreeMap::new();
    for &n in sum.support().iter() {
        let m = f.map(n).hstack(&g.map(n).neg());
        bases.insert(n, m.kernel());
    }
    let (p, incl) = sub_complex(&sum, &bases);
    let mut leg_a_maps = BTreeMap::new();
    let mut leg_b_maps = BTreeMap::new();
    for &n in sum.support().iter() {
        let pa = Matrix::identity(field, a.dim(n)).hstack(&Matrix::zero(field, a.dim(n), b.dim(n)));
        let pb = Matrix::zero(field, b.dim(n), a.dim(n)).hstack(&Matrix::identity(field, b.dim(n)));
        leg_a_maps.insert(n, pa.mul(&incl.map(n)));
        leg_b_maps.insert(n, pb.mul(&incl.map(n)));
    }
    let leg_a = ChainMap::new(p.clone(), a.clone(), leg_a_maps)?;
    let leg_b = ChainMap::new(p.clone(), b.clone(), leg_b_maps)?;
    Ok((p, leg_a, leg_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Q
    }

    /// Two generators u (deg 0, weight 0) and v = du (deg 1, weight -1).
    fn z_1_0_0() -> FilteredComplex {
        rep_cycle(q(), 1, 0, 0)
    }

    fn pure_r(p: i64, n: i64) -> FilteredComplex {
        let mut w = BTreeMap::new();
        w.insert(n, vec![p]);
        FilteredComplex::new(q(), w, BTreeMap::new()).unwrap()
    }

    #[test]
    fn validate_reports_violations() {
        assert!(FilteredComplex::zero(q()).validate().is_empty());

        // d·d ≠ 0
        let mut w = BTreeMap::new();
        w.insert(0, vec![0]);
        w.insert(1, vec![0]);
        w.insert(2, vec![0]);
        let mut d = BTreeMap::new();
        d.insert(0, Matrix::from_i64(q(), &[&[1]]));
        d.insert(1, Matrix::from_i64(q(), &[&[1]]));
        match FilteredComplex::new(q(), w, d) {
            Err(Error::Validation(msg)) => assert!(msg.contains("degree 0")),
            other => panic!("expected a d·d violation, got {other:?}"),
        }

        // weight-raising differential
        let mut w = BTreeMap::new();
        w.insert(0, vec![0]);
        w.insert(1, vec![1]);
        let mut d = BTreeMap::new();
        d.insert(0, Matrix::from_i64(q(), &[&[1]]));
        match FilteredComplex::new(q(), w, d) {
            Err(Error::Validation(msg)) => assert!(msg.contains("raises weight")),
            other => panic!("expected a filtration violation, got {other:?}"),
        }
    }

    #[test]
    fn cycle_examples() {
        let a = z_1_0_0();
        let z = a.cycles(1, 0, 0);
        assert_eq!(z.dim(), 1);
        assert!(z.eq_span(&Subspace::full(q(), 1)));
        // below the filtration everything vanishes
        assert_eq!(a.cycles(1, -1, 0).dim(), 0);
        // zero differential: full for every r
        let p = pure_r(2, 3);
        for r in 0..4 {
            assert_eq!(p.cycles(r, 2, 3).dim(), 1);
        }
    }

    #[test]
    fn boundary_examples() {
        let a = z_1_0_0();
        // r = 0 collapses to the filtration one step down
        assert!(a.boundaries(0, 0, 1).eq_span(&a.filt(1, -1)));
        // v first becomes a boundary on page 2: d(Z_1 at weight 0) = span{v}
        assert_eq!(a.boundaries(1, -1, 1).dim(), 0);
        assert_eq!(a.boundaries(2, -1, 1).dim(), 1);
        assert!(FilteredComplex::zero(q()).boundaries(1, 0, 0).dim() == 0);
    }

    #[test]
    fn page_examples() {
        // a single generator survives to every page
        let p = pure_r(1, 2);
        for r in 0..5 {
            let table = p.page(r);
            assert_eq!(table.total_dim(), 1);
            assert_eq!(table.dim(1, 3), 1);
            assert!(table.diffs.is_empty());
        }
        // the d_1 of the length-one complex is an isomorphism, E_2 = 0
        let a = z_1_0_0();
        let e1 = a.page(1);
        assert_eq!(e1.dim(0, 0), 1);
        assert_eq!(e1.dim(-1, 0), 1);
        assert!(e1.diffs[&(0, 0)].is_invertible());
        assert!(a.page(2).is_zero());
        assert!(FilteredComplex::zero(q()).page(3).is_zero());
    }

    #[test]
    fn page_recursion_small() {
        let a = z_1_0_0();
        for r in 0..4u32 {
            let cur = a.page(r);
            let next = a.page(r + 1);
            let mut keys: Vec<(i64, i64)> = cur.entries.keys().copied().collect();
            keys.extend(next.entries.keys().copied());
            keys.sort_unstable();
            keys.dedup();
            for (p, qq) in keys {
                assert_eq!(next.dim(p, qq), cur.homology_dim(q(), p, qq));
            }
        }
    }

    #[test]
    fn page_map_and_weq() {
        let a = z_1_0_0();
        let id = ChainMap::identity(&a);
        for (_, m) in id.page_map(0) {
            assert!(m.is_invertible());
        }
        assert!(id.is_r_weq(0));
        assert!(id.is_r_weq(3));

        let from_zero = ChainMap::zero(&FilteredComplex::zero(q()), &a);
        // E_2 of both sides vanish but E_1 of the target does not
        assert!(from_zero.is_r_weq(1));
        assert!(!from_zero.is_r_weq(0));

        let f = phi(q(), 1, 0, 0).unwrap();
        let e0 = f.page_map(0);
        let m = &e0[&(0, 0)];
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn functoriality_of_pages() {
        let f = phi(q(), 1, 0, 0).unwrap();
        let g = ChainMap::identity(f.target());
        let gf = g.compose(&f).unwrap();
        for r in 0..3 {
            let lhs = gf.page_map(r);
            let rhs_g = g.page_map(r);
            let rhs_f = f.page_map(r);
            for (k, m) in &lhs {
                if let (Some(mg), Some(mf)) = (rhs_g.get(k), rhs_f.get(k)) {
                    assert_eq!(*m, mg.mul(mf));
                }
            }
        }
    }

    #[test]
    fn suspension_loops_roundtrip() {
        let a = pure_r(2, 3);
        let s = suspension(&a, 4);
        assert_eq!(s.weights(2), vec![6]);
        assert_eq!(s.dim(3), 0);
        assert_eq!(loops(&s, 4), a);

        let b = rep_boundary(q(), 2, 0, 0).unwrap();
        for r in 0..4 {
            assert_eq!(loops(&suspension(&b, r), r), b);
        }
        // r = 0 keeps weights
        assert_eq!(suspension(&a, 0).weights(2), vec![2]);
    }

    #[test]
    fn suspension_shifts_pages() {
        let a = rep_boundary(q(), 2, 1, 0).unwrap();
        for r in 0..3u32 {
            for k in 0..(r + 3) {
                let pa = a.page(k);
                let ps = suspension(&a, r).page(k);
                for (&(p, qq), e) in &pa.entries {
                    assert_eq!(ps.dim(p + r as i64, qq + r as i64 - 1), e.dim);
                }
                assert_eq!(pa.total_dim(), ps.total_dim());
            }
        }
    }

    #[test]
    fn shift_and_decalage() {
        // degree 0 content is untouched by the shift
        let a = pure_r(1, 0);
        assert_eq!(shift(&a, 3), a);
        // degree 1, weight 0 moves to weight -1
        let b = pure_r(0, 1);
        assert_eq!(shift(&b, 1).weights(1), vec![-1]);

        // the round trip is the identity on the nose
        let c = rep_boundary(q(), 2, -1, 1).unwrap();
        for r in 0..4 {
            assert_eq!(decalage(&shift(&c, r), r), c);
            assert_eq!(decalage(&shift(&z_1_0_0(), r), r), z_1_0_0());
        }
    }

    #[test]
    fn cone_examples() {
        let a = z_1_0_0();
        // cone of 0 → A is A itself (up to the empty suspension block)
        let c = cone(&ChainMap::zero(&FilteredComplex::zero(q()), &a), 2);
        assert_eq!(c.complex, a);

        // cone of the identity dies on page r+1
        for r in 0..4u32 {
            let c = cone(&ChainMap::identity(&a), r);
            assert!(c.complex.page(r + 1).is_zero());
        }
        let p = pure_r(0, 0);
        let c = cone(&ChainMap::identity(&p), 1);
        assert_eq!(c.complex.dim(-1) + c.complex.dim(0), 2);
        assert!(c.complex.page(2).is_zero());
    }

    #[test]
    fn cone_criterion() {
        // f is an r-weq exactly when its r-cone dies on page r+1
        let f = phi(q(), 1, 0, 0).unwrap();
        for r in 0..3u32 {
            assert_eq!(f.is_r_weq(r), cone(&f, r).complex.page(r + 1).is_zero());
        }
    }

    #[test]
    fn omega_cone_fibration_surjective() {
        let a = pure_r(0, 0);
        let pi = omega_cone_fibration(&a, 1);
        for k in 0..=1 {
            assert!(pi.cycle_surjective(k));
        }
        assert!(pi.source().page(2).is_zero());

        let b = z_1_0_0();
        let pi = omega_cone_fibration(&b, 2);
        for k in 0..=2 {
            assert!(pi.cycle_surjective(k));
        }
        assert!(pi.source().page(3).is_zero());

        let z = omega_cone_fibration(&FilteredComplex::zero(q()), 1);
        assert!(z.source().is_zero_complex());
    }

    #[test]
    fn representability() {
        let a = rep_boundary(q(), 2, 0, 1).unwrap();
        let (lo, hi) = a.weight_window(4).unwrap();
        for r in 0..4 {
            for n in -1..=3 {
                for p in lo..=hi {
                    let hom = hom_space(&rep_cycle(q(), r, p, n), &a);
                    assert_eq!(
                        hom.len(),
                        a.cycles(r, p, n).dim(),
                        "r={r} p={p} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn hom_space_examples() {
        let a = z_1_0_0();
        assert!(hom_space(&FilteredComplex::zero(q()), &a).is_empty());
        // maps out of a point compute filtered kernel classes
        let x = pure_r(0, 0);
        let expected = a
            .filt(0, 0)
            .intersect(&Subspace::from_columns(&a.d(0).kernel()))
            .unwrap()
            .dim();
        assert_eq!(hom_space(&x, &a).len(), expected);
    }

    #[test]
    fn pushout_pullback() {
        let a = z_1_0_0();
        let id = ChainMap::identity(&a);
        let (p, la, lb) = pushout(&id, &id).unwrap();
        assert!(la.is_filtered_iso());
        assert!(lb.is_filtered_iso());
        assert_eq!(p.dim(0), 1);

        // pulling the loop fibration back along 0 → A recovers Ω^r A
        for r in 1..3u32 {
            let pi = omega_cone_fibration(&a, r);
            let z = ChainMap::zero(&FilteredComplex::zero(q()), &a);
            let (pb, _, _) = pullback(&pi, &z).unwrap();
            let la = loops(&a, r);
            assert_eq!(pb.support(), la.support());
            for &n in pb.support().iter() {
                let mut w = pb.weights(n);
                w.sort_unstable();
                let mut v = la.weights(n);
                v.sort_unstable();
                assert_eq!(w, v);
            }
        }
    }

    #[test]
    fn strictness_and_effective_monos() {
        let a = z_1_0_0();
        let id = ChainMap::identity(&a);
        assert!(id.is_strict());
        assert!(id.is_effective_mono());

        // weight-0 line inside a plane with weights {0, 1}
        let mut w = BTreeMap::new();
        w.insert(0, vec![0, 1]);
        let plane = FilteredComplex::new(q(), w, BTreeMap::new()).unwrap();
        let line = pure_r(0, 0);
        let mut maps = BTreeMap::new();
        maps.insert(0, Matrix::from_i64(q(), &[&[1], &[0]]));
        let incl = ChainMap::new(line.clone(), plane.clone(), maps).unwrap();
        assert!(incl.is_strict());
        assert!(incl.is_effective_mono());

        // weight-1 generator onto a weight-0 one: filtration-preserving but
        // not strict
        let high = pure_r(1, 0);
        let mut maps = BTreeMap::new();
        maps.insert(0, Matrix::from_i64(q(), &[&[1]]));
        let f = ChainMap::new(high, line, maps).unwrap();
        assert!(!f.is_strict());
        assert!(!f.is_effective_mono());
    }

    #[test]
    fn kernel_cokernel() {
        let a = z_1_0_0();
        let id = ChainMap::identity(&a);
        let (k, _) = id.kernel();
        assert!(k.is_zero_complex());
        let (c, _) = id.cokernel();
        assert!(c.is_zero_complex());

        let z = ChainMap::zero(&FilteredComplex::zero(q()), &a);
        let (c, proj) = z.cokernel();
        assert_eq!(c, a);
        assert!(proj.is_filtered_iso());
    }

    #[test]
    fn separating_morphisms() {
        for s in 1..3u32 {
            let alpha = alpha_morphism(q(), s, 0, 0);
            let beta = beta_morphism(q(), s, 0, 0).unwrap();
            let gamma = gamma_morphism(q(), s, 0, 0).unwrap();
            for k in 0..(s + 3) {
                assert_eq!(alpha.cycle_surjective(k), k >= s + 1, "alpha s={s} k={k}");
                assert_eq!(beta.cycle_surjective(k), k + 1 <= s, "beta s={s} k={k}");
                assert_eq!(gamma.cycle_surjective(k), k != s, "gamma s={s} k={k}");
            }
        }
    }

    #[test]
    fn phi_is_valid_and_rep_shapes() {
        let z = rep_cycle(q(), 0, 0, 0);
        assert_eq!(z.weights(0), vec![0]);
        assert_eq!(z.weights(1), vec![0]);
        assert!(phi(q(), 1, 0, 0).is_ok());
        assert!(phi(q(), 0, 0, 0).is_err());
        assert!(rep_boundary(q(), 0, 0, 0).is_err());
        let b = rep_boundary(q(), 3, 1, 2).unwrap();
        assert_eq!(b.weights(1), vec![3]);
        assert_eq!(b.weights(2), vec![1, 0]);
        assert_eq!(b.weights(3), vec![-2]);
    }
}

//! Seeded random instances for the verification suites.
//!
//! Everything is drawn from a counter-based stream cipher, so a seed fully
//! determines every instance. Bounds are deliberately small — dimensions up
//! to 4, degrees and weights within [-3, 3], rational entries with numerator
//! and denominator within [-3, 3] — to keep exact arithmetic fast while
//! still producing nontrivial pages.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bicomplex::{self, BiMap, Bicomplex};
use crate::field::{Field, Scalar};
use crate::filtered::{self, ChainMap, FilteredComplex};
use crate::matrix::Matrix;

pub const MAX_DIM: usize = 4;
pub const COORD_BOUND: i64 = 3;

pub struct Gen {
    rng: ChaCha8Rng,
    field: Field,
}

impl Gen {
    pub fn new(field: Field, seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            field,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// A small scalar: rationals with numerator and denominator in
    /// [-3, 3], or a uniform residue.
    pub fn scalar(&mut self) -> Scalar {
        match self.field {
            Field::Q => {
                let num = self.rng.gen_range(-COORD_BOUND..=COORD_BOUND);
                let den = self.rng.gen_range(1..=COORD_BOUND);
                self.field
                    .from_i64(num)
                    .div(&self.field.from_i64(den))
            }
            Field::Fp(p) => {
                let v = self.rng.gen_range(0..p.min(7)) as i64;
                self.field.from_i64(v)
            }
        }
    }

    fn nonzero_scalar(&mut self) -> Scalar {
        loop {
            let s = self.scalar();
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn coord(&mut self) -> i64 {
        self.rng.gen_range(-COORD_BOUND..=COORD_BOUND)
    }

    pub fn dim(&mut self) -> usize {
        self.rng.gen_range(0..=MAX_DIM)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zero(self.field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.scalar());
            }
        }
        m
    }

    /// A random element of the span, with small coefficients. Returns the
    /// zero column when the basis is empty.
    fn combination(&mut self, basis: &Matrix) -> Matrix {
        let coeffs = self.matrix(basis.cols(), 1);
        basis.mul(&coeffs)
    }

    /// An invertible matrix whose (row, col) entry is allowed only where
    /// `allowed` returns true; the pattern must permit the diagonal.
    fn invertible_patterned(
        &mut self,
        size: usize,
        allowed: impl Fn(usize, usize) -> bool,
    ) -> Matrix {
        loop {
            let mut m = Matrix::zero(self.field, size, size);
            for r in 0..size {
                for c in 0..size {
                    if r == c {
                        m.set(r, c, self.nonzero_scalar());
                    } else if allowed(r, c) && self.rng.gen_bool(0.5) {
                        m.set(r, c, self.scalar());
                    }
                }
            }
            if m.is_invertible() {
                return m;
            }
        }
    }

    /// A random filtered complex: weights first, then each differential
    /// sampled uniformly from the linear space of matrices that respect the
    /// filtration and square to zero against the previous one.
    pub fn complex(&mut self) -> FilteredComplex {
        let lo = self.rng.gen_range(-COORD_BOUND..=1);
        let span = self.rng.gen_range(0..=2i64);
        let mut weights: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for n in lo..=(lo + span).min(COORD_BOUND) {
            let mut w: Vec<i64> = (0..self.dim()).map(|_| self.coord()).collect();
            w.sort_unstable();
            if !w.is_empty() {
                weights.insert(n, w);
            }
        }
        let degs: Vec<i64> = weights.keys().copied().collect();
        let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
        for &n in &degs {
            let src = &weights[&n];
            let tgt = weights.get(&(n + 1)).cloned().unwrap_or_default();
            let prev = diffs
                .get(&(n - 1))
                .cloned()
                .unwrap_or_else(|| {
                    let plen = weights.get(&(n - 1)).map_or(0, |w| w.len());
                    Matrix::zero(self.field, src.len(), plen)
                });
            let d = self.constrained_differential(src, &tgt, &prev);
            diffs.insert(n, d);
        }
        FilteredComplex::new(self.field, weights, diffs).expect("sampled complex is valid")
    }

    /// Samples `d: src → tgt` with `d(F_p) ⊆ F_p` (entries only where the
    /// target weight is at most the source weight) and `d · prev = 0`.
    fn constrained_differential(
        &mut self,
        src_weights: &[i64],
        tgt_weights: &[i64],
        prev: &Matrix,
    ) -> Matrix {
        let (rows, cols) = (tgt_weights.len(), src_weights.len());
        if rows == 0 || cols == 0 {
            return Matrix::zero(self.field, rows, cols);
        }
        // unknowns: the allowed entries, in (row, col) order
        let mut slots = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if tgt_weights[r] <= src_weights[c] {
                    slots.push((r, c));
                }
            }
        }
        if slots.is_empty() {
            return Matrix::zero(self.field, rows, cols);
        }
        // linear constraints: (d · prev)[r][k] = 0 for every r, k
        let pcols = prev.cols();
        let mut cons = Matrix::zero(self.field, rows * pcols, slots.len());
        for (s, &(r, c)) in slots.iter().enumerate() {
            for k in 0..pcols {
                cons.set(r * pcols + k, s, prev.get(c, k).clone());
            }
        }
        let kernel = cons.kernel();
        let picked = self.combination(&kernel);
        let mut d = Matrix::zero(self.field, rows, cols);
        for (s, &(r, c)) in slots.iter().enumerate() {
            d.set(r, c, picked.get(s, 0).clone());
        }
        d
    }

    /// A filtered isomorphism with random matrix onto a complex with the
    /// same weights: block-triangular with respect to the weight order, so
    /// each filtration level maps onto itself.
    pub fn conjugated(&mut self, a: &FilteredComplex) -> (FilteredComplex, ChainMap) {
        let field = self.field;
        let mut gs: BTreeMap<i64, Matrix> = BTreeMap::new();
        let mut weights = BTreeMap::new();
        for n in a.support() {
            let w = a.weights(n);
            let g = self.invertible_patterned(w.len(), |r, c| w[r] <= w[c]);
            gs.insert(n, g);
            weights.insert(n, w);
        }
        let mut diffs = BTreeMap::new();
        for n in a.support() {
            let g = &gs[&n];
            let gn1 = gs
                .get(&(n + 1))
                .cloned()
                .unwrap_or_else(|| Matrix::identity(field, a.dim(n + 1)));
            diffs.insert(
                n,
                gn1.mul(&a.d(n)).mul(&g.inverse().expect("invertible")),
            );
        }
        let b = FilteredComplex::new(field, weights, diffs).expect("conjugate is valid");
        let f = ChainMap::new(a.clone(), b.clone(), gs).expect("conjugation is a chain map");
        (b, f)
    }

    /// A random bicomplex: a direct sum of witness-cycle staircases, squares,
    /// and single cells at random positions, conjugated cellwise by random
    /// invertible matrices.
    pub fn bicomplex(&mut self) -> Bicomplex {
        let field = self.field;
        let pieces = self.rng.gen_range(0..=3);
        let mut a = Bicomplex::zero(field);
        for _ in 0..pieces {
            let p = self.coord();
            let q = self.coord();
            let piece = match self.rng.gen_range(0..3) {
                0 => bicomplex::unit(field, p, q),
                1 => bicomplex::rep_witness_cycle(field, 0, p, q),
                _ => {
                    let r = self.rng.gen_range(1..=3);
                    bicomplex::rep_witness_cycle(field, r, p, q)
                }
            };
            a = bicomplex::direct_sum(&a, &piece);
        }
        self.conjugate_bicomplex(&a)
    }

    fn conjugate_bicomplex(&mut self, a: &Bicomplex) -> Bicomplex {
        let field = self.field;
        let mut gs: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
        let mut dims = BTreeMap::new();
        for (i, j) in a.cells() {
            let d = a.dim(i, j);
            gs.insert((i, j), self.invertible_patterned(d, |_, _| true));
            dims.insert((i, j), d);
        }
        let g = |gs: &BTreeMap<(i64, i64), Matrix>, i: i64, j: i64, d: usize| {
            gs.get(&(i, j))
                .cloned()
                .unwrap_or_else(|| Matrix::identity(field, d))
        };
        let mut d0 = BTreeMap::new();
        let mut d1 = BTreeMap::new();
        for (i, j) in a.cells() {
            let ginv = gs[&(i, j)].inverse().expect("invertible");
            d0.insert(
                (i, j),
                g(&gs, i, j + 1, a.dim(i, j + 1)).mul(&a.d0(i, j)).mul(&ginv),
            );
            d1.insert(
                (i, j),
                g(&gs, i - 1, j, a.dim(i - 1, j)).mul(&a.d1(i, j)).mul(&ginv),
            );
        }
        Bicomplex::new(field, dims, d0, d1).expect("conjugate is valid")
    }

    /// A random filtration-preserving chain map, drawn from the hom space.
    pub fn chain_map(&mut self, x: &FilteredComplex, a: &FilteredComplex) -> ChainMap {
        let mut maps: BTreeMap<i64, Matrix> = BTreeMap::new();
        for n in x.support() {
            maps.insert(n, Matrix::zero(self.field, a.dim(n), x.dim(n)));
        }
        for b in filtered::hom_space(x, a) {
            if self.rng.gen_bool(0.5) {
                let c = self.scalar();
                for (n, m) in maps.iter_mut() {
                    *m = m.add(&b.map(*n).scale(&c));
                }
            }
        }
        ChainMap::new(x.clone(), a.clone(), maps).expect("combination of chain maps")
    }

    /// A random bicomplex morphism, drawn from the hom space.
    pub fn bimap(&mut self, x: &Bicomplex, a: &Bicomplex) -> BiMap {
        let mut maps: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
        for (i, j) in x.cells() {
            maps.insert((i, j), Matrix::zero(self.field, a.dim(i, j), x.dim(i, j)));
        }
        for b in bicomplex::hom_space(x, a) {
            if self.rng.gen_bool(0.5) {
                let c = self.scalar();
                for (&(i, j), m) in maps.iter_mut() {
                    *m = m.add(&b.map(i, j).scale(&c));
                }
            }
        }
        BiMap::new(x.clone(), a.clone(), maps).expect("combination of morphisms")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism() {
        for field in [Field::Q, Field::Fp(5)] {
            let mut g1 = Gen::new(field, 42);
            let mut g2 = Gen::new(field, 42);
            for _ in 0..5 {
                assert_eq!(g1.complex(), g2.complex());
                assert_eq!(g1.bicomplex(), g2.bicomplex());
            }
            let mut g3 = Gen::new(field, 43);
            let differs = (0..5).any(|_| g1.complex() != g3.complex());
            assert!(differs, "different seeds should diverge");
        }
    }

    #[test]
    fn sampled_complexes_validate() {
        let mut g = Gen::new(Field::Q, 7);
        let mut nonzero = 0;
        for _ in 0..30 {
            let a = g.complex();
            assert!(a.validate().is_empty(), "{:?}", a.validate());
            if !a.is_zero_complex() {
                nonzero += 1;
            }
            let b = g.bicomplex();
            assert!(!b.page(0).is_zero() || b.cells().is_empty() || b.page(0).is_zero());
        }
        assert!(nonzero > 10);
    }

    #[test]
    fn conjugation_is_iso_with_equal_pages() {
        let mut g = Gen::new(Field::Q, 11);
        for _ in 0..10 {
            let a = g.complex();
            let (b, f) = g.conjugated(&a);
            assert!(f.is_filtered_iso());
            for r in 0..=3 {
                let (pa, pb) = (a.page(r), b.page(r));
                let mut bids: Vec<_> = pa.entries.keys().chain(pb.entries.keys()).collect();
                bids.sort();
                bids.dedup();
                for &&(p, q) in &bids {
                    assert_eq!(pa.dim(p, q), pb.dim(p, q), "r={r} at ({p},{q})");
                }
            }
        }
    }

    #[test]
    fn sampled_maps_are_valid() {
        let mut g = Gen::new(Field::Fp(5), 3);
        for _ in 0..10 {
            let a = g.complex();
            let b = g.complex();
            let _ = g.chain_map(&a, &b); // constructor inside validates
            let x = g.bicomplex();
            let y = g.bicomplex();
            let _ = g.bimap(&x, &y);
        }
    }
}

//! The distributive lattice of stage sets: finite nonempty subsets of the
//! naturals ordered by two generating moves (adding elements below the
//! maximum, and shifting the whole set up by one), with join and meet given
//! by closed formulas. The order itself is decided through the Birkhoff
//! representation: each set corresponds to a lower set of join-irreducibles,
//! where the order becomes inclusion and join/meet become union and
//! intersection.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::{Error, Report};

/// A finite nonempty set of naturals, one point of the lattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LatticeElement {
    elems: BTreeSet<u32>,
}

impl<'de> Deserialize<'de> for LatticeElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let elems = BTreeSet::<u32>::deserialize(de)?;
        LatticeElement::new(elems).map_err(serde::de::Error::custom)
    }
}

impl LatticeElement {
    pub fn new(elems: BTreeSet<u32>) -> Result<LatticeElement, Error> {
        if elems.is_empty() {
            return Err(Error::Validation(
                "a lattice element must be nonempty".into(),
            ));
        }
        Ok(LatticeElement { elems })
    }

    pub fn from_slice(elems: &[u32]) -> Result<LatticeElement, Error> {
        LatticeElement::new(elems.iter().copied().collect())
    }

    pub fn top(&self) -> u32 {
        *self.elems.iter().next_back().expect("nonempty")
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        self.elems.iter().copied()
    }

    pub fn contains(&self, n: u32) -> bool {
        self.elems.contains(&n)
    }
}

impl std::fmt::Display for LatticeElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.elems.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A join-irreducible element: `{n}` or `{0,n}` with `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct JoinIrreducible {
    /// true for `{0,n}`, false for `{n}`
    pub with_zero: bool,
    pub n: u32,
}

impl JoinIrreducible {
    pub fn new(with_zero: bool, n: u32) -> Result<JoinIrreducible, Error> {
        if n == 0 {
            return Err(Error::Validation(
                "a join-irreducible needs n ≥ 1".into(),
            ));
        }
        Ok(JoinIrreducible { with_zero, n })
    }

    pub fn as_element(&self) -> LatticeElement {
        let mut e = BTreeSet::new();
        if self.with_zero {
            e.insert(0);
        }
        e.insert(self.n);
        LatticeElement { elems: e }
    }

    /// The generating order on join-irreducibles: `{n} ≤ {n+1}` and
    /// `{n} ≤ {0,n}`; the `{0,n}` are pairwise incomparable.
    pub fn leq(&self, other: &JoinIrreducible) -> bool {
        match (self.with_zero, other.with_zero) {
            (false, false) | (false, true) => self.n <= other.n,
            (true, true) => self.n == other.n,
            (true, false) => false,
        }
    }
}

impl Serialize for JoinIrreducible {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        if self.with_zero {
            [0, self.n].serialize(ser)
        } else {
            [self.n].serialize(ser)
        }
    }
}

impl<'de> Deserialize<'de> for JoinIrreducible {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(de)?;
        match v.as_slice() {
            [n] if *n >= 1 => Ok(JoinIrreducible {
                with_zero: false,
                n: *n,
            }),
            [0, n] if *n >= 1 => Ok(JoinIrreducible {
                with_zero: true,
                n: *n,
            }),
            _ => Err(serde::de::Error::custom(
                "a join-irreducible is [n] or [0,n] with n ≥ 1",
            )),
        }
    }
}

/// A downward-closed set of join-irreducibles. May be empty (it corresponds
/// to the element `{0}`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LowerSet {
    elems: BTreeSet<JoinIrreducible>,
}

impl LowerSet {
    pub fn new(elems: BTreeSet<JoinIrreducible>) -> Result<LowerSet, Error> {
        for a in &elems {
            for m in 1..=a.n {
                let below = JoinIrreducible {
                    with_zero: false,
                    n: m,
                };
                if below.leq(a) && !elems.contains(&below) {
                    return Err(Error::Validation(format!(
                        "not downward closed: missing {{{m}}} below a member"
                    )));
                }
            }
        }
        Ok(LowerSet { elems })
    }

    pub fn empty() -> LowerSet {
        LowerSet {
            elems: BTreeSet::new(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = &JoinIrreducible> + '_ {
        self.elems.iter()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_subset(&self, other: &LowerSet) -> bool {
        self.elems.is_subset(&other.elems)
    }

    pub fn union(&self, other: &LowerSet) -> LowerSet {
        LowerSet {
            elems: self.elems.union(&other.elems).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &LowerSet) -> LowerSet {
        LowerSet {
            elems: self.elems.intersection(&other.elems).copied().collect(),
        }
    }
}

impl<'de> Deserialize<'de> for LowerSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let elems = BTreeSet::<JoinIrreducible>::deserialize(de)?;
        LowerSet::new(elems).map_err(serde::de::Error::custom)
    }
}

fn shift(s: &LatticeElement, by: i64) -> BTreeSet<i64> {
    s.elements().map(|e| e as i64 + by).collect()
}

/// `S ∨ T`: both sets are shifted up until their maxima agree with
/// `max(S ∪ T)`, then united.
pub fn join(s: &LatticeElement, t: &LatticeElement) -> LatticeElement {
    let m = s.top().max(t.top()) as i64;
    let up_s = shift(s, m - s.top() as i64);
    let up_t = shift(t, m - t.top() as i64);
    let elems = up_s.union(&up_t).map(|&e| e as u32).collect();
    LatticeElement { elems }
}

/// `S ∧ T`: both sets are shifted down until their maxima agree with
/// `min(max S, max T)`, then intersected. The formula can produce the empty
/// set, which is not a lattice element; that case is an error.
pub fn meet(s: &LatticeElement, t: &LatticeElement) -> Result<LatticeElement, Error> {
    let m = s.top().max(t.top()) as i64;
    let down_s = shift(s, t.top() as i64 - m);
    let down_t = shift(t, s.top() as i64 - m);
    let elems: BTreeSet<u32> = down_s
        .intersection(&down_t)
        .map(|&e| {
            debug_assert!(e >= 0, "intersection stays inside the smaller operand");
            e as u32
        })
        .collect();
    LatticeElement::new(elems)
        .map_err(|_| Error::Validation(format!("empty meet of {s} and {t}")))
}

/// The Birkhoff image of `S = {t_1, …, t_k, s}` (s the maximum): the chain
/// `{1}, …, {s}` together with `{0, s − t}` for each non-maximal `t ∈ S`.
/// `{0}` maps to the empty lower set.
pub fn alpha(s: &LatticeElement) -> LowerSet {
    let top = s.top();
    let mut elems = BTreeSet::new();
    for n in 1..=top {
        elems.insert(JoinIrreducible {
            with_zero: false,
            n,
        });
    }
    for t in s.elements() {
        if t < top {
            elems.insert(JoinIrreducible {
                with_zero: true,
                n: top - t,
            });
        }
    }
    LowerSet { elems }
}

/// Inverse of [`alpha`]: a lower set with chain height `s` and zero-marked
/// members `{0, t_i}` maps to `{s − t_1, …, s − t_k, s}`; the empty lower
/// set maps to `{0}`.
pub fn beta(l: &LowerSet) -> LatticeElement {
    let s = l
        .elements()
        .filter(|j| !j.with_zero)
        .map(|j| j.n)
        .max()
        .unwrap_or(0);
    let mut elems = BTreeSet::new();
    elems.insert(s);
    for j in l.elements() {
        if j.with_zero {
            elems.insert(s - j.n);
        }
    }
    LatticeElement { elems }
}

/// The lattice order, decided through the Birkhoff representation.
pub fn leq(t: &LatticeElement, s: &LatticeElement) -> bool {
    alpha(t).is_subset(&alpha(s))
}

/// The order by its generating moves, decided by breadth-first search
/// inside the bounded sub-lattice: from `X` one may pass to any superset
/// with the same maximum, or to `X + 1`. Used as an independent oracle
/// for [`leq`].
pub fn leq_by_generators(t: &LatticeElement, s: &LatticeElement) -> bool {
    if t == s {
        return true;
    }
    let bound = s.top();
    if t.top() > bound {
        return false;
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(t.clone());
    queue.push_back(t.clone());
    while let Some(x) = queue.pop_front() {
        let mut nexts = Vec::new();
        // supersets with the same maximum
        let top = x.top();
        for y in subsets_with_max(top) {
            if x.elems.is_subset(&y.elems) && x != y {
                nexts.push(y);
            }
        }
        // shift by one
        if top < bound {
            nexts.push(LatticeElement {
                elems: x.elements().map(|e| e + 1).collect(),
            });
        }
        for y in nexts {
            if y == *s {
                return true;
            }
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    false
}

fn subsets_with_max(top: u32) -> Vec<LatticeElement> {
    // all subsets of {0, …, top} containing top
    let mut out = Vec::new();
    let below = top as usize;
    for mask in 0..(1u64 << below) {
        let mut elems: BTreeSet<u32> = (0..below as u32)
            .filter(|&b| mask >> b & 1 == 1)
            .collect();
        elems.insert(top);
        out.push(LatticeElement { elems });
    }
    out
}

/// The `2r` join-irreducibles of the bounded sub-lattice: `{n}` and
/// `{0,n}` for `1 ≤ n ≤ r`.
pub fn join_irreducibles(r: u32) -> Vec<JoinIrreducible> {
    let mut out = Vec::new();
    for n in 1..=r {
        out.push(JoinIrreducible {
            with_zero: false,
            n,
        });
        out.push(JoinIrreducible { with_zero: true, n });
    }
    out
}

/// All elements with maximum at most `r`: the nonempty subsets of
/// `{0, …, r}`, of which there are `2^(r+1) − 1`.
pub fn enumerate_elements(r: u32) -> Vec<LatticeElement> {
    let size = r as usize + 1;
    let mut out = Vec::new();
    for mask in 1u64..(1 << size) {
        let elems = (0..size as u32).filter(|&b| mask >> b & 1 == 1).collect();
        out.push(LatticeElement { elems });
    }
    out
}

/// All lower sets of the join-irreducibles bounded by `r`, including the
/// empty one: a chain height `s ≤ r` plus any subset of `{0,1}, …, {0,s}`.
pub fn enumerate_lower_sets(r: u32) -> Vec<LowerSet> {
    let mut out = vec![LowerSet::empty()];
    for s in 1..=r {
        for mask in 0u64..(1 << s) {
            let mut elems = BTreeSet::new();
            for n in 1..=s {
                elems.insert(JoinIrreducible {
                    with_zero: false,
                    n,
                });
            }
            for n in 1..=s {
                if mask >> (n - 1) & 1 == 1 {
                    elems.insert(JoinIrreducible { with_zero: true, n });
                }
            }
            out.push(LowerSet { elems });
        }
    }
    out
}

/// Exhaustive verification of the lattice axioms, both distributive laws,
/// the Birkhoff isomorphism, and the agreement of the two order
/// definitions, over every element, pair, and triple bounded by `r`.
pub fn check_distributive(r: u32) -> Report {
    let mut rep = Report::new(format!("lattice-exhaustive-r{r}"));
    let elems = enumerate_elements(r);
    let lower = enumerate_lower_sets(r);
    rep.push(
        "element-count",
        elems.len() as u64 == (1u64 << (r + 1)) - 1,
        format!("{} elements with maximum ≤ {r}", elems.len()),
    );
    rep.push(
        "lower-set-count",
        lower.len() == elems.len(),
        format!("{} lower sets", lower.len()),
    );

    let mut inverse_ok = true;
    let mut image_ok = true;
    for e in &elems {
        let a = alpha(e);
        if beta(&a) != *e {
            inverse_ok = false;
        }
        if LowerSet::new(a.elems.clone()).is_err() || !lower.contains(&a) {
            image_ok = false;
        }
    }
    for l in &lower {
        if alpha(&beta(l)) != *l {
            inverse_ok = false;
        }
    }
    rep.push(
        "birkhoff-inverse",
        inverse_ok,
        "alpha and beta are mutually inverse".to_string(),
    );
    rep.push(
        "alpha-image-is-lower-sets",
        image_ok,
        "every alpha image is a valid enumerated lower set".to_string(),
    );

    let mut order_agree = true;
    let mut pairs_ok = true;
    for a in &elems {
        for b in &elems {
            if leq(a, b) != leq_by_generators(a, b) {
                order_agree = false;
            }
            let j = join(a, b);
            let m = match meet(a, b) {
                Ok(m) => m,
                Err(_) => {
                    pairs_ok = false;
                    continue;
                }
            };
            if j != join(b, a)
                || m != meet(b, a).unwrap()
                || !leq(a, &j)
                || !leq(&m, a)
                || alpha(&j) != alpha(a).union(&alpha(b))
                || alpha(&m) != alpha(a).intersection(&alpha(b))
            {
                pairs_ok = false;
            }
        }
        if join(a, a) != *a || meet(a, a).map(|m| m != *a).unwrap_or(true) {
            pairs_ok = false;
        }
    }
    rep.push(
        "order-definitions-agree",
        order_agree,
        format!(
            "inclusion of lower sets vs generator reachability on {} pairs",
            elems.len() * elems.len()
        ),
    );
    rep.push(
        "pairwise-axioms",
        pairs_ok,
        "commutativity, idempotence, a ≤ a∨b, a∧b ≤ a, alpha is a homomorphism".to_string(),
    );

    let mut triples_ok = true;
    let mut count = 0u64;
    for a in &elems {
        for b in &elems {
            for c in &elems {
                count += 1;
                let lhs1 = join(a, &meet(b, c).unwrap());
                let rhs1 = meet(&join(a, b), &join(a, c)).unwrap();
                let lhs2 = meet(a, &join(b, c)).unwrap();
                let rhs2 = join(&meet(a, b).unwrap(), &meet(a, c).unwrap());
                if lhs1 != rhs1 || lhs2 != rhs2 {
                    triples_ok = false;
                }
            }
        }
    }
    rep.push(
        "distributive-laws",
        triples_ok,
        format!("both distributive identities over {count} triples"),
    );

    let mut ji_ok = true;
    for j in join_irreducibles(r) {
        let e = j.as_element();
        // join-irreducible: not a join of two strictly smaller elements
        for a in &elems {
            for b in &elems {
                if leq(a, &e) && *a != e && leq(b, &e) && *b != e && join(a, b) == e {
                    ji_ok = false;
                }
            }
        }
    }
    // conversely every other element (except the bottom {0}) is such a join
    let bottom = LatticeElement::from_slice(&[0]).unwrap();
    let ji_set: Vec<LatticeElement> = join_irreducibles(r)
        .iter()
        .map(|j| j.as_element())
        .collect();
    for e in &elems {
        if *e == bottom || ji_set.contains(e) {
            continue;
        }
        let reducible = elems.iter().any(|a| {
            elems.iter().any(|b| {
                leq(a, e) && *a != *e && leq(b, e) && *b != *e && join(a, b) == *e
            })
        });
        if !reducible {
            ji_ok = false;
        }
    }
    rep.push(
        "join-irreducibles",
        ji_ok,
        format!(
            "the {} listed elements and no others are join-irreducible",
            2 * r
        ),
    );
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &[u32]) -> LatticeElement {
        LatticeElement::from_slice(s).unwrap()
    }

    #[test]
    fn element_validation_and_display() {
        assert!(LatticeElement::new(BTreeSet::new()).is_err());
        assert_eq!(el(&[0, 2]).to_string(), "{0,2}");
        assert_eq!(el(&[1, 3]).top(), 3);
    }

    #[test]
    fn join_meet_examples() {
        let s = el(&[1]);
        assert_eq!(join(&s, &s), s);
        assert_eq!(meet(&s, &s).unwrap(), s);
        assert_eq!(join(&el(&[1]), &el(&[0, 1])), el(&[0, 1]));
        assert_eq!(meet(&el(&[0, 2]), &el(&[1, 2])).unwrap(), el(&[2]));
        // the shift built into the formulas
        assert_eq!(join(&el(&[0]), &el(&[2])), el(&[2]));
        assert_eq!(meet(&el(&[0, 1]), &el(&[1, 2])).unwrap(), el(&[0, 1]));
    }

    #[test]
    fn order_examples() {
        let s = el(&[0, 1]);
        assert!(leq(&s, &s));
        assert!(leq(&el(&[0, 1]), &el(&[1, 2])));
        assert!(!leq(&el(&[0, 1]), &el(&[0, 2])));
        assert!(leq(&el(&[0]), &el(&[3])));
        assert!(!leq(&el(&[2]), &el(&[1])));
    }

    #[test]
    fn alpha_beta_examples() {
        assert!(alpha(&el(&[0])).is_empty());
        assert_eq!(beta(&LowerSet::empty()), el(&[0]));
        let a = alpha(&el(&[1, 3]));
        let expected: BTreeSet<_> = [
            JoinIrreducible::new(false, 1).unwrap(),
            JoinIrreducible::new(false, 2).unwrap(),
            JoinIrreducible::new(false, 3).unwrap(),
            JoinIrreducible::new(true, 2).unwrap(),
        ]
        .into_iter()
        .collect();
        assert_eq!(a, LowerSet::new(expected).unwrap());
        for e in enumerate_elements(4) {
            assert_eq!(beta(&alpha(&e)), e);
        }
    }

    #[test]
    fn lower_set_validation() {
        // {0,2} without {2} in the chain is not downward closed
        let bad: BTreeSet<_> = [
            JoinIrreducible::new(false, 1).unwrap(),
            JoinIrreducible::new(true, 2).unwrap(),
        ]
        .into_iter()
        .collect();
        assert!(LowerSet::new(bad).is_err());
        // chain with a gap
        let gap: BTreeSet<_> = [JoinIrreducible::new(false, 2).unwrap()]
            .into_iter()
            .collect();
        assert!(LowerSet::new(gap).is_err());
        assert!(JoinIrreducible::new(false, 0).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_lower_sets(0).len(), 1);
        assert_eq!(enumerate_lower_sets(1).len(), 3);
        assert_eq!(join_irreducibles(1).len(), 2);
        assert_eq!(join_irreducibles(3).len(), 6);
        for r in 0..=4 {
            assert_eq!(
                enumerate_elements(r).len() as u64,
                (1u64 << (r + 1)) - 1
            );
            assert_eq!(enumerate_lower_sets(r).len(), enumerate_elements(r).len());
        }
    }

    #[test]
    fn exhaustive_small_ranks() {
        for r in 0..=3 {
            let rep = check_distributive(r);
            assert!(rep.passed, "r = {r}: {:?}", rep.checks);
        }
    }

    #[test]
    fn serde_shapes() {
        let s = el(&[0, 2]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0,2]");
        let back: LatticeElement = serde_json::from_str("[2,0]").unwrap();
        assert_eq!(back, s);
        let l = alpha(&el(&[1, 3]));
        assert_eq!(
            serde_json::to_string(&l).unwrap(),
            "[[1],[2],[3],[0,2]]"
        );
        let back: LowerSet = serde_json::from_str("[[1],[2],[3],[0,2]]").unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<LowerSet>("[[0,2]]").is_err());
    }
}

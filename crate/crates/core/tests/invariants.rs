//! Property tests: structural invariants checked on randomized inputs that
//! proptest shrinks on failure. Structured objects (complexes, bicomplexes)
//! are drawn through the deterministic generator, so a failing seed is
//! reproducible verbatim.

use std::collections::BTreeSet;

use proptest::prelude::*;

use specseq_core::bicomplex;
use specseq_core::filtered::{
    cone, decalage, direct_sum, loops, shift, suspension,
};
use specseq_core::gen::Gen;
use specseq_core::lattice::{self, LatticeElement};
use specseq_core::tot::tot_pi;
use specseq_core::Field;

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Q), Just(Field::Fp(3)), Just(Field::Fp(7))]
}

fn elements() -> impl Strategy<Value = LatticeElement> {
    proptest::collection::btree_set(0u32..6, 1..4)
        .prop_map(|s| LatticeElement::new(s).expect("nonempty"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Each page is the homology of the previous one.
    #[test]
    fn page_dimensions_recur(field in fields(), seed in any::<u64>(), r in 0u32..4) {
        let a = Gen::new(field, seed).complex();
        let pr = a.page(r);
        let pn = a.page(r + 1);
        let mut keys: BTreeSet<(i64, i64)> = pr.entries.keys().copied().collect();
        keys.extend(pn.entries.keys().copied());
        for (p, q) in keys {
            prop_assert_eq!(pn.dim(p, q), pr.homology_dim(field, p, q));
        }
    }

    /// Page dimensions add up over direct sums.
    #[test]
    fn pages_are_additive(field in fields(), seed in any::<u64>(), r in 0u32..4) {
        let mut gen = Gen::new(field, seed);
        let a = gen.complex();
        let b = gen.complex();
        let ps = direct_sum(&a, &b).page(r);
        let (pa, pb) = (a.page(r), b.page(r));
        let mut keys: BTreeSet<(i64, i64)> = pa.entries.keys().copied().collect();
        keys.extend(pb.entries.keys().copied());
        keys.extend(ps.entries.keys().copied());
        for (p, q) in keys {
            prop_assert_eq!(ps.dim(p, q), pa.dim(p, q) + pb.dim(p, q));
        }
    }

    /// Changing basis degreewise never changes any page dimension.
    #[test]
    fn pages_are_basis_independent(field in fields(), seed in any::<u64>(), r in 0u32..4) {
        let mut gen = Gen::new(field, seed);
        let a = gen.complex();
        let (b, _) = gen.conjugated(&a);
        let (pa, pb) = (a.page(r), b.page(r));
        let mut keys: BTreeSet<(i64, i64)> = pa.entries.keys().copied().collect();
        keys.extend(pb.entries.keys().copied());
        for (p, q) in keys {
            prop_assert_eq!(pa.dim(p, q), pb.dim(p, q));
        }
    }

    /// Décalage undoes the shift and loops undo the suspension, bit-exactly.
    #[test]
    fn shift_and_suspension_invert(field in fields(), seed in any::<u64>(), r in 0u32..4) {
        let a = Gen::new(field, seed).complex();
        prop_assert_eq!(&decalage(&shift(&a, r), r), &a);
        prop_assert_eq!(&loops(&suspension(&a, r), r), &a);
    }

    /// A morphism is a stage-r equivalence exactly when its stage-r cone
    /// dies on the next page.
    #[test]
    fn cone_detects_equivalences(field in fields(), seed in any::<u64>(), r in 0u32..3) {
        let mut gen = Gen::new(field, seed);
        let a = gen.complex();
        let b = gen.complex();
        let f = gen.chain_map(&a, &b);
        prop_assert_eq!(f.is_r_weq(r), cone(&f, r).complex.page(r + 1).is_zero());
    }

    /// Witness pages of a bicomplex match the pages of its totalization.
    #[test]
    fn totalization_preserves_pages(field in fields(), seed in any::<u64>(), r in 0u32..4) {
        let b = Gen::new(field, seed).bicomplex();
        let pw = b.page(r);
        let pt = tot_pi(&b).page(r);
        let mut keys: BTreeSet<(i64, i64)> = pw.entries.keys().copied().collect();
        keys.extend(pt.entries.keys().copied());
        for (p, q) in keys {
            prop_assert_eq!(pw.dim(p, q), pt.dim(p, q));
        }
    }

    /// Witness-page dimensions of bicomplexes recur as homology too.
    #[test]
    fn witness_pages_recur(field in fields(), seed in any::<u64>(), r in 0u32..4) {
        let b = Gen::new(field, seed).bicomplex();
        let pr = b.page(r);
        let pn = b.page(r + 1);
        let mut keys: BTreeSet<(i64, i64)> = pr.entries.keys().copied().collect();
        keys.extend(pn.entries.keys().copied());
        for (p, q) in keys {
            prop_assert_eq!(pn.dim(p, q), pr.homology_dim(field, p, q));
        }
    }

    /// Tensoring with a single exterior cell shifts every witness page.
    #[test]
    fn suspension_translates_witness_pages(field in fields(), seed in any::<u64>(), r in 0u32..3) {
        let a = Gen::new(field, seed).bicomplex();
        let s = bicomplex::suspension(&a, r);
        let (pa, ps) = (a.page(r), s.page(r));
        prop_assert_eq!(pa.total_dim(), ps.total_dim());
        prop_assert_eq!(&bicomplex::loops(&s, r), &a);
    }

    /// Lattice operations are commutative, idempotent, and absorb.
    #[test]
    fn lattice_axioms(s in elements(), t in elements()) {
        let j = lattice::join(&s, &t);
        prop_assert_eq!(&j, &lattice::join(&t, &s));
        let m = lattice::meet(&s, &t).expect("meets are never empty");
        prop_assert_eq!(&m, &lattice::meet(&t, &s).expect("meets are never empty"));
        prop_assert_eq!(&lattice::join(&s, &s), &s);
        prop_assert_eq!(&lattice::meet(&s, &s).unwrap(), &s);
        prop_assert_eq!(&lattice::join(&s, &m), &s);
        prop_assert_eq!(&lattice::meet(&s, &j).unwrap(), &s);
        prop_assert!(lattice::leq(&m, &s) && lattice::leq(&s, &j));
    }

    /// The lower-set map is an order embedding turning joins into unions.
    #[test]
    fn alpha_is_an_embedding(s in elements(), t in elements()) {
        let (al_s, al_t) = (lattice::alpha(&s), lattice::alpha(&t));
        prop_assert_eq!(lattice::leq(&s, &t), al_s.is_subset(&al_t));
        prop_assert_eq!(&lattice::alpha(&lattice::join(&s, &t)), &al_s.union(&al_t));
        prop_assert_eq!(&lattice::beta(&al_s), &s);
    }
}

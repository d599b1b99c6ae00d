//! The verification harness: every finitely checkable statement in the
//! library, re-checked on fixtures and on seeded random instances by
//! independent oracles. Each suite returns a [`Report`]; a failing check
//! carries a canonical-JSON witness that replays the failure standalone.

use serde::Serialize;

use crate::bicomplex::{
    self, loops_map, psi, rep_witness_cycle, BiMap, Bicomplex,
};
use crate::field::Field;
use crate::filtered::{
    cone, decalage, gamma_morphism, loops, omega_cone_fibration, rep_cycle, shift, suspension,
    ChainMap, FilteredComplex,
};
use crate::gen::Gen;
use crate::json;
use crate::lattice;
use crate::model::{
    properness_harness_bicomplex, properness_harness_filtered, stability_check_bicomplex,
    stability_check_filtered, Flavor, SSet,
};
use crate::tot::{
    l_adjoint, tot_pi, transpose_down, transpose_up, verify_unit_on_cycle, Window,
};
use crate::{par, Error, Report};

pub const SUITES: &[&str] = &[
    "pages",
    "witness-tot",
    "cone",
    "dec-shift",
    "adjunction",
    "l-of-cycle",
    "unit",
    "stability",
    "properness",
    "separating",
    "lattice",
];

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub suites: Vec<Report>,
}

/// Runs one suite by name, or all of them.
pub fn run(
    selection: &str,
    field: Field,
    seed: u64,
    cases: u64,
    jobs: usize,
) -> Result<Summary, Error> {
    let names: Vec<&str> = if selection == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&selection) {
        vec![selection]
    } else {
        return Err(Error::Validation(format!(
            "unknown suite {selection:?}; expected all or one of {SUITES:?}"
        )));
    };
    let suites: Vec<Report> = names
        .iter()
        .map(|name| run_suite(name, field, seed, cases, jobs))
        .collect();
    let passed = suites.iter().all(|s| s.passed);
    Ok(Summary { passed, suites })
}

pub fn run_suite(name: &str, field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    match name {
        "pages" => suite_pages(field, seed, cases, jobs),
        "witness-tot" => suite_witness_tot(field, seed, cases, jobs),
        "cone" => suite_cone(field, seed, cases, jobs),
        "dec-shift" => suite_dec_shift(field, seed, cases, jobs),
        "adjunction" => suite_adjunction(field, seed, cases, jobs),
        "l-of-cycle" => suite_l_of_cycle(field, seed, cases, jobs),
        "unit" => suite_unit(field, seed, cases, jobs),
        "stability" => suite_stability(field, seed, cases, jobs),
        "properness" => suite_properness(field, seed, cases, jobs),
        "separating" => suite_separating(field, seed, cases, jobs),
        "lattice" => suite_lattice(),
        other => {
            let mut rep = Report::new(other);
            rep.push("known-suite", false, format!("no suite named {other:?}"));
            rep
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn case_seed(seed: u64, suite: &str, case: u64) -> u64 {
    let salt = suite.bytes().fold(0u64, |a, b| {
        a.wrapping_mul(131).wrapping_add(b as u64)
    });
    splitmix(seed ^ splitmix(salt) ^ case.wrapping_mul(0xA24BAED4963EE407))
}

/// Runs the random cases of a suite and folds the outcomes into the report:
/// one passing line when everything holds, one failing line per finding.
fn run_random(
    rep: &mut Report,
    suite: &str,
    seed: u64,
    cases: u64,
    jobs: usize,
    f: impl Fn(u64, u64) -> Result<(), String> + Sync,
) {
    let results = par::run_cases(cases, jobs, |i| f(i, case_seed(seed, suite, i)));
    let findings: Vec<(u64, &String)> = results
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().err().map(|e| (i as u64, e)))
        .collect();
    if findings.is_empty() {
        rep.push("random-cases", true, format!("{cases} seeded cases"));
    } else {
        for (i, detail) in findings {
            rep.push(format!("case-{i}"), false, detail.clone());
        }
    }
}

fn complex_witness(a: &FilteredComplex) -> String {
    json::to_canonical_string(&json::complex_to_value(a))
}

fn bicomplex_witness(a: &Bicomplex) -> String {
    json::to_canonical_string(&json::bicomplex_to_value(a))
}

/// Page recursion, page differentials squaring to zero, the page-0
/// dimension count, and eventual stabilization, on one complex.
fn check_pages(a: &FilteredComplex) -> Result<(), String> {
    let field = a.field();
    let fail = |msg: String| Err(format!("{msg}; witness: {}", complex_witness(a)));
    for r in 0..=4u32 {
        let pr = a.page(r);
        let pn = a.page(r + 1);
        let mut keys: Vec<(i64, i64)> = pr.entries.keys().copied().collect();
        keys.extend(pn.entries.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        for (p, q) in keys {
            if pn.dim(p, q) != pr.homology_dim(field, p, q) {
                return fail(format!("page recursion fails at r = {r}, ({p},{q})"));
            }
            let rr = r as i64;
            let twice = pr.diff(field, p - rr, q + 1 - rr).mul(&pr.diff(field, p, q));
            if !twice.is_zero() {
                return fail(format!("page differential does not square to zero at r = {r}, ({p},{q})"));
            }
        }
    }
    let p0 = a.page(0);
    for n in a.support() {
        let total: usize = p0
            .entries
            .iter()
            .filter(|(&(p, q), _)| q - p == n)
            .map(|(_, e)| e.dim)
            .sum();
        if total != a.dim(n) {
            return fail(format!("page 0 does not assemble the graded pieces at degree {n}"));
        }
    }
    let far = a.page(8);
    let farther = a.page(9);
    let mut keys: Vec<(i64, i64)> = far.entries.keys().copied().collect();
    keys.extend(farther.entries.keys().copied());
    for (p, q) in keys {
        if far.dim(p, q) != farther.dim(p, q) {
            return fail(format!("pages fail to stabilize at ({p},{q})"));
        }
    }
    Ok(())
}

/// Page recursion and stabilization for witness pages of a bicomplex.
fn check_pages_bicomplex(b: &Bicomplex) -> Result<(), String> {
    let field = b.field();
    let fail = |msg: String| Err(format!("{msg}; witness: {}", bicomplex_witness(b)));
    for r in 0..=4u32 {
        let pr = b.page(r);
        let pn = b.page(r + 1);
        let mut keys: Vec<(i64, i64)> = pr.entries.keys().copied().collect();
        keys.extend(pn.entries.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        for (p, q) in keys {
            if pn.dim(p, q) != pr.homology_dim(field, p, q) {
                return fail(format!("witness page recursion fails at r = {r}, ({p},{q})"));
            }
            let rr = r as i64;
            let twice = pr.diff(field, p - rr, q + 1 - rr).mul(&pr.diff(field, p, q));
            if !twice.is_zero() {
                return fail(format!(
                    "witness page differential does not square to zero at r = {r}, ({p},{q})"
                ));
            }
        }
    }
    let far = b.page(8);
    let farther = b.page(9);
    let mut keys: Vec<(i64, i64)> = far.entries.keys().copied().collect();
    keys.extend(farther.entries.keys().copied());
    for (p, q) in keys {
        if far.dim(p, q) != farther.dim(p, q) {
            return fail(format!("witness pages fail to stabilize at ({p},{q})"));
        }
    }
    Ok(())
}

fn suite_pages(field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    let mut rep = Report::new("pages");
    let mut fixtures_ok = true;
    for r in 0..=3u32 {
        for (p, n) in [(0i64, 0i64), (1, -1), (-2, 2)] {
            if check_pages(&rep_cycle(field, r, p, n)).is_err() {
                fixtures_ok = false;
            }
        }
    }
    // a stage-1 cycle representative carries nothing beyond page 1
    fixtures_ok &= rep_cycle(field, 1, 0, 0).page(2).is_zero();
    fixtures_ok &= FilteredComplex::zero(field).page(0).is_zero();
    rep.push(
        "fixtures",
        fixtures_ok,
        "cycle representatives and the zero complex",
    );
    run_random(&mut rep, "pages", seed, cases, jobs, |i, s| {
        let mut gen = Gen::new(field, s);
        if i % 2 == 0 {
            check_pages(&gen.complex())
        } else {
            check_pages_bicomplex(&gen.bicomplex())
        }
    });
    rep
}

fn check_witness_tot(b: &Bicomplex) -> Result<(), String> {
    let t = tot_pi(b);
    for page in 0..=4u32 {
        let pb = b.page(page);
        let pt = t.page(page);
        let mut keys: Vec<(i64, i64)> = pb.entries.keys().copied().collect();
        keys.extend(pt.entries.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        for (i, j) in keys {
            if pb.dim(i, j) != pt.dim(i, j) {
                return Err(format!(
                    "witness page and totalization page disagree at page {page}, ({i},{j}); witness: {}",
                    bicomplex_witness(b)
                ));
            }
        }
    }
    Ok(())
}

fn suite_witness_tot(field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    let mut rep = Report::new("witness-tot");
    let mut fixtures_ok = true;
    for r in 0..=3u32 {
        if check_witness_tot(&rep_witness_cycle(field, r, 1, -1)).is_err() {
            fixtures_ok = false;
        }
    }
    rep.push("fixtures", fixtures_ok, "witness-cycle representatives, stages 0..=3");
    run_random(&mut rep, "witness-tot", seed, cases, jobs, |_, s| {
        check_witness_tot(&Gen::new(field, s).bicomplex())
    });
    rep
}

fn check_cone_filtered(gen: &mut Gen) -> Result<(), String> {
    let a = gen.complex();
    let b = gen.complex();
    let r = 1 + (splitmix(gen.coord() as u64) % 3) as u32;
    let fail = |msg: String, w: String| Err(format!("{msg}; witness: {w}"));
    // the cone of the identity dies on page r + 1
    let cid = cone(&ChainMap::identity(&a), r);
    if !cid.complex.page(r + 1).is_zero() {
        return fail(format!("cone of the identity survives page {}", r + 1), complex_witness(&a));
    }
    // the cone of 0 → A is A
    let c0 = cone(&ChainMap::zero(&FilteredComplex::zero(a.field()), &a), r);
    if c0.complex != a {
        return fail("cone over the zero inclusion differs from the target".into(), complex_witness(&a));
    }
    // cone criterion: f is an r-weq exactly when its r-cone is (r+1)-acyclic
    let f = gen.chain_map(&a, &b);
    for k in 0..=3u32 {
        let acyclic = cone(&f, k).complex.page(k + 1).is_zero();
        if f.is_r_weq(k) != acyclic {
            return fail(
                format!("cone criterion fails at r = {k}"),
                json::to_canonical_string(&json::chain_map_to_value(&f)),
            );
        }
    }
    Ok(())
}

fn check_cone_bicomplex(gen: &mut Gen) -> Result<(), String> {
    let a = gen.bicomplex();
    let r = (splitmix((gen.coord() as u64).wrapping_add(17)) % 3) as u32;
    // Ω^r of the cone projection is surjective on witness cycles up to
    // stage r, and its domain dies on page r + 1
    let fib = loops_map(&psi(&a, r), r);
    if !(0..=r).all(|k| fib.witness_surjective(k)) {
        return Err(format!(
            "loop fibration of the cone is not witness-surjective; witness: {}",
            bicomplex_witness(&a)
        ));
    }
    if !fib.source().page(r + 1).is_zero() {
        return Err(format!(
            "cone of the identity survives page {}; witness: {}",
            r + 1,
            bicomplex_witness(&a)
        ));
    }
    Ok(())
}

fn suite_cone(field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    let mut rep = Report::new("cone");
    let mut fixtures_ok = true;
    for r in 0..=3u32 {
        let a = rep_cycle(field, 1, 0, 0);
        fixtures_ok &= cone(&ChainMap::identity(&a), r).complex.page(r + 1).is_zero();
        let pi = omega_cone_fibration(&a, r);
        fixtures_ok &= (0..=r).all(|k| pi.cycle_surjective(k));
        fixtures_ok &= pi.source().page(r + 1).is_zero();
    }
    rep.push("fixtures", fixtures_ok, "identity cones and loop fibrations, stages 0..=3");
    // Engineered morphisms on both sides of the criterion: 0 → 𝒵_r is a
    // stage-r equivalence because 𝒵_r dies on page r + 1, while
    // 𝒵_{r+1} → 0 is not because 𝒵_{r+1} survives it.
    let mut engineered_ok = true;
    for r in 0..=3u32 {
        let zero = FilteredComplex::zero(field);
        let weq = ChainMap::zero(&zero, &rep_cycle(field, r, 0, 0));
        engineered_ok &= weq.is_r_weq(r) && cone(&weq, r).complex.page(r + 1).is_zero();
        let non = ChainMap::zero(&rep_cycle(field, r + 1, 0, 0), &zero);
        engineered_ok &= !non.is_r_weq(r) && !cone(&non, r).complex.page(r + 1).is_zero();
    }
    rep.push(
        "engineered-morphisms",
        engineered_ok,
        "criterion agrees on known equivalences and known non-equivalences, stages 0..=3",
    );
    run_random(&mut rep, "cone", seed, cases, jobs, |i, s| {
        let mut gen = Gen::new(field, s);
        if i % 2 == 0 {
            check_cone_filtered(&mut gen)
        } else {
            check_cone_bicomplex(&mut gen)
        }
    });
    rep
}

fn check_dec_shift(a: &FilteredComplex) -> Result<(), String> {
    let fail = |msg: String| Err(format!("{msg}; witness: {}", complex_witness(a)));
    for r in 0..=3u32 {
        if decalage(&shift(a, r), r) != *a {
            return fail(format!("décalage after shift is not the identity at r = {r}"));
        }
        if loops(&suspension(a, r), r) != *a {
            return fail(format!("loops after suspension is not the identity at r = {r}"));
        }
        // the suspension translates every page by (r, r - 1)
        for k in 0..=r + 2 {
            let pa = a.page(k);
            let ps = suspension(a, r).page(k);
            if pa.total_dim() != ps.total_dim() {
                return fail(format!("suspension changes the total page dimension at k = {k}"));
            }
            for (&(p, q), e) in &pa.entries {
                if ps.dim(p + r as i64, q + r as i64 - 1) != e.dim {
                    return fail(format!(
                        "suspension misplaces page {k} at ({p},{q}), r = {r}"
                    ));
                }
            }
        }
    }
    Ok(())
}

fn suite_dec_shift(field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    let mut rep = Report::new("dec-shift");
    let mut fixtures_ok = true;
    for r in 0..=3u32 {
        fixtures_ok &= check_dec_shift(&rep_cycle(field, r, 0, 0)).is_ok();
    }
    rep.push("fixtures", fixtures_ok, "cycle representatives, stages 0..=3");
    run_random(&mut rep, "dec-shift", seed, cases, jobs, |_, s| {
        check_dec_shift(&Gen::new(field, s).complex())
    });
    rep
}

fn check_adjunction(gen: &mut Gen) -> Result<(), String> {
    let field = gen.field();
    let a = gen.complex();
    let b = gen.bicomplex();
    let mut lo = a.min_weight().unwrap_or(0);
    let mut hi = a.max_weight().unwrap_or(0);
    for (i, _) in b.cells() {
        lo = lo.min(i);
        hi = hi.max(i);
    }
    let w = Window::new(lo - 6, hi + 2, 1).expect("valid window");
    let l = match l_adjoint(&a, w) {
        Ok(l) => l,
        Err(e) => return Err(format!("left adjoint failed: {e}; witness: {}", complex_witness(&a))),
    };
    let tot = tot_pi(&b);
    // down ∘ up round trip on a random map into the totalization
    let g = gen.chain_map(&a, &tot);
    let up = transpose_up(&g, &b, w)
        .map_err(|e| format!("transpose up failed: {e}; witness: {}", complex_witness(&a)))?;
    let back = transpose_down(&a, &up, w)
        .map_err(|e| format!("transpose down failed: {e}"))?;
    for n in a.support() {
        if back.map(n) != g.map(n) {
            return Err(format!(
                "transpose round trip (up then down) differs at degree {n}; witness: {}",
                json::to_canonical_string(&json::chain_map_to_value(&g))
            ));
        }
    }
    // up ∘ down round trip on a random bicomplex morphism out of 𝓛A
    let f = gen.bimap(&l.body, &b);
    let down = transpose_down(&a, &f, w).map_err(|e| format!("transpose down failed: {e}"))?;
    let again = transpose_up(&down, &b, w).map_err(|e| format!("transpose up failed: {e}"))?;
    for (i, j) in l.body.cells() {
        if again.map(i, j) != f.map(i, j) {
            return Err(format!(
                "transpose round trip (down then up) differs at ({i},{j}); witness: {}",
                bicomplex_witness(&b)
            ));
        }
    }
    let _ = field;
    Ok(())
}

fn suite_adjunction(field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    let mut rep = Report::new("adjunction");
    let mut fixtures_ok = true;
    {
        let w = Window::new(-5, 3, 1).unwrap();
        let a = rep_cycle(field, 1, 0, 0);
        let b = rep_witness_cycle(field, 1, 0, 0);
        let tot = tot_pi(&b);
        for g in crate::filtered::hom_space(&a, &tot) {
            let up = transpose_up(&g, &b, w).unwrap();
            let back = transpose_down(&a, &up, w).unwrap();
            fixtures_ok &= a.support().iter().all(|&n| back.map(n) == g.map(n));
        }
    }
    rep.push("fixtures", fixtures_ok, "full hom-space round trip on representatives");
    run_random(&mut rep, "adjunction", seed, cases, jobs, |_, s| {
        check_adjunction(&mut Gen::new(field, s))
    });
    rep
}

fn suite_l_of_cycle(field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    let mut rep = Report::new("l-of-cycle");
    let mut fixtures_ok = true;
    let w = Window::new(-8, 3, 2).unwrap();
    for s in 0..=2u32 {
        match crate::tot::decompose_l_of_cycle(field, s, 0, 0, w) {
            Ok((iso, _)) => fixtures_ok &= iso.is_iso(),
            Err(_) => fixtures_ok = false,
        }
    }
    rep.push("fixtures", fixtures_ok, "decompositions at the origin, stages 0..=2");
    run_random(&mut rep, "l-of-cycle", seed, cases, jobs, |_, sd| {
        let mut gen = Gen::new(field, sd);
        let s = (splitmix(sd) % 4) as u32;
        let p = gen.coord().clamp(-2, 2);
        let n = gen.coord().clamp(-2, 2);
        let w = Window::new(p - s as i64 - 7, p + 3, 2).expect("valid window");
        match crate::tot::decompose_l_of_cycle(field, s, p, n, w) {
            Ok((iso, summands)) => {
                if !iso.is_iso() {
                    return Err(format!(
                        "decomposition is not invertible at s = {s}, p = {p}, n = {n}"
                    ));
                }
                if s >= 1 && (summands[0].s, summands[0].p) != (s, p) {
                    return Err(format!(
                        "leading summand is not the staircase at s = {s}, p = {p}, n = {n}"
                    ));
                }
                Ok(())
            }
            Err(e) => Err(format!("decomposition failed at s = {s}, p = {p}, n = {n}: {e}")),
        }
    });
    rep
}

fn suite_unit(field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    let mut rep = Report::new("unit");
    let w = Window::new(-9, 4, 2).unwrap();
    let fixtures_ok = verify_unit_on_cycle(field, 1, 0, 0, w)
        .map(|r| r.passed)
        .unwrap_or(false);
    rep.push("fixtures", fixtures_ok, "unit on the stage-1 representative at the origin");
    run_random(&mut rep, "unit", seed, cases, jobs, |_, sd| {
        let mut gen = Gen::new(field, sd);
        let s = 1 + (splitmix(sd) % 3) as u32;
        let p = gen.coord().clamp(-2, 2);
        let n = gen.coord().clamp(-2, 2);
        let w = Window::new(p - s as i64 - 9, p + 3, s + 1).expect("valid window");
        match verify_unit_on_cycle(field, s, p, n, w) {
            Ok(r) if r.passed => Ok(()),
            Ok(r) => Err(format!(
                "unit check failed at s = {s}, p = {p}, n = {n}: {}",
                json::to_canonical_string(&r)
            )),
            Err(e) => Err(format!("unit check errored at s = {s}, p = {p}, n = {n}: {e}")),
        }
    });
    rep
}

fn suite_stability(field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    let mut rep = Report::new("stability");
    let mut fixtures_ok = stability_check_filtered(&FilteredComplex::zero(field), 1).passed;
    for r in 0..=2u32 {
        fixtures_ok &= stability_check_filtered(&rep_cycle(field, 1, 0, 0), r).passed;
        fixtures_ok &= stability_check_bicomplex(&rep_witness_cycle(field, 1, 0, 0), r).passed;
    }
    rep.push("fixtures", fixtures_ok, "zero complex and stage-1 representatives");
    run_random(&mut rep, "stability", seed, cases, jobs, |i, sd| {
        let mut gen = Gen::new(field, sd);
        let r = (splitmix(sd ^ 5) % 3) as u32;
        if i % 2 == 0 {
            let a = gen.complex();
            let rep = stability_check_filtered(&a, r);
            if rep.passed {
                Ok(())
            } else {
                Err(format!(
                    "filtered stability fails at r = {r}: {}; witness: {}",
                    json::to_canonical_string(&rep),
                    complex_witness(&a)
                ))
            }
        } else {
            let a = gen.bicomplex();
            let rep = stability_check_bicomplex(&a, r);
            if rep.passed {
                Ok(())
            } else {
                Err(format!(
                    "bicomplex stability fails at r = {r}: {}; witness: {}",
                    json::to_canonical_string(&rep),
                    bicomplex_witness(&a)
                ))
            }
        }
    });
    rep
}

/// The projection `A ⊕ K → A`. It is surjective on cycles at every stage
/// (the A-factor maps by the identity), and when `K` dies on page `r + 1`
/// it is an acyclic fibration for any stage set with maximum `r`.
fn padded_projection_filtered(a: &FilteredComplex, k: &FilteredComplex) -> ChainMap {
    let field = a.field();
    let sum = crate::filtered::direct_sum(a, k);
    let mut maps = std::collections::BTreeMap::new();
    for n in sum.support() {
        let proj = crate::Matrix::identity(field, a.dim(n))
            .hstack(&crate::Matrix::zero(field, a.dim(n), k.dim(n)));
        maps.insert(n, proj);
    }
    ChainMap::new(sum, a.clone(), maps).expect("projection is a chain map")
}

fn padded_projection_bicomplex(a: &Bicomplex, k: &Bicomplex) -> BiMap {
    let field = a.field();
    let sum = bicomplex::direct_sum(a, k);
    let mut maps = std::collections::BTreeMap::new();
    for (i, j) in sum.cells() {
        let proj = crate::Matrix::identity(field, a.dim(i, j))
            .hstack(&crate::Matrix::zero(field, a.dim(i, j), k.dim(i, j)));
        maps.insert((i, j), proj);
    }
    BiMap::new(sum, a.clone(), maps).expect("projection is a morphism")
}

fn suite_properness(field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    let mut rep = Report::new("properness");
    let fixtures_ok = {
        let a = rep_cycle(field, 1, 0, 0);
        let s = SSet::new([0, 1].into_iter().collect(), Flavor::Filtered).unwrap();
        let pi = omega_cone_fibration(&a, 1);
        let attach = ChainMap::zero(&rep_cycle(field, 2, 1, -1), pi.source());
        properness_harness_filtered(&pi, &s, &attach, 1, -1)
            .map(|r| r.passed)
            .unwrap_or(false)
    };
    rep.push("fixtures", fixtures_ok, "loop fibration of a stage-1 representative");
    run_random(&mut rep, "properness", seed, cases, jobs, |i, sd| {
        let mut gen = Gen::new(field, sd);
        let r = (splitmix(sd ^ 11) % 3) as u32;
        let p = gen.coord().clamp(-2, 2);
        if i % 2 == 0 {
            let a = gen.complex();
            let b = gen.complex();
            let n = gen.coord().clamp(-2, 2);
            let s = SSet::new((0..=r).collect(), Flavor::Filtered).unwrap();
            // projection off an acyclic summand: an S-acyclic fibration
            // onto any A, with nontrivial kernel Ω^r C_r(B)
            let pi = padded_projection_filtered(&a, omega_cone_fibration(&b, r).source());
            let z = rep_cycle(field, r + 1, p, n);
            let attach = gen.chain_map(&z, pi.source());
            match properness_harness_filtered(&pi, &s, &attach, p, n) {
                Ok(rep) if rep.passed => Ok(()),
                Ok(rep) => Err(format!(
                    "filtered properness fails: {}; witness: {}",
                    json::to_canonical_string(&rep),
                    complex_witness(&a)
                )),
                Err(e) => Err(format!("filtered properness errored: {e}; witness: {}", complex_witness(&a))),
            }
        } else {
            let a = gen.bicomplex();
            let b = gen.bicomplex();
            let q = gen.coord().clamp(-2, 2);
            let s = SSet::new((0..=r).collect(), Flavor::Bicomplex).unwrap();
            let pi = padded_projection_bicomplex(&a, loops_map(&psi(&b, r), r).source());
            let z = rep_witness_cycle(field, r + 1, p, q);
            let attach = gen.bimap(&z, pi.source());
            match properness_harness_bicomplex(&pi, &s, &attach, p, q) {
                Ok(rep) if rep.passed => Ok(()),
                Ok(rep) => Err(format!(
                    "bicomplex properness fails: {}; witness: {}",
                    json::to_canonical_string(&rep),
                    bicomplex_witness(&a)
                )),
                Err(e) => Err(format!("bicomplex properness errored: {e}; witness: {}", bicomplex_witness(&a))),
            }
        }
    });
    rep
}

fn suite_separating(field: Field, seed: u64, cases: u64, jobs: usize) -> Report {
    let mut rep = Report::new("separating");
    let mut fixtures_ok = true;
    for s in 1..=3u32 {
        if let Ok(g) = gamma_morphism(field, s, 0, 0) {
            for k in 0..=s + 3 {
                fixtures_ok &= g.cycle_surjective(k) == (k != s);
            }
        } else {
            fixtures_ok = false;
        }
    }
    rep.push("fixtures", fixtures_ok, "separating morphisms at the origin, stages 1..=3");
    run_random(&mut rep, "separating", seed, cases, jobs, |_, sd| {
        let mut gen = Gen::new(field, sd);
        let s = 1 + (splitmix(sd ^ 3) % 3) as u32;
        let p = gen.coord();
        let n = gen.coord();
        let g = gamma_morphism(field, s, p, n)
            .map_err(|e| format!("separating morphism failed at s = {s}: {e}"))?;
        for k in 0..=s + 3 {
            if g.cycle_surjective(k) != (k != s) {
                return Err(format!(
                    "separating morphism at s = {s}, p = {p}, n = {n} misclassifies stage {k}"
                ));
            }
        }
        Ok(())
    });
    rep
}

fn suite_lattice() -> Report {
    let mut rep = Report::new("lattice");
    let ex = lattice::check_distributive(4);
    rep.push(
        "exhaustive-rank-4",
        ex.passed,
        format!(
            "{} checks over all elements with maximum ≤ 4",
            ex.checks.len()
        ),
    );
    for c in ex.checks {
        rep.push(c.name, c.passed, c.detail);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_small_runs() {
        let summary = run("all", Field::Q, 1, 4, 1).unwrap();
        for s in &summary.suites {
            assert!(s.passed, "suite {}: {:?}", s.name, s.checks);
        }
        assert!(summary.passed);
    }

    #[test]
    fn fp_suites_pass() {
        let summary = run("pages", Field::Fp(5), 2, 6, 1).unwrap();
        assert!(summary.passed, "{:?}", summary.suites);
        let summary = run("adjunction", Field::Fp(3), 2, 4, 1).unwrap();
        assert!(summary.passed, "{:?}", summary.suites);
    }

    #[test]
    fn zero_cases_runs_fixtures_only() {
        let summary = run("all", Field::Q, 9, 0, 1).unwrap();
        assert!(summary.passed);
        for s in &summary.suites {
            assert!(s.checks.iter().any(|c| c.name == "fixtures" || s.name == "lattice"));
        }
    }

    #[test]
    fn determinism_across_jobs() {
        let a = run("pages", Field::Q, 7, 8, 1).unwrap();
        let b = run("pages", Field::Q, 7, 8, 0).unwrap();
        assert_eq!(
            json::to_canonical_string(&a),
            json::to_canonical_string(&b)
        );
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run("nonsense", Field::Q, 0, 0, 1).is_err());
    }
}

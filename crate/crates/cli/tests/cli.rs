//! End-to-end tests of the `specseq` binary: exit codes, canonical JSON
//! output, and determinism of the verification reports.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use specseq_core::bicomplex;
use specseq_core::filtered::{gamma_morphism, rep_cycle, ChainMap, FilteredComplex};
use specseq_core::json;
use specseq_core::Field;

fn specseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, json::to_canonical_string(v)).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn pages_of_a_cycle_representative() {
    let dir = tempfile::tempdir().unwrap();
    let a = rep_cycle(Field::Q, 1, 0, 0);
    let input = write_json(dir.path(), "z.json", &json::complex_to_value(&a));

    // page 1 carries the two generators; page 2 is empty
    let out = specseq(&["pages", &input, "--r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["r"], 1);
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);

    let out = specseq(&["pages", &input, "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["entries"].as_array().unwrap().is_empty());

    // --out writes the same canonical text
    let sink = dir.path().join("page.json");
    let out2 = specseq(&["pages", &input, "--r", "2", "--out", sink.to_str().unwrap()]);
    assert_eq!(out2.status.code(), Some(0));
    assert_eq!(fs::read(&sink).unwrap(), out.stdout);
}

#[test]
fn pages_auto_detects_bicomplexes() {
    let dir = tempfile::tempdir().unwrap();
    let b = bicomplex::unit(Field::Q, 0, 0);
    let input = write_json(dir.path(), "b.json", &json::bicomplex_to_value(&b));
    let out = specseq(&["pages", &input, "--r", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["entries"].as_array().unwrap().len(), 1);
}

#[test]
fn malformed_input_reports_the_byte_offset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"field\": \"Q\", }").unwrap();
    let out = specseq(&["pages", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("byte"), "stderr was: {err}");
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = specseq(&["pages", "/nonexistent/input.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_classifies_morphisms() {
    let dir = tempfile::tempdir().unwrap();
    let a = rep_cycle(Field::Q, 1, 0, 0);
    let id = write_json(
        dir.path(),
        "id.json",
        &json::chain_map_to_value(&ChainMap::identity(&a)),
    );

    // the identity is an equivalence at every stage
    let out = specseq(&["check", &id, "weq", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["passed"], true);

    // and a fibration for any stage set
    let out = specseq(&["check", &id, "fib", "--s-set", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0));

    // the separating morphism at s = 1 fails cycle surjectivity exactly there
    let g = gamma_morphism(Field::Q, 1, 0, 0).unwrap();
    let gp = write_json(dir.path(), "gamma.json", &json::chain_map_to_value(&g));
    let out = specseq(&["check", &gp, "fib", "--s-set", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let out = specseq(&["check", &gp, "fib", "--s-set", "0,1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["witness"]["stage"], 1);

    // a non-weq has a witness bidegree on the next page
    let zero = write_json(
        dir.path(),
        "zero.json",
        &json::chain_map_to_value(&ChainMap::zero(&FilteredComplex::zero(Field::Q), &a)),
    );
    let out = specseq(&["check", &zero, "weq", "--r", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_json(&out)["witness"]["bidegree"].is_array());

    // unknown predicate and missing --s-set are usage errors
    assert_eq!(specseq(&["check", &id, "frobnicate"]).status.code(), Some(2));
    assert_eq!(specseq(&["check", &id, "fib"]).status.code(), Some(2));
}

#[test]
fn cone_tot_and_ladjoint_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = rep_cycle(Field::Q, 2, 0, 0);

    // the cone over 0 → A is A itself
    let inc = write_json(
        dir.path(),
        "inc.json",
        &json::chain_map_to_value(&ChainMap::zero(&FilteredComplex::zero(Field::Q), &a)),
    );
    let out = specseq(&["cone", &inc, "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json::complex_to_value(&a));

    // totalizing a unit bicomplex gives a one-dimensional complex
    let b = bicomplex::unit(Field::Q, 1, -1);
    let bi = write_json(dir.path(), "unit.json", &json::bicomplex_to_value(&b));
    let out = specseq(&["tot", &bi]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["degrees"].as_array().unwrap().len(), 1);

    // the left adjoint materializes on a window and reports it back
    let zp = write_json(dir.path(), "z2.json", &json::complex_to_value(&a));
    let out = specseq(&["ladjoint", &zp, "--window", "-9:2:1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["body"]["cells"].as_array().is_some());
    assert_eq!(v["window"]["col_lo"], -9);

    // flavor mismatches are usage errors
    assert_eq!(specseq(&["tot", &zp]).status.code(), Some(2));
    assert_eq!(
        specseq(&["ladjoint", &bi, "--window", "-9:2:1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        specseq(&["ladjoint", &zp, "--window", "nonsense"]).status.code(),
        Some(2)
    );
}

#[test]
fn lattice_operations() {
    let join = specseq(&["lattice", "join", "0,1", "2"]);
    assert_eq!(join.status.code(), Some(0));
    assert_eq!(stdout_json(&join), serde_json::json!([1, 2]));

    let meet = specseq(&["lattice", "meet", "0,2", "1,2"]);
    assert_eq!(meet.status.code(), Some(0));
    assert_eq!(stdout_json(&meet), serde_json::json!([2]));

    let leq = specseq(&["lattice", "leq", "0,1", "1,2"]);
    assert_eq!(leq.status.code(), Some(0));
    assert_eq!(stdout_json(&leq), Value::Bool(true));
    let leq = specseq(&["lattice", "leq", "0,1", "0,2"]);
    assert_eq!(stdout_json(&leq), Value::Bool(false));

    let alpha = specseq(&["lattice", "alpha", "1,3"]);
    assert_eq!(alpha.status.code(), Some(0));
    let lower = stdout_json(&alpha);
    let beta = specseq(&["lattice", "beta", &lower.to_string()]);
    assert_eq!(beta.status.code(), Some(0));
    assert_eq!(stdout_json(&beta), serde_json::json!([1, 3]));

    // garbage stage sets are usage errors
    assert_eq!(specseq(&["lattice", "join", "a,b", "2"]).status.code(), Some(2));
    assert_eq!(specseq(&["lattice", "beta", "[[0]"]).status.code(), Some(2));
}

#[test]
fn verify_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.json");
    let two = dir.path().join("two.json");
    for sink in [&one, &two] {
        let out = specseq(&[
            "verify", "pages", "--seed", "7", "--cases", "2", "--out",
            sink.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = fs::read(&one).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, fs::read(&two).unwrap());

    // sequential and parallel scheduling give the same bytes
    let out = specseq(&["verify", "pages", "--seed", "7", "--cases", "2", "--jobs", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, a);
}

#[test]
fn verify_rejects_bad_arguments() {
    assert_eq!(specseq(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(
        specseq(&["verify", "lattice", "--field", "Fp:4"]).status.code(),
        Some(2)
    );
    assert_eq!(specseq(&["verify", "--bogus-flag"]).status.code(), Some(2));
}

//! Command-line surface: load complexes and morphisms from JSON, compute
//! spectral-sequence pages, run model-structure predicates, evaluate the
//! lattice operations, and drive the verification suites.
//!
//! Exit codes: 0 on success, 1 when a check produced findings (a false
//! predicate, a failing suite, an empty meet), 2 on usage or parse errors.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use specseq_core::bicomplex::Bicomplex;
use specseq_core::filtered::{cone, ChainMap, FilteredComplex};
use specseq_core::json;
use specseq_core::lattice::{self, LatticeElement, LowerSet};
use specseq_core::model::{Flavor, SSet};
use specseq_core::tot::{l_adjoint, tot_pi, Window};
use specseq_core::verify;

#[derive(Parser)]
#[command(name = "specseq", version, about = "Exact spectral sequences of filtered complexes and bicomplexes", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write the JSON result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a spectral-sequence page of a complex or bicomplex
    Pages {
        /// Input JSON file (filtered complex or bicomplex, auto-detected)
        input: PathBuf,
        /// Page index
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[command(flatten)]
        out: OutArg,
    },
    /// Test a predicate on a morphism
    Check {
        /// Input JSON morphism (filtered or bicomplex, auto-detected)
        input: PathBuf,
        /// One of: weq, fib, acyclic-fib, effective-mono
        predicate: String,
        /// Page index for weq
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Stage set for fib / acyclic-fib, e.g. 0,1,3
        #[arg(long, value_name = "S")]
        s_set: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Cone of a filtered chain map at stage r
    Cone {
        /// Input JSON filtered morphism
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[command(flatten)]
        out: OutArg,
    },
    /// Product totalization of a bicomplex
    Tot {
        /// Input JSON bicomplex
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Left adjoint of the totalization, materialized on a column window
    Ladjoint {
        /// Input JSON filtered complex
        input: PathBuf,
        /// Column window as lo:hi:margin (lo and hi may be negative)
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Lattice operations on stage sets
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Run verification suites
    Verify {
        /// Suite name or "all"
        #[arg(default_value = "all")]
        suite: String,
        /// Ground field: Q or Fp:N
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per suite (0 runs fixtures only)
        #[arg(long, default_value_t = 25)]
        cases: u64,
        /// Concurrent cases (0 = all cores, 1 = sequential)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum LatticeOp {
    /// Join of two stage sets, e.g. `join 0,1 2`
    Join { s: String, t: String },
    /// Meet of two stage sets (an empty result is a finding)
    Meet { s: String, t: String },
    /// Is T below S?
    Leq { t: String, s: String },
    /// Lower set of join-irreducibles below S
    Alpha { s: String },
    /// Stage set of a lower set, given as JSON like [[1],[2],[0,1]]
    Beta { l: String },
}

enum Failure {
    /// Exit 1: a well-formed run that found something
    Finding(String),
    /// Exit 2: bad input
    Usage(String),
}

type CmdResult = Result<Value, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_document(path: &PathBuf) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    json::parse_document(&text).map_err(usage)
}

enum Object {
    Filtered(FilteredComplex),
    Bicomplex(Bicomplex),
}

fn load_object(path: &PathBuf) -> Result<Object, Failure> {
    let v = read_document(path)?;
    if v.get("cells").is_some() {
        Ok(Object::Bicomplex(json::bicomplex_from_value(&v).map_err(usage)?))
    } else {
        Ok(Object::Filtered(json::complex_from_value(&v).map_err(usage)?))
    }
}

enum Morphism {
    Filtered(ChainMap),
    Bicomplex(specseq_core::bicomplex::BiMap),
}

fn load_morphism(path: &PathBuf) -> Result<Morphism, Failure> {
    let v = read_document(path)?;
    let flavored = v
        .get("source")
        .ok_or_else(|| Failure::Usage("a morphism needs a \"source\"".into()))?;
    if flavored.get("cells").is_some() {
        Ok(Morphism::Bicomplex(json::bimap_from_value(&v).map_err(usage)?))
    } else {
        Ok(Morphism::Filtered(json::chain_map_from_value(&v).map_err(usage)?))
    }
}

fn parse_s_set(s: &str, flavor: Flavor) -> Result<SSet, Failure> {
    let elems: BTreeSet<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("cannot parse stage set {s:?}")))?;
    SSet::new(elems, flavor).map_err(usage)
}

fn parse_element(s: &str) -> Result<LatticeElement, Failure> {
    let elems: BTreeSet<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("cannot parse stage set {s:?}")))?;
    LatticeElement::new(elems).map_err(usage)
}

fn parse_window(s: &str) -> Result<Window, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::Usage(format!(
            "cannot parse window {s:?}: expected lo:hi:margin"
        )));
    }
    let lo: i64 = parts[0]
        .parse()
        .map_err(|_| Failure::Usage(format!("bad window bound {:?}", parts[0])))?;
    let hi: i64 = parts[1]
        .parse()
        .map_err(|_| Failure::Usage(format!("bad window bound {:?}", parts[1])))?;
    let margin: u32 = parts[2]
        .parse()
        .map_err(|_| Failure::Usage(format!("bad window margin {:?}", parts[2])))?;
    Window::new(lo, hi, margin).map_err(usage)
}

fn cmd_pages(input: &PathBuf, r: u32) -> CmdResult {
    match load_object(input)? {
        Object::Filtered(a) => Ok(json::page_to_value(a.field(), &a.page(r))),
        Object::Bicomplex(b) => Ok(json::bipage_to_value(b.field(), &b.page(r))),
    }
}

fn cmd_check(input: &PathBuf, predicate: &str, r: u32, s_set: Option<&str>) -> CmdResult {
    let m = load_morphism(input)?;
    let (passed, witness) = match (&m, predicate) {
        (Morphism::Filtered(f), "weq") => (f.is_r_weq(r), weq_witness_filtered(f, r)),
        (Morphism::Bicomplex(f), "weq") => (f.is_r_weq(r), None),
        (Morphism::Filtered(f), "fib") | (Morphism::Filtered(f), "acyclic-fib") => {
            let s = parse_s_set(
                s_set.ok_or_else(|| Failure::Usage("--s-set is required".into()))?,
                Flavor::Filtered,
            )?;
            let mut ok = s.elements().all(|k| f.cycle_surjective(k));
            let witness = fib_witness_filtered(f, &s);
            if predicate == "acyclic-fib" {
                ok = ok && f.is_r_weq(s.r());
            }
            (ok, witness)
        }
        (Morphism::Bicomplex(f), "fib") | (Morphism::Bicomplex(f), "acyclic-fib") => {
            let s = parse_s_set(
                s_set.ok_or_else(|| Failure::Usage("--s-set is required".into()))?,
                Flavor::Bicomplex,
            )?;
            let mut ok = s.elements().all(|k| f.witness_surjective(k));
            let witness = fib_witness_bicomplex(f, &s);
            if predicate == "acyclic-fib" {
                ok = ok && f.is_r_weq(s.r());
            }
            (ok, witness)
        }
        (Morphism::Filtered(f), "effective-mono") => (f.is_effective_mono(), None),
        (Morphism::Bicomplex(_), "effective-mono") => {
            return Err(Failure::Usage(
                "effective-mono applies to filtered morphisms".into(),
            ))
        }
        _ => {
            return Err(Failure::Usage(format!(
                "unknown predicate {predicate:?}; expected weq, fib, acyclic-fib, or effective-mono"
            )))
        }
    };
    let mut v = serde_json::json!({ "predicate": predicate, "passed": passed });
    if let (false, Some(w)) = (passed, witness) {
        v["witness"] = w;
    }
    Ok(v)
}

/// First bidegree where the page-(r+1) map fails to be invertible.
fn weq_witness_filtered(f: &ChainMap, r: u32) -> Option<Value> {
    let ps = f.source().page(r + 1);
    let pt = f.target().page(r + 1);
    let maps = f.page_map(r + 1);
    let mut keys: Vec<(i64, i64)> = ps.entries.keys().copied().collect();
    keys.extend(pt.entries.keys().copied());
    keys.sort_unstable();
    keys.dedup();
    for (p, q) in keys {
        let invertible = match maps.get(&(p, q)) {
            Some(m) => m.is_invertible(),
            None => ps.dim(p, q) == 0 && pt.dim(p, q) == 0,
        };
        if !invertible {
            return Some(serde_json::json!({ "bidegree": [p, q], "page": r + 1 }));
        }
    }
    None
}

fn fib_witness_filtered(f: &ChainMap, s: &SSet) -> Option<Value> {
    let t = f.target();
    let (lo, hi) = t.weight_window(s.r() + 1)?;
    for k in s.elements() {
        for n in t.support() {
            for p in lo..=hi {
                if !f.cycle_surjective_at(k, p, n) {
                    return Some(serde_json::json!({
                        "stage": k, "weight": p, "degree": n
                    }));
                }
            }
        }
    }
    None
}

fn fib_witness_bicomplex(f: &specseq_core::bicomplex::BiMap, s: &SSet) -> Option<Value> {
    for k in s.elements() {
        for (p, q) in f.target().cells() {
            if !f.witness_surjective_at(k, p, q) {
                return Some(serde_json::json!({ "stage": k, "bidegree": [p, q] }));
            }
        }
    }
    None
}

fn cmd_cone(input: &PathBuf, r: u32) -> CmdResult {
    match load_morphism(input)? {
        Morphism::Filtered(f) => Ok(json::complex_to_value(&cone(&f, r).complex)),
        Morphism::Bicomplex(_) => Err(Failure::Usage(
            "the cone command takes a filtered morphism".into(),
        )),
    }
}

fn cmd_tot(input: &PathBuf) -> CmdResult {
    match load_object(input)? {
        Object::Bicomplex(b) => Ok(json::complex_to_value(&tot_pi(&b))),
        Object::Filtered(_) => Err(Failure::Usage(
            "the tot command takes a bicomplex".into(),
        )),
    }
}

fn cmd_ladjoint(input: &PathBuf, window: &str) -> CmdResult {
    let w = parse_window(window)?;
    match load_object(input)? {
        Object::Filtered(a) => {
            let l = l_adjoint(&a, w).map_err(usage)?;
            Ok(serde_json::json!({
                "window": serde_json::to_value(&l.window).expect("window serializes"),
                "body": json::bicomplex_to_value(&l.body),
            }))
        }
        Object::Bicomplex(_) => Err(Failure::Usage(
            "the ladjoint command takes a filtered complex".into(),
        )),
    }
}

fn cmd_lattice(op: &LatticeOp) -> CmdResult {
    let to_v = |e: &LatticeElement| serde_json::to_value(e).expect("element serializes");
    match op {
        LatticeOp::Join { s, t } => {
            let (s, t) = (parse_element(s)?, parse_element(t)?);
            Ok(to_v(&lattice::join(&s, &t)))
        }
        LatticeOp::Meet { s, t } => {
            let (s, t) = (parse_element(s)?, parse_element(t)?);
            match lattice::meet(&s, &t) {
                Ok(m) => Ok(to_v(&m)),
                Err(e) => Err(Failure::Finding(e.to_string())),
            }
        }
        LatticeOp::Leq { t, s } => {
            let (t, s) = (parse_element(t)?, parse_element(s)?);
            Ok(Value::Bool(lattice::leq(&t, &s)))
        }
        LatticeOp::Alpha { s } => {
            let s = parse_element(s)?;
            Ok(serde_json::to_value(lattice::alpha(&s)).expect("lower set serializes"))
        }
        LatticeOp::Beta { l } => {
            let l: LowerSet = serde_json::from_str(l)
                .map_err(|e| Failure::Usage(format!("cannot parse lower set: {e}")))?;
            Ok(to_v(&lattice::beta(&l)))
        }
    }
}

fn cmd_verify(suite: &str, field: &str, seed: u64, cases: u64, jobs: usize) -> CmdResult {
    let field = json::parse_field(field).map_err(usage)?;
    let summary = verify::run(suite, field, seed, cases, jobs).map_err(usage)?;
    let v = serde_json::to_value(&summary).expect("summary serializes");
    if summary.passed {
        Ok(v)
    } else {
        Err(Failure::Finding(json::to_canonical_string(&v)))
    }
}

fn emit(v: &Value, out: &OutArg) -> Result<(), Failure> {
    let text = json::to_canonical_string(v);
    match &out.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (result, out): (Value, &OutArg) = match &cli.command {
        Command::Pages { input, r, out } => (cmd_pages(input, *r)?, out),
        Command::Check {
            input,
            predicate,
            r,
            s_set,
            out,
        } => {
            let v = cmd_check(input, predicate, *r, s_set.as_deref())?;
            let passed = v["passed"].as_bool().unwrap_or(false);
            emit(&v, out)?;
            if passed {
                return Ok(());
            }
            return Err(Failure::Finding(String::new()));
        }
        Command::Cone { input, r, out } => (cmd_cone(input, *r)?, out),
        Command::Tot { input, out } => (cmd_tot(input)?, out),
        Command::Ladjoint { input, window, out } => (cmd_ladjoint(input, window)?, out),
        Command::Lattice { op } => {
            let v = cmd_lattice(op)?;
            println!("{}", json::to_canonical_string(&v).trim_end());
            return Ok(());
        }
        Command::Verify {
            suite,
            field,
            seed,
            cases,
            jobs,
            out,
        } => match cmd_verify(suite, field, *seed, *cases, *jobs) {
            Ok(v) => (v, out),
            Err(Failure::Finding(report)) => {
                // the report still goes to the requested sink
                let v: Value = serde_json::from_str(&report).expect("own report parses");
                emit(&v, out)?;
                return Err(Failure::Finding(String::new()));
            }
            Err(e) => return Err(e),
        },
    };
    emit(&result, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Finding(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

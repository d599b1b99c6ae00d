//! Exact computation of spectral-sequence pages for finite filtered chain
//! complexes and bicomplexes, together with the functors relating the two
//! settings (suspension, shift, décalage, cones, totalization and its
//! adjoints), lifting-property checks for the associated model structures,
//! and the lattice they form.
//!
//! All arithmetic is exact: rationals with big integers, or a prime field.

pub mod bicomplex;
pub mod field;
pub mod filtered;
pub mod gen;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod model;
pub mod par;
pub mod subspace;
pub mod tot;
pub mod verify;

pub use field::{parse_scalar, Field, Scalar};
pub use matrix::Matrix;
pub use subspace::{adapted_basis, Quotient, Subspace};

/// One verified statement inside a report: a stable name, the verdict, and
/// a human-readable detail line (dimensions, bidegrees, witnesses).
#[derive(Debug, Clone, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A named bundle of checks; `passed` is the conjunction.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Report {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Report {
        Report {
            name: name.into(),
            passed: true,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Errors surfaced by validation and parsing. Violations of internal
/// invariants panic instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("values from different fields: expected one field throughout")]
    FieldMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    ScalarParse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("subspace is not contained in the larger space")]
    NotContained,
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("operands live over different index flavors")]
    FlavorMismatch,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("malformed input: {0}")]
    Json(String),
}

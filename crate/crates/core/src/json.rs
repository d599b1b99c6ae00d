//! JSON encoding of complexes, bicomplexes, maps, and pages.
//!
//! Scalars travel as canonical strings `a/b` (reduced, positive denominator,
//! plain `a` for integers) over the rationals, and as residues `0..p-1`
//! over a prime field. Missing degrees, cells, or matrices mean zero.
//! Output is canonical: object keys are sorted and scalars are re-rendered
//! in canonical form, so equal values serialize to identical bytes.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bicomplex::{BiMap, Bicomplex};
use crate::field::{parse_scalar, Field, Scalar};
use crate::filtered::{ChainMap, FilteredComplex, PageTable};
use crate::matrix::Matrix;
use crate::Error;

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Q => "Q".serialize(ser),
            Field::Fp(p) => {
                let mut m = serde_json::Map::new();
                m.insert("Fp".into(), Value::from(*p));
                Value::Object(m).serialize(ser)
            }
        }
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(de)?;
        match &v {
            Value::String(s) if s == "Q" => Ok(Field::Q),
            Value::Object(m) => match m.get("Fp") {
                Some(Value::Number(n)) if m.len() == 1 => {
                    let p = n
                        .as_u64()
                        .ok_or_else(|| D::Error::custom("Fp modulus must be a positive integer"))?;
                    let f = Field::Fp(p);
                    f.validate().map_err(D::Error::custom)?;
                    Ok(f)
                }
                _ => Err(D::Error::custom(r#"a field is "Q" or {"Fp": prime}"#)),
            },
            _ => Err(D::Error::custom(r#"a field is "Q" or {"Fp": prime}"#)),
        }
    }
}

/// Parses the command-line field syntax `Q` or `Fp:N`.
pub fn parse_field(s: &str) -> Result<Field, Error> {
    if s == "Q" {
        return Ok(Field::Q);
    }
    if let Some(rest) = s.strip_prefix("Fp:") {
        let p: u64 = rest
            .parse()
            .map_err(|_| Error::Json(format!("cannot parse field {s:?}")))?;
        let f = Field::Fp(p);
        f.validate()?;
        return Ok(f);
    }
    Err(Error::Json(format!(
        "cannot parse field {s:?}: expected Q or Fp:N"
    )))
}

fn scalar_to_value(s: &Scalar) -> Value {
    match s {
        Scalar::Q(_) => Value::String(s.to_string()),
        Scalar::Fp { val, .. } => Value::from(*val),
    }
}

fn scalar_from_value(field: Field, v: &Value) -> Result<Scalar, Error> {
    match v {
        Value::String(s) => parse_scalar(field, s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                match field {
                    Field::Q => Ok(field.from_i64(i)),
                    Field::Fp(p) => {
                        if i < 0 || i as u64 >= p {
                            Err(Error::ScalarParse(format!("{i} is not a residue mod {p}")))
                        } else {
                            Ok(field.from_i64(i))
                        }
                    }
                }
            } else {
                Err(Error::ScalarParse(n.to_string()))
            }
        }
        other => Err(Error::ScalarParse(other.to_string())),
    }
}

pub fn matrix_to_value(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| Value::Array((0..m.cols()).map(|c| scalar_to_value(m.get(r, c))).collect()))
        .collect();
    Value::Array(rows)
}

/// Reads a matrix of scalar entries; all rows must have the same length.
/// The expected shape is not known here, so an absent or empty matrix
/// yields `0 × 0`; constructors reconcile shapes against dimensions.
pub fn matrix_from_value(field: Field, v: &Value) -> Result<Matrix, Error> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Json("a matrix is an array of rows".into()))?;
    let mut data = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Json("a matrix row is an array of scalars".into()))?;
        data.push(
            row.iter()
                .map(|e| scalar_from_value(field, e))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Matrix::from_rows(field, data)
}

#[derive(Serialize, Deserialize)]
struct RawDegree {
    n: i64,
    dim: usize,
    weights: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RawComplex {
    field: Field,
    #[serde(default)]
    degrees: Vec<RawDegree>,
    #[serde(default)]
    differentials: BTreeMap<String, Value>,
}

pub fn complex_to_value(a: &FilteredComplex) -> Value {
    let degrees: Vec<RawDegree> = a
        .support()
        .into_iter()
        .map(|n| RawDegree {
            n,
            dim: a.dim(n),
            weights: a.weights(n),
        })
        .collect();
    let differentials: BTreeMap<String, Value> = a
        .support()
        .into_iter()
        .filter(|&n| !a.d(n).is_zero())
        .map(|n| (n.to_string(), matrix_to_value(&a.d(n))))
        .collect();
    serde_json::to_value(RawComplex {
        field: a.field(),
        degrees,
        differentials,
    })
    .expect("plain data serializes")
}

pub fn complex_from_value(v: &Value) -> Result<FilteredComplex, Error> {
    let raw: RawComplex =
        serde_json::from_value(v.clone()).map_err(|e| Error::Json(e.to_string()))?;
    let mut weights = BTreeMap::new();
    for d in &raw.degrees {
        if d.dim != d.weights.len() {
            return Err(Error::Json(format!(
                "degree {}: dim {} but {} weights",
                d.n,
                d.dim,
                d.weights.len()
            )));
        }
        if weights.insert(d.n, d.weights.clone()).is_some() {
            return Err(Error::Json(format!("degree {} listed twice", d.n)));
        }
    }
    let mut diffs = BTreeMap::new();
    for (k, mv) in &raw.differentials {
        let n: i64 = k
            .parse()
            .map_err(|_| Error::Json(format!("differential key {k:?} is not a degree")))?;
        let m = matrix_from_value(raw.field, mv)?;
        // a 0 × 0 placeholder for an omitted-but-present key is fine; the
        // constructor fills true zero shapes for absent keys only, so skip it
        if m.rows() == 0 && m.cols() == 0 {
            continue;
        }
        diffs.insert(n, m);
    }
    FilteredComplex::new(raw.field, weights, diffs)
}

#[derive(Serialize, Deserialize)]
struct RawChainMap {
    source: Value,
    target: Value,
    #[serde(default)]
    maps: BTreeMap<String, Value>,
}

pub fn chain_map_to_value(f: &ChainMap) -> Value {
    let mut support = f.source().support();
    support.extend(f.target().support());
    let maps: BTreeMap<String, Value> = support
        .into_iter()
        .filter(|&n| !f.map(n).is_zero())
        .map(|n| (n.to_string(), matrix_to_value(&f.map(n))))
        .collect();
    serde_json::to_value(RawChainMap {
        source: complex_to_value(f.source()),
        target: complex_to_value(f.target()),
        maps,
    })
    .expect("plain data serializes")
}

pub fn chain_map_from_value(v: &Value) -> Result<ChainMap, Error> {
    let raw: RawChainMap =
        serde_json::from_value(v.clone()).map_err(|e| Error::Json(e.to_string()))?;
    let source = complex_from_value(&raw.source)?;
    let target = complex_from_value(&raw.target)?;
    let field = source.field();
    let mut maps = BTreeMap::new();
    for (k, mv) in &raw.maps {
        let n: i64 = k
            .parse()
            .map_err(|_| Error::Json(format!("map key {k:?} is not a degree")))?;
        let m = matrix_from_value(field, mv)?;
        if m.rows() == 0 && m.cols() == 0 {
            continue;
        }
        maps.insert(n, m);
    }
    ChainMap::new(source, target, maps)
}

fn cell_key(i: i64, j: i64) -> String {
    format!("{i},{j}")
}

fn parse_cell_key(k: &str) -> Result<(i64, i64), Error> {
    let (i, j) = k
        .split_once(',')
        .ok_or_else(|| Error::Json(format!("cell key {k:?} is not of the form i,j")))?;
    let i = i
        .trim()
        .parse()
        .map_err(|_| Error::Json(format!("cell key {k:?} is not of the form i,j")))?;
    let j = j
        .trim()
        .parse()
        .map_err(|_| Error::Json(format!("cell key {k:?} is not of the form i,j")))?;
    Ok((i, j))
}

#[derive(Serialize, Deserialize)]
struct RawCell {
    i: i64,
    j: i64,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct RawBicomplex {
    field: Field,
    #[serde(default)]
    cells: Vec<RawCell>,
    #[serde(default)]
    d0: BTreeMap<String, Value>,
    #[serde(default)]
    d1: BTreeMap<String, Value>,
}

pub fn bicomplex_to_value(a: &Bicomplex) -> Value {
    let cells: Vec<RawCell> = a
        .cells()
        .into_iter()
        .map(|(i, j)| RawCell {
            i,
            j,
            dim: a.dim(i, j),
        })
        .collect();
    let mut d0 = BTreeMap::new();
    let mut d1 = BTreeMap::new();
    for (i, j) in a.cells() {
        if !a.d0(i, j).is_zero() {
            d0.insert(cell_key(i, j), matrix_to_value(&a.d0(i, j)));
        }
        if !a.d1(i, j).is_zero() {
            d1.insert(cell_key(i, j), matrix_to_value(&a.d1(i, j)));
        }
    }
    serde_json::to_value(RawBicomplex {
        field: a.field(),
        cells,
        d0,
        d1,
    })
    .expect("plain data serializes")
}

pub fn bicomplex_from_value(v: &Value) -> Result<Bicomplex, Error> {
    let raw: RawBicomplex =
        serde_json::from_value(v.clone()).map_err(|e| Error::Json(e.to_string()))?;
    let mut dims = BTreeMap::new();
    for c in &raw.cells {
        if dims.insert((c.i, c.j), c.dim).is_some() {
            return Err(Error::Json(format!("cell ({},{}) listed twice", c.i, c.j)));
        }
    }
    let read = |raw_d: &BTreeMap<String, Value>| -> Result<BTreeMap<(i64, i64), Matrix>, Error> {
        let mut out = BTreeMap::new();
        for (k, mv) in raw_d {
            let key = parse_cell_key(k)?;
            let m = matrix_from_value(raw.field, mv)?;
            if m.rows() == 0 && m.cols() == 0 {
                continue;
            }
            out.insert(key, m);
        }
        Ok(out)
    };
    Bicomplex::new(raw.field, dims, read(&raw.d0)?, read(&raw.d1)?)
}

#[derive(Serialize, Deserialize)]
struct RawBiMap {
    source: Value,
    target: Value,
    #[serde(default)]
    maps: BTreeMap<String, Value>,
}

pub fn bimap_to_value(f: &BiMap) -> Value {
    let mut cells = f.source().cells();
    cells.extend(f.target().cells());
    cells.sort_unstable();
    cells.dedup();
    let maps: BTreeMap<String, Value> = cells
        .into_iter()
        .filter(|&(i, j)| !f.map(i, j).is_zero())
        .map(|(i, j)| (cell_key(i, j), matrix_to_value(&f.map(i, j))))
        .collect();
    serde_json::to_value(RawBiMap {
        source: bicomplex_to_value(f.source()),
        target: bicomplex_to_value(f.target()),
        maps,
    })
    .expect("plain data serializes")
}

pub fn bimap_from_value(v: &Value) -> Result<BiMap, Error> {
    let raw: RawBiMap =
        serde_json::from_value(v.clone()).map_err(|e| Error::Json(e.to_string()))?;
    let source = bicomplex_from_value(&raw.source)?;
    let target = bicomplex_from_value(&raw.target)?;
    let field = source.field();
    let mut maps = BTreeMap::new();
    for (k, mv) in &raw.maps {
        let key = parse_cell_key(k)?;
        let m = matrix_from_value(field, mv)?;
        if m.rows() == 0 && m.cols() == 0 {
            continue;
        }
        maps.insert(key, m);
    }
    BiMap::new(source, target, maps)
}

/// Page report: per-bidegree dimensions and the nonzero page differentials.
pub fn page_to_value(field: Field, page: &PageTable) -> Value {
    let entries: Vec<Value> = page
        .entries
        .iter()
        .map(|(&(p, q), e)| {
            serde_json::json!({ "p": p, "q": q, "dim": e.dim })
        })
        .collect();
    let diffs: BTreeMap<String, Value> = page
        .diffs
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(&(p, q), m)| (cell_key(p, q), matrix_to_value(m)))
        .collect();
    let _ = field;
    serde_json::json!({ "r": page.r, "entries": entries, "differentials": diffs })
}

/// Page report for a bicomplex witness page, same shape as [`page_to_value`].
pub fn bipage_to_value(field: Field, page: &crate::bicomplex::BiPageTable) -> Value {
    let entries: Vec<Value> = page
        .entries
        .iter()
        .map(|(&(p, q), e)| serde_json::json!({ "p": p, "q": q, "dim": e.dim }))
        .collect();
    let diffs: BTreeMap<String, Value> = page
        .diffs
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(&(p, q), m)| (cell_key(p, q), matrix_to_value(m)))
        .collect();
    let _ = field;
    serde_json::json!({ "r": page.r, "entries": entries, "differentials": diffs })
}

/// Canonical rendering: object keys sorted, two-space indentation, newline
/// at the end. Equal values produce identical bytes.
pub fn to_canonical_string(v: &impl Serialize) -> String {
    let value = serde_json::to_value(v).expect("serializable value");
    let mut s = serde_json::to_string_pretty(&value).expect("value renders");
    s.push('\n');
    s
}

/// Parses a JSON document, reporting the byte offset on failure.
pub fn parse_document(text: &str) -> Result<Value, Error> {
    serde_json::from_str(text).map_err(|e| {
        let (line, col) = (e.line(), e.column());
        let offset: usize = text
            .split_inclusive('\n')
            .take(line.saturating_sub(1))
            .map(str::len)
            .sum::<usize>()
            + col.saturating_sub(1);
        Error::Json(format!("{e} (byte offset {offset})"))
    })
}

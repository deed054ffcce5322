//! JSON file formats.
//!
//! Complex numbers are two-element arrays `[re, im]`. A system file looks like
//!
//! ```json
//! {
//!   "ambient_dim": 2,
//!   "components": [
//!     {
//!       "weight": 1.0,
//!       "subspace_basis": [[[1.0, 0.0], [0.0, 0.0]]],
//!       "operator": { "rows": 1, "cols": 2, "entries": [[1.0, 0.0], [0.0, 0.0]] }
//!     }
//!   ]
//! }
//! ```
//!
//! `subspace_basis` lists spanning vectors, which need not be orthonormal;
//! they are orthonormalized on load. An empty list is the zero subspace.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, KeyPath, Result};
use crate::frame::{CoefficientFamily, GFusionSystem};
use crate::linalg::{c, ComplexMatrix, ComplexVector, Tolerance};
use crate::subspace::ClosedSubspace;

type Pair = [f64; 2];

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

#[derive(Serialize)]
struct MatrixRecord {
    rows: usize,
    cols: usize,
    entries: Vec<Pair>,
}

impl MatrixRecord {
    fn from_matrix(m: &ComplexMatrix) -> Self {
        let entries = m
            .row_iter()
            .flat_map(|row| row.iter().map(|&z| pair(z)).collect::<Vec<_>>())
            .collect();
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }
}

#[derive(Serialize)]
struct ComponentRecord {
    weight: f64,
    subspace_basis: Vec<Vec<Pair>>,
    operator: MatrixRecord,
}

#[derive(Serialize)]
struct SystemRecord {
    ambient_dim: usize,
    components: Vec<ComponentRecord>,
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("records always serialize");
    out.push('\n');
    out
}

pub fn system_to_json(sys: &GFusionSystem) -> String {
    let record = SystemRecord {
        ambient_dim: sys.ambient_dim(),
        components: sys
            .components()
            .iter()
            .map(|comp| ComponentRecord {
                weight: comp.weight(),
                subspace_basis: comp
                    .subspace()
                    .basis()
                    .column_iter()
                    .map(|col| col.iter().map(|&z| pair(z)).collect())
                    .collect(),
                operator: MatrixRecord::from_matrix(comp.operator()),
            })
            .collect(),
    };
    to_pretty_json(&record)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    to_pretty_json(&MatrixRecord::from_matrix(m))
}

pub fn vector_to_value(v: &ComplexVector) -> Value {
    serde_json::to_value(v.iter().map(|&z| pair(z)).collect::<Vec<_>>()).expect("finite pairs")
}

pub fn family_to_value(fam: &CoefficientFamily) -> Value {
    Value::Array(fam.blocks.iter().map(vector_to_value).collect())
}

pub fn save_system(sys: &GFusionSystem, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, system_to_json(sys))?;
    Ok(())
}

pub fn load_system(path: impl AsRef<Path>) -> Result<GFusionSystem> {
    parse_system(&fs::read_to_string(path)?, Tolerance::default())
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::parse(KeyPath::root(), format!("invalid JSON: {e}")))
}

pub fn parse_system(text: &str, tol: Tolerance) -> Result<GFusionSystem> {
    system_from_value(&parse_json(text)?, tol)
}

fn field<'a>(obj: &'a Value, key: &str, path: &KeyPath) -> Result<&'a Value> {
    let map = obj
        .as_object()
        .ok_or_else(|| Error::parse(path.clone(), "expected an object"))?;
    map.get(key)
        .ok_or_else(|| Error::parse(path.key(key), "missing key"))
}

fn as_array<'a>(v: &'a Value, path: &KeyPath) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::parse(path.clone(), "expected an array"))
}

fn as_count(v: &Value, path: &KeyPath) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(path.clone(), "expected a nonnegative integer"))
}

fn as_number(v: &Value, path: &KeyPath) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::parse(path.clone(), "expected a number"))
}

fn as_complex(v: &Value, path: &KeyPath) -> Result<Complex64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(c(
            as_number(re, &path.index(0))?,
            as_number(im, &path.index(1))?,
        )),
        _ => Err(Error::parse(path.clone(), "expected a [re, im] pair")),
    }
}

/// Parse an array of `[re, im]` pairs.
pub fn vector_from_value(v: &Value, path: &KeyPath) -> Result<ComplexVector> {
    let items = as_array(v, path)?;
    let entries = items
        .iter()
        .enumerate()
        .map(|(k, z)| as_complex(z, &path.index(k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexVector::from_vec(entries))
}

pub fn matrix_from_value(v: &Value, path: &KeyPath) -> Result<ComplexMatrix> {
    let rows = as_count(field(v, "rows", path)?, &path.key("rows"))?;
    let cols = as_count(field(v, "cols", path)?, &path.key("cols"))?;
    let entries_path = path.key("entries");
    let entries = vector_from_value(field(v, "entries", path)?, &entries_path)?;
    if rows == 0 || cols == 0 {
        return Err(Error::parse(path.clone(), "rows and cols must be positive"));
    }
    if entries.len() != rows * cols {
        return Err(Error::parse(
            entries_path,
            format!("{} entries for a {rows}x{cols} matrix", entries.len()),
        ));
    }
    Ok(ComplexMatrix::from_row_slice(
        rows,
        cols,
        entries.as_slice(),
    ))
}

fn system_from_value(root: &Value, tol: Tolerance) -> Result<GFusionSystem> {
    let path = KeyPath::root();
    let n = as_count(field(root, "ambient_dim", &path)?, &path.key("ambient_dim"))?;
    if n == 0 {
        return Err(Error::parse(path.key("ambient_dim"), "must be positive"));
    }
    let comps_path = path.key("components");
    let comps = as_array(field(root, "components", &path)?, &comps_path)?;
    if comps.is_empty() {
        return Err(Error::parse(
            comps_path,
            "at least one component is required",
        ));
    }

    let mut parts = Vec::with_capacity(comps.len());
    for (i, comp) in comps.iter().enumerate() {
        let cp = comps_path.index(i);
        let weight = as_number(field(comp, "weight", &cp)?, &cp.key("weight"))?;
        if weight <= 0.0 {
            return Err(Error::NonPositiveWeight { index: i, weight });
        }

        let bp = cp.key("subspace_basis");
        let vectors = as_array(field(comp, "subspace_basis", &cp)?, &bp)?;
        let mut columns = Vec::with_capacity(vectors.len());
        for (k, vec) in vectors.iter().enumerate() {
            let col = vector_from_value(vec, &bp.index(k))?;
            if col.len() != n {
                return Err(Error::dims(format!(
                    "component {i}: basis vector {k} has length {}, ambient_dim is {n}",
                    col.len()
                )));
            }
            columns.push(col);
        }
        let spanning = if columns.is_empty() {
            ComplexMatrix::zeros(n, 0)
        } else {
            ComplexMatrix::from_columns(&columns)
        };
        let subspace = ClosedSubspace::span(&spanning, tol)?;

        let operator = matrix_from_value(field(comp, "operator", &cp)?, &cp.key("operator"))?;
        if operator.ncols() != n {
            return Err(Error::dims(format!(
                "component {i}: operator has {} columns, ambient_dim is {n}",
                operator.ncols()
            )));
        }
        parts.push((subspace, operator, weight));
    }
    GFusionSystem::from_parts(n, parts)
}

/// Read a vector file: either a bare array of pairs or `{"vector": [...]}`.
pub fn load_vector(path: impl AsRef<Path>) -> Result<ComplexVector> {
    let root = parse_json(&fs::read_to_string(path)?)?;
    let kp = KeyPath::root();
    match root.get("vector") {
        Some(v) => vector_from_value(v, &kp.key("vector")),
        None => vector_from_value(&root, &kp),
    }
}

/// Read coefficients for `sys`: `{"blocks": [[pairs], ...]}`, or one flat
/// array of pairs split according to the local dimensions.
pub fn load_family(path: impl AsRef<Path>, sys: &GFusionSystem) -> Result<CoefficientFamily> {
    let root = parse_json(&fs::read_to_string(path)?)?;
    let kp = KeyPath::root();
    let fam = if let Some(blocks) = root.get("blocks") {
        let bp = kp.key("blocks");
        let blocks = as_array(blocks, &bp)?
            .iter()
            .enumerate()
            .map(|(i, b)| vector_from_value(b, &bp.index(i)))
            .collect::<Result<Vec<_>>>()?;
        CoefficientFamily::new(blocks)
    } else {
        let flat = match root.get("vector") {
            Some(v) => vector_from_value(v, &kp.key("vector"))?,
            None => vector_from_value(&root, &kp)?,
        };
        let total: usize = sys.local_dims().iter().sum();
        if flat.len() != total {
            return Err(Error::dims(format!(
                "flat coefficient vector has length {}, system needs {total}",
                flat.len()
            )));
        }
        let mut offset = 0;
        let blocks = sys
            .local_dims()
            .into_iter()
            .map(|d| {
                let b = flat.rows(offset, d).into_owned();
                offset += d;
                b
            })
            .collect();
        CoefficientFamily::new(blocks)
    };
    fam.check_conforms(sys)?;
    Ok(fam)
}

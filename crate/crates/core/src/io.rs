//! File formats: matrix CSV (floats or `p/q` rationals) and the JSON layouts of vector
//! systems, graphs, cut decompositions, sidecars and proof bundles.
//!
//! JSON files use 1-based vertex indices; everything in memory is 0-based.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certificates::{ProofBundle, SchlafliCertificate};
use crate::error::{Error, Result};
use crate::frames::{Graph, VectorSystem};
use crate::numkit::{format_rational, parse_rational, DenseMatrix, RationalMatrix};
use crate::separability::CutDecomposition;

/// Matrix read from CSV: exact when every token is an integer or `p/q` rational.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixData {
    Exact(RationalMatrix),
    Float(DenseMatrix),
}

impl MatrixData {
    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Self::Exact(m) => m.to_dense(),
            Self::Float(m) => m.clone(),
        }
    }

    pub fn exact(&self) -> Option<&RationalMatrix> {
        match self {
            Self::Exact(m) => Some(m),
            Self::Float(_) => None,
        }
    }
}

/// Serialization format of [`export_matrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// CSV text of a float matrix; each entry is the shortest decimal that round-trips.
pub fn dense_to_csv(m: &DenseMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format!("{:?}", m[(i, j)])).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// CSV text of a rational matrix with `p/q` tokens.
pub fn rational_to_csv(m: &RationalMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_rational(&m[(i, j)])).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Parse matrix CSV. Blank lines are ignored; all rows must have the same length, and at least
/// one row is required.
pub fn parse_matrix_csv(text: &str) -> Result<MatrixData> {
    let rows: Vec<Vec<&str>> =
        text.lines().map(str::trim).filter(|l| !l.is_empty()).map(|l| l.split(',').map(str::trim).collect()).collect();
    let Some(cols) = rows.first().map(Vec::len) else {
        return Err(Error::Parse("no matrix rows".into()));
    };
    if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(Error::Parse(format!("row {} has {} entries, expected {cols}", k + 1, r.len())));
    }
    // Tokens written by `dense_to_csv` always carry a decimal point or exponent.
    let looks_float = |t: &str| t.contains(['.', 'e', 'E']) || t.chars().any(|c| c.is_ascii_alphabetic());
    if rows.iter().flatten().any(|t| looks_float(t)) {
        let mut m = DenseMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, t) in r.iter().enumerate() {
                m[(i, j)] = t.parse().map_err(|_| Error::Parse(format!("row {}, column {}: {t:?}", i + 1, j + 1)))?;
            }
        }
        return Ok(MatrixData::Float(m));
    }
    let mut values = Vec::with_capacity(rows.len() * cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, t) in r.iter().enumerate() {
            values.push(
                parse_rational(t).map_err(|e| Error::Parse(format!("row {}, column {}: {e}", i + 1, j + 1)))?,
            );
        }
    }
    Ok(MatrixData::Exact(RationalMatrix::from_fn(rows.len(), cols, |i, j| values[i * cols + j].clone())))
}

fn require_path(path: &Path) -> Result<()> {
    if path.as_os_str().is_empty() {
        return Err(Error::Invalid("empty output path".into()));
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    require_path(path)?;
    fs::write(path, text)?;
    Ok(())
}

/// Read a matrix CSV file.
pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<MatrixData> {
    let path = path.as_ref();
    require_path(path)?;
    parse_matrix_csv(&fs::read_to_string(path)?)
}

/// Write a float matrix as CSV or as a JSON array of rows.
pub fn export_matrix(m: &DenseMatrix, path: impl AsRef<Path>, format: Format) -> Result<()> {
    let text = match format {
        Format::Csv => dense_to_csv(m),
        Format::Json => {
            let rows: Vec<Vec<f64>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
    };
    write_text(path.as_ref(), &text)
}

/// Write a rational matrix as CSV or as a JSON array of `"p/q"` rows.
pub fn export_rational_matrix(m: &RationalMatrix, path: impl AsRef<Path>, format: Format) -> Result<()> {
    let text = match format {
        Format::Csv => rational_to_csv(m),
        Format::Json => {
            let rows: Vec<Vec<String>> =
                (0..m.rows()).map(|i| (0..m.cols()).map(|j| format_rational(&m[(i, j)])).collect()).collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
    };
    write_text(path.as_ref(), &text)
}

/// Read a matrix written by [`export_matrix`] or [`export_rational_matrix`]; the format is
/// chosen by the `.json` extension.
pub fn import_matrix(path: impl AsRef<Path>) -> Result<MatrixData> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "json") {
        let text = fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text)?;
        let rows = v.as_array().ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
        let csv: Vec<String> = rows
            .iter()
            .map(|r| {
                let r = r.as_array().ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
                r.iter()
                    .map(|t| match t {
                        Value::String(s) => Ok(s.clone()),
                        Value::Number(n) => n.as_f64().map(|x| format!("{x:?}")).ok_or_else(|| Error::Parse(format!("{n}"))),
                        other => Err(Error::Parse(format!("unexpected entry {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(|r| r.join(","))
            })
            .collect::<Result<_>>()?;
        parse_matrix_csv(&csv.join("\n"))
    } else {
        read_matrix_csv(path)
    }
}

#[derive(Serialize, Deserialize)]
struct VectorSystemJson {
    #[serde(rename = "N")]
    n: usize,
    r: usize,
    #[serde(rename = "V")]
    v: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gram_exact: Option<Vec<Vec<String>>>,
}

/// `{"N", "r", "V": r rows of N floats, "gram_exact": N rows of "p/q" (optional)}`.
pub fn vector_system_to_json(sys: &VectorSystem) -> Value {
    let v = sys.synthesis();
    let gram_exact = sys
        .exact_gram()
        .map(|g| (0..g.rows()).map(|i| (0..g.cols()).map(|j| format_rational(&g[(i, j)])).collect()).collect());
    let doc = VectorSystemJson { n: sys.n(), r: sys.r(), v: (0..v.rows()).map(|i| v.row(i).to_vec()).collect(), gram_exact };
    serde_json::to_value(doc).expect("plain data serializes")
}

pub fn vector_system_from_json(value: &Value) -> Result<VectorSystem> {
    let doc: VectorSystemJson = serde_json::from_value(value.clone())?;
    if doc.v.len() != doc.r || doc.v.iter().any(|row| row.len() != doc.n) {
        return Err(Error::Parse(format!("\"V\" must be {} rows of {} entries", doc.r, doc.n)));
    }
    let v = DenseMatrix::from_rows(&doc.v)?;
    match doc.gram_exact {
        None => Ok(VectorSystem::new(v)),
        Some(rows) => {
            let text: Vec<String> = rows.iter().map(|r| r.join(",")).collect();
            match parse_matrix_csv(&text.join("\n"))? {
                MatrixData::Exact(g) => VectorSystem::with_exact_gram(v, g),
                MatrixData::Float(_) => Err(Error::Parse("\"gram_exact\" entries must be rationals".into())),
            }
        }
    }
}

pub fn write_vector_system(sys: &VectorSystem, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &(serde_json::to_string_pretty(&vector_system_to_json(sys))? + "\n"))
}

pub fn read_vector_system(path: impl AsRef<Path>) -> Result<VectorSystem> {
    vector_system_from_json(&serde_json::from_str(&fs::read_to_string(path.as_ref())?)?)
}

/// `{"n", "edges": [[i, j], …]}` with 1-based `i < j`.
pub fn graph_to_json(g: &Graph) -> Value {
    let edges: Vec<[usize; 2]> = g.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect();
    json!({ "n": g.n, "edges": edges })
}

pub fn graph_from_json(value: &Value) -> Result<Graph> {
    #[derive(Deserialize)]
    struct GraphJson {
        n: usize,
        edges: Vec<[usize; 2]>,
    }
    let doc: GraphJson = serde_json::from_value(value.clone())?;
    if doc.edges.iter().flatten().any(|&k| k == 0) {
        return Err(Error::Parse("graph vertices are 1-based".into()));
    }
    Graph::new(doc.n, doc.edges.iter().map(|e| (e[0] - 1, e[1] - 1)))
}

/// `{"weights": […], "signs": [[±1, …], …]}`.
pub fn cut_decomposition_to_json(dec: &CutDecomposition) -> Value {
    serde_json::to_value(dec).expect("plain data serializes")
}

pub fn cut_decomposition_from_json(value: &Value) -> Result<CutDecomposition> {
    let raw: CutDecomposition = serde_json::from_value(value.clone())?;
    CutDecomposition::new(raw.weights, raw.signs)
}

/// Sidecar of a pair-indexed degree-4 matrix CSV.
pub fn moments_sidecar(n: usize) -> Value {
    json!({ "N": n, "indexing": "pair-major" })
}

/// Sidecar of a block-witness CSV.
pub fn witness_sidecar(n: usize, r: usize) -> Value {
    json!({ "N": n, "r": r })
}

/// Read `"r"` from a witness sidecar.
pub fn witness_block_size(value: &Value) -> Result<usize> {
    value
        .get("r")
        .and_then(Value::as_u64)
        .map(|r| r as usize)
        .ok_or_else(|| Error::Parse("witness sidecar lacks \"r\"".into()))
}

/// Certificate metadata `{constants, graph_hash, n}`.
pub fn certificate_metadata(cert: &SchlafliCertificate) -> Value {
    let c = &cert.constants;
    json!({
        "n": cert.graph.n,
        "constants": {
            "gamma1": format_rational(&c.gamma1),
            "gamma2": format_rational(&c.gamma2),
            "kappa1": format_rational(&c.kappa1),
            "kappa2": format_rational(&c.kappa2),
        },
        "graph_hash": cert.graph_hash(),
    })
}

/// Write a JSON value with a trailing newline.
pub fn write_json(value: &Value, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &(serde_json::to_string_pretty(value)? + "\n"))
}

pub fn read_json(path: impl AsRef<Path>) -> Result<Value> {
    Ok(serde_json::from_str(&fs::read_to_string(path.as_ref())?)?)
}

/// Proof bundle JSON (see [`ProofBundle::to_json`]).
pub fn write_proof_bundle(bundle: &ProofBundle, path: impl AsRef<Path>) -> Result<()> {
    write_json(&bundle.to_json(), path)
}

/// Path with its extension replaced by `.json` (sidecar location of a CSV).
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    path.with_extension("json")
}

//! The Schläfli-graph inequality certificate and inequality evaluation.
//!
//! For the sign pattern `sgn(Z_ij)` of the 28-vector ETF in `R⁷` (after sign canonicalization,
//! `Z_ij > 0` exactly for adjacent vertices of the Schläfli graph plus a dominating vertex),
//! every `X ∈ E₄^{28}` satisfies `Σ_{i<j} sgn(Z_ij) X_ij ≤ 112`. The certificate is an exact
//! rational PSD matrix `A ∈ R^{784×784}` with `⟨A, Y⟩ = 112 − Σ_{i<j} sgn(Z_ij) X_ij` for every
//! degree-4 pseudomoment matrix `Y` extending `X`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::frames::{canonicalize_signs, etf_28_7, sign_graph, Graph};
use crate::numkit::{
    exact_psd_ldl_with_progress, format_rational, int, ratio, to_f64, DenseMatrix, LdlOutcome, PsdProof, Rational,
    RationalMatrix,
};
use crate::pseudomoments::{collapse_functional, OddSetFunctional};

/// Number of vectors (graph vertices) of the certificate.
pub const SCHLAFLI_N: usize = 28;

/// Right-hand side of the Schläfli inequality.
pub const SCHLAFLI_BOUND: i64 = 112;

/// Anchor vector used for the canonical sign pattern (0-based).
pub const SCHLAFLI_ANCHOR: usize = 27;

/// The four constants of the case table.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateConstants {
    pub gamma1: Rational,
    pub gamma2: Rational,
    pub kappa1: Rational,
    pub kappa2: Rational,
}

impl Default for CertificateConstants {
    fn default() -> Self {
        Self { gamma1: ratio(1, 126), gamma2: ratio(1, 36), kappa1: ratio(2, 9), kappa2: ratio(1, 28) }
    }
}

/// Exact certificate matrix with the graph and constants it was built from.
#[derive(Clone, Debug)]
pub struct SchlafliCertificate {
    pub a: RationalMatrix,
    pub graph: Graph,
    pub constants: CertificateConstants,
}

impl SchlafliCertificate {
    /// `sgn(Z_ij)`: `+1` for adjacent vertices, `−1` otherwise (`0` on the diagonal).
    pub fn signs(&self) -> Vec<Vec<i8>> {
        sign_matrix(&self.graph)
    }

    /// FNV-1a hash of the (0-based) edge list, identifying the labeling.
    pub fn graph_hash(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        feed(self.graph.n as u64);
        for &(i, j) in &self.graph.edges {
            feed(i as u64);
            feed(j as u64);
        }
        format!("{h:016x}")
    }
}

/// `sgn(Z)` from a graph: `+1` on edges, `−1` on non-edges, `0` on the diagonal.
pub fn sign_matrix(graph: &Graph) -> Vec<Vec<i8>> {
    let adj = graph.adjacency();
    (0..graph.n)
        .map(|i| (0..graph.n).map(|j| if i == j { 0 } else if adj[i][j] { 1 } else { -1 }).collect())
        .collect()
}

/// The 28-vertex graph of the sign-canonical 28-vector ETF: the Schläfli graph on vertices
/// `0..27` plus vertex 27 adjacent to all of them.
pub fn schlafli_graph_28() -> Result<Graph> {
    let sys = canonicalize_signs(&etf_28_7(), SCHLAFLI_ANCHOR, 1e-10)?;
    sign_graph(&sys, 1e-10)
}

struct Table<'a> {
    adj: &'a [Vec<bool>],
    c: &'a CertificateConstants,
}

impl Table<'_> {
    fn sg(&self, a: usize, b: usize) -> Rational {
        if self.adj[a][b] { Rational::one() } else { -Rational::one() }
    }

    /// Case table at `(ij)(kℓ)`; `None` where no row applies (the value then comes from
    /// another member of the symmetry class). Rows are tried in order.
    fn value(&self, i: usize, j: usize, k: usize, l: usize) -> Option<Rational> {
        let distinct = {
            let mut s = [i, j, k, l];
            s.sort_unstable();
            s.windows(2).filter(|w| w[0] != w[1]).count() + 1
        };
        if distinct == 4 {
            return Some(Rational::zero());
        }
        if i == j && k != l {
            return Some(-self.sg(k, l) * &self.c.gamma1);
        }
        if i == k && j != l {
            if i == j || i == l {
                return None;
            }
            let e = [(i, j), (i, l), (j, l)].iter().filter(|&&(a, b)| self.adj[a][b]).count();
            return match e {
                0 => Some(self.c.gamma2.clone()),
                2 if self.adj[i][j] && self.adj[i][l] => Some(self.c.gamma2.clone()),
                2 => Some(-self.c.gamma2.clone()),
                _ => Some(Rational::zero()),
            };
        }
        if i == j && j == k && i != l {
            return Some(-self.sg(i, l) * &self.c.gamma1);
        }
        if i == k && j == l && i != j {
            return Some(self.c.kappa1.clone());
        }
        if i == j && k == l {
            return Some(self.c.kappa2.clone());
        }
        None
    }
}

/// Assemble the certificate from the 28-vertex graph.
///
/// Each class of index tuples under the dihedral symmetries `(ij)(kℓ) ↦ (kℓ)(ij)`,
/// `(ij) ↦ (ji)`, `(kℓ) ↦ (ℓk)` receives the case-table value of its members (all members
/// that the table covers must agree, else [`Error::CertificateConflict`]). The value is
/// written at the positions with `i ≤ j` and `k ≤ ℓ`; rows and columns of pairs with `i > j`
/// are zero.
pub fn build_schlafli_certificate(graph: &Graph) -> Result<SchlafliCertificate> {
    build_with_constants(graph, CertificateConstants::default())
}

/// [`build_schlafli_certificate`] with explicit constants.
pub fn build_with_constants(graph: &Graph, constants: CertificateConstants) -> Result<SchlafliCertificate> {
    let n = graph.n;
    if n != SCHLAFLI_N {
        return Err(Error::Invalid(format!("certificate graph must have {SCHLAFLI_N} vertices, got {n}")));
    }
    let adj = graph.adjacency();
    let table = Table { adj: &adj, c: &constants };
    let mut a = RationalMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                for l in k..n {
                    if (k, l) < (i, j) {
                        continue;
                    }
                    let orbit = [
                        (i, j, k, l),
                        (j, i, k, l),
                        (i, j, l, k),
                        (j, i, l, k),
                        (k, l, i, j),
                        (l, k, i, j),
                        (k, l, j, i),
                        (l, k, j, i),
                    ];
                    let mut value: Option<Rational> = None;
                    for &(p, q, s, t) in &orbit {
                        if let Some(v) = table.value(p, q, s, t) {
                            match &value {
                                Some(prev) if *prev != v => {
                                    return Err(Error::CertificateConflict(format!(
                                        "class of ({},{})({},{}) receives both {} and {}",
                                        i + 1,
                                        j + 1,
                                        k + 1,
                                        l + 1,
                                        format_rational(prev),
                                        format_rational(&v)
                                    )));
                                }
                                Some(_) => {}
                                None => value = Some(v),
                            }
                        }
                    }
                    let v = value.unwrap_or_else(Rational::zero);
                    if v.is_zero() {
                        continue;
                    }
                    let (row, col) = (i * n + j, k * n + l);
                    a[(row, col)] = v.clone();
                    a[(col, row)] = v;
                }
            }
        }
    }
    Ok(SchlafliCertificate { a, graph: graph.clone(), constants })
}

/// Outcome of [`verify_schlafli_certificate`].
#[derive(Clone, Debug)]
pub struct ProofBundle {
    pub proof: PsdProof,
    pub collapse: OddSetFunctional,
    pub constant: Rational,
    pub graph_hash: String,
}

impl ProofBundle {
    /// JSON form `{psd, rank, d_min, constant, graph_hash, collapse}`; odd sets are written
    /// 1-based as `"{i,j}"` (and `"∅"`). Deterministic for identical inputs.
    pub fn to_json(&self) -> serde_json::Value {
        let collapse: serde_json::Map<String, serde_json::Value> = self
            .collapse
            .coefficients
            .iter()
            .map(|(k, v)| {
                let key = if k.is_empty() {
                    "∅".to_string()
                } else {
                    format!("{{{}}}", k.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(","))
                };
                (key, serde_json::Value::String(format_rational(v)))
            })
            .collect();
        serde_json::json!({
            "psd": true,
            "rank": self.proof.rank(),
            "d_min": self.proof.d_min_positive().map(|d| format_rational(&d)),
            "constant": format_rational(&self.constant),
            "graph_hash": self.graph_hash,
            "collapse": collapse,
        })
    }
}

/// Check the collapsed functional against `{∅: 112, {i,j}: −sgn(Z_ij), 4-sets: 0}`.
pub fn check_collapse(cert: &SchlafliCertificate, f: &OddSetFunctional) -> Result<()> {
    let signs = cert.signs();
    let n = cert.graph.n;
    let mut expected: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    expected.insert(Vec::new(), int(SCHLAFLI_BOUND));
    for i in 0..n {
        for j in i + 1..n {
            expected.insert(vec![i, j], int(-i64::from(signs[i][j])));
        }
    }
    for (key, want) in &expected {
        let got = f.coefficient(key);
        if &got != want {
            return Err(Error::CertificateInvalid(format!(
                "odd-set class {key:?} has coefficient {} instead of {}",
                format_rational(&got),
                format_rational(want)
            )));
        }
    }
    if let Some((key, v)) = f.coefficients.iter().find(|(k, _)| !expected.contains_key(*k)) {
        return Err(Error::CertificateInvalid(format!("odd-set class {key:?} has nonzero coefficient {}", format_rational(v))));
    }
    Ok(())
}

/// Exact verification: `A ⪰ 0` by exact LDLᵀ and the collapsed identity.
/// `progress(done, total)` is called every 50 pivots.
pub fn verify_schlafli_certificate(
    cert: &SchlafliCertificate,
    progress: impl FnMut(usize, usize),
) -> Result<ProofBundle> {
    cert.a.require_symmetric()?;
    let collapse = collapse_functional(&cert.a)?;
    check_collapse(cert, &collapse)?;
    let proof = match exact_psd_ldl_with_progress(&cert.a, progress)? {
        LdlOutcome::Psd(p) => p,
        LdlOutcome::NotPsd(w) => {
            return Err(Error::CertificateInvalid(format!(
                "A is not PSD: wᵀAw = {} for w with {} nonzero entries",
                format_rational(&w.value),
                w.w.iter().filter(|x| !x.is_zero()).count()
            )));
        }
    };
    Ok(ProofBundle {
        proof,
        constant: collapse.coefficient(&[]),
        collapse,
        graph_hash: cert.graph_hash(),
    })
}

/// Value of an inequality `lhs ≤ rhs` at a candidate.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct InequalityReport {
    pub lhs: f64,
    /// Exact left-hand side (`"p/q"`), when the candidate is exact.
    pub lhs_exact: Option<String>,
    pub rhs: f64,
    pub satisfied: bool,
    /// `rhs − lhs`.
    pub margin: f64,
}

fn check_embedding(pi: &[usize], n: usize) -> Result<()> {
    if pi.len() != SCHLAFLI_N {
        return Err(Error::Invalid(format!("π must map {SCHLAFLI_N} indices, got {}", pi.len())));
    }
    let mut seen = vec![false; n];
    for &p in pi {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Invalid("π must be injective into [N]".into()));
        }
    }
    Ok(())
}

/// `Σ_{i<j} sgn(Z_ij) X_{π(i)π(j)} ≤ 112` in floating point.
pub fn evaluate_schlafli(x: &DenseMatrix, pi: &[usize], signs: &[Vec<i8>], tol: f64) -> Result<InequalityReport> {
    check_embedding(pi, x.rows())?;
    let mut lhs = 0.0;
    for i in 0..SCHLAFLI_N {
        for j in i + 1..SCHLAFLI_N {
            lhs += f64::from(signs[i][j]) * x[(pi[i], pi[j])];
        }
    }
    let rhs = SCHLAFLI_BOUND as f64;
    Ok(InequalityReport { lhs, lhs_exact: None, rhs, satisfied: lhs <= rhs + tol, margin: rhs - lhs })
}

/// `Σ_{i<j} sgn(Z_ij) X_{π(i)π(j)} ≤ 112` exactly.
pub fn evaluate_schlafli_exact(x: &RationalMatrix, pi: &[usize], signs: &[Vec<i8>]) -> Result<InequalityReport> {
    check_embedding(pi, x.rows())?;
    let mut lhs = Rational::zero();
    for i in 0..SCHLAFLI_N {
        for j in i + 1..SCHLAFLI_N {
            let term = &x[(pi[i], pi[j])];
            if signs[i][j] > 0 {
                lhs += term;
            } else {
                lhs -= term;
            }
        }
    }
    let rhs = int(SCHLAFLI_BOUND);
    let margin = &rhs - &lhs;
    Ok(InequalityReport {
        lhs: to_f64(&lhs),
        lhs_exact: Some(format_rational(&lhs)),
        rhs: SCHLAFLI_BOUND as f64,
        satisfied: !margin.is_negative(),
        margin: to_f64(&margin),
    })
}

/// Worst triangle inequality `−s_is_jX_ij − s_js_kX_jk − s_is_kX_ik ≤ 1`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TriangleReport {
    pub all_satisfied: bool,
    /// `(i, j, k, s)` attaining the worst value (0-based, `i < j < k`).
    pub worst: (usize, usize, usize, [i8; 3]),
    pub worst_value: f64,
    /// Exact worst value (`"p/q"`), when the candidate is exact.
    pub worst_exact: Option<String>,
}

const SIGN_CLASSES: [[i8; 3]; 4] = [[1, 1, 1], [1, 1, -1], [1, -1, 1], [-1, 1, 1]];

/// All triangle inequalities (every triple, all four sign classes) in floating point.
pub fn evaluate_triangles(x: &DenseMatrix, tol: f64) -> Result<TriangleReport> {
    x.require_symmetric()?;
    let n = x.rows();
    let mut best = (f64::NEG_INFINITY, (0, 0, 0, SIGN_CLASSES[0]));
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for s in SIGN_CLASSES {
                    let (a, b, c) = (f64::from(s[0]), f64::from(s[1]), f64::from(s[2]));
                    let v = -a * b * x[(i, j)] - b * c * x[(j, k)] - a * c * x[(i, k)];
                    if v > best.0 {
                        best = (v, (i, j, k, s));
                    }
                }
            }
        }
    }
    if n < 3 {
        best.0 = f64::NEG_INFINITY;
    }
    Ok(TriangleReport { all_satisfied: best.0 <= 1.0 + tol, worst: best.1, worst_value: best.0, worst_exact: None })
}

/// All triangle inequalities exactly.
pub fn evaluate_triangles_exact(x: &RationalMatrix) -> Result<TriangleReport> {
    x.require_symmetric()?;
    let n = x.rows();
    let mut best: Option<(Rational, (usize, usize, usize, [i8; 3]))> = None;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for s in SIGN_CLASSES {
                    let (a, b, c) = (int(i64::from(s[0])), int(i64::from(s[1])), int(i64::from(s[2])));
                    let v = -(&a * &b * &x[(i, j)]) - &b * &c * &x[(j, k)] - &a * &c * &x[(i, k)];
                    if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                        best = Some((v, (i, j, k, s)));
                    }
                }
            }
        }
    }
    let (v, worst) = best.ok_or_else(|| Error::Dimension("need at least three indices".into()))?;
    Ok(TriangleReport {
        all_satisfied: v <= Rational::one(),
        worst,
        worst_value: to_f64(&v),
        worst_exact: Some(format_rational(&v)),
    })
}

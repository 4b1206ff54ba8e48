//! Degree-4 and general truncated/complete pseudomoment matrices over `{±1}^N`.
//!
//! A degree-4 matrix `Y` is indexed by ordered pairs; pair `(i, j)` (0-based) sits at row
//! `i·N + j`. Entries of a valid `Y` depend only on the *odd set* of the index tuple, the set
//! of indices occurring an odd number of times.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::frames::{analyze_frame, VectorSystem};
use crate::numkit::{
    exact_psd_ldl, int, ratio, symmetric_eigh, to_f64, DenseMatrix, LdlOutcome, Rational, RationalMatrix,
};

/// Largest exact matrix dimension for which PSD-ness is decided by exact LDL during validation.
const EXACT_PSD_LIMIT: usize = 1024;

/// Largest string-indexed matrix that [`laurent_moments`] materializes.
pub const MATERIALIZE_LIMIT: usize = 2000;

/// Sorted indices that occur an odd number of times in `idx`.
pub fn odd_set(idx: &[usize]) -> Vec<usize> {
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut k = 0;
    while k < sorted.len() {
        let mut m = k;
        while m < sorted.len() && sorted[m] == sorted[k] {
            m += 1;
        }
        if (m - k) % 2 == 1 {
            out.push(sorted[k]);
        }
        k = m;
    }
    out
}

fn perfect_square_root(dim: usize) -> Option<usize> {
    let n = (dim as f64).sqrt().round() as usize;
    (n * n == dim).then_some(n)
}

/// Degree-4 pseudomoment candidate `Y ∈ R^{N²×N²}`, optionally exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Degree4Moments {
    n: usize,
    y: DenseMatrix,
    exact: Option<RationalMatrix>,
}

impl Degree4Moments {
    /// Wrap a floating matrix; its dimension must be a perfect square `N²`.
    pub fn new(y: DenseMatrix) -> Result<Self> {
        if !y.is_square() {
            return Err(Error::Dimension("pseudomoment matrix must be square".into()));
        }
        let n = perfect_square_root(y.rows())
            .ok_or_else(|| Error::Dimension(format!("dimension {} is not a perfect square", y.rows())))?;
        Ok(Self { n, y, exact: None })
    }

    /// Wrap an exact matrix (a floating copy is kept alongside).
    pub fn from_exact(y: RationalMatrix) -> Result<Self> {
        let mut m = Self::new(y.to_dense())?;
        m.exact = Some(y);
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Floating matrix.
    pub fn matrix(&self) -> &DenseMatrix {
        &self.y
    }

    /// Exact matrix, if known.
    pub fn exact(&self) -> Option<&RationalMatrix> {
        self.exact.as_ref()
    }

    /// Row/column of the pair `(i, j)`.
    pub fn pair(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    /// `Y_(ij)(kl)`.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.y[(self.pair(i, j), self.pair(k, l))]
    }

    /// Exact `Y_(ij)(kl)`, if known.
    pub fn exact_entry(&self, i: usize, j: usize, k: usize, l: usize) -> Option<&Rational> {
        let (a, b) = (self.pair(i, j), self.pair(k, l));
        self.exact.as_ref().map(|e| &e[(a, b)])
    }
}

/// Outcome of one validity condition.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Largest violation magnitude (0 when exactly satisfied).
    pub violation: f64,
}

/// Per-condition validation report for a degree-4 candidate.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ValidationReport {
    pub conditions: Vec<ConditionCheck>,
    pub min_eigenvalue: f64,
    pub worst_violation: f64,
    pub passed: bool,
    /// Degree-2 part `X_ij = Y_(1i)(1j)` (equal to `Y_(ij)(kk)` for every `k` on valid input).
    #[serde(skip)]
    pub extracted_x: DenseMatrix,
}

impl ValidationReport {
    /// Check by name (`"psd"`, `"diagonal-pairs"`, `"unit-diagonal"`, `"permutation-invariance"`).
    pub fn condition(&self, name: &str) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// `|a − b|` between two entries, exact when possible.
fn entry_gap(y: &Degree4Moments, a: (usize, usize), b: (usize, usize)) -> f64 {
    match &y.exact {
        Some(e) => to_f64(&(&e[a] - &e[b]).abs()),
        None => (y.y[a] - y.y[b]).abs(),
    }
}

fn psd_check(matrix: &DenseMatrix, exact: Option<&RationalMatrix>, tol: f64) -> Result<(ConditionCheck, f64)> {
    let e = symmetric_eigh(&matrix.symmetrized(), 1e-12)?;
    let min = e.min();
    let (passed, violation) = match exact {
        Some(x) if x.rows() <= EXACT_PSD_LIMIT && x.is_symmetric() => match exact_psd_ldl(x)? {
            LdlOutcome::Psd(_) => (true, 0.0),
            LdlOutcome::NotPsd(_) => (false, (-min).max(f64::MIN_POSITIVE)),
        },
        _ => (min >= -tol * e.max().max(1.0), (-min).max(0.0)),
    };
    Ok((ConditionCheck { name: "psd", passed, violation }, min))
}

/// Check the four conditions characterizing degree-4 pseudomoment matrices:
/// (1) `Y ⪰ 0`; (2) `Y_(ij)(kk)` independent of `k`; (3) `Y_(ii)(ii) = 1`;
/// (4) invariance of `Y_(ij)(kl)` under permutations of `(i, j, k, l)`, tested on the generating
/// transpositions `(ij)`, `(jk)`, `(kl)`.
///
/// For exact input conditions 2–4 are evaluated exactly and condition 1 by exact LDLᵀ.
pub fn validate_degree4(y: &Degree4Moments, tol: f64) -> Result<ValidationReport> {
    let n = y.n;
    let p = |i: usize, j: usize| i * n + j;
    let (psd, min_eigenvalue) = psd_check(&y.y, y.exact.as_ref(), tol)?;

    let mut diag_pairs: f64 = 0.0;
    let mut unit: f64 = 0.0;
    let mut perm: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 1..n {
                diag_pairs = diag_pairs.max(entry_gap(y, (p(i, j), p(k, k)), (p(i, j), p(0, 0))));
            }
        }
        let d = (p(i, i), p(i, i));
        let one_gap = match &y.exact {
            Some(e) => to_f64(&(&e[d] - Rational::one()).abs()),
            None => (y.y[d] - 1.0).abs(),
        };
        unit = unit.max(one_gap);
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let here = (p(i, j), p(k, l));
                    perm = perm
                        .max(entry_gap(y, here, (p(j, i), p(k, l))))
                        .max(entry_gap(y, here, (p(i, k), p(j, l))))
                        .max(entry_gap(y, here, (p(i, j), p(l, k))));
                }
            }
        }
    }
    let exact = y.exact.is_some();
    let ok = |v: f64| if exact { v == 0.0 } else { v <= tol };
    let conditions = vec![
        psd,
        ConditionCheck { name: "diagonal-pairs", passed: ok(diag_pairs), violation: diag_pairs },
        ConditionCheck { name: "unit-diagonal", passed: ok(unit), violation: unit },
        ConditionCheck { name: "permutation-invariance", passed: ok(perm), violation: perm },
    ];
    let worst_violation = conditions.iter().map(|c| c.violation).fold(0.0, f64::max);
    let passed = conditions.iter().all(|c| c.passed);
    let extracted_x = DenseMatrix::from_fn(n, n, |i, j| y.entry(0, i, 0, j));
    Ok(ValidationReport { conditions, min_eigenvalue, worst_violation, passed, extracted_x })
}

/// Degree-2 part `X_ij = Y_(1i)(1j)` of a candidate satisfying conditions 2–4 within `tol`.
pub fn extract_degree2(y: &Degree4Moments, tol: f64) -> Result<DenseMatrix> {
    let report = validate_degree4(y, tol)?;
    if let Some(c) = report.conditions.iter().skip(1).find(|c| !c.passed) {
        return Err(Error::Invalid(format!("condition {} violated by {:e}", c.name, c.violation)));
    }
    Ok(report.extracted_x)
}

/// Exact degree-2 part, when `Y` is exact.
pub fn extract_degree2_exact(y: &Degree4Moments) -> Option<RationalMatrix> {
    let e = y.exact.as_ref()?;
    let n = y.n;
    Some(RationalMatrix::from_fn(n, n, |i, j| e[(i, j)].clone()))
}

/// Moments `(x⊗x)(x⊗x)ᵀ` of the point mass at `x ∈ {±1}^N`.
pub fn point_mass_moments(x: &[i8]) -> Degree4Moments {
    let n = x.len();
    let xx: Vec<i64> = (0..n * n).map(|a| i64::from(x[a / n]) * i64::from(x[a % n])).collect();
    Degree4Moments::from_exact(RationalMatrix::from_fn(n * n, n * n, |a, b| int(xx[a] * xx[b]))).expect("square")
}

/// Moments of the uniform distribution on `{±1}^N`: entry 1 when every index occurs an even
/// number of times, 0 otherwise. Extends `X = I_N`.
pub fn parity_moments(n: usize) -> Degree4Moments {
    let m = RationalMatrix::from_fn(n * n, n * n, |a, b| {
        if odd_set(&[a / n, a % n, b / n, b % n]).is_empty() {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    Degree4Moments::from_exact(m).expect("square")
}

/// Degree-4 extension of an ETF Gram matrix `X`:
///
/// `Y_(ij)(kl) = c₁ (X_ij X_kl + X_ik X_jl + X_il X_jk) − c₂ Σ_m X_im X_jm X_km X_lm`,
/// `c₁ = (r(r−1)/2)/(r(r+1)/2 − N)`, `c₂ = r²(1 − 1/N)/(r(r+1)/2 − N)`;
/// for `r = 1` the point-mass moments `(x⊗x)(x⊗x)ᵀ`. Exact when the Gram matrix is exact.
pub fn etf_degree4(sys: &VectorSystem, tol: f64) -> Result<Degree4Moments> {
    let (n, r) = (sys.n(), sys.r());
    if !analyze_frame(sys, tol)?.is_etf {
        return Err(Error::Invalid("system is not an equiangular tight frame".into()));
    }
    let bound = r * (r + 1) / 2;
    if r > 1 && n >= bound {
        return Err(Error::MaximalEtf { n, r, bound });
    }
    if let Some(x) = sys.exact_gram() {
        let y = if r == 1 {
            RationalMatrix::from_fn(n * n, n * n, |a, b| &x[(a / n, a % n)] * &x[(b / n, b % n)])
        } else {
            let denom = int((bound - n) as i64);
            let c1 = int((r * (r - 1) / 2) as i64) / &denom;
            let c2 = int((r * r) as i64) * (int(1) - ratio(1, n as i64)) / &denom;
            etf_entries(n, |i, j| x[(i, j)].clone(), c1, c2)
        };
        return Degree4Moments::from_exact(y);
    }
    let x = sys.gram();
    let y = if r == 1 {
        DenseMatrix::from_fn(n * n, n * n, |a, b| x[(a / n, a % n)] * x[(b / n, b % n)])
    } else {
        let denom = (bound - n) as f64;
        let c1 = (r * (r - 1) / 2) as f64 / denom;
        let c2 = (r * r) as f64 * (1.0 - 1.0 / n as f64) / denom;
        let mut y = DenseMatrix::zeros(n * n, n * n);
        for a in 0..n * n {
            for b in 0..n * n {
                let (i, j, k, l) = (a / n, a % n, b / n, b % n);
                let quartic: f64 = (0..n).map(|m| x[(i, m)] * x[(j, m)] * x[(k, m)] * x[(l, m)]).sum();
                y[(a, b)] = c1 * (x[(i, j)] * x[(k, l)] + x[(i, k)] * x[(j, l)] + x[(i, l)] * x[(j, k)]) - c2 * quartic;
            }
        }
        y
    };
    Degree4Moments::new(y)
}

fn etf_entries(n: usize, x: impl Fn(usize, usize) -> Rational, c1: Rational, c2: Rational) -> RationalMatrix {
    let xs: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| x(i, j)).collect()).collect();
    RationalMatrix::from_fn(n * n, n * n, |a, b| {
        let (i, j, k, l) = (a / n, a % n, b / n, b % n);
        let pairs = &xs[i][j] * &xs[k][l] + &xs[i][k] * &xs[j][l] + &xs[i][l] * &xs[j][k];
        let quartic = (0..n).fold(Rational::zero(), |acc, m| acc + &xs[i][m] * &xs[j][m] * &xs[k][m] * &xs[l][m]);
        &c1 * pairs - &c2 * quartic
    })
}

/// Degree-4 ETF extension in projector form,
/// `Y = vec(X)vec(X)ᵀ + (N²(1 − 1/r)/(r(r+1)/2 − N)) · P`, where `P` is the orthogonal
/// projector onto `vec(pert(X)) = {vec(VᵀSV) : S symmetric, v_iᵀ S v_i = 0}`.
///
/// `P` is obtained from the `V′_sym` projector: for a UNTF, `S V ↦ VᵀS V` scales lengths by
/// `√(N/r)`, so `P = (r/N)(I ⊗ Vᵀ) P_{V′sym} (I ⊗ V)`.
pub fn etf_degree4_projector_form(sys: &VectorSystem, tol: f64) -> Result<Degree4Moments> {
    let (n, r) = (sys.n(), sys.r());
    if !analyze_frame(sys, tol)?.is_etf {
        return Err(Error::Invalid("system is not an equiangular tight frame".into()));
    }
    let bound = r * (r + 1) / 2;
    if r == 1 {
        return Err(Error::Invalid("projector form needs r > 1".into()));
    }
    if n >= bound {
        return Err(Error::MaximalEtf { n, r, bound });
    }
    let pv = crate::witnesses::vsym_prime_projector(sys, tol)?;
    let v = sys.synthesis();
    // (I ⊗ V) maps R^{N²} → R^{rN}; column (a, b) is e_a ⊗ v_b.
    let lift = DenseMatrix::from_fn(r * n, n * n, |row, col| {
        let (blk, k) = (row / r, row % r);
        let (a, b) = (col / n, col % n);
        if blk == a { v[(k, b)] } else { 0.0 }
    });
    let p = lift.t_matmul(&pv.matmul(&lift)?)?.scale(r as f64 / n as f64);
    let x = sys.gram();
    let vx: Vec<f64> = (0..n * n).map(|a| x[(a / n, a % n)]).collect();
    let c = (n * n) as f64 * (1.0 - 1.0 / r as f64) / (bound - n) as f64;
    let mut y = DenseMatrix::outer(&vx, &vx);
    y.axpy(c, &p)?;
    Degree4Moments::new(y.symmetrized())
}

/// Pseudocovariance `Y − vec(X)vec(X)ᵀ` of a valid degree-4 matrix.
pub fn pseudocovariance(y: &Degree4Moments, tol: f64) -> Result<DenseMatrix> {
    let report = validate_degree4(y, tol)?;
    if !report.passed {
        return Err(Error::Invalid(format!("invalid pseudomoment matrix (worst violation {:e})", report.worst_violation)));
    }
    let n = y.n;
    let x = &report.extracted_x;
    let vx: Vec<f64> = (0..n * n).map(|a| x[(a / n, a % n)]).collect();
    y.y.sub(&DenseMatrix::outer(&vx, &vx))
}

/// Right-hand side of the rank bound `rank(Y) ≤ r(r+1)/2 − rank(X^{⊙2}) + 1`, `r = rank(X)`.
pub fn pataki_rank_bound(x: &DenseMatrix, rel: f64) -> Result<usize> {
    let r = symmetric_eigh(x, 1e-12)?.rank(rel);
    let had = DenseMatrix::from_fn(x.rows(), x.cols(), |i, j| x[(i, j)] * x[(i, j)]);
    let rh = symmetric_eigh(&had, 1e-12)?.rank(rel);
    Ok(r * (r + 1) / 2 - rh + 1)
}

/// Laurent's entry for an odd set of size `2a`: `(−1)^a Π_{i odd, 1 ≤ i < 2a} i/(N − i)`.
pub fn laurent_value(n: usize, a: usize) -> Rational {
    let mut v = Rational::one();
    for i in (1..2 * a).step_by(2) {
        v *= ratio(i as i64, n as i64 - i as i64);
    }
    if a % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Pseudomoment matrix indexed by strings over `[N]` (0-based symbols).
#[derive(Clone, Debug, PartialEq)]
pub struct StringMoments {
    pub n: usize,
    /// Degree `d` (even).
    pub d: usize,
    /// Row/column labels.
    pub strings: Vec<Vec<usize>>,
    pub z: DenseMatrix,
    pub exact: Option<RationalMatrix>,
}

/// Truncated moments: indexed by `[N]^{d/2}` in lexicographic order.
pub type TruncatedMoments = StringMoments;
/// Complete moments: indexed by `[N]^{≤ d/2}`, ordered by length then lexicographically.
pub type CompleteMoments = StringMoments;

/// All strings of length `len` over `[n]`, lexicographically.
pub fn strings_of_length(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..n).map(move |c| {
                    let mut t = s.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
    }
    out
}

/// All strings of length at most `len` over `[n]`, by length then lexicographically.
pub fn strings_up_to(n: usize, len: usize) -> Vec<Vec<usize>> {
    (0..=len).flat_map(|l| strings_of_length(n, l)).collect()
}

fn lex_index(n: usize, s: &[usize]) -> usize {
    s.iter().fold(0, |acc, &c| acc * n + c)
}

impl StringMoments {
    /// The degree-4 matrix viewed as truncated moments on `[N]²` (identical layout).
    pub fn from_degree4(y: &Degree4Moments) -> Self {
        Self {
            n: y.n,
            d: 4,
            strings: strings_of_length(y.n, 2),
            z: y.y.clone(),
            exact: y.exact.clone(),
        }
    }

    fn oddset_of(&self, a: usize, b: usize) -> Vec<usize> {
        let mut idx = self.strings[a].clone();
        idx.extend_from_slice(&self.strings[b]);
        odd_set(&idx)
    }
}

/// Conditions of complete (or truncated) pseudomoment matrices.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StringMomentReport {
    pub conditions: Vec<ConditionCheck>,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

/// Check `Z ⪰ 0`, that `Z_st` depends only on `odd(s∘t)`, and that `Z_st = 1` when
/// `odd(s∘t) = ∅`. Exact input is checked exactly.
pub fn validate_string_moments(z: &StringMoments, tol: f64) -> Result<StringMomentReport> {
    let dim = z.strings.len();
    if z.z.rows() != dim || z.z.cols() != dim {
        return Err(Error::Dimension("label count does not match matrix dimension".into()));
    }
    let (psd, min_eigenvalue) = psd_check(&z.z, z.exact.as_ref(), tol)?;
    let mut reps: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
    let mut spread: f64 = 0.0;
    let mut unit: f64 = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            let o = z.oddset_of(a, b);
            let gap = |p: (usize, usize), q: (usize, usize)| match &z.exact {
                Some(e) => to_f64(&(&e[p] - &e[q]).abs()),
                None => (z.z[p] - z.z[q]).abs(),
            };
            if o.is_empty() {
                let g = match &z.exact {
                    Some(e) => to_f64(&(&e[(a, b)] - Rational::one()).abs()),
                    None => (z.z[(a, b)] - 1.0).abs(),
                };
                unit = unit.max(g);
            }
            match reps.get(&o) {
                Some(&rep) => spread = spread.max(gap(rep, (a, b))),
                None => {
                    reps.insert(o, (a, b));
                }
            }
        }
    }
    let exact = z.exact.is_some();
    let ok = |v: f64| if exact { v == 0.0 } else { v <= tol };
    let conditions = vec![
        psd,
        ConditionCheck { name: "odd-set-dependence", passed: ok(spread), violation: spread },
        ConditionCheck { name: "empty-odd-set-one", passed: ok(unit), violation: unit },
    ];
    let passed = conditions.iter().all(|c| c.passed);
    Ok(StringMomentReport { conditions, min_eigenvalue, passed })
}

/// Laurent's truncated moments on `[N]^{d/2}`: the entry for an odd set of size `2a` is
/// [`laurent_value`]`(N, a)`. For `d = 2` this is `X^(N)`.
pub fn laurent_moments(n: usize, d: usize) -> Result<TruncatedMoments> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Invalid(format!("N must be odd and at least 3, got {n}")));
    }
    if d < 2 || d % 2 == 1 {
        return Err(Error::Invalid(format!("degree must be even and at least 2, got {d}")));
    }
    if d > n - 1 {
        return Err(Error::Invalid(format!("degree {d} exceeds N − 1 = {}; the entry formula has vanishing denominators", n - 1)));
    }
    let half = d / 2;
    let dim = n.pow(half as u32);
    if dim > MATERIALIZE_LIMIT {
        return Err(Error::Invalid(format!("{dim}×{dim} exceeds the materialization limit {MATERIALIZE_LIMIT}")));
    }
    let strings = strings_of_length(n, half);
    let values: Vec<Rational> = (0..=half).map(|a| laurent_value(n, a)).collect();
    let exact = RationalMatrix::from_fn(dim, dim, |a, b| {
        let mut idx = strings[a].clone();
        idx.extend_from_slice(&strings[b]);
        values[odd_set(&idx).len() / 2].clone()
    });
    Ok(StringMoments { n, d, strings, z: exact.to_dense(), exact: Some(exact) })
}

/// Extend truncated moments on `[N]^{d/2}` to complete moments on `[N]^{≤ d/2}` by padding
/// every string with copies of symbol `0` up to length `d/2`:
/// `Z_st = Zt_{(s∘e)(t∘e)}`.
pub fn complete_from_truncated(zt: &TruncatedMoments, tol: f64) -> Result<CompleteMoments> {
    let half = zt.d / 2;
    if zt.strings.len() != zt.n.pow(half as u32) || zt.strings.iter().any(|s| s.len() != half) {
        return Err(Error::Dimension("input is not indexed by [N]^{d/2}".into()));
    }
    let report = validate_string_moments(zt, tol)?;
    if !report.passed {
        return Err(Error::Invalid("truncated moments fail validation".into()));
    }
    let strings = strings_up_to(zt.n, half);
    let source: Vec<usize> = strings
        .iter()
        .map(|s| {
            let mut padded = s.clone();
            padded.resize(half, 0);
            lex_index(zt.n, &padded)
        })
        .collect();
    let dim = strings.len();
    let z = DenseMatrix::from_fn(dim, dim, |a, b| zt.z[(source[a], source[b])]);
    let exact = zt.exact.as_ref().map(|e| RationalMatrix::from_fn(dim, dim, |a, b| e[(source[a], source[b])].clone()));
    Ok(StringMoments { n: zt.n, d: zt.d, strings, z, exact })
}

/// Linear functional on odd-set values: `⟨A, Y⟩ = Σ_O coefficient(O) · y(O)` for every `Y`
/// whose entries depend only on odd sets.
#[derive(Clone, Debug, PartialEq)]
pub struct OddSetFunctional {
    pub n: usize,
    /// Nonzero coefficients keyed by sorted odd sets.
    pub coefficients: BTreeMap<Vec<usize>, Rational>,
}

impl OddSetFunctional {
    /// Coefficient of `set` (zero when absent).
    pub fn coefficient(&self, set: &[usize]) -> Rational {
        self.coefficients.get(set).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Σ_O coefficient(O) · value(O)`.
    pub fn evaluate(&self, mut value: impl FnMut(&[usize]) -> Rational) -> Rational {
        self.coefficients.iter().fold(Rational::zero(), |acc, (o, c)| acc + c * value(o))
    }

    /// Apply to an exact degree-4 matrix, reading each class value at a representative entry.
    pub fn evaluate_on(&self, y: &RationalMatrix) -> Result<Rational> {
        let n = self.n;
        if y.rows() != n * n {
            return Err(Error::Dimension("functional and matrix sizes differ".into()));
        }
        Ok(self.evaluate(|o| {
            let (i, j, k, l) = match o.len() {
                0 => (0, 0, 0, 0),
                2 => (o[0], o[1], 0, 0),
                _ => (o[0], o[1], o[2], o[3]),
            };
            y[(i * n + j, k * n + l)].clone()
        }))
    }
}

/// Collapse `A` onto odd-set classes: the coefficient of `O` is `Σ A_st` over all pairs
/// `(s, t) ∈ [N]² × [N]²` with `odd(s∘t) = O`.
pub fn collapse_functional(a: &RationalMatrix) -> Result<OddSetFunctional> {
    a.require_symmetric()?;
    let n = perfect_square_root(a.rows())
        .ok_or_else(|| Error::Dimension(format!("dimension {} is not a perfect square", a.rows())))?;
    let mut coefficients: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for s in 0..n * n {
        for t in 0..n * n {
            let v = &a[(s, t)];
            if v.is_zero() {
                continue;
            }
            let o = odd_set(&[s / n, s % n, t / n, t % n]);
            *coefficients.entry(o).or_insert_with(Rational::zero) += v;
        }
    }
    coefficients.retain(|_, c| !c.is_zero());
    Ok(OddSetFunctional { n, coefficients })
}

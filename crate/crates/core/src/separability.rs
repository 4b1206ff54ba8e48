//! Cut decompositions and separable block witnesses.
//!
//! `X = Σ_k ρ_k d̃_k d̃_kᵀ` with `d̃_k ∈ {±1}^N` certifies `X ∈ Cᴺ`; such a decomposition yields
//! a separable witness in `B(N, r)`, and a witness of the minimal rank `r` yields back a
//! decomposition.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::frames::VectorSystem;
use crate::numkit::{
    dot, int, numerical_rank, orthonormalize, symmetric_eigh, symmetric_pinv, BlockLayout, DenseMatrix, Rational,
    RationalMatrix,
};
use crate::witnesses::{BlockWitness, OPTIMALITY_RTOL, RANK_RTOL};

/// Eigenvalue gap separating clusters during joint diagonalization.
pub const CLUSTER_GAP: f64 = 1e-7;

/// Weights below this are dropped by [`witness_to_cuts`].
pub const WEIGHT_FLOOR: f64 = 1e-12;

/// Probability distribution over cuts `d̃_k ∈ {±1}^N`.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CutDecomposition {
    /// `ρ_1, …, ρ_m ≥ 0`, summing to one.
    pub weights: Vec<f64>,
    /// `d̃_1, …, d̃_m`.
    pub signs: Vec<Vec<i8>>,
}

impl CutDecomposition {
    /// Validate and wrap.
    pub fn new(weights: Vec<f64>, signs: Vec<Vec<i8>>) -> Result<Self> {
        if weights.len() != signs.len() || signs.is_empty() {
            return Err(Error::Invalid("need one sign vector per weight and at least one term".into()));
        }
        let n = signs[0].len();
        if signs.iter().any(|s| s.len() != n || s.iter().any(|&c| c != 1 && c != -1)) {
            return Err(Error::Invalid("sign vectors must have equal length and ±1 entries".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::Invalid("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights, signs })
    }

    /// Uniform distribution over the `2^{N−1}` cuts with `x₁ = +1`; represents `I_N` for `N ≥ 2`.
    pub fn uniform(n: usize) -> Self {
        let signs = all_cuts(n);
        let w = 1.0 / signs.len() as f64;
        Self { weights: vec![w; signs.len()], signs }
    }

    /// Point mass at `x`.
    pub fn point(x: Vec<i8>) -> Result<Self> {
        Self::new(vec![1.0], vec![x])
    }

    pub fn n(&self) -> usize {
        self.signs.first().map_or(0, |s| s.len())
    }

    /// Term count `m`.
    pub fn m(&self) -> usize {
        self.weights.len()
    }

    /// `Σ ρ_k d̃_k d̃_kᵀ`.
    pub fn gram(&self) -> DenseMatrix {
        let n = self.n();
        let mut x = DenseMatrix::zeros(n, n);
        for (w, s) in self.weights.iter().zip(&self.signs) {
            for i in 0..n {
                for j in 0..n {
                    x[(i, j)] += w * f64::from(s[i] * s[j]);
                }
            }
        }
        x
    }

    /// Weights snapped to nearby rationals with denominator at most `max_den`.
    pub fn rational_weights(&self, max_den: i64) -> Vec<Rational> {
        self.weights.iter().map(|&w| rationalize(w, max_den)).collect()
    }

    /// `Σ ρ_k d̃_k d̃_kᵀ` with weights snapped by [`rational_weights`](Self::rational_weights);
    /// `None` when the snapped weights do not sum to exactly one.
    pub fn exact_gram(&self, max_den: i64) -> Option<RationalMatrix> {
        let w = self.rational_weights(max_den);
        if w.iter().fold(Rational::zero(), |a, b| a + b) != Rational::one() {
            return None;
        }
        let n = self.n();
        Some(RationalMatrix::from_fn(n, n, |i, j| {
            w.iter().zip(&self.signs).fold(Rational::zero(), |acc, (wk, s)| acc + wk * int(i64::from(s[i] * s[j])))
        }))
    }
}

/// All sign vectors of length `n` with first entry `+1`, in binary order of the rest.
pub fn all_cuts(n: usize) -> Vec<Vec<i8>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (0..1usize << (n - 1))
        .map(|mask| (0..n).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1 } else { 1 }).collect())
        .collect()
}

/// Best rational approximation with denominator at most `max_den` (continued fractions).
pub fn rationalize(x: f64, max_den: i64) -> Rational {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return int(x.round() as i64);
    }
    Ratio::new(p1.into(), q1.into())
}

/// One product term `ρ · rN · (a ⊗ b)(a ⊗ b)ᵀ` of a separable witness.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableTerm {
    /// Unit vector in `R^N`.
    pub a: Vec<f64>,
    /// Unit vector in `R^r`.
    pub b: Vec<f64>,
    pub rho: f64,
}

/// A witness together with an explicit separable decomposition
/// `M = Σ_k ρ_k · rN · (a_k ⊗ b_k)(a_k ⊗ b_k)ᵀ`.
#[derive(Clone, Debug)]
pub struct SeparableWitness {
    pub witness: BlockWitness,
    pub terms: Vec<SeparableTerm>,
}

impl SeparableWitness {
    /// `Σ_k ρ_k · rN · (a_k ⊗ b_k)(a_k ⊗ b_k)ᵀ`.
    pub fn resum(&self) -> DenseMatrix {
        let (n, r) = (self.witness.n(), self.witness.r());
        let mut m = DenseMatrix::zeros(r * n, r * n);
        for t in &self.terms {
            let u = crate::numkit::kron_vec(&t.a, &t.b);
            m.axpy(t.rho * (r * n) as f64, &DenseMatrix::outer(&u, &u)).expect("same shape");
        }
        m
    }
}

/// Separable witness from a cut decomposition of `Gram(sys)`.
///
/// With `W = [R^{1/2}d_1 … R^{1/2}d_N]` (`d_i[k] = d̃_k[i]`, `R = diag ρ`) we have `WᵀW = VᵀV`,
/// so `W = Z V` for `Z = W V⁺`. If `V` is rank deficient, `Z` is completed to an isometry by
/// extra zero-weight terms spanning `ker Vᵀ`. Then `M_[ij] = Zᵀ D_i D_j Z` and
/// `M = Σ_k (d̃_k ⊗ z_k)(d̃_k ⊗ z_k)ᵀ` with `z_k` the rows of `Z`.
pub fn cuts_to_witness(dec: &CutDecomposition, sys: &VectorSystem, tol: f64) -> Result<SeparableWitness> {
    let (n, r) = (sys.n(), sys.r());
    if dec.n() != n {
        return Err(Error::Dimension(format!("decomposition has N = {} but the system has N = {n}", dec.n())));
    }
    let total: f64 = sys.vectors().iter().map(|v| dot(v, v)).sum();
    if (total - n as f64).abs() > tol * n as f64 {
        return Err(Error::Invalid(format!("Σ‖v_i‖² = {total} differs from N = {n}")));
    }
    let gap = dec.gram().max_abs_diff(&sys.gram())?;
    if gap > tol.max(1e-10) {
        return Err(Error::Invalid(format!("cut decomposition does not reproduce Gram(sys): max difference {gap:e}")));
    }
    let v = sys.synthesis();
    let mut signs = dec.signs.clone();
    let w = DenseMatrix::from_fn(dec.m(), n, |k, i| dec.weights[k].sqrt() * f64::from(dec.signs[k][i]));
    // V⁺ = Vᵀ (VVᵀ)⁺.
    let vplus = v.t_matmul(&symmetric_pinv(&v.matmul(&v.transpose())?, 1e-12)?)?;
    let z0 = w.matmul(&vplus)?;
    let ztz = z0.t_matmul(&z0)?;
    let e = symmetric_eigh(&ztz, 1e-14)?;
    let missing: Vec<Vec<f64>> = (0..r).filter(|&k| e.values[k] < 0.5).map(|k| e.vector(k)).collect();
    let extra = orthonormalize(&missing, 1e-8);
    let rows = dec.m() + extra.len();
    let z = DenseMatrix::from_fn(rows, r, |k, a| if k < dec.m() { z0[(k, a)] } else { extra[k - dec.m()][a] });
    signs.extend(std::iter::repeat(vec![1i8; n]).take(extra.len()));
    // B = [D_1 Z … D_N Z], M = BᵀB.
    let b = DenseMatrix::from_fn(rows, r * n, |k, col| f64::from(signs[k][col / r]) * z[(k, col % r)]);
    let m = b.t_matmul(&b)?.symmetrized();
    let witness = BlockWitness::new(m, r)?;
    let nf = (n as f64).sqrt();
    let terms = (0..rows)
        .filter_map(|k| {
            let zk: Vec<f64> = (0..r).map(|a| z[(k, a)]).collect();
            let nz = dot(&zk, &zk);
            (nz > 1e-300).then(|| SeparableTerm {
                a: signs[k].iter().map(|&s| f64::from(s) / nf).collect(),
                b: zk.iter().map(|c| c / nz.sqrt()).collect(),
                rho: nz / r as f64,
            })
        })
        .collect();
    Ok(SeparableWitness { witness, terms })
}

/// Jointly diagonalize commuting symmetric matrices: returns an orthogonal `B` with every
/// `Bᵀ Q_i B` diagonal. Each matrix refines the eigenspace clusters left by its predecessors.
pub fn joint_diagonalize(qs: &[DenseMatrix], gap: f64) -> Result<DenseMatrix> {
    let r = qs.first().map_or(0, |q| q.rows());
    let mut b = DenseMatrix::identity(r);
    let mut clusters: Vec<Vec<usize>> = vec![(0..r).collect()];
    for q in qs {
        let mut next = Vec::new();
        for cluster in clusters {
            if cluster.len() == 1 {
                next.push(cluster);
                continue;
            }
            let bc = DenseMatrix::from_fn(r, cluster.len(), |i, j| b[(i, cluster[j])]);
            let c = bc.t_matmul(&q.matmul(&bc)?)?.symmetrized();
            let e = symmetric_eigh(&c, 1e-14)?;
            let rotated = bc.matmul(&e.vectors)?;
            for (j, &col) in cluster.iter().enumerate() {
                b.set_column(col, &rotated.column(j));
            }
            let mut start = 0;
            for j in 1..=cluster.len() {
                if j == cluster.len() || e.values[j - 1] - e.values[j] > gap {
                    next.push(cluster[start..j].to_vec());
                    start = j;
                }
            }
        }
        clusters = next;
    }
    Ok(b)
}

/// Extract a cut decomposition of `Gram(sys)` from a witness of rank exactly `r`.
///
/// `P_i = M_[1i]` are commuting symmetric orthogonal matrices; with `B` jointly diagonalizing
/// them, `P_i = B D_i Bᵀ`, the weights are `ρ_k = (Bᵀv_1)_k²` and the cuts are the diagonals
/// of the `D_i`.
pub fn witness_to_cuts(w: &BlockWitness, sys: &VectorSystem, tol: f64) -> Result<CutDecomposition> {
    let (n, r) = (w.n(), w.r());
    sys.require_unit_norm(tol.max(1e-10))?;
    let value = w.objective(sys)?;
    let target = (n * n) as f64;
    if (value - target).abs() > OPTIMALITY_RTOL.max(tol) * target {
        return Err(Error::NotOptimal { value, target });
    }
    let e = symmetric_eigh(&w.m.symmetrized(), 1e-14)?;
    let rank = numerical_rank(&e.values, RANK_RTOL);
    if rank > r {
        return Err(Error::NotMinimalRank { rank, r });
    }
    let ps: Vec<DenseMatrix> = (0..n).map(|i| w.block(0, i)).collect();
    let stol = tol.max(1e-7);
    for i in 0..n {
        for j in i + 1..n {
            let c = ps[i].matmul(&ps[j])?.max_abs_diff(&ps[j].matmul(&ps[i])?)?;
            if c > stol {
                return Err(Error::NotStructured(format!("M_[1,{}] and M_[1,{}] do not commute (residual {c:e})", i + 1, j + 1)));
            }
        }
    }
    let b = joint_diagonalize(&ps[1..], CLUSTER_GAP)?;
    let mut signs_by_term = vec![vec![1i8; n]; r];
    for (i, p) in ps.iter().enumerate() {
        let d = b.t_matmul(&p.matmul(&b)?)?;
        for k in 0..r {
            let dk = d[(k, k)];
            if (dk.abs() - 1.0).abs() > stol.sqrt() {
                return Err(Error::NotStructured(format!("M_[1,{}] has eigenvalue {dk} ≠ ±1", i + 1)));
            }
            signs_by_term[k][i] = if dk > 0.0 { 1 } else { -1 };
        }
    }
    let u = b.t_matmul(&DenseMatrix::from_columns(&[sys.vector(0)])?)?.column(0);
    let mut weights = Vec::new();
    let mut signs = Vec::new();
    for k in 0..r {
        let rho = u[k] * u[k];
        if rho >= WEIGHT_FLOOR {
            weights.push(rho);
            signs.push(signs_by_term[k].clone());
        }
    }
    let total: f64 = weights.iter().sum();
    for rho in &mut weights {
        *rho /= total;
    }
    CutDecomposition::new(weights, signs)
}

/// Check that `h` is a real Hadamard matrix: square, entries `±1`, `HHᵀ = N·I` (exact integers).
pub fn check_hadamard(h: &[Vec<i64>]) -> Result<()> {
    let n = h.len();
    if h.iter().any(|row| row.len() != n) {
        return Err(Error::NotHadamard("matrix is not square".into()));
    }
    if h.iter().flatten().any(|&c| c != 1 && c != -1) {
        return Err(Error::NotHadamard("entries must be ±1".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let s: i64 = (0..n).map(|k| h[i][k] * h[j][k]).sum();
            let want = if i == j { n as i64 } else { 0 };
            if s != want {
                return Err(Error::NotHadamard(format!("rows {} and {} have inner product {s}", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

/// Sylvester Hadamard matrix of order `2^k`.
pub fn sylvester_hadamard(k: u32) -> Vec<Vec<i64>> {
    let n = 1usize << k;
    (0..n).map(|i| (0..n).map(|j| if (i & j).count_ones() % 2 == 0 { 1 } else { -1 }).collect()).collect()
}

/// Rank-`N` witness in `B(N, N)` certifying `X = I_N` for the standard basis, from a Hadamard
/// matrix: with `Q = H/√N`, rows `q_i`, and `D_i = diag(sign(q_i ⊙ q_1))`, set
/// `M_[ij] = Q D_i D_j Qᵀ`.
pub fn hadamard_witness(h: &[Vec<i64>]) -> Result<BlockWitness> {
    check_hadamard(h)?;
    let n = h.len();
    let s = (n as f64).sqrt();
    let q = DenseMatrix::from_fn(n, n, |i, j| h[i][j] as f64 / s);
    let d: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|k| (h[i][k] * h[0][k]) as f64).collect()).collect();
    // M = UᵀU with block column U_i = D_i Qᵀ.
    let layout = BlockLayout::new(n, n);
    let mut u = DenseMatrix::zeros(n, n * n);
    let qt = q.transpose();
    for i in 0..n {
        let ui = DenseMatrix::from_fn(n, n, |a, b| d[i][a] * qt[(a, b)]);
        u.set_submatrix(0, i * n, &ui);
    }
    let m = u.t_matmul(&u)?.symmetrized();
    debug_assert_eq!(layout.dim(), m.rows());
    BlockWitness::new(m, n)
}

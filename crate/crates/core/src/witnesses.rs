//! Gram-vector block witnesses `M ∈ B(N, r)` and their algebra.
//!
//! `B(N, r)` is the set of PSD `rN × rN` matrices whose diagonal blocks are `I_r` and whose
//! off-diagonal blocks are symmetric. A witness *certifies* `X = Gram(v_1, …, v_N)` when
//! `vᵀMv = N²` with `v = vec(V)`.

use crate::error::{Error, Result};
use crate::frames::{analyze_frame, VectorSystem};
use crate::numkit::{
    dot, gram_factor, kron_vec, norm, orthonormalize, spd_inverse, symmetric_eigh, BlockLayout,
    DenseMatrix, PartialTranspose,
};
use crate::pseudomoments::{validate_degree4, Degree4Moments};

/// Relative tolerance on `vᵀMv = N²`.
pub const OPTIMALITY_RTOL: f64 = 1e-8;

/// Relative eigenvalue threshold used for numerical ranks.
pub const RANK_RTOL: f64 = 1e-8;

/// Symmetric `rN × rN` block matrix with its layout.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockWitness {
    pub m: DenseMatrix,
    pub layout: BlockLayout,
}

impl BlockWitness {
    /// Wrap `m` with block size `r`.
    pub fn new(m: DenseMatrix, r: usize) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension("witness must be square".into()));
        }
        let layout = BlockLayout::for_dimension(m.rows(), r)?;
        Ok(Self { m, layout })
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn r(&self) -> usize {
        self.layout.r
    }

    /// Block `M_[ij]`.
    pub fn block(&self, i: usize, j: usize) -> DenseMatrix {
        self.layout.block(&self.m, i, j)
    }

    /// `vᵀMv` for the stacked vector of `sys`.
    pub fn objective(&self, sys: &VectorSystem) -> Result<f64> {
        self.check_system(sys)?;
        self.m.quadratic_form(&sys.stacked())
    }

    /// `‖Mv − Nv‖_∞`.
    pub fn eigen_residual(&self, sys: &VectorSystem) -> Result<f64> {
        self.check_system(sys)?;
        let v = sys.stacked();
        let mv = self.m.matvec(&v)?;
        let n = self.n() as f64;
        Ok(mv.iter().zip(&v).fold(0.0, |acc, (a, b)| acc.max((a - n * b).abs())))
    }

    /// `max_{i,j} ‖M_[ij] v_j − v_i‖_∞`.
    pub fn block_transport_residual(&self, sys: &VectorSystem) -> Result<f64> {
        self.check_system(sys)?;
        let mut worst: f64 = 0.0;
        for i in 0..self.n() {
            let vi = sys.vector(i);
            for j in 0..self.n() {
                let t = self.block(i, j).matvec(&sys.vector(j))?;
                worst = t.iter().zip(&vi).fold(worst, |acc, (a, b)| acc.max((a - b).abs()));
            }
        }
        Ok(worst)
    }

    fn check_system(&self, sys: &VectorSystem) -> Result<()> {
        if sys.n() != self.n() || sys.r() != self.r() {
            return Err(Error::Dimension(format!(
                "witness is B({}, {}) but the vector system has N = {}, r = {}",
                self.n(),
                self.r(),
                sys.n(),
                sys.r()
            )));
        }
        Ok(())
    }
}

/// Result of [`validate_witness`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct WitnessReport {
    pub min_eigenvalue: f64,
    /// `max_i ‖M_[ii] − I‖_max`.
    pub diagonal_residual: f64,
    /// `max_{i,j} ‖M_[ij] − M_[ij]ᵀ‖_max`.
    pub symmetry_residual: f64,
    /// `max_{i,j} ‖M_[ij]‖` (spectral).
    pub max_block_norm: f64,
    /// `‖M‖` (spectral).
    pub spectral_norm: f64,
    pub passed: bool,
}

fn operator_norm(a: &DenseMatrix) -> Result<f64> {
    Ok(symmetric_eigh(&a.t_matmul(a)?, 1e-12)?.max().max(0.0).sqrt())
}

/// Check membership in `B(N, r)` and the norm bounds `‖M_[ij]‖ ≤ 1`, `‖M‖ ≤ N` that it implies.
pub fn validate_witness(w: &BlockWitness, tol: f64) -> Result<WitnessReport> {
    let (n, r) = (w.n(), w.r());
    let e = symmetric_eigh(&w.m.symmetrized(), 1e-12)?;
    let ident = DenseMatrix::identity(r);
    let mut diagonal_residual: f64 = 0.0;
    let mut symmetry_residual: f64 = 0.0;
    let mut max_block_norm: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let b = w.block(i, j);
            if i == j {
                diagonal_residual = diagonal_residual.max(b.max_abs_diff(&ident)?);
            }
            symmetry_residual = symmetry_residual.max(b.max_abs_diff(&b.transpose())?);
            max_block_norm = max_block_norm.max(operator_norm(&b)?);
        }
    }
    let min_eigenvalue = e.min();
    let spectral_norm = e.max().abs().max(min_eigenvalue.abs());
    let asym = w.m.max_asymmetry();
    let passed = min_eigenvalue >= -tol
        && diagonal_residual <= tol
        && symmetry_residual <= tol
        && asym <= tol
        && max_block_norm <= 1.0 + tol
        && spectral_norm <= n as f64 + tol;
    Ok(WitnessReport { min_eigenvalue, diagonal_residual, symmetry_residual, max_block_norm, spectral_norm, passed })
}

fn require_certifies(w: &BlockWitness, sys: &VectorSystem, tol: f64) -> Result<()> {
    let n = sys.n() as f64;
    let total: f64 = sys.vectors().iter().map(|v| dot(v, v)).sum();
    if (total - n).abs() > tol * n {
        return Err(Error::Invalid(format!("Σ‖v_i‖² = {total} differs from N = {n}")));
    }
    let value = w.objective(sys)?;
    let target = n * n;
    if (value - target).abs() > OPTIMALITY_RTOL.max(tol) * target {
        return Err(Error::NotOptimal { value, target });
    }
    Ok(())
}

/// `Y_(ij)(kℓ) = v_iᵀ M_[jk] v_ℓ`, i.e. `Y = (I_N ⊗ V)ᵀ M (I_N ⊗ V)` up to the pair ordering.
///
/// Requires `vᵀMv = N²` (relative tolerance [`OPTIMALITY_RTOL`]); otherwise the witness
/// certifies nothing and [`Error::NotOptimal`] is returned.
pub fn witness_to_moments(w: &BlockWitness, sys: &VectorSystem, tol: f64) -> Result<Degree4Moments> {
    require_certifies(w, sys, tol)?;
    let n = sys.n();
    let v = sys.synthesis();
    let mut y = DenseMatrix::zeros(n * n, n * n);
    for j in 0..n {
        for k in 0..n {
            // (Vᵀ M_[jk] V)_{iℓ} = Y_(ij)(kℓ).
            let t = v.t_matmul(&w.block(j, k).matmul(v)?)?;
            for i in 0..n {
                for l in 0..n {
                    y[(i * n + j, k * n + l)] = t[(i, l)];
                }
            }
        }
    }
    Degree4Moments::new(y.symmetrized())
}

/// Witness certifying `Gram(sys)` built from a valid degree-4 matrix extending it.
///
/// * Full-rank `V` (`r = rank X`): with `W = (VVᵀ)⁻¹V`, set `M_[jk] = W Ỹ_[jk] Wᵀ` where
///   `Ỹ_[jk]` is the `N × N` matrix `(i, ℓ) ↦ Y_(ij)(kℓ)`. This is a congruence of a
///   reordering of `Y`, hence PSD, and reproduces `Y` because the rows of `Ỹ_[jk]` lie in the
///   row space of `V`.
/// * Rank-deficient `V`: build `M₀ ∈ B(N, rank X)` for a Gram factor `V₀`, write `V = Z V₀`
///   with `Z` an isometry, and lift `M′ = (I ⊗ Z) M₀ (I ⊗ Z)ᵀ + I_N ⊗ (I_r − ZZᵀ)`.
pub fn moments_to_witness(y: &Degree4Moments, sys: &VectorSystem, tol: f64) -> Result<BlockWitness> {
    let n = sys.n();
    if y.n() != n {
        return Err(Error::Dimension(format!("Y is for N = {} but the system has N = {n}", y.n())));
    }
    let report = validate_degree4(y, tol)?;
    if !report.passed {
        return Err(Error::Invalid(format!("Y is not a valid pseudomoment matrix (worst violation {:e})", report.worst_violation)));
    }
    let x = sys.gram();
    let gap = report.extracted_x.max_abs_diff(&x)?;
    if gap > tol.max(1e-8) {
        return Err(Error::Invalid(format!("Y does not extend Gram(sys): max difference {gap:e}")));
    }
    let r = sys.r();
    let rank = symmetric_eigh(&sys.frame_operator(), 1e-12)?.rank(RANK_RTOL);
    if rank == r {
        return full_rank_witness(y, sys.synthesis());
    }
    let v0 = gram_factor(&x, RANK_RTOL)?;
    let m0 = full_rank_witness(y, &v0)?;
    let r0 = v0.rows();
    let g0 = v0.matmul(&v0.transpose())?;
    let z = sys.synthesis().matmul(&v0.transpose())?.matmul(&spd_inverse(&g0, 1e-12)?)?;
    let lift = DenseMatrix::identity(n).kron(&z);
    let mut m = lift.matmul(&m0.m)?.matmul(&lift.transpose())?;
    let complement = DenseMatrix::identity(r).sub(&z.matmul(&z.transpose())?)?;
    for i in 0..n {
        let layout = BlockLayout::new(n, r);
        let mut b = layout.block(&m, i, i);
        b.axpy(1.0, &complement)?;
        layout.set_block(&mut m, i, i, &b);
    }
    debug_assert_eq!(m0.r(), r0);
    BlockWitness::new(m.symmetrized(), r)
}

fn full_rank_witness(y: &Degree4Moments, v: &DenseMatrix) -> Result<BlockWitness> {
    let (r, n) = (v.rows(), v.cols());
    let g = v.matmul(&v.transpose())?;
    let w = spd_inverse(&g, 1e-12)?.matmul(v)?;
    let layout = BlockLayout::new(n, r);
    let mut m = DenseMatrix::zeros(r * n, r * n);
    for j in 0..n {
        for k in j..n {
            let yt = DenseMatrix::from_fn(n, n, |i, l| y.entry(i, j, k, l));
            let b = w.matmul(&yt)?.matmul(&w.transpose())?;
            layout.set_block(&mut m, j, k, &b);
            if j != k {
                layout.set_block(&mut m, k, j, &b.transpose());
            }
        }
    }
    BlockWitness::new(m.symmetrized(), r)
}

/// Factorization `M = UᵀU` with block column `U_i = [S_i; R_i]`, `S_1 = I`, `R_1 = 0`.
#[derive(Clone, Debug)]
pub struct SrFactorization {
    /// Row count `r′` of `U`.
    pub r_prime: usize,
    /// `S_i = M_[1i]` (`r × r`).
    pub s: Vec<DenseMatrix>,
    /// `R_i` (`(r′ − r) × r`).
    pub rr: Vec<DenseMatrix>,
    /// `max_i ‖S_i² + R_iᵀR_i − I‖_max`.
    pub diagonal_residual: f64,
    /// `max_{i,j} ‖S_iS_j − S_jS_i + R_iᵀR_j − R_jᵀR_i‖_max`.
    pub commutator_residual: f64,
}

impl SrFactorization {
    /// The factor `U` (`r′ × rN`).
    pub fn u(&self) -> DenseMatrix {
        let n = self.s.len();
        let r = self.s.first().map_or(0, |s| s.rows());
        let mut u = DenseMatrix::zeros(self.r_prime, r * n);
        for i in 0..n {
            u.set_submatrix(0, i * r, &self.s[i]);
            u.set_submatrix(r, i * r, &self.rr[i]);
        }
        u
    }
}

/// Factor a witness as `M = UᵀU` with first block column `[I_r; 0]`.
///
/// `S_i = M_[1i]`; the remaining rows come from an eigen-factorization of the Schur complement
/// `K = M − C Cᵀ` (`C` = first block column), which vanishes on block 1.
pub fn sr_factorization(w: &BlockWitness, tol: f64) -> Result<SrFactorization> {
    let (n, r) = (w.n(), w.r());
    let e = symmetric_eigh(&w.m.symmetrized(), 1e-12)?;
    if e.min() < -tol.max(1e-10) {
        return Err(Error::NotPsd(e.min()));
    }
    let s: Vec<DenseMatrix> = (0..n).map(|i| w.block(0, i)).collect();
    let rn = r * n;
    let c = w.m.submatrix(0, 0, r, rn); // rows of block 1: [S_1 … S_N]
    let k = w.m.sub(&c.t_matmul(&c)?)?;
    let trail = n.saturating_sub(1) * r;
    let kt = k.submatrix(r, r, trail, trail).symmetrized();
    let ke = symmetric_eigh(&kt, 1e-12)?;
    let scale = ke.max().max(e.max()).max(1.0);
    let keep: Vec<usize> = (0..trail).filter(|&a| ke.values[a] > RANK_RTOL * scale).collect();
    let extra = keep.len();
    let rfull = DenseMatrix::from_fn(extra, rn, |a, col| {
        if col < r {
            0.0
        } else {
            ke.values[keep[a]].sqrt() * ke.vectors[(col - r, keep[a])]
        }
    });
    let rr: Vec<DenseMatrix> = (0..n).map(|i| rfull.submatrix(0, i * r, extra, r)).collect();
    let ident = DenseMatrix::identity(r);
    let mut diagonal_residual: f64 = 0.0;
    let mut commutator_residual: f64 = 0.0;
    for i in 0..n {
        let d = s[i].matmul(&s[i])?.add(&rr[i].t_matmul(&rr[i])?)?;
        diagonal_residual = diagonal_residual.max(d.max_abs_diff(&ident)?);
        for j in i + 1..n {
            let lhs = s[i].matmul(&s[j])?.add(&rr[i].t_matmul(&rr[j])?)?;
            let rhs = s[j].matmul(&s[i])?.add(&rr[j].t_matmul(&rr[i])?)?;
            commutator_residual = commutator_residual.max(lhs.max_abs_diff(&rhs)?);
        }
    }
    Ok(SrFactorization { r_prime: r + extra, s, rr, diagonal_residual, commutator_residual })
}

/// Dual-feasible matrix `D* = vvᵀ − (vvᵀ)^Γ + I_N ⊗ (VVᵀ)`.
#[derive(Clone, Debug)]
pub struct DualCertificate {
    pub d: DenseMatrix,
    pub layout: BlockLayout,
}

impl DualCertificate {
    pub fn trace(&self) -> f64 {
        self.d.trace()
    }

    /// `max_{i≠j} ‖D_[ij] + D_[ij]ᵀ‖_max` (zero for antisymmetric off-diagonal blocks).
    pub fn antisymmetry_residual(&self) -> Result<f64> {
        let n = self.layout.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let b = self.layout.block(&self.d, i, j);
                    worst = worst.max(b.add(&b.transpose())?.max_abs());
                }
            }
        }
        Ok(worst)
    }

    /// `D* − vvᵀ = I_N ⊗ (VVᵀ) − (vvᵀ)^Γ`.
    pub fn slack(&self, sys: &VectorSystem) -> Result<DenseMatrix> {
        let v = sys.stacked();
        self.d.sub(&DenseMatrix::outer(&v, &v))
    }

    /// Smallest eigenvalue of `D* − vvᵀ`.
    pub fn feasibility_min_eigenvalue(&self, sys: &VectorSystem) -> Result<f64> {
        Ok(symmetric_eigh(&self.slack(sys)?, 1e-12)?.min())
    }

    /// `‖M (D* − vvᵀ)‖_max`; zero exactly when complementary slackness holds.
    pub fn complementary_slackness(&self, w: &BlockWitness, sys: &VectorSystem) -> Result<f64> {
        Ok(w.m.matmul(&self.slack(sys)?)?.max_abs())
    }
}

fn require_full_rank(sys: &VectorSystem) -> Result<()> {
    let rank = symmetric_eigh(&sys.frame_operator(), 1e-12)?.rank(RANK_RTOL);
    if rank < sys.r() {
        return Err(Error::RankDeficient { rank, r: sys.r() });
    }
    Ok(())
}

fn require_untf(sys: &VectorSystem, tol: f64) -> Result<()> {
    if !analyze_frame(sys, tol)?.is_untf {
        return Err(Error::NotUntf("the formula needs VVᵀ = (N/r)·I".into()));
    }
    Ok(())
}

/// `(vvᵀ)^Γ`: block `(i, j)` equals `v_j v_iᵀ`.
fn pt_outer(sys: &VectorSystem) -> Result<DenseMatrix> {
    let v = sys.stacked();
    DenseMatrix::outer(&v, &v).partial_transpose(sys.r())
}

/// Dual certificate for unit-norm, full-rank systems.
pub fn dual_certificate(sys: &VectorSystem, tol: f64) -> Result<DualCertificate> {
    sys.require_unit_norm(tol)?;
    require_full_rank(sys)?;
    let v = sys.stacked();
    let mut d = DenseMatrix::outer(&v, &v).sub(&pt_outer(sys)?)?;
    d.axpy(1.0, &DenseMatrix::identity(sys.n()).kron(&sys.frame_operator()))?;
    Ok(DualCertificate { d, layout: BlockLayout::new(sys.n(), sys.r()) })
}

/// `P_{Vsym} = (r/2N)(X ⊗ I_r + (vvᵀ)^Γ)`, the projector onto `{vec(SV) : S symmetric}`;
/// valid for UNTFs only.
pub fn vsym_projector(sys: &VectorSystem, tol: f64) -> Result<DenseMatrix> {
    require_untf(sys, tol)?;
    let (n, r) = (sys.n(), sys.r());
    let mut p = sys.gram().kron(&DenseMatrix::identity(r));
    p.axpy(1.0, &pt_outer(sys)?)?;
    Ok(p.scale(r as f64 / (2 * n) as f64).symmetrized())
}

/// Projector onto `V′sym = {vec(SV) : S symmetric, v_iᵀSv_i = 0}`.
///
/// ETFs with `r > 1` use the closed-form ETF blocks; other UNTFs use the general formula in
/// terms of `(X^{⊙2})⁻¹`.
pub fn vsym_prime_projector(sys: &VectorSystem, tol: f64) -> Result<DenseMatrix> {
    let report = analyze_frame(sys, tol)?;
    if report.is_etf && sys.r() > 1 && sys.n() > 1 {
        vsym_prime_projector_etf(sys, tol)
    } else {
        vsym_prime_projector_general(sys, tol)
    }
}

/// General `P_{V′sym}`: block `(i, j)` is
/// `(r/N)[½⟨v_i,v_j⟩I + ½v_jv_iᵀ − Σ_{kℓ} H_kℓ ⟨v_i,v_k⟩⟨v_j,v_ℓ⟩ v_kv_ℓᵀ]`, `H = (X^{⊙2})⁻¹`.
///
/// The correction term equals `F H Fᵀ` with columns `f_k = x_k ⊗ v_k` (`x_k` = column `k` of `X`).
pub fn vsym_prime_projector_general(sys: &VectorSystem, tol: f64) -> Result<DenseMatrix> {
    let mut p = vsym_projector(sys, tol)?;
    let (n, r) = (sys.n(), sys.r());
    let x = sys.gram();
    let had = DenseMatrix::from_fn(n, n, |i, j| x[(i, j)] * x[(i, j)]);
    let h = spd_inverse(&had, 1e-12).map_err(|_| Error::Invalid("X^{⊙2} is singular".into()))?;
    let cols: Vec<Vec<f64>> = (0..n).map(|k| kron_vec(&x.column(k), &sys.vector(k))).collect();
    let f = DenseMatrix::from_columns(&cols)?;
    let correction = f.matmul(&h)?.matmul(&f.transpose())?;
    p.axpy(-(r as f64) / n as f64, &correction)?;
    Ok(p.symmetrized())
}

/// ETF `P_{V′sym}`: block `(i, j)` is
/// `(N−r)/(N(r−1)) v_iv_jᵀ + (r/2N) v_jv_iᵀ + (r/2N)⟨v_i,v_j⟩I − r²(N−1)/(N²(r−1)) Σ_k ⟨v_i,v_k⟩⟨v_j,v_k⟩ v_kv_kᵀ`.
pub fn vsym_prime_projector_etf(sys: &VectorSystem, tol: f64) -> Result<DenseMatrix> {
    let (n, r) = (sys.n(), sys.r());
    if !analyze_frame(sys, tol)?.is_etf || r < 2 {
        return Err(Error::Invalid("the ETF formula needs an ETF with r > 1".into()));
    }
    let (nf, rf) = (n as f64, r as f64);
    let c1 = (nf - rf) / (nf * (rf - 1.0));
    let c2 = rf / (2.0 * nf);
    let c4 = rf * rf * (nf - 1.0) / (nf * nf * (rf - 1.0));
    let v = sys.stacked();
    let mut p = DenseMatrix::outer(&v, &v).scale(c1);
    p.axpy(c2, &pt_outer(sys)?)?;
    let x = sys.gram();
    p.axpy(c2, &x.kron(&DenseMatrix::identity(r)))?;
    let cols: Vec<Vec<f64>> = (0..n).map(|k| kron_vec(&x.column(k), &sys.vector(k))).collect();
    let f = DenseMatrix::from_columns(&cols)?;
    p.axpy(-c4, &f.matmul(&f.transpose())?)?;
    Ok(p.symmetrized())
}

/// Projector onto `V′sym` by Gram–Schmidt on `{vec(S_a V)}` for a basis `S_a` of
/// `{S symmetric : v_iᵀSv_i = 0}`; works for any system.
pub fn vsym_prime_projector_gram_schmidt(sys: &VectorSystem) -> Result<DenseMatrix> {
    let (n, r) = (sys.n(), sys.r());
    // Basis of symmetric matrices, as vectors of coefficients over E_ab + E_ba.
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|a| (a..r).map(move |b| (a, b))).collect();
    let sym_unit = |a: usize, b: usize| {
        DenseMatrix::from_fn(r, r, |p, q| if (p, q) == (a, b) || (p, q) == (b, a) { 1.0 } else { 0.0 })
    };
    // Constraint matrix C (N × dim): C_{i,(ab)} = v_iᵀ E_ab v_i.
    let dim = pairs.len();
    let c = DenseMatrix::from_fn(n, dim, |i, t| {
        let (a, b) = pairs[t];
        let vi = sys.vector(i);
        if a == b { vi[a] * vi[a] } else { 2.0 * vi[a] * vi[b] }
    });
    // Null space of C via eigenvectors of CᵀC with zero eigenvalue.
    let e = symmetric_eigh(&c.t_matmul(&c)?, 1e-14)?;
    let top = e.max().max(1.0);
    let mut images = Vec::new();
    for t in 0..dim {
        if e.values[t] > 1e-10 * top {
            continue;
        }
        let coeffs = e.vector(t);
        let mut s = DenseMatrix::zeros(r, r);
        for (u, &(a, b)) in pairs.iter().enumerate() {
            s.axpy(coeffs[u], &sym_unit(a, b))?;
        }
        images.push(s.matmul(sys.synthesis())?.vec());
    }
    let basis = orthonormalize(&images, 1e-9);
    Ok(crate::numkit::projector_from_basis(&basis, r * n))
}

/// Least-squares symmetric `S` with `vec(SV) ≈ w`: solves `S G + G S = W Vᵀ + V Wᵀ`
/// (`G = VVᵀ`, `W = unvec(w)`) in the eigenbasis of `G`.
pub fn recover_symmetric(w: &[f64], sys: &VectorSystem) -> Result<DenseMatrix> {
    let (n, r) = (sys.n(), sys.r());
    let wm = DenseMatrix::unvec(w, r, n)?;
    let v = sys.synthesis();
    let wv = wm.matmul(&v.transpose())?;
    let rhs = wv.add(&wv.transpose())?;
    let g = symmetric_eigh(&sys.frame_operator(), 1e-12)?;
    let q = &g.vectors;
    let ct = q.t_matmul(&rhs.matmul(q)?)?;
    let st = DenseMatrix::from_fn(r, r, |a, b| {
        let s = g.values[a] + g.values[b];
        if s.abs() > 1e-12 { ct[(a, b)] / s } else { 0.0 }
    });
    Ok(q.matmul(&st)?.matmul(&q.transpose())?.symmetrized())
}

/// The isometry `𝒱(S) = √(r/N)·vec(SV)` (isometric for UNTFs).
pub fn isometry_embed(s: &DenseMatrix, sys: &VectorSystem) -> Result<Vec<f64>> {
    let c = (sys.r() as f64 / sys.n() as f64).sqrt();
    Ok(s.matmul(sys.synthesis())?.vec().into_iter().map(|x| c * x).collect())
}

/// `M = vvᵀ + ((r−1)N/(r(r+1)/2 − N)) P_{V′sym}` for a non-maximal ETF with `r > 1`.
pub fn etf_witness(sys: &VectorSystem, tol: f64) -> Result<BlockWitness> {
    let (n, r) = (sys.n(), sys.r());
    if !analyze_frame(sys, tol)?.is_etf || r < 2 {
        return Err(Error::Invalid("etf_witness needs an ETF with r > 1".into()));
    }
    let bound = r * (r + 1) / 2;
    if n >= bound {
        return Err(Error::MaximalEtf { n, r, bound });
    }
    let coef = ((r - 1) * n) as f64 / (bound - n) as f64;
    let v = sys.stacked();
    let mut m = DenseMatrix::outer(&v, &v);
    m.axpy(coef, &vsym_prime_projector_etf(sys, tol)?)?;
    BlockWitness::new(m.symmetrized(), r)
}

/// Kind of a partial-transpose eigenvector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum PtKind {
    /// `d_i = z_i ⊗ y_i`, eigenvalue `σ_i²`.
    Diagonal(usize),
    /// `s_ij = (z_i⊗y_j + z_j⊗y_i)/√2`, eigenvalue `σ_iσ_j`.
    Symmetric(usize, usize),
    /// `a_ij = (z_i⊗y_j − z_j⊗y_i)/√2`, eigenvalue `−σ_iσ_j`.
    Antisymmetric(usize, usize),
}

/// Explicit spectral decomposition of `(vvᵀ)^Γ` for `v = vec(V)`.
#[derive(Clone, Debug)]
pub struct PtSpectrum {
    /// Singular values of `V`, descending (length `r`).
    pub sigma: Vec<f64>,
    /// Left singular vectors `y_i ∈ R^r`.
    pub y: Vec<Vec<f64>>,
    /// Right singular vectors `z_i ∈ R^N` (completed to an orthonormal set where `σ_i = 0`).
    pub z: Vec<Vec<f64>>,
    /// `(kind, eigenvalue, eigenvector)`.
    pub eigenpairs: Vec<(PtKind, f64, Vec<f64>)>,
}

impl PtSpectrum {
    /// `Σ λ w wᵀ` over the explicit eigenpairs.
    pub fn reconstruction(&self) -> DenseMatrix {
        let dim = self.eigenpairs.first().map_or(0, |e| e.2.len());
        let mut out = DenseMatrix::zeros(dim, dim);
        for (_, l, w) in &self.eigenpairs {
            out.axpy(*l, &DenseMatrix::outer(w, w)).expect("same shape");
        }
        out
    }

    /// `max |⟨w_a, w_b⟩ − δ_ab|` over the explicit eigenvectors.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, (_, _, wa)) in self.eigenpairs.iter().enumerate() {
            for (b, (_, _, wb)) in self.eigenpairs.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot(wa, wb) - target).abs());
            }
        }
        worst
    }
}

fn singular_triples(v: &DenseMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let (r, n) = (v.rows(), v.cols());
    let e = symmetric_eigh(&v.matmul(&v.transpose())?, 1e-14)?;
    let top = e.max().max(0.0);
    let mut sigma = Vec::with_capacity(r);
    let mut ys = Vec::with_capacity(r);
    let mut zs: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut missing = Vec::new();
    for k in 0..r {
        let y = e.vector(k);
        let s = e.values[k].max(0.0).sqrt();
        if e.values[k] > 1e-24 * top.max(f64::MIN_POSITIVE) && s > 0.0 {
            let vty = v.t_matmul(&DenseMatrix::from_columns(&[y.clone()])?)?.column(0);
            zs.push(vty.into_iter().map(|c| c / s).collect());
            sigma.push(s);
        } else {
            missing.push(zs.len());
            zs.push(Vec::new());
            sigma.push(0.0);
        }
        ys.push(y);
    }
    if !missing.is_empty() {
        let mut known: Vec<Vec<f64>> = zs.iter().filter(|z| !z.is_empty()).cloned().collect();
        let base = known.len();
        known.extend((0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()));
        let completed = orthonormalize(&known, 1e-8);
        for (slot, z) in missing.iter().zip(completed.into_iter().skip(base)) {
            zs[*slot] = z;
        }
    }
    Ok((sigma, ys, zs))
}

/// Spectral decomposition of `(vvᵀ)^Γ` from the singular value decomposition of `V` (`r ≤ N`).
pub fn rank_one_pt_spectrum(v: &DenseMatrix) -> Result<PtSpectrum> {
    let r = v.rows();
    if r > v.cols() {
        return Err(Error::Dimension(format!("need r ≤ N, got {r} × {}", v.cols())));
    }
    let (sigma, y, z) = singular_triples(v)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut eigenpairs = Vec::new();
    for i in 0..r {
        eigenpairs.push((PtKind::Diagonal(i), sigma[i] * sigma[i], kron_vec(&z[i], &y[i])));
    }
    for i in 0..r {
        for j in i + 1..r {
            let a = kron_vec(&z[i], &y[j]);
            let b = kron_vec(&z[j], &y[i]);
            let s: Vec<f64> = a.iter().zip(&b).map(|(p, q)| h * (p + q)).collect();
            let t: Vec<f64> = a.iter().zip(&b).map(|(p, q)| h * (p - q)).collect();
            let l = sigma[i] * sigma[j];
            eigenpairs.push((PtKind::Symmetric(i, j), l, s));
            eigenpairs.push((PtKind::Antisymmetric(i, j), -l, t));
        }
    }
    Ok(PtSpectrum { sigma, y, z, eigenpairs })
}

/// Result of [`vsym_kernel_check`].
#[derive(Clone, Debug, serde::Serialize)]
pub struct KernelReport {
    /// Smallest eigenvalue of `I_N ⊗ (VVᵀ) − (vvᵀ)^Γ`.
    pub min_eigenvalue: f64,
    /// Numerical kernel dimension.
    pub kernel_dim: usize,
    /// `r(r+1)/2`.
    pub expected_dim: usize,
    /// `‖P_explicit − P_numeric‖_max` between kernel projectors.
    pub basis_residual: f64,
    pub passed: bool,
}

/// Explicit orthonormal basis of `ker(I_N ⊗ VVᵀ − (vvᵀ)^Γ) = V_sym`: `z_i ⊗ y_i` and
/// `(σ_i z_i⊗y_j + σ_j z_j⊗y_i)/√(σ_i² + σ_j²)`.
pub fn vsym_kernel_basis(sys: &VectorSystem) -> Result<Vec<Vec<f64>>> {
    require_full_rank(sys)?;
    let r = sys.r();
    let (sigma, y, z) = singular_triples(sys.synthesis())?;
    let mut out = Vec::with_capacity(r * (r + 1) / 2);
    for i in 0..r {
        out.push(kron_vec(&z[i], &y[i]));
        for j in i + 1..r {
            let a = kron_vec(&z[i], &y[j]);
            let b = kron_vec(&z[j], &y[i]);
            let nrm = (sigma[i] * sigma[i] + sigma[j] * sigma[j]).sqrt();
            out.push(a.iter().zip(&b).map(|(p, q)| (sigma[i] * p + sigma[j] * q) / nrm).collect());
        }
    }
    Ok(out)
}

/// Verify `I_N ⊗ (VVᵀ) ⪰ (vvᵀ)^Γ`, the kernel dimension `r(r+1)/2`, and that the explicit
/// basis spans the numerically computed kernel.
pub fn vsym_kernel_check(sys: &VectorSystem, tol: f64) -> Result<KernelReport> {
    require_full_rank(sys)?;
    let (n, r) = (sys.n(), sys.r());
    let mut delta = DenseMatrix::identity(n).kron(&sys.frame_operator());
    delta.axpy(-1.0, &pt_outer(sys)?)?;
    let e = symmetric_eigh(&delta.symmetrized(), 1e-14)?;
    let top = e.values.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let kernel: Vec<Vec<f64>> =
        (0..r * n).filter(|&k| e.values[k].abs() <= RANK_RTOL * top).map(|k| e.vector(k)).collect();
    let numeric = crate::numkit::projector_from_basis(&kernel, r * n);
    let explicit_basis = vsym_kernel_basis(sys)?;
    let explicit = crate::numkit::projector_from_basis(&explicit_basis, r * n);
    let basis_residual = numeric.max_abs_diff(&explicit)?;
    let expected_dim = r * (r + 1) / 2;
    let min_eigenvalue = e.min();
    let passed = min_eigenvalue >= -tol && kernel.len() == expected_dim && basis_residual <= tol.max(1e-8);
    Ok(KernelReport { min_eigenvalue, kernel_dim: kernel.len(), expected_dim, basis_residual, passed })
}

/// Residual `‖(I − P)w‖` of `w` against a projector `P`.
pub fn projection_residual(p: &DenseMatrix, w: &[f64]) -> Result<f64> {
    let pw = p.matvec(w)?;
    Ok(norm(&w.iter().zip(&pw).map(|(a, b)| a - b).collect::<Vec<_>>()))
}

/// Projector onto `vec(pert(X)) = {vec(VᵀSV) : S symmetric, v_iᵀSv_i = 0}` computed as
/// `(r/N)(I ⊗ Vᵀ) P_{V′sym} (I ⊗ V)` for UNTFs, or by pseudo-inverse for other systems.
pub fn pert_projector(sys: &VectorSystem, tol: f64) -> Result<DenseMatrix> {
    let (n, r) = (sys.n(), sys.r());
    let v = sys.synthesis();
    let lift = DenseMatrix::identity(n).kron(v);
    if analyze_frame(sys, tol)?.is_untf {
        let pv = vsym_prime_projector(sys, tol)?;
        return Ok(lift.t_matmul(&pv.matmul(&lift)?)?.scale(r as f64 / n as f64).symmetrized());
    }
    // Image of V′sym under (I ⊗ Vᵀ), then its orthogonal projector.
    let pv = vsym_prime_projector_gram_schmidt(sys)?;
    let a = lift.t_matmul(&pv)?;
    let g = a.matmul(&a.transpose())?;
    let e = symmetric_eigh(&g, 1e-14)?;
    let top = e.max().max(f64::MIN_POSITIVE);
    let basis: Vec<Vec<f64>> = (0..n * n).filter(|&k| e.values[k] > 1e-10 * top).map(|k| e.vector(k)).collect();
    Ok(crate::numkit::projector_from_basis(&basis, n * n))
}

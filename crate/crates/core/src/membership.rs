//! Numerical membership oracles for the cut polytope `Cᴺ`, the elliptope `E₂ᴺ` and the
//! degree-4 generalized elliptope `E₄ᴺ`, and the two-dimensional cross-section emitter.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xorshift::XorShiftRng;

use crate::error::{Error, Result};
use crate::frames::VectorSystem;
use crate::numkit::{
    gram_factor, norm, symmetric_eigh, symmetric_eigh_from, symmetric_pinv, BlockLayout, DenseMatrix, Eigh,
};
use crate::separability::{all_cuts, CutDecomposition};
use crate::pseudomoments::Degree4Moments;
use crate::witnesses::{moments_to_witness, validate_witness, witness_to_moments, BlockWitness};

/// Default iteration budget of the iterative oracles.
pub const DEFAULT_MAX_ITER: usize = 5000;

/// Default number of angles of a cross-section.
pub const DEFAULT_ANGLES: usize = 64;

/// Largest `N` accepted by [`cut_membership`] (the linear oracle enumerates `2^{N−1}` cuts).
pub const MAX_CUT_N: usize = 16;

/// Window (iterations) over which a stalled projection gap signals infeasibility.
pub const STALL_WINDOW: usize = 200;

/// Bisection accuracy on radii.
pub const BISECTION_TOL: f64 = 1e-3;

/// Evidence attached to a `Member` verdict.
#[derive(Clone, Debug)]
pub enum MemberWitness {
    /// Convex combination of cuts.
    Cuts(CutDecomposition),
    /// Eigendecomposition showing `X ⪰ 0`.
    Eigen(Eigh),
    /// Block witness `M ∈ B(N, r)` with `Mv = Nv`.
    Block(BlockWitness),
}

/// Linear functional separating a candidate from a set: `⟨W, X⟩ < bound ≤ ⟨W, Q⟩` for every
/// `Q` in the set.
#[derive(Clone, Debug)]
pub struct Separator {
    pub w: DenseMatrix,
    pub bound: f64,
}

/// Verdict of an oracle.
#[derive(Clone, Debug)]
pub enum Status {
    Member(MemberWitness),
    /// Certified (or, for `E₄`, stably estimated) distance `gap` to the set.
    NonMember { gap: f64, separator: Option<Separator> },
    /// Neither criterion met; named residuals describe the final state.
    Inconclusive { residuals: Vec<(String, f64)> },
}

/// Verdict with bookkeeping.
#[derive(Clone, Debug)]
pub struct MembershipVerdict {
    pub status: Status,
    pub iterations: usize,
    pub runtime: Duration,
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self.status, Status::Member(_))
    }

    pub fn is_non_member(&self) -> bool {
        matches!(self.status, Status::NonMember { .. })
    }

    /// Named residual of an inconclusive verdict.
    pub fn residual(&self, name: &str) -> Option<f64> {
        match &self.status {
            Status::Inconclusive { residuals } => residuals.iter().find(|(k, _)| k == name).map(|(_, v)| *v),
            _ => None,
        }
    }

    /// Short label: `member`, `non-member` or `inconclusive`.
    pub fn label(&self) -> &'static str {
        match self.status {
            Status::Member(_) => "member",
            Status::NonMember { .. } => "non-member",
            Status::Inconclusive { .. } => "inconclusive",
        }
    }
}

fn verdict(status: Status, iterations: usize, start: Instant) -> MembershipVerdict {
    MembershipVerdict { status, iterations, runtime: start.elapsed() }
}

/// `X ∈ E₂ᴺ`: member iff `λ_min(X) ≥ −tol` and `max|diag(X) − 1| ≤ tol`.
pub fn e2_membership(x: &DenseMatrix, tol: f64) -> Result<MembershipVerdict> {
    let start = Instant::now();
    let e = symmetric_eigh(x, 1e-14)?;
    let diag = x.diag().iter().fold(0.0_f64, |m, d| m.max((d - 1.0).abs()));
    let min = e.min();
    let status = if min >= -tol && diag <= tol {
        Status::Member(MemberWitness::Eigen(e))
    } else {
        let separator = (min < -tol).then(|| {
            // ⟨wwᵀ, Q⟩ ≥ 0 on E₂ while ⟨wwᵀ, X⟩ = λ_min < 0.
            let w = e.vector(x.rows() - 1);
            Separator { w: DenseMatrix::outer(&w, &w), bound: 0.0 }
        });
        Status::NonMember { gap: (-min).max(diag), separator }
    };
    Ok(verdict(status, 1, start))
}

/// Upper-triangle coordinates `(i, j)`, `i < j`.
fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn cut_coords(x: &[i8], pairs: &[(usize, usize)]) -> Vec<f64> {
    pairs.iter().map(|&(i, j)| f64::from(x[i] * x[j])).collect()
}

/// `X ∈ Cᴺ` by pairwise Frank–Wolfe on `½‖P − X‖²_F` over `P ∈ Cᴺ`.
///
/// The linear oracle enumerates the `2^{N−1}` cuts with `x₁ = 1`. With `G = P − X`,
/// `m = min_x xᵀGx` gives `⟨G, Q⟩ ≥ m` on `Cᴺ`, so `dist(X, Cᴺ) ≥ (m − ⟨G, X⟩)/‖G‖_F`.
/// Member when `‖P − X‖_F ≤ tol` (the active set is returned as the decomposition);
/// NonMember when the bound reaches `10·tol` (the hyperplane `(G, m)` is returned).
pub fn cut_membership(x: &DenseMatrix, tol: f64, max_iter: usize) -> Result<MembershipVerdict> {
    let start = Instant::now();
    x.require_symmetric()?;
    let n = x.rows();
    if n > MAX_CUT_N {
        return Err(Error::Invalid(format!("cut membership enumerates 2^(N−1) cuts; N = {n} exceeds {MAX_CUT_N}")));
    }
    let diag = x.diag().iter().fold(0.0_f64, |m, d| m.max((d - 1.0).abs()));
    if diag > tol {
        return Ok(verdict(Status::NonMember { gap: diag, separator: None }, 0, start));
    }
    let pairs = upper_pairs(n);
    let target: Vec<f64> = pairs.iter().map(|&(i, j)| x[(i, j)]).collect();
    let cuts = all_cuts(n);
    let coords: Vec<Vec<f64>> = cuts.iter().map(|c| cut_coords(c, &pairs)).collect();
    // Full-matrix inner products count each off-diagonal pair twice.
    let ip = |a: &[f64], b: &[f64]| 2.0 * a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();

    let first = (0..cuts.len())
        .max_by(|&a, &b| ip(&coords[a], &target).total_cmp(&ip(&coords[b], &target)))
        .expect("at least one cut");
    let mut weights = vec![0.0; cuts.len()];
    weights[first] = 1.0;
    let mut p = coords[first].clone();
    let mut best_gap = 0.0_f64;
    let mut dist = f64::INFINITY;
    for iter in 0..=max_iter {
        let g: Vec<f64> = p.iter().zip(&target).map(|(a, b)| a - b).collect();
        dist = ip(&g, &g).sqrt();
        if dist <= tol {
            let (w, s): (Vec<f64>, Vec<Vec<i8>>) = weights
                .iter()
                .zip(&cuts)
                .filter(|(w, _)| **w > 1e-15)
                .map(|(w, c)| (*w, c.clone()))
                .unzip();
            let total: f64 = w.iter().sum();
            let dec = CutDecomposition::new(w.iter().map(|x| x / total).collect(), s)?;
            // Replay: re-sum the decomposition from scratch rather than trusting `p`.
            let resum = dec.gram().sub(x)?.frobenius();
            if resum <= 2.0 * tol {
                return Ok(verdict(Status::Member(MemberWitness::Cuts(dec)), iter, start));
            }
            let residuals = vec![("distance".to_string(), resum), ("separation".to_string(), best_gap)];
            return Ok(verdict(Status::Inconclusive { residuals }, iter, start));
        }
        let scores: Vec<f64> = coords.iter().map(|c| ip(&g, c)).collect();
        let toward = (0..cuts.len()).min_by(|&a, &b| scores[a].total_cmp(&scores[b])).expect("nonempty");
        let m = scores[toward];
        let gx = ip(&g, &target);
        let gap = (m - gx) / dist;
        best_gap = best_gap.max(gap);
        if gap >= 10.0 * tol {
            let mut w = DenseMatrix::zeros(n, n);
            for (t, &(i, j)) in pairs.iter().enumerate() {
                w[(i, j)] = g[t];
                w[(j, i)] = g[t];
            }
            return Ok(verdict(Status::NonMember { gap, separator: Some(Separator { w, bound: m }) }, iter, start));
        }
        if iter == max_iter {
            break;
        }
        let away = (0..cuts.len())
            .filter(|&k| weights[k] > 0.0)
            .max_by(|&a, &b| scores[a].total_cmp(&scores[b]))
            .expect("active set is nonempty");
        if away == toward {
            break;
        }
        let d: Vec<f64> = coords[toward].iter().zip(&coords[away]).map(|(a, b)| a - b).collect();
        let dd = ip(&d, &d);
        let gamma = (-ip(&g, &d) / dd).clamp(0.0, weights[away]);
        if gamma <= 0.0 {
            break;
        }
        weights[toward] += gamma;
        weights[away] -= gamma;
        if weights[away] < 1e-16 {
            weights[away] = 0.0;
        }
        for (pi, di) in p.iter_mut().zip(&d) {
            *pi += gamma * di;
        }
    }
    let residuals = vec![("distance".to_string(), dist), ("separation".to_string(), best_gap)];
    Ok(verdict(Status::Inconclusive { residuals }, max_iter, start))
}

/// Orthogonal projection onto the affine set
/// `L = {M symmetric : M_[ii] = I, M_[ij] = M_[ij]ᵀ, Mv = Nv}`.
///
/// Free variables are the symmetric blocks `S_ij`, `i < j` (weight 2 in the Frobenius norm).
/// The constraint map is `𝒜(S)_i = Σ_{j≠i} S_ij v_j = (N − 1)v_i`, with adjoint
/// `(𝒜*λ)_ij = ½ sym(v_j λ_iᵀ + v_i λ_jᵀ)`; `(𝒜𝒜*)⁺` is precomputed once.
struct AffineProjector {
    layout: BlockLayout,
    v: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    gram_pinv: DenseMatrix,
}

fn sym(a: &DenseMatrix) -> DenseMatrix {
    a.symmetrized()
}

impl AffineProjector {
    fn new(sys: &VectorSystem) -> Result<Self> {
        let (n, r) = (sys.n(), sys.r());
        let layout = BlockLayout::new(n, r);
        let v = sys.vectors();
        let rhs: Vec<f64> = v.iter().flat_map(|vi| vi.iter().map(|c| (n as f64 - 1.0) * c)).collect();
        let mut me = Self { layout, v, rhs, gram_pinv: DenseMatrix::zeros(0, 0) };
        let dim = r * n;
        let mut cols = Vec::with_capacity(dim);
        for t in 0..dim {
            let mut e = vec![0.0; dim];
            e[t] = 1.0;
            cols.push(me.apply(&me.adjoint(&e)));
        }
        let aat = DenseMatrix::from_columns(&cols)?.symmetrized();
        me.gram_pinv = symmetric_pinv(&aat, 1e-12)?;
        Ok(me)
    }

    fn n(&self) -> usize {
        self.layout.n
    }

    fn r(&self) -> usize {
        self.layout.r
    }

    /// Blocks `S_ij` (`i < j`) indexed by pair position.
    fn pair_index(&self, i: usize, j: usize) -> usize {
        let n = self.n();
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }

    fn apply(&self, s: &[DenseMatrix]) -> Vec<f64> {
        let (n, r) = (self.n(), self.r());
        let mut out = vec![0.0; r * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let b = &s[self.pair_index(i.min(j), i.max(j))];
                let t = b.matvec(&self.v[j]).expect("shape");
                for a in 0..r {
                    out[i * r + a] += t[a];
                }
            }
        }
        out
    }

    fn adjoint(&self, lambda: &[f64]) -> Vec<DenseMatrix> {
        let (n, r) = (self.n(), self.r());
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let li = &lambda[i * r..(i + 1) * r];
                let lj = &lambda[j * r..(j + 1) * r];
                let mut m = DenseMatrix::outer(&self.v[j], li);
                m.axpy(1.0, &DenseMatrix::outer(&self.v[i], lj)).expect("shape");
                out.push(sym(&m).scale(0.5));
            }
        }
        out
    }

    fn project(&self, m: &DenseMatrix) -> DenseMatrix {
        let (n, r) = (self.n(), self.r());
        let mut s: Vec<DenseMatrix> = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let b = self.layout.block(m, i, j);
                let bt = self.layout.block(m, j, i);
                s.push(b.add(&bt.transpose()).expect("shape").scale(0.5).symmetrized());
            }
        }
        let resid: Vec<f64> = self.apply(&s).iter().zip(&self.rhs).map(|(a, b)| a - b).collect();
        let lambda = self.gram_pinv.matvec(&resid).expect("shape");
        let corr = self.adjoint(&lambda);
        let mut out = DenseMatrix::zeros(r * n, r * n);
        let ident = DenseMatrix::identity(r);
        for i in 0..n {
            self.layout.set_block(&mut out, i, i, &ident);
            for j in i + 1..n {
                let t = self.pair_index(i, j);
                let mut b = s[t].clone();
                b.axpy(-1.0, &corr[t]).expect("shape");
                self.layout.set_block(&mut out, i, j, &b);
                self.layout.set_block(&mut out, j, i, &b);
            }
        }
        out
    }
}

fn psd_part(e: &Eigh) -> DenseMatrix {
    e.reconstruct_with(|l| l.max(0.0))
}

/// `Gram(sys) ∈ E₄ᴺ` by Dykstra's alternating projections between the PSD cone and the
/// affine set `L` of block matrices with identity diagonal blocks, symmetric off-diagonal
/// blocks and `Mv = Nv`.
///
/// Only the PSD step carries a Dykstra correction (`L` is affine). Member when the two
/// iterates are within `tol` (Frobenius); the returned witness is the iterate in `L`, which
/// satisfies `Mv = Nv` exactly and has `λ_min ≥ −tol`. NonMember when the gap exceeds
/// `10·tol` and decreased by at most a relative `1e−3` over the last [`STALL_WINDOW`]
/// iterations.
pub fn e4_feasibility(sys: &VectorSystem, tol: f64, max_iter: usize) -> Result<MembershipVerdict> {
    let start = Instant::now();
    sys.require_unit_norm(tol.max(1e-10))?;
    let r = sys.r();
    let proj = AffineProjector::new(sys)?;
    let dim = r * sys.n();
    let mut x = proj.project(&DenseMatrix::identity(dim));
    let mut p = DenseMatrix::zeros(dim, dim);
    let mut basis = DenseMatrix::identity(dim);
    let mut history: Vec<f64> = Vec::with_capacity(max_iter.min(100_000));
    for iter in 1..=max_iter {
        let xp = x.add(&p)?;
        let e = symmetric_eigh_from(&xp, &basis, 1e-12)?;
        basis = e.vectors.clone();
        let y = psd_part(&e);
        p = xp.sub(&y)?;
        x = proj.project(&y);
        let gap = x.sub(&y)?.frobenius();
        history.push(gap);
        if gap <= tol {
            let w = BlockWitness::new(x.symmetrized(), r)?;
            // Replay: the iterate must validate on its own.
            let report = validate_witness(&w, tol.max(1e-9) * 10.0)?;
            if report.passed {
                return Ok(verdict(Status::Member(MemberWitness::Block(w)), iter, start));
            }
        }
        if iter > STALL_WINDOW && gap > 10.0 * tol {
            let before = history[iter - 1 - STALL_WINDOW];
            if before - gap <= 1e-3 * before {
                return Ok(verdict(Status::NonMember { gap, separator: None }, iter, start));
            }
        }
    }
    let gap = history.last().copied().unwrap_or(f64::INFINITY);
    let min_eig = symmetric_eigh(&x, 1e-12)?.min();
    let residuals = vec![("gap".to_string(), gap), ("min_eigenvalue".to_string(), min_eig)];
    Ok(verdict(Status::Inconclusive { residuals }, max_iter, start))
}

/// Affine set of reduced degree-4 moment matrices extending a fixed `X`.
///
/// Rows and columns are indexed by `∅` and the pairs `{i, j}`, `i < j`; entry `(S, T)` is the
/// pseudomoment of the symmetric difference `S Δ T`. Entries with `|S Δ T| ≤ 2` are fixed by
/// `X`; the `C(N, 4)` four-set moments are free, each shared by the six positions of its class.
struct ReducedMoments {
    n: usize,
    sets: Vec<Vec<usize>>,
    /// Per upper-triangle position: fixed value or four-set class.
    slots: Vec<(usize, usize, Slot)>,
    classes: usize,
}

#[derive(Clone, Copy)]
enum Slot {
    Fixed(f64),
    Free(usize),
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().filter(|x| !b.contains(x)).chain(b.iter().filter(|x| !a.contains(x))).copied().collect();
    out.sort_unstable();
    out
}

impl ReducedMoments {
    fn new(x: &DenseMatrix) -> Self {
        let n = x.rows();
        let mut sets = vec![Vec::new()];
        sets.extend(upper_pairs(n).into_iter().map(|(i, j)| vec![i, j]));
        let mut class_of: std::collections::BTreeMap<Vec<usize>, usize> = Default::default();
        let mut slots = Vec::new();
        for a in 0..sets.len() {
            for b in a..sets.len() {
                let d = symmetric_difference(&sets[a], &sets[b]);
                let slot = match d.len() {
                    0 => Slot::Fixed(1.0),
                    2 => Slot::Fixed(x[(d[0], d[1])]),
                    _ => {
                        let next = class_of.len();
                        Slot::Free(*class_of.entry(d).or_insert(next))
                    }
                };
                slots.push((a, b, slot));
            }
        }
        Self { n, sets, slots, classes: class_of.len() }
    }

    fn dim(&self) -> usize {
        self.sets.len()
    }

    /// Orthogonal projection: reset fixed entries, average each free class.
    fn project(&self, m: &DenseMatrix) -> DenseMatrix {
        let mut sum = vec![0.0; self.classes];
        let mut count = vec![0.0; self.classes];
        for &(a, b, slot) in &self.slots {
            if let Slot::Free(c) = slot {
                // Off-diagonal positions appear twice in the Frobenius norm.
                let w = if a == b { 1.0 } else { 2.0 };
                sum[c] += w * 0.5 * (m[(a, b)] + m[(b, a)]);
                count[c] += w;
            }
        }
        let mut out = DenseMatrix::zeros(self.dim(), self.dim());
        for &(a, b, slot) in &self.slots {
            let v = match slot {
                Slot::Fixed(v) => v,
                Slot::Free(c) => sum[c] / count[c],
            };
            out[(a, b)] = v;
            out[(b, a)] = v;
        }
        out
    }

    /// Full `N² × N²` pair-indexed matrix `Y` from a reduced matrix.
    fn expand(&self, m: &DenseMatrix) -> DenseMatrix {
        let n = self.n;
        let index = |i: usize, j: usize| -> usize {
            if i == j {
                0
            } else {
                let (a, b) = (i.min(j), i.max(j));
                1 + a * n - a * (a + 1) / 2 + (b - a - 1)
            }
        };
        DenseMatrix::from_fn(n * n, n * n, |p, q| m[(index(p / n, p % n), index(q / n, q % n))])
    }
}

/// `X ∈ E₄ᴺ` for a Gram matrix given directly.
///
/// Runs Dykstra's alternating projections between the PSD cone and the affine set of
/// reduced degree-4 moment matrices extending `X` (indexed by `∅` and pairs, dimension
/// `1 + N(N−1)/2`). Unlike the `Mv = Nv` face used by [`e4_feasibility`], this set has
/// positive-definite points whenever `X` is interior, so convergence is linear away from
/// the boundary. A Member verdict expands the iterate to `Y`, converts it with
/// [`moments_to_witness`] and returns the replay-validated [`BlockWitness`]; stopping rules
/// are those of [`e4_feasibility`].
pub fn e4_membership(x: &DenseMatrix, tol: f64, max_iter: usize) -> Result<MembershipVerdict> {
    let start = Instant::now();
    let e2 = e2_membership(x, tol)?;
    if !e2.is_member() {
        return Ok(e2);
    }
    let red = ReducedMoments::new(&x.symmetrized());
    let dim = red.dim();
    let mut cur = red.project(&DenseMatrix::identity(dim));
    let mut p = DenseMatrix::zeros(dim, dim);
    let mut basis = DenseMatrix::identity(dim);
    let mut history: Vec<f64> = Vec::with_capacity(max_iter.min(100_000));
    for iter in 1..=max_iter {
        let xp = cur.add(&p)?;
        let e = symmetric_eigh_from(&xp, &basis, 1e-13)?;
        basis = e.vectors.clone();
        let y = psd_part(&e);
        p = xp.sub(&y)?;
        cur = red.project(&y);
        let gap = cur.sub(&y)?.frobenius();
        history.push(gap);
        if gap <= tol {
            if let Some(w) = reduced_to_witness(&red, &cur, x, tol)? {
                return Ok(verdict(Status::Member(MemberWitness::Block(w)), iter, start));
            }
        }
        if iter > STALL_WINDOW && gap > 10.0 * tol {
            let before = history[iter - 1 - STALL_WINDOW];
            if before - gap <= 1e-3 * before {
                return Ok(verdict(Status::NonMember { gap, separator: None }, iter, start));
            }
        }
    }
    let gap = history.last().copied().unwrap_or(f64::INFINITY);
    let min_eig = symmetric_eigh(&cur, 1e-12)?.min();
    let residuals = vec![("gap".to_string(), gap), ("min_eigenvalue".to_string(), min_eig)];
    Ok(verdict(Status::Inconclusive { residuals }, max_iter, start))
}

/// Witness replay for a converged reduced moment matrix: expand, convert, re-validate.
fn reduced_to_witness(red: &ReducedMoments, m: &DenseMatrix, x: &DenseMatrix, tol: f64) -> Result<Option<BlockWitness>> {
    let check = 10.0 * tol.max(1e-9);
    let y = Degree4Moments::new(red.expand(m))?;
    let mut v = gram_factor(x, 1e-10)?;
    for j in 0..x.rows() {
        let c = v.column(j);
        let nrm = norm(&c);
        v.set_column(j, &c.iter().map(|a| a / nrm).collect::<Vec<_>>());
    }
    let sys = VectorSystem::new(v);
    let w = match moments_to_witness(&y, &sys, check) {
        Ok(w) => w,
        Err(_) => return Ok(None),
    };
    let report = validate_witness(&w, check)?;
    Ok((report.passed && witness_to_moments(&w, &sys, check).is_ok()).then_some(w))
}

/// Membership target of [`cross_section`] and [`ray_radii`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    Cut,
    E4,
    E2,
}

/// Tolerances and budgets of the ray bisections.
#[derive(Clone, Copy, Debug)]
pub struct RayOptions {
    /// Oracle tolerance.
    pub tol: f64,
    /// Iteration budget per oracle call.
    pub max_iter: usize,
    /// Bisection accuracy on the radius.
    pub bisection_tol: f64,
    /// Inconclusive oracle calls count as inside when their residual is at most this.
    pub accept_residual: f64,
}

impl Default for RayOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_iter: 2000, bisection_tol: BISECTION_TOL, accept_residual: 1e-5 }
    }
}

fn inside(kind: SetKind, x: &DenseMatrix, opts: &RayOptions) -> Result<bool> {
    let v = match kind {
        SetKind::E2 => e2_membership(x, opts.tol)?,
        SetKind::Cut => cut_membership(x, opts.tol, opts.max_iter)?,
        SetKind::E4 => e4_membership(x, opts.tol, opts.max_iter)?,
    };
    Ok(match &v.status {
        Status::Member(_) => true,
        Status::NonMember { .. } => false,
        Status::Inconclusive { .. } => {
            let r = v.residual("distance").or_else(|| v.residual("gap")).unwrap_or(f64::INFINITY);
            r <= opts.accept_residual
        }
    })
}

/// Bisection for the boundary on `[lo, hi]`, `lo` known inside; returns the final bracket
/// `(last inside, first outside)` (equal when `hi` itself is inside).
fn bisect(kind: SetKind, a: &DenseMatrix, lo: f64, hi: f64, opts: &RayOptions) -> Result<(f64, f64)> {
    let n = a.rows();
    let point = |t: f64| {
        let mut x = DenseMatrix::identity(n);
        x.axpy(t, a).expect("same shape");
        x
    };
    if inside(kind, &point(hi), opts)? {
        return Ok((hi, hi));
    }
    let top = hi;
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > opts.bisection_tol {
        let mid = 0.5 * (lo + hi);
        if inside(kind, &point(mid), opts)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Convexity makes the predicate an interval on the ray; a point past the boundary
    // testing inside means an oracle misjudged one of the two.
    if hi < top && inside(kind, &point(0.5 * (hi + top)), opts)? {
        return Err(Error::Invalid(format!(
            "{kind:?} membership along the ray is not an interval: inside again beyond t = {hi}"
        )));
    }
    Ok((lo, hi))
}

/// Boundary radii `(ρ_C, ρ_E4, ρ_E2)` along the ray `I + t·A`, `t ≥ 0`, each the midpoint
/// of a bisection bracket of width at most `opts.bisection_tol`.
///
/// `E₂` is bisected on `[0, T]` with `T = 1.01/|λ_min(A)|`, just beyond its boundary; `C` on
/// `[0, ρ_E2]`. `E₄` is bisected on `[t_C, ρ_E2]` where `t_C` is the last point with a cut
/// decomposition: lifting that decomposition by point masses gives a valid degree-4
/// extension, so `t_C` is certified inside `E₄` and the slowly converging `E₄` oracle is
/// only consulted beyond the cut polytope.
pub fn ray_radii(a: &DenseMatrix, opts: &RayOptions) -> Result<(f64, f64, f64)> {
    a.require_symmetric()?;
    if a.diag().iter().any(|d| d.abs() > 1e-12) {
        return Err(Error::Invalid("direction must have zero diagonal".into()));
    }
    let lmin = symmetric_eigh(a, 1e-14)?.min();
    if lmin >= 0.0 {
        return Err(Error::Invalid("a zero-diagonal nonzero direction has a negative eigenvalue".into()));
    }
    let top = 1.01 / lmin.abs();
    let mid = |(lo, hi): (f64, f64)| 0.5 * (lo + hi);
    let e2 = bisect(SetKind::E2, a, 0.0, top, opts)?;
    let c = bisect(SetKind::Cut, a, 0.0, e2.1, opts)?;
    let e4 = bisect(SetKind::E4, a, c.0, e2.1, opts)?;
    Ok((mid(c), mid(e4), mid(e2)))
}

/// Two Frobenius-orthonormal symmetric zero-diagonal directions drawn from
/// `XorShiftRng::seed_from_u64(seed)` with standard Gaussian upper-triangle entries
/// (row-major order of `(i, j)`, `i < j`; first direction first).
pub fn random_directions(n: usize, seed: u64) -> Result<(DenseMatrix, DenseMatrix)> {
    let mut rng = XorShiftRng::seed_from_u64(seed);
    let pairs = upper_pairs(n);
    if pairs.len() < 2 {
        return Err(Error::Invalid("need N ≥ 3 for two independent directions".into()));
    }
    let draw = |rng: &mut XorShiftRng| -> Vec<f64> { pairs.iter().map(|_| StandardNormal.sample(rng)).collect() };
    let g1 = draw(&mut rng);
    let g2 = draw(&mut rng);
    // Full-matrix Frobenius inner product = 2 × upper-triangle dot product.
    let ip = |a: &[f64], b: &[f64]| 2.0 * a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let n1 = ip(&g1, &g1).sqrt();
    let u1: Vec<f64> = g1.iter().map(|x| x / n1).collect();
    let c = ip(&g2, &u1);
    let w: Vec<f64> = g2.iter().zip(&u1).map(|(a, b)| a - c * b).collect();
    let n2 = ip(&w, &w).sqrt();
    let u2: Vec<f64> = w.iter().map(|x| x / n2).collect();
    let to_matrix = |u: &[f64]| {
        let mut m = DenseMatrix::zeros(n, n);
        for (t, &(i, j)) in pairs.iter().enumerate() {
            m[(i, j)] = u[t];
            m[(j, i)] = u[t];
        }
        m
    };
    Ok((to_matrix(&u1), to_matrix(&u2)))
}

/// Boundary radii of `C`, `E₄`, `E₂` in the plane `I + span(A₁, A₂)`.
#[derive(Clone, Debug)]
pub struct CrossSection {
    pub n: usize,
    pub a1: DenseMatrix,
    pub a2: DenseMatrix,
    pub theta: Vec<f64>,
    pub radius_cut: Vec<f64>,
    pub radius_e4: Vec<f64>,
    pub radius_e2: Vec<f64>,
}

impl CrossSection {
    /// CSV with header `theta,radius_cut,radius_e4,radius_e2`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("theta,radius_cut,radius_e4,radius_e2\n");
        for k in 0..self.theta.len() {
            s.push_str(&format!("{},{},{},{}\n", self.theta[k], self.radius_cut[k], self.radius_e4[k], self.radius_e2[k]));
        }
        s
    }

    /// Largest violation of `ρ_C ≤ ρ_E4 ≤ ρ_E2` over all angles (0 when nested).
    pub fn nesting_violation(&self) -> f64 {
        (0..self.theta.len()).fold(0.0_f64, |m, k| {
            m.max(self.radius_cut[k] - self.radius_e4[k]).max(self.radius_e4[k] - self.radius_e2[k])
        })
    }
}

/// Radii along `I + t(cos θ·A₁ + sin θ·A₂)` for `angles` equally spaced `θ ∈ [0, 2π)`.
pub fn cross_section(a1: &DenseMatrix, a2: &DenseMatrix, angles: usize, opts: &RayOptions) -> Result<CrossSection> {
    let n = a1.rows();
    for a in [a1, a2] {
        if a.rows() != n || !a.is_square() {
            return Err(Error::Dimension("directions must be N × N".into()));
        }
        if a.diag().iter().any(|d| d.abs() > 1e-12) {
            return Err(Error::Invalid("directions must have zero diagonal".into()));
        }
    }
    let (n11, n22, n12) = (a1.frobenius_dot(a1)?, a2.frobenius_dot(a2)?, a1.frobenius_dot(a2)?);
    if (n11 - 1.0).abs() > 1e-9 || (n22 - 1.0).abs() > 1e-9 || n12.abs() > 1e-9 {
        return Err(Error::Invalid("directions must be Frobenius-orthonormal".into()));
    }
    let mut out = CrossSection {
        n,
        a1: a1.clone(),
        a2: a2.clone(),
        theta: Vec::with_capacity(angles),
        radius_cut: Vec::with_capacity(angles),
        radius_e4: Vec::with_capacity(angles),
        radius_e2: Vec::with_capacity(angles),
    };
    for k in 0..angles {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / angles as f64;
        let mut a = a1.scale(theta.cos());
        a.axpy(theta.sin(), a2)?;
        let (rc, re4, re2) = ray_radii(&a, opts)?;
        out.theta.push(theta);
        out.radius_cut.push(rc);
        out.radius_e4.push(re4);
        out.radius_e2.push(re2);
    }
    Ok(out)
}

//! Unit-norm tight frames, equiangular tight frames and the ETF ↔ strongly regular graph
//! correspondence.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::numkit::{
    gram_factor, int, ratio, symmetric_eigh, DenseMatrix, Rational, RationalMatrix,
};

/// `N` vectors in `R^r`, stored as the columns of the synthesis matrix `V ∈ R^{r×N}`,
/// optionally with their exact Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSystem {
    v: DenseMatrix,
    gram_exact: Option<RationalMatrix>,
}

impl VectorSystem {
    /// System whose vectors are the columns of `v`.
    pub fn new(v: DenseMatrix) -> Self {
        Self { v, gram_exact: None }
    }

    /// System with an exact Gram matrix; checks `VᵀV` against it within `1e-8`.
    pub fn with_exact_gram(v: DenseMatrix, gram: RationalMatrix) -> Result<Self> {
        let n = v.cols();
        if gram.rows() != n || gram.cols() != n {
            return Err(Error::Dimension(format!("exact Gram is {}×{}, expected {n}×{n}", gram.rows(), gram.cols())));
        }
        let diff = v.t_matmul(&v)?.max_abs_diff(&gram.to_dense())?;
        if diff > 1e-8 {
            return Err(Error::Invalid(format!("vectors disagree with exact Gram by {diff:e}")));
        }
        Ok(Self { v, gram_exact: Some(gram) })
    }

    /// Orthonormal basis `e_1, …, e_n` of `R^n`.
    pub fn standard_basis(n: usize) -> Self {
        Self { v: DenseMatrix::identity(n), gram_exact: Some(RationalMatrix::identity(n)) }
    }

    /// One-dimensional system `v_i = x_i` for a sign vector `x ∈ {±1}^N`.
    pub fn from_signs(x: &[i8]) -> Self {
        let v = DenseMatrix::from_fn(1, x.len(), |_, j| f64::from(x[j]));
        let g = RationalMatrix::from_fn(x.len(), x.len(), |i, j| int(i64::from(x[i]) * i64::from(x[j])));
        Self { v, gram_exact: Some(g) }
    }

    /// Number of vectors `N`.
    pub fn n(&self) -> usize {
        self.v.cols()
    }

    /// Ambient dimension `r`.
    pub fn r(&self) -> usize {
        self.v.rows()
    }

    /// Synthesis matrix `V` (`r × N`).
    pub fn synthesis(&self) -> &DenseMatrix {
        &self.v
    }

    /// Vector `v_i`.
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.v.column(i)
    }

    /// All vectors.
    pub fn vectors(&self) -> Vec<Vec<f64>> {
        (0..self.n()).map(|i| self.vector(i)).collect()
    }

    /// Floating Gram matrix; taken from the exact Gram when present.
    pub fn gram(&self) -> DenseMatrix {
        match &self.gram_exact {
            Some(g) => g.to_dense(),
            None => self.v.t_matmul(&self.v).expect("VᵀV is always defined"),
        }
    }

    /// Exact Gram matrix, if known.
    pub fn exact_gram(&self) -> Option<&RationalMatrix> {
        self.gram_exact.as_ref()
    }

    /// Stacked vector `v = vec(V) ∈ R^{rN}`.
    pub fn stacked(&self) -> Vec<f64> {
        self.v.vec()
    }

    /// Frame operator `V Vᵀ = Σ v_i v_iᵀ`.
    pub fn frame_operator(&self) -> DenseMatrix {
        self.v.matmul(&self.v.transpose()).expect("V Vᵀ is always defined")
    }

    /// `max_i |‖v_i‖ − 1|`.
    pub fn unit_norm_defect(&self) -> f64 {
        (0..self.n()).map(|i| (crate::numkit::norm(&self.vector(i)) - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Error unless every vector has unit norm within `tol`.
    pub fn require_unit_norm(&self, tol: f64) -> Result<()> {
        let d = self.unit_norm_defect();
        if d > tol {
            return Err(Error::Invalid(format!("vectors are not unit norm (defect {d:e})")));
        }
        Ok(())
    }

    /// Same vectors embedded in `R^{r_new}` by zero padding.
    pub fn embed(&self, r_new: usize) -> Result<Self> {
        if r_new < self.r() {
            return Err(Error::Dimension(format!("cannot embed R^{} into R^{r_new}", self.r())));
        }
        let v = DenseMatrix::from_fn(r_new, self.n(), |i, j| if i < self.r() { self.v[(i, j)] } else { 0.0 });
        Ok(Self { v, gram_exact: self.gram_exact.clone() })
    }

    /// Copy with vector `i` negated.
    pub fn negate(&self, i: usize) -> Self {
        let mut out = self.clone();
        for k in 0..self.r() {
            out.v[(k, i)] = -out.v[(k, i)];
        }
        if let Some(g) = &mut out.gram_exact {
            for j in 0..self.n() {
                if j != i {
                    g[(i, j)] = -g[(i, j)].clone();
                    g[(j, i)] = -g[(j, i)].clone();
                }
            }
        }
        out
    }

    /// Sign of `⟨v_i, v_j⟩`, exact when the exact Gram is known; 0 when `|⟨v_i, v_j⟩| ≤ tol`.
    pub fn inner_sign(&self, i: usize, j: usize, tol: f64) -> i8 {
        match &self.gram_exact {
            Some(g) => {
                let x = &g[(i, j)];
                if x.is_positive() {
                    1
                } else if x.is_negative() {
                    -1
                } else {
                    0
                }
            }
            None => {
                let x = crate::numkit::dot(&self.vector(i), &self.vector(j));
                if x > tol {
                    1
                } else if x < -tol {
                    -1
                } else {
                    0
                }
            }
        }
    }
}

/// Summary of the tight-frame and equiangularity properties of a unit-norm system.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct FrameReport {
    /// `Σ_i Σ_j ⟨v_i, v_j⟩²`.
    pub frame_potential: f64,
    pub is_untf: bool,
    /// `max_{i≠j} |⟨v_i, v_j⟩|`.
    pub coherence_max: f64,
    pub is_etf: bool,
    /// `√((N − r)/(r(N − 1)))`, and 0 for `N = 1`.
    pub welch_bound: f64,
}

/// Welch lower bound on the coherence of `n` unit vectors in `R^r`.
pub fn welch_bound(n: usize, r: usize) -> f64 {
    if n <= 1 || n <= r {
        return 0.0;
    }
    (((n - r) as f64) / ((r * (n - 1)) as f64)).sqrt()
}

/// Frame potential, UNTF and ETF tests.
///
/// A system is a UNTF when its frame potential is `N²/r` within `tol · N²/r`, and an ETF when
/// it is a UNTF whose off-diagonal Gram entries share one absolute value (exactly when the
/// exact Gram is known, else within `1e-10`).
pub fn analyze_frame(sys: &VectorSystem, tol: f64) -> Result<FrameReport> {
    sys.require_unit_norm(tol)?;
    let (n, r) = (sys.n(), sys.r());
    let x = sys.gram();
    let frame_potential: f64 = x.as_slice().iter().map(|a| a * a).sum();
    let target = (n * n) as f64 / r as f64;
    let is_untf = (frame_potential - target).abs() <= tol * target;
    let mut coherence_max: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            coherence_max = coherence_max.max(x[(i, j)].abs());
        }
    }
    let equiangular = match sys.exact_gram() {
        Some(g) if n > 1 => {
            let first = g[(0, 1)].abs();
            (0..n).all(|i| (i + 1..n).all(|j| g[(i, j)].abs() == first))
        }
        _ => {
            let mut lo = f64::INFINITY;
            let mut hi: f64 = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    lo = lo.min(x[(i, j)].abs());
                    hi = hi.max(x[(i, j)].abs());
                }
            }
            n <= 1 || hi - lo <= 1e-10
        }
    };
    Ok(FrameReport {
        frame_potential,
        is_untf,
        coherence_max,
        is_etf: is_untf && equiangular,
        welch_bound: welch_bound(n, r),
    })
}

/// The three equivalent UNTF conditions, evaluated separately:
/// (1) `V Vᵀ = (N/r) I`, (2) the Gram spectrum lies in `{0, N/r}`, (3) potential `= N²/r`.
pub fn untf_conditions(sys: &VectorSystem, tol: f64) -> Result<[bool; 3]> {
    let (n, r) = (sys.n() as f64, sys.r() as f64);
    let scale = n / r;
    let c1 = sys
        .frame_operator()
        .max_abs_diff(&DenseMatrix::identity(sys.r()).scale(scale))?
        <= tol * scale;
    let e = symmetric_eigh(&sys.gram(), 1e-12)?;
    let c2 = e.values.iter().all(|&l| l.abs() <= tol * scale || (l - scale).abs() <= tol * scale);
    let fp: f64 = sys.gram().as_slice().iter().map(|a| a * a).sum();
    let c3 = (fp - n * scale).abs() <= tol * n * scale;
    Ok([c1, c2, c3])
}

/// Exact Gram matrix `X^(N) = (1 + 1/(N−1)) I − (1/(N−1)) 𝟙𝟙ᵀ` of the simplex ETF.
pub fn simplex_gram(n: usize) -> RationalMatrix {
    let off = ratio(-1, n as i64 - 1);
    RationalMatrix::from_fn(n, n, |i, j| if i == j { Rational::one() } else { off.clone() })
}

/// Simplex ETF: `N` unit vectors in `R^{N−1}` pointing to the vertices of a regular simplex.
pub fn simplex_etf(n: usize) -> Result<VectorSystem> {
    if n < 3 {
        return Err(Error::Invalid(format!("simplex ETF needs N ≥ 3, got {n}")));
    }
    let g = simplex_gram(n);
    let v = gram_factor(&g.to_dense(), 1e-10)?;
    VectorSystem::with_exact_gram(v, g)
}

/// The 28 two-element subsets of `{0, …, 7}` in lexicographic order.
pub fn pairs_of_eight() -> Vec<(usize, usize)> {
    (0..8).flat_map(|i| (i + 1..8).map(move |j| (i, j))).collect()
}

/// Orthonormal Helmert basis `h_1, …, h_{m−1}` of `𝟙^⊥ ⊂ R^m`:
/// `h_k = (1, …, 1, −k, 0, …, 0)/√(k(k+1))` with `k` leading ones.
pub fn helmert_basis(m: usize) -> Vec<Vec<f64>> {
    (1..m)
        .map(|k| {
            let s = ((k * (k + 1)) as f64).sqrt();
            (0..m)
                .map(|i| match i.cmp(&k) {
                    std::cmp::Ordering::Less => 1.0 / s,
                    std::cmp::Ordering::Equal => -(k as f64) / s,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect()
}

/// An equiangular tight frame of 28 vectors in `R^7`.
///
/// Vector `{i, j}` is `√(2/3) (e_i + e_j − ¼𝟙₈)`, written in the Helmert basis of `𝟙₈^⊥`.
/// Two vectors have inner product `+1/3` when their pairs intersect and `−1/3` otherwise.
/// Vectors are ordered as [`pairs_of_eight`].
pub fn etf_28_7() -> VectorSystem {
    let pairs = pairs_of_eight();
    let h = helmert_basis(8);
    let c = (2.0_f64 / 3.0).sqrt();
    let v = DenseMatrix::from_fn(7, 28, |k, p| {
        let (i, j) = pairs[p];
        c * (h[k][i] + h[k][j])
    });
    let g = RationalMatrix::from_fn(28, 28, |a, b| {
        let (i, j) = pairs[a];
        let (k, l) = pairs[b];
        match [i == k, i == l, j == k, j == l].iter().filter(|&&t| t).count() {
            2 => Rational::one(),
            1 => ratio(1, 3),
            _ => ratio(-1, 3),
        }
    });
    VectorSystem::with_exact_gram(v, g).expect("construction matches its exact Gram")
}

/// Negate vectors so that `⟨v_anchor, v_i⟩ > 0` for every `i ≠ anchor`.
pub fn canonicalize_signs(sys: &VectorSystem, anchor: usize, tol: f64) -> Result<VectorSystem> {
    if anchor >= sys.n() {
        return Err(Error::Invalid(format!("anchor {anchor} out of range")));
    }
    let mut out = sys.clone();
    for i in 0..sys.n() {
        if i == anchor {
            continue;
        }
        match sys.inner_sign(anchor, i, tol) {
            1 => {}
            -1 => out = out.negate(i),
            _ => {
                let value = crate::numkit::dot(&sys.vector(anchor), &sys.vector(i));
                return Err(Error::AmbiguousSign { anchor, index: i, value });
            }
        }
    }
    Ok(out)
}

/// Simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    /// Sorted edges `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Graph from a list of edges; loops and duplicates are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::Invalid(format!("invalid edge ({a}, {b}) on {n} vertices")));
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        let before = es.len();
        es.dedup();
        if es.len() != before {
            return Err(Error::Invalid("duplicate edge".into()));
        }
        Ok(Self { n, edges: es })
    }

    /// Dense adjacency matrix.
    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut a = vec![vec![false; self.n]; self.n];
        for &(i, j) in &self.edges {
            a[i][j] = true;
            a[j][i] = true;
        }
        a
    }

    /// Vertex degrees.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(i, j) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }
}

/// Graph on all `N` vectors with `i ∼ j` iff `⟨v_i, v_j⟩ > 0`.
pub fn sign_graph(sys: &VectorSystem, tol: f64) -> Result<Graph> {
    let n = sys.n();
    Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| sys.inner_sign(i, j, tol) > 0))
}

/// Parameters `(v, k, λ, μ)` of a strongly regular graph.
///
/// `lambda` (`mu`) is `None` when it is vacuous: the graph has no adjacent (non-adjacent) pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SrgParams {
    pub v: i64,
    pub k: i64,
    pub lambda: Option<i64>,
    pub mu: Option<i64>,
}

fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().clone(), q.denom().clone());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == n && &sd * &sd == d).then(|| Rational::new(sn, sd))
}

fn as_integer(q: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    q.is_integer().then(|| q.numer().to_i64()).flatten()
}

/// Graph of a sign-canonical ETF on the vertices other than `anchor`, with its srg parameters.
///
/// The parameters come from the closed forms `v = N − 1`,
/// `k = N/2 − 1 + (N/(2r) − 1)·√(r(N−1)/(N−r))`, `μ = k/2`, `λ = (3k − v − 1)/2`, evaluated
/// exactly, and are checked against the empirical degree and common-neighbour counts.
/// Vertex `u` of the returned graph is the `u`-th vector after removing the anchor.
pub fn etf_to_srg(sys: &VectorSystem, anchor: usize, tol: f64) -> Result<(Graph, SrgParams)> {
    let (n, r) = (sys.n(), sys.r());
    let report = analyze_frame(sys, tol)?;
    if !report.is_etf {
        return Err(Error::Invalid("system is not an ETF".into()));
    }
    if n <= r {
        return Err(Error::Invalid(format!("need N > r, got N = {n}, r = {r}")));
    }
    if anchor >= n {
        return Err(Error::Invalid(format!("anchor {anchor} out of range")));
    }
    if let Some(i) = (0..n).find(|&i| i != anchor && sys.inner_sign(anchor, i, tol) <= 0) {
        return Err(Error::Invalid(format!("system is not sign-canonical at anchor {anchor} (vector {i})")));
    }

    let labels: Vec<usize> = (0..n).filter(|&i| i != anchor).collect();
    let m = labels.len();
    let graph = Graph::new(
        m,
        (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).filter(|&(a, b)| sys.inner_sign(labels[a], labels[b], tol) > 0),
    )?;

    let (ni, ri) = (n as i64, r as i64);
    let s = exact_sqrt(&Rational::new(BigInt::from(ri * (ni - 1)), BigInt::from(ni - ri)))
        .ok_or_else(|| Error::Invalid("√(r(N−1)/(N−r)) is irrational; not an ETF".into()))?;
    let k = ratio(ni, 2) - int(1) + (ratio(ni, 2 * ri) - int(1)) * s;
    let mu = &k / int(2);
    let vq = int(ni - 1);
    let lambda = (int(3) * &k - &vq - int(1)) / int(2);
    let k_int = as_integer(&k).ok_or_else(|| Error::Invalid(format!("srg degree {k} is not an integer")))?;

    let adj = graph.adjacency();
    let has_edge = !graph.edges.is_empty();
    let has_non_edge = graph.edges.len() < m * (m - 1) / 2;
    let lambda_int = if has_edge {
        Some(as_integer(&lambda).ok_or_else(|| Error::Invalid(format!("λ = {lambda} is not an integer")))?)
    } else {
        None
    };
    let mu_int = if has_non_edge {
        Some(as_integer(&mu).ok_or_else(|| Error::Invalid(format!("μ = {mu} is not an integer")))?)
    } else {
        None
    };

    let degrees = graph.degrees();
    if let Some(u) = (0..m).find(|&u| degrees[u] as i64 != k_int) {
        return Err(Error::NotStronglyRegular(labels[u], labels[u]));
    }
    for a in 0..m {
        for b in a + 1..m {
            let common = (0..m).filter(|&c| adj[a][c] && adj[b][c]).count() as i64;
            let expected = if adj[a][b] { lambda_int } else { mu_int };
            if expected != Some(common) {
                return Err(Error::NotStronglyRegular(labels[a], labels[b]));
            }
        }
    }
    Ok((graph, SrgParams { v: ni - 1, k: k_int, lambda: lambda_int, mu: mu_int }))
}

/// Gerzon bound `N ≤ r(r+1)/2`, satisfied by every system of equiangular lines with
/// coherence below one.
pub fn satisfies_gerzon(sys: &VectorSystem) -> bool {
    sys.n() <= sys.r() * (sys.r() + 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormal_basis_is_etf() {
        let rep = analyze_frame(&VectorSystem::standard_basis(4), 1e-10).unwrap();
        assert!((rep.frame_potential - 4.0).abs() < 1e-12);
        assert!(rep.is_untf && rep.is_etf);
        assert_eq!(rep.coherence_max, 0.0);
    }

    #[test]
    fn etf_28_7_report() {
        let rep = analyze_frame(&etf_28_7(), 1e-10).unwrap();
        assert!((rep.frame_potential - 112.0).abs() < 1e-9);
        assert!((rep.coherence_max - 1.0 / 3.0).abs() < 1e-12);
        assert!(rep.is_etf);
    }

    #[test]
    fn etf_28_7_gram_examples() {
        let sys = etf_28_7();
        let pairs = pairs_of_eight();
        let at = |a: (usize, usize), b: (usize, usize)| {
            let ia = pairs.iter().position(|&p| p == a).unwrap();
            let ib = pairs.iter().position(|&p| p == b).unwrap();
            sys.exact_gram().unwrap()[(ia, ib)].clone()
        };
        assert_eq!(at((0, 1), (0, 2)), ratio(1, 3));
        assert_eq!(at((0, 1), (2, 3)), ratio(-1, 3));
    }

    #[test]
    fn simplex_coherence_is_welch() {
        let rep = analyze_frame(&simplex_etf(5).unwrap(), 1e-10).unwrap();
        assert!((rep.coherence_max - 0.25).abs() < 1e-12);
        assert!((rep.welch_bound - 0.25).abs() < 1e-12);
        assert!(rep.is_etf);
    }

    #[test]
    fn simplex_needs_three_vectors() {
        assert!(simplex_etf(2).is_err());
    }

    #[test]
    fn canonicalization_round_trip() {
        let sys = canonicalize_signs(&etf_28_7(), 27, 1e-10).unwrap();
        assert_eq!(canonicalize_signs(&sys, 27, 1e-10).unwrap(), sys);
        let flipped = sys.negate(2);
        assert_eq!(canonicalize_signs(&flipped, 27, 1e-10).unwrap(), sys);
    }

    #[test]
    fn schlafli_parameters() {
        let sys = canonicalize_signs(&etf_28_7(), 27, 1e-10).unwrap();
        let (g, p) = etf_to_srg(&sys, 27, 1e-10).unwrap();
        assert_eq!(g.n, 27);
        assert_eq!(p, SrgParams { v: 27, k: 16, lambda: Some(10), mu: Some(8) });
    }

    #[test]
    fn simplex_canonical_graph_is_edgeless() {
        let sys = canonicalize_signs(&simplex_etf(5).unwrap(), 0, 1e-10).unwrap();
        let (g, p) = etf_to_srg(&sys, 0, 1e-10).unwrap();
        assert!(g.edges.is_empty());
        assert_eq!(p, SrgParams { v: 4, k: 0, lambda: None, mu: Some(0) });
    }
}

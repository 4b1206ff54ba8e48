//! Dense linear-algebra substrate.
//!
//! Conventions used across the crate:
//!
//! * `vec(V)` for `V ∈ R^{r×N}` concatenates the columns `v_1, …, v_N`, so segment `i`
//!   (of length `r`) is `v_i`, and `vec(S V)` has segment `i` equal to `S v_i`.
//! * The Kronecker product of vectors `z ⊗ y` stacks the blocks `z_i · y`; in particular
//!   `vec(y zᵀ) = z ⊗ y`.
//! * Block `(i, j)` of an `rN × rN` matrix is `M_[ij]` (see [`BlockLayout`]).

mod dense;
mod eigh;
mod ldl;
mod rational;

pub use dense::{dot, kron_vec, norm, BlockLayout, DenseMatrix, DEFAULT_TOL, SYMTOL};
pub use eigh::{eigvalsh, min_eigenvalue, numerical_rank, symmetric_eigh, symmetric_eigh_from, Eigh, MAX_SWEEPS};
pub use ldl::{exact_psd_ldl, exact_psd_ldl_with_progress, LdlOutcome, NotPsdWitness, PsdProof};
pub use rational::{format_rational, int, parse_rational, ratio, to_f64, Rational, RationalMatrix};

use crate::error::{Error, Result};

/// Matrices that support the blockwise partial transpose.
pub trait PartialTranspose: Sized {
    /// Transpose every `r × r` block in place of itself: result block `(i,j)` is `A_[ij]ᵀ`.
    fn partial_transpose(&self, r: usize) -> Result<Self>;
}

fn check_pt_shape(rows: usize, cols: usize, r: usize) -> Result<()> {
    if rows != cols {
        return Err(Error::Dimension(format!("{rows}×{cols} matrix is not square")));
    }
    BlockLayout::for_dimension(rows, r).map(|_| ())
}

// Entry (a, b) of the result reads entry (block_i·r + b%r, block_j·r + a%r) of the input.
fn pt_source(a: usize, b: usize, r: usize) -> (usize, usize) {
    let (bi, ri) = (a / r, a % r);
    let (bj, rj) = (b / r, b % r);
    (bi * r + rj, bj * r + ri)
}

impl PartialTranspose for DenseMatrix {
    fn partial_transpose(&self, r: usize) -> Result<Self> {
        check_pt_shape(self.rows(), self.cols(), r)?;
        Ok(DenseMatrix::from_fn(self.rows(), self.cols(), |a, b| self[pt_source(a, b, r)]))
    }
}

impl PartialTranspose for RationalMatrix {
    fn partial_transpose(&self, r: usize) -> Result<Self> {
        check_pt_shape(self.rows(), self.cols(), r)?;
        Ok(RationalMatrix::from_fn(self.rows(), self.cols(), |a, b| self[pt_source(a, b, r)].clone()))
    }
}

/// Partial transpose `A^Γ` with respect to `layout` (block `(i,j)` becomes `A_[ij]ᵀ`).
pub fn partial_transpose<M: PartialTranspose>(a: &M, layout: BlockLayout) -> Result<M> {
    a.partial_transpose(layout.r)
}

/// Factor a PSD matrix as `X ≈ VᵀV` with `V` of size `rank(X) × N`.
///
/// Keeps the eigenvalues above `tol · λ_max` and returns `V = Λ^{1/2} Qᵀ`.
pub fn gram_factor(x: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    let e = symmetric_eigh(x, tol)?;
    let top = e.max().max(0.0);
    if e.min() < -tol * top.max(f64::MIN_POSITIVE) {
        return Err(Error::NotPsd(e.min()));
    }
    let keep: Vec<usize> = (0..e.values.len()).filter(|&k| e.values[k] > tol * top).collect();
    let n = x.rows();
    Ok(DenseMatrix::from_fn(keep.len(), n, |k, j| e.values[keep[k]].sqrt() * e.vectors[(j, keep[k])]))
}

/// Orthonormalize `vectors` by modified Gram–Schmidt, discarding those whose residual
/// norm drops below `tol` (relative to their original norm).
pub fn orthonormalize(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let original = norm(v);
        if original == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let nw = norm(&w);
        if nw > tol * original {
            basis.push(w.into_iter().map(|x| x / nw).collect());
        }
    }
    basis
}

/// Orthogonal projector `Σ b bᵀ` onto the span of orthonormal vectors.
pub fn projector_from_basis(basis: &[Vec<f64>], dim: usize) -> DenseMatrix {
    let mut p = DenseMatrix::zeros(dim, dim);
    for b in basis {
        for i in 0..dim {
            if b[i] == 0.0 {
                continue;
            }
            for j in 0..dim {
                p[(i, j)] += b[i] * b[j];
            }
        }
    }
    p
}

/// Inverse of a symmetric positive definite matrix via its eigendecomposition.
pub fn spd_inverse(a: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    let e = symmetric_eigh(a, tol)?;
    let top = e.max().max(f64::MIN_POSITIVE);
    if e.min() <= tol * top {
        return Err(Error::RankDeficient { rank: e.rank(tol), r: a.rows() });
    }
    Ok(e.reconstruct_with(|l| 1.0 / l))
}

/// Moore–Penrose pseudo-inverse of a symmetric matrix (eigenvalues below `tol·|λ|_max` dropped).
pub fn symmetric_pinv(a: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    let e = symmetric_eigh(a, tol)?;
    let top = e.values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    Ok(e.reconstruct_with(|l| if l.abs() > tol * top { 1.0 / l } else { 0.0 }))
}

/// Symmetric square root of a PSD matrix (negative rounding eigenvalues clipped).
pub fn psd_sqrt(a: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    let e = symmetric_eigh(a, tol)?;
    Ok(e.reconstruct_with(|l| l.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_transpose_r1_is_identity_map() {
        let a = DenseMatrix::from_fn(4, 4, |i, j| (i * 4 + j) as f64);
        assert_eq!(a.partial_transpose(1).unwrap(), a);
    }

    #[test]
    fn partial_transpose_of_swap() {
        // v = e₁⊗e₁ + e₂⊗e₂ for N = r = 2.
        let v = vec![1.0, 0.0, 0.0, 1.0];
        let pt = DenseMatrix::outer(&v, &v).partial_transpose(2).unwrap();
        let swap = DenseMatrix::from_fn(4, 4, |a, b| {
            let (i, j) = (a / 2, a % 2);
            if b == j * 2 + i { 1.0 } else { 0.0 }
        });
        assert_eq!(pt, swap);
        let e = symmetric_eigh(&pt, 1e-12).unwrap();
        let expect = [1.0, 1.0, 1.0, -1.0];
        for (x, y) in e.values.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn partial_transpose_rejects_bad_block_size() {
        assert!(DenseMatrix::identity(5).partial_transpose(2).is_err());
    }

    #[test]
    fn gram_factor_of_rank_one() {
        let x = DenseMatrix::from_fn(3, 3, |_, _| 1.0);
        let v = gram_factor(&x, 1e-8).unwrap();
        assert_eq!(v.rows(), 1);
        assert!(v.row(0).iter().all(|&c| (c.abs() - 1.0).abs() < 1e-12));
        assert!(v.t_matmul(&v).unwrap().max_abs_diff(&x).unwrap() < 1e-12);
    }

    #[test]
    fn gram_factor_rejects_indefinite() {
        let x = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(gram_factor(&x, 1e-8), Err(Error::NotPsd(_))));
    }
}

//! Symmetric eigendecomposition by cyclic Jacobi sweeps.

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Maximum number of full Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `A = Q Λ Qᵀ` with eigenvalues sorted in descending order.
#[derive(Clone, Debug)]
pub struct Eigh {
    /// Eigenvalues, largest first.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: DenseMatrix,
}

impl Eigh {
    /// Smallest eigenvalue (`+∞` for an empty matrix).
    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::INFINITY)
    }

    /// Largest eigenvalue (`−∞` for an empty matrix).
    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NEG_INFINITY)
    }

    /// Number of eigenvalues strictly above `rel · max(λ_max, 0)`.
    pub fn rank(&self, rel: f64) -> usize {
        numerical_rank(&self.values, rel)
    }

    /// Eigenvector `k` (column of `vectors`).
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// `Q f(Λ) Qᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let n = self.values.len();
        let q = &self.vectors;
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = DenseMatrix::zeros(n, n);
        for k in 0..n {
            if fl[k] == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = fl[k] * q[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * q[(j, k)];
                }
            }
        }
        out
    }

    /// `Q Λ Qᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.reconstruct_with(|l| l)
    }

    /// `max |QᵀQ − I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let q = &self.vectors;
        let qtq = q.t_matmul(q).expect("square eigenvector matrix");
        qtq.max_abs_diff(&DenseMatrix::identity(q.cols())).expect("same shape")
    }
}

/// Count of eigenvalues above `rel · max(λ_max, 0)`.
pub fn numerical_rank(values: &[f64], rel: f64) -> usize {
    let top = values.iter().fold(0.0_f64, |m, &x| m.max(x));
    values.iter().filter(|&&x| x > rel * top).count()
}

/// Eigendecomposition of a symmetric matrix.
///
/// Cyclic Jacobi: every sweep annihilates each off-diagonal pair once; sweeps repeat
/// until the off-diagonal Frobenius norm falls below `max(ε, min(tol, 1e-12)) · ‖A‖_F`.
pub fn symmetric_eigh(a: &DenseMatrix, tol: f64) -> Result<Eigh> {
    a.require_symmetric()?;
    jacobi(a.symmetrized(), DenseMatrix::identity(a.rows()), tol)
}

/// Eigendecomposition warm-started from an approximately diagonalizing orthogonal `guess`.
///
/// Runs Jacobi on `guessᵀ A guess`, which converges in very few sweeps when consecutive
/// matrices differ little (e.g. inside projection loops).
pub fn symmetric_eigh_from(a: &DenseMatrix, guess: &DenseMatrix, tol: f64) -> Result<Eigh> {
    a.require_symmetric()?;
    if guess.rows() != a.rows() || guess.cols() != a.cols() {
        return Err(Error::Dimension("warm-start basis has the wrong shape".into()));
    }
    let b = guess.t_matmul(&a.matmul(guess)?)?.symmetrized();
    jacobi(b, guess.clone(), tol)
}

/// Eigenvalues only, descending.
pub fn eigvalsh(a: &DenseMatrix) -> Result<Vec<f64>> {
    Ok(symmetric_eigh(a, super::DEFAULT_TOL)?.values)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(a: &DenseMatrix) -> Result<f64> {
    Ok(symmetric_eigh(a, super::DEFAULT_TOL)?.min())
}

fn jacobi(mut a: DenseMatrix, mut v: DenseMatrix, tol: f64) -> Result<Eigh> {
    let n = a.rows();
    let fro = a.frobenius();
    let threshold = f64::EPSILON.max(tol.min(1e-12)) * fro;
    let off_norm = |a: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += a[(i, j)] * a[(i, j)];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // Drop entries that can no longer change the diagonal in floating point.
                if sweeps > 4 && app.abs() + 1e3 * apq.abs() == app.abs() && aqq.abs() + 1e3 * apq.abs() == aqq.abs() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s, t, apq);
            }
        }
        off = off_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&k| a[(k, k)]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64, t: f64, apq: f64) {
    let n = a.rows();
    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let np = c * akp - s * akq;
        let nq = s * akp + c * akq;
        a[(k, p)] = np;
        a[(p, k)] = np;
        a[(k, q)] = nq;
        a[(q, k)] = nq;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_spectrum() {
        let e = symmetric_eigh(&DenseMatrix::identity(3), 1e-12).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = symmetric_eigh(&a, 1e-12).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let v0 = e.vector(0);
        let h = 1.0 / 2f64.sqrt();
        assert!((v0[0].abs() - h).abs() < 1e-14 && (v0[0] - v0[1]).abs() < 1e-14);
        let v1 = e.vector(1);
        assert!((v1[0] + v1[1]).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_square() {
        assert!(symmetric_eigh(&DenseMatrix::zeros(2, 3), 1e-8).is_err());
    }

    #[test]
    fn warm_start_matches_cold() {
        let a = DenseMatrix::from_fn(6, 6, |i, j| ((i * 7 + j * 7 + i * j) % 5) as f64 - 2.0);
        let cold = symmetric_eigh(&a, 1e-12).unwrap();
        let warm = symmetric_eigh_from(&a.scale(1.001), &cold.vectors, 1e-12).unwrap();
        for (x, y) in cold.values.iter().zip(&warm.values) {
            assert!((1.001 * x - y).abs() < 1e-12);
        }
    }
}

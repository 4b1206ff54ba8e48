//! Crate-wide error type.

use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Shapes of the inputs do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A symmetric matrix was required.
    #[error("matrix is not symmetric (max |A - Aᵀ| = {0:e})")]
    NotSymmetric(f64),

    /// Cyclic Jacobi did not reach the requested accuracy.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    /// A positive semidefinite matrix was required.
    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),

    /// A precondition on the input values does not hold.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Degree-4 extension of an ETF Gram matrix was requested for a maximal ETF.
    #[error(
        "maximal ETF: N = {n} ≥ r(r+1)/2 = {bound} with r = {r}; a degree-4 pseudomoment \
         extension exists if and only if N < r(r+1)/2"
    )]
    MaximalEtf { n: usize, r: usize, bound: usize },

    /// A block witness does not attain vᵀMv = N².
    #[error("witness does not certify: vᵀMv = {value} but N² = {target}")]
    NotOptimal { value: f64, target: f64 },

    /// A formula that is only valid for unit-norm tight frames was applied to another system.
    #[error("not a unit-norm tight frame: {0}")]
    NotUntf(String),

    /// The synthesis matrix V does not have full row rank.
    #[error("vector system is rank deficient: rank {rank} < r = {r}")]
    RankDeficient { rank: usize, r: usize },

    /// A witness has larger rank than the extraction of a cut decomposition allows.
    #[error("witness rank {rank} exceeds r = {r}; not a minimal-rank witness")]
    NotMinimalRank { rank: usize, r: usize },

    /// The blocks of a minimal-rank witness are not a commuting symmetric orthogonal family.
    #[error("witness blocks lack the commuting orthogonal structure: {0}")]
    NotStructured(String),

    /// A ±1 matrix with HHᵀ = N·I was required.
    #[error("not a Hadamard matrix: {0}; real Hadamard matrices only exist for N ∈ {{1, 2}} ∪ 4ℕ")]
    NotHadamard(String),

    /// Sign canonicalization found an inner product indistinguishable from zero.
    #[error("sign canonicalization is ambiguous: ⟨v_{anchor}, v_{index}⟩ = {value:e}")]
    AmbiguousSign { anchor: usize, index: usize, value: f64 },

    /// The graph derived from a frame is not strongly regular.
    #[error("graph is not strongly regular: vertices {0} and {1} violate the parameters")]
    NotStronglyRegular(usize, usize),

    /// Two entries of the same symmetry class received different values.
    #[error("certificate construction conflict: {0}")]
    CertificateConflict(String),

    /// An exact certificate check failed.
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),

    /// Malformed text input (CSV, rational tokens, JSON layout).
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Underlying JSON failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Shorthand result type.
pub type Result<T> = std::result::Result<T, Error>;

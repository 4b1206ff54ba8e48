//! Spectrum of the partial transpose (vvᵀ)^Γ from the SVD of V, and the kernel of
//! I_N ⊗ VVᵀ − (vvᵀ)^Γ, which is V_sym of dimension r(r+1)/2.

use std::error::Error;

use elliptope4::frames::VectorSystem;
use elliptope4::numkit::{DenseMatrix, PartialTranspose};
use elliptope4::witnesses::{rank_one_pt_spectrum, vsym_kernel_check};
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xorshift::XorShiftRng;

pub struct Summary {
    pub worst_reconstruction: f64,
    pub kernel_dims_ok: bool,
    pub cases: usize,
    pub identity_spectrum: Vec<f64>,
}

pub fn run_example(cases: usize, seed: u64) -> Result<Summary, Box<dyn Error>> {
    let mut rng = XorShiftRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut kernel_dims_ok = true;
    for _ in 0..cases {
        let n = rng.random_range(1..=8);
        let r = rng.random_range(1..=n);
        let v = DenseMatrix::from_fn(r, n, |_, _| rng.sample(StandardNormal));
        let spec = rank_one_pt_spectrum(&v)?;
        let vec_v = v.vec();
        let target = DenseMatrix::outer(&vec_v, &vec_v).partial_transpose(r)?;
        worst = worst.max(spec.reconstruction().max_abs_diff(&target)?);
        let k = vsym_kernel_check(&VectorSystem::new(v), 1e-8)?;
        kernel_dims_ok &= k.kernel_dim == k.expected_dim;
    }
    println!("{cases} random V: worst reconstruction error {worst:.1e}, kernel dimension r(r+1)/2 every time: {kernel_dims_ok}");

    let spec = rank_one_pt_spectrum(&DenseMatrix::identity(2))?;
    let mut identity_spectrum: Vec<f64> = spec.eigenpairs.iter().map(|e| e.1).collect();
    identity_spectrum.sort_by(|a, b| b.total_cmp(a));
    println!("V = I₂: eigenvalues {identity_spectrum:?}");
    Ok(Summary { worst_reconstruction: worst, kernel_dims_ok, cases, identity_spectrum })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(50, 2024).map(|_| ())
}

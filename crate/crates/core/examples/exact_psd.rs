//! Exact rational LDLᵀ proofs that the ETF pseudomoment matrices are PSD, with their rank
//! against the bound rank(Y) ≤ r(r+1)/2 − rank(X^{⊙2}) + 1.

use std::error::Error;
use std::time::Instant;

use elliptope4::frames::simplex_etf;
use elliptope4::numkit::{exact_psd_ldl, format_rational, LdlOutcome};
use elliptope4::pseudomoments::{etf_degree4, pataki_rank_bound};

pub struct Row {
    pub n: usize,
    pub rank: usize,
    pub bound: usize,
}

pub fn run_example(sizes: &[usize]) -> Result<Vec<Row>, Box<dyn Error>> {
    let mut rows = Vec::new();
    for &n in sizes {
        let start = Instant::now();
        let sys = simplex_etf(n)?;
        let y = etf_degree4(&sys, 1e-10)?;
        let exact = y.exact().ok_or("exact input")?;
        let proof = match exact_psd_ldl(exact)? {
            LdlOutcome::Psd(p) => p,
            LdlOutcome::NotPsd(w) => return Err(format!("N = {n}: wᵀYw = {}", format_rational(&w.value)).into()),
        };
        if !proof.verify(exact) {
            return Err(format!("N = {n}: PᵀYP ≠ LDLᵀ").into());
        }
        let bound = pataki_rank_bound(&sys.gram(), 1e-9)?;
        let d_min = proof.d_min_positive().map(|d| format_rational(&d)).unwrap_or_default();
        println!(
            "N = {n}: {0}×{0} exact, rank {1} (bound {bound}, slack {2}), smallest pivot {d_min}, {3:.2?}",
            n * n,
            proof.rank(),
            bound - proof.rank(),
            start.elapsed()
        );
        rows.push(Row { n, rank: proof.rank(), bound });
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&[4, 5, 6, 7, 8]).map(|_| ())
}

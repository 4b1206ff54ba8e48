//! Maximal ETFs (N = r(r+1)/2) admit no degree-4 extension: the closed form refuses them and
//! the alternating-projection oracle finds a stable positive gap.

use std::error::Error;

use elliptope4::frames::{etf_28_7, simplex_etf, VectorSystem};
use elliptope4::membership::{e4_feasibility, Status};
use elliptope4::pseudomoments::etf_degree4;
use elliptope4::Error as LibError;

pub struct Summary {
    pub simplex3_refused: bool,
    pub etf28_refused: bool,
    pub simplex3_gap: Option<f64>,
    pub simplex3_iterations: usize,
}

fn refused(sys: &VectorSystem, name: &str) -> bool {
    match etf_degree4(sys, 1e-10) {
        Err(e @ LibError::MaximalEtf { .. }) => {
            println!("{name}: {e}");
            true
        }
        Err(e) => {
            println!("{name}: unexpected error {e}");
            false
        }
        Ok(_) => false,
    }
}

pub fn run_example() -> Result<Summary, Box<dyn Error>> {
    let s3 = simplex_etf(3)?;
    let simplex3_refused = refused(&s3, "simplex_etf(3)");
    let etf28_refused = refused(&etf_28_7(), "etf_28_7");

    let verdict = e4_feasibility(&s3, 1e-6, 5000)?;
    let simplex3_gap = match verdict.status {
        Status::NonMember { gap, .. } => Some(gap),
        _ => None,
    };
    println!("E₄ oracle on simplex_etf(3): {} after {} iterations, gap {simplex3_gap:?}", verdict.label(), verdict.iterations);
    Ok(Summary { simplex3_refused, etf28_refused, simplex3_gap, simplex3_iterations: verdict.iterations })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}

//! Separable witnesses and the cut polytope: cut decompositions → block witnesses → cut
//! decompositions, Hadamard witnesses for I_N, and the N = 3 obstruction.

use std::error::Error;

use elliptope4::frames::VectorSystem;
use elliptope4::numkit::{gram_factor, symmetric_eigh, RationalMatrix};
use elliptope4::separability::{
    all_cuts, cuts_to_witness, hadamard_witness, sylvester_hadamard, witness_to_cuts, CutDecomposition,
};
use elliptope4::witnesses::validate_witness;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;

pub struct Summary {
    pub trials: usize,
    /// Worst ‖Gram(extracted) − X‖_max over the random trials.
    pub worst_gram_error: f64,
    pub all_valid: bool,
    pub hadamard_rank: usize,
    pub hadamard_terms: usize,
    pub hadamard_exact: bool,
    pub order3_rejected: bool,
}

/// Random distribution over `m ≤ N` linearly independent cuts (so `rank X = m`).
pub fn random_decomposition(rng: &mut XorShiftRng, n: usize) -> Result<CutDecomposition, Box<dyn Error>> {
    let mut cuts = all_cuts(n);
    loop {
        cuts.shuffle(rng);
        let m = rng.random_range(1..=n.min(cuts.len()));
        let chosen: Vec<Vec<i8>> = cuts[..m].to_vec();
        let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let dec = CutDecomposition::new(raw.iter().map(|w| w / total).collect(), chosen)?;
        let rank = symmetric_eigh(&dec.gram(), 1e-13)?.rank(1e-9);
        if rank == m {
            return Ok(dec);
        }
    }
}

pub fn run_example(trials: usize, seed: u64) -> Result<Summary, Box<dyn Error>> {
    let tol = 1e-9;
    let mut rng = XorShiftRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut all_valid = true;
    for _ in 0..trials {
        let n = rng.random_range(2..=6);
        let dec = random_decomposition(&mut rng, n)?;
        let x = dec.gram();
        let sys = VectorSystem::new(gram_factor(&x, 1e-10)?);
        let sep = cuts_to_witness(&dec, &sys, tol)?;
        all_valid &= validate_witness(&sep.witness, 1e-8)?.passed;
        let back = witness_to_cuts(&sep.witness, &sys, 1e-8)?;
        worst = worst.max(back.gram().max_abs_diff(&x)?);
    }
    println!("{trials} random cut distributions: witnesses valid = {all_valid}, Gram reproduced to {worst:.1e}");

    let h4 = sylvester_hadamard(2);
    let w = hadamard_witness(&h4)?;
    let hadamard_rank = symmetric_eigh(&w.m, 1e-13)?.rank(1e-9);
    let sys = VectorSystem::standard_basis(4);
    let dec = witness_to_cuts(&w, &sys, 1e-8)?;
    let hadamard_exact = dec.exact_gram(64) == Some(RationalMatrix::identity(4));
    println!(
        "Sylvester H₄: witness rank {hadamard_rank}, {} cuts with weights {:?}, re-sums to I₄ exactly: {hadamard_exact}",
        dec.m(),
        dec.rational_weights(64).iter().map(|q| q.to_string()).collect::<Vec<_>>()
    );

    let fake = vec![vec![1, 1, 1], vec![1, -1, 1], vec![1, 1, -1]];
    let order3 = hadamard_witness(&fake);
    if let Err(e) = &order3 {
        println!("order 3: {e}");
    }
    Ok(Summary {
        trials,
        worst_gram_error: worst,
        all_valid,
        hadamard_rank,
        hadamard_terms: dec.m(),
        hadamard_exact,
        order3_rejected: order3.is_err(),
    })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(20, 7).map(|_| ())
}

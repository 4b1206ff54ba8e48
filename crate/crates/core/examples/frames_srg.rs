//! Equiangular tight frames: the simplex family, the 28 lines in R⁷, Welch and Gerzon
//! bounds, and the Schläfli graph srg(27, 16, 10, 8) read off the sign pattern.

use std::error::Error;

use elliptope4::frames::{analyze_frame, canonicalize_signs, etf_28_7, etf_to_srg, satisfies_gerzon, simplex_etf, SrgParams};

pub struct Summary {
    pub srg: SrgParams,
    pub etf28_coherence: f64,
    pub etf28_maximal: bool,
}

pub fn run_example() -> Result<Summary, Box<dyn Error>> {
    for n in 3..=8 {
        let sys = simplex_etf(n)?;
        let rep = analyze_frame(&sys, 1e-10)?;
        println!(
            "simplex N = {n} in R^{}: ETF = {}, coherence {:.4} = Welch {:.4}, strictly below Gerzon: {}",
            sys.r(),
            rep.is_etf,
            rep.coherence_max,
            rep.welch_bound,
            sys.n() < sys.r() * (sys.r() + 1) / 2
        );
    }
    let z = etf_28_7();
    let rep = analyze_frame(&z, 1e-10)?;
    println!(
        "28 lines in R⁷: ETF = {}, coherence {:.4}, frame potential {:.4} = N²/r, meets Gerzon bound: {}",
        rep.is_etf,
        rep.coherence_max,
        rep.frame_potential,
        satisfies_gerzon(&z)
    );
    let canonical = canonicalize_signs(&z, 27, 1e-10)?;
    let (graph, srg) = etf_to_srg(&canonical, 27, 1e-10)?;
    println!("sign graph on the other 27 vectors: {} edges, {srg:?}", graph.edges.len());
    Ok(Summary { srg, etf28_coherence: rep.coherence_max, etf28_maximal: z.n() == z.r() * (z.r() + 1) / 2 })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}

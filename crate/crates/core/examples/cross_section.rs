//! A two-dimensional slice I₅ + span(A₁, A₂) of C⁵ ⊆ E₄⁵ ⊆ E₂⁵ with seeded random
//! directions, written as CSV; plus the ray toward X^(5), where E₄ strictly exceeds C.

use std::error::Error;
use std::time::Instant;

use elliptope4::frames::simplex_etf;
use elliptope4::membership::{cross_section, random_directions, ray_radii, CrossSection, RayOptions};

pub struct Summary {
    pub section: CrossSection,
    /// `(ρ_C, ρ_E4, ρ_E2)` along `X^(5) − I`.
    pub simplex_ray: (f64, f64, f64),
}

pub fn run_example(angles: usize, seed: u64) -> Result<Summary, Box<dyn Error>> {
    let opts = RayOptions::default();
    let start = Instant::now();
    let (a1, a2) = random_directions(5, seed)?;
    let section = cross_section(&a1, &a2, angles, &opts)?;
    println!("{angles} angles in {:.1?}; nesting violation {:.1e}", start.elapsed(), section.nesting_violation());
    for k in (0..angles).step_by((angles / 8).max(1)) {
        println!(
            "  θ = {:.3}: ρ_C = {:.4}, ρ_E4 = {:.4}, ρ_E2 = {:.4}",
            section.theta[k], section.radius_cut[k], section.radius_e4[k], section.radius_e2[k]
        );
    }

    let mut a = simplex_etf(5)?.gram();
    for i in 0..5 {
        a[(i, i)] = 0.0;
    }
    let a = a.scale(1.0 / a.frobenius());
    let simplex_ray = ray_radii(&a, &opts)?;
    println!(
        "toward X^(5): ρ_C = {:.4} (4/√20 = {:.4}), ρ_E4 = {:.4}, ρ_E2 = {:.4} (√20/4 = {:.4})",
        simplex_ray.0,
        4.0 / 20f64.sqrt(),
        simplex_ray.1,
        simplex_ray.2,
        20f64.sqrt() / 4.0
    );
    Ok(Summary { section, simplex_ray })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let summary = run_example(64, 1)?;
    let path = std::env::args().nth(1).unwrap_or_else(|| "section.csv".into());
    std::fs::write(&path, summary.section.to_csv())?;
    println!("wrote {path}");
    Ok(())
}

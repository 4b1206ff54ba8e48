//! The Schläfli-graph inequality Σ sgn(Z_ij) X_ij ≤ 112 on E₄²⁸: build the 784×784 rational
//! certificate, check its collapsed identity, and (with `--full`) prove A ⪰ 0 exactly.
//! The 28-vector ETF Gram Z violates it (126 > 112) while satisfying every triangle
//! inequality.

use std::error::Error;
use std::time::Instant;

use elliptope4::certificates::{
    build_schlafli_certificate, check_collapse, evaluate_schlafli_exact, evaluate_triangles_exact,
    schlafli_graph_28, verify_schlafli_certificate, SCHLAFLI_ANCHOR,
};
use elliptope4::frames::{canonicalize_signs, etf_28_7};
use elliptope4::pseudomoments::collapse_functional;

pub struct Summary {
    pub value_at_z: String,
    pub worst_triangle: String,
    pub psd_rank: Option<usize>,
    pub bundle: Option<serde_json::Value>,
}

pub fn run_example(full: bool) -> Result<Summary, Box<dyn Error>> {
    let start = Instant::now();
    let graph = schlafli_graph_28()?;
    let cert = build_schlafli_certificate(&graph)?;
    println!("certificate: {0}×{0}, {1} nonzero entries, built in {2:.2?}", cert.a.rows(), cert.a.nonzeros(), start.elapsed());

    let z = canonicalize_signs(&etf_28_7(), SCHLAFLI_ANCHOR, 1e-10)?;
    let zg = z.exact_gram().ok_or("exact Gram")?;
    let pi: Vec<usize> = (0..28).collect();
    let at_z = evaluate_schlafli_exact(zg, &pi, &cert.signs())?;
    let tri = evaluate_triangles_exact(zg)?;
    let value_at_z = at_z.lhs_exact.clone().unwrap_or_default();
    let worst_triangle = tri.worst_exact.clone().unwrap_or_default();
    println!("Schläfli inequality at Z: {value_at_z} ≤ 112 is {}", at_z.satisfied);
    println!("triangle inequalities at Z: worst {worst_triangle}, all satisfied = {}", tri.all_satisfied);

    let (psd_rank, bundle) = if full {
        let start = Instant::now();
        let bundle = verify_schlafli_certificate(&cert, |done, total| {
            if done % 200 == 0 {
                eprintln!("  exact LDL: {done}/{total} pivots ({:.1?})", start.elapsed());
            }
        })?;
        println!("A ⪰ 0 proved exactly: rank {}, in {:.1?}", bundle.proof.rank(), start.elapsed());
        (Some(bundle.proof.rank()), Some(bundle.to_json()))
    } else {
        check_collapse(&cert, &collapse_functional(&cert.a)?)?;
        println!("collapsed identity: ⟨A, Y⟩ = 112 − Σ sgn(Z_ij) X_ij (run with --full for the PSD proof)");
        (None, None)
    };
    Ok(Summary { value_at_z, worst_triangle, psd_rank, bundle })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let full = std::env::args().any(|a| a == "--full");
    run_example(full).map(|_| ())
}

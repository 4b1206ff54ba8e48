//! Membership oracles for C^N, E₂^N and E₄^N with their witnesses: cut decompositions,
//! eigendecompositions, block witnesses and separating hyperplanes.

use std::error::Error;

use elliptope4::frames::{simplex_etf, VectorSystem};
use elliptope4::membership::{cut_membership, e2_membership, e4_feasibility, e4_membership, MemberWitness, Status};
use elliptope4::numkit::DenseMatrix;

pub struct Summary {
    /// `(name, cut, e4, e2)` verdict labels.
    pub table: Vec<(String, &'static str, &'static str, &'static str)>,
    /// `⟨W, X^(5)⟩` and the bound of the separating hyperplane returned for `X^(5)`.
    pub simplex5_separator: Option<(f64, f64)>,
}

pub fn run_example() -> Result<Summary, Box<dyn Error>> {
    let tol = 1e-7;
    let mut table = Vec::new();
    let x5 = simplex_etf(5)?.gram();
    let candidates: Vec<(String, DenseMatrix, Option<VectorSystem>)> = vec![
        ("I₅".into(), DenseMatrix::identity(5), Some(VectorSystem::standard_basis(5))),
        ("X^(4)".into(), simplex_etf(4)?.gram(), Some(simplex_etf(4)?)),
        ("X^(5)".into(), x5.clone(), Some(simplex_etf(5)?)),
        ("X^(3)".into(), simplex_etf(3)?.gram(), Some(simplex_etf(3)?)),
        ("2I − 𝟙𝟙ᵀ".into(), DenseMatrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { -1.0 }), None),
    ];
    let mut simplex5_separator = None;
    for (name, x, sys) in &candidates {
        let cut = cut_membership(x, tol, 5000)?;
        let e4 = match sys {
            Some(s) => e4_feasibility(s, tol, 5000)?,
            None => e4_membership(x, tol, 5000)?,
        };
        let e2 = e2_membership(x, tol)?;
        let detail = match &cut.status {
            Status::Member(MemberWitness::Cuts(d)) => format!("{} cuts", d.m()),
            Status::NonMember { gap, separator: Some(s) } => {
                let value = s.w.frobenius_dot(x)?;
                if name == "X^(5)" {
                    simplex5_separator = Some((value, s.bound));
                }
                format!("distance ≥ {gap:.3}, ⟨W, X⟩ = {value:.3} < {:.3} ≤ ⟨W, Q⟩ on C", s.bound)
            }
            _ => String::new(),
        };
        println!("{name:<10} C: {:<12} E₄: {:<12} E₂: {:<12} {detail}", cut.label(), e4.label(), e2.label());
        table.push((name.clone(), cut.label(), e4.label(), e2.label()));
    }
    Ok(Summary { table, simplex5_separator })
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}

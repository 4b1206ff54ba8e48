//! Laurent's parity pseudomoments of degree d on N (odd) variables: entries depend only on
//! the size of the odd set and equal (−1)^a Π (2k−1)/(N−2k+1).

use std::error::Error;

use elliptope4::numkit::format_rational;
use elliptope4::pseudomoments::{laurent_moments, laurent_value, validate_string_moments};

pub struct Row {
    pub n: usize,
    pub d: usize,
    pub dim: usize,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

pub fn run_example(cases: &[(usize, usize)]) -> Result<Vec<Row>, Box<dyn Error>> {
    let mut rows = Vec::new();
    for &(n, d) in cases {
        let z = laurent_moments(n, d)?;
        let report = validate_string_moments(&z, 1e-8)?;
        let values: Vec<String> = (0..=d / 2).map(|a| format_rational(&laurent_value(n, a))).collect();
        println!(
            "N = {n}, d = {d}: {0}×{0}, odd-set values [{1}], λ_min = {2:.3e}, valid = {3}",
            z.strings.len(),
            values.join(", "),
            report.min_eigenvalue,
            report.passed
        );
        rows.push(Row { n, d, dim: z.strings.len(), min_eigenvalue: report.min_eigenvalue, passed: report.passed });
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example(&[(5, 4), (7, 4), (7, 6)]).map(|_| ())
}

//! Every example runs with quick parameters and reports the expected numbers.

#[path = "../examples/complete_moments.rs"]
mod complete_moments;
#[path = "../examples/cross_section.rs"]
mod cross_section;
#[path = "../examples/dual_certificate.rs"]
mod dual_certificate;
#[path = "../examples/etf_pseudomoments.rs"]
mod etf_pseudomoments;
#[path = "../examples/exact_psd.rs"]
mod exact_psd;
#[path = "../examples/file_formats.rs"]
mod file_formats;
#[path = "../examples/frames_srg.rs"]
mod frames_srg;
#[path = "../examples/laurent.rs"]
mod laurent;
#[path = "../examples/maximal_etf.rs"]
mod maximal_etf;
#[path = "../examples/membership.rs"]
mod membership;
#[path = "../examples/partial_transpose.rs"]
mod partial_transpose;
#[path = "../examples/projectors.rs"]
mod projectors;
#[path = "../examples/schlafli_certificate.rs"]
mod schlafli_certificate;
#[path = "../examples/separability.rs"]
mod separability;
#[path = "../examples/witness_round_trip.rs"]
mod witness_round_trip;

use elliptope4::numkit::{int, ratio};

#[test]
fn etf_pseudomoments_example() {
    let s = etf_pseudomoments::run_example().unwrap();
    assert_eq!(s.class_values[&0], vec![int(1)]);
    assert_eq!(s.class_values[&2], vec![ratio(-1, 4)]);
    assert_eq!(s.class_values[&4], vec![ratio(3, 8)]);
    assert!(s.agrees_with_laurent);
    assert_eq!(s.worst_violation, 0.0);
}

#[test]
fn exact_psd_example() {
    for row in exact_psd::run_example(&[4, 5, 6]).unwrap() {
        assert_eq!(row.rank, row.bound, "N = {}", row.n);
    }
}

#[test]
fn maximal_etf_example() {
    let s = maximal_etf::run_example().unwrap();
    assert!(s.simplex3_refused && s.etf28_refused);
    assert!(s.simplex3_gap.unwrap() > 0.1);
    assert!(s.simplex3_iterations > 0);
}

#[test]
fn schlafli_certificate_example() {
    let s = schlafli_certificate::run_example(false).unwrap();
    assert_eq!(s.value_at_z, "126");
    assert_eq!(s.worst_triangle, "1");
    assert!(s.psd_rank.is_none() && s.bundle.is_none());
}

#[test]
fn witness_round_trip_example() {
    let rows = witness_round_trip::run_example(&[4, 5, 6]).unwrap();
    for (row, (n, trace)) in rows.iter().zip([(4, 12.0), (5, 20.0), (6, 30.0)]) {
        assert_eq!(row.n, n);
        assert!(row.witness_valid);
        assert!(row.objective_error < 1e-9);
        assert!(row.round_trip < 1e-8 && row.closed_form < 1e-8);
        assert!((row.closed_form_trace - trace).abs() < 1e-8);
        assert!(row.sr_residual < 1e-8);
    }
}

#[test]
fn dual_certificate_example() {
    let s = dual_certificate::run_example().unwrap();
    assert!((s.trace - 25.0).abs() < 1e-10);
    assert!(s.antisymmetry < 1e-12);
    assert!(s.slack_min_eigenvalue >= -1e-10);
    assert!(s.complementary_slackness <= 1e-8);
    assert!(s.eigenvector_residual <= 1e-6);
    assert!(s.eigenvectors_checked > 0);
}

#[test]
fn projectors_example() {
    for row in projectors::run_example(&[4, 5, 6]).unwrap() {
        assert!(row.etf_vs_general <= 1e-10);
        assert!(row.vs_gram_schmidt <= 1e-8);
        assert_eq!(row.rank, row.expected_rank);
        assert_eq!(row.expected_rank, (row.n - 1) * row.n / 2 - row.n);
    }
}

#[test]
fn partial_transpose_example() {
    let s = partial_transpose::run_example(10, 3).unwrap();
    assert!(s.worst_reconstruction <= 1e-10);
    assert!(s.kernel_dims_ok);
    assert_eq!(s.cases, 10);
    let mut spec = s.identity_spectrum.clone();
    spec.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for (a, b) in spec.iter().zip([1.0, 1.0, 1.0, -1.0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn separability_example() {
    let s = separability::run_example(10, 5).unwrap();
    assert_eq!(s.trials, 10);
    assert!(s.all_valid);
    assert!(s.worst_gram_error <= 1e-8);
    assert!(s.hadamard_exact);
    assert_eq!((s.hadamard_rank, s.hadamard_terms), (4, 4));
    assert!(s.order3_rejected);
}

#[test]
fn laurent_example() {
    for row in laurent::run_example(&[(5, 4), (7, 4), (7, 6)]).unwrap() {
        assert_eq!(row.dim, row.n.pow(row.d as u32 / 2));
        assert!(row.passed, "N = {}, d = {}", row.n, row.d);
        assert!(row.min_eigenvalue >= -1e-8);
    }
}

#[test]
fn complete_moments_example() {
    for row in complete_moments::run_example().unwrap() {
        assert!(row.passed && row.minor_exact, "{}", row.name);
        assert!(row.dim > 0);
        assert!(row.min_eigenvalue >= -1e-8);
    }
}

#[test]
fn cross_section_example() {
    let s = cross_section::run_example(2, 1).unwrap();
    assert_eq!(s.section.theta.len(), 2);
    assert!(s.section.nesting_violation() <= 2e-3);
    let (rc, re4, re2) = s.simplex_ray;
    assert!(rc + 1e-3 < re4 && re4 <= re2 + 1e-3);
}

#[test]
fn frames_srg_example() {
    let s = frames_srg::run_example().unwrap();
    assert_eq!((s.srg.v, s.srg.k, s.srg.lambda, s.srg.mu), (27, 16, Some(10), Some(8)));
    assert!((s.etf28_coherence - 1.0 / 3.0).abs() < 1e-12);
    assert!(s.etf28_maximal);
}

#[test]
fn membership_example() {
    let s = membership::run_example().unwrap();
    let labels: Vec<(&str, &str, &str)> = s.table.iter().map(|r| (r.1, r.2, r.3)).collect();
    assert_eq!(
        labels,
        vec![
            ("member", "member", "member"),
            ("member", "member", "member"),
            ("non-member", "member", "member"),
            ("non-member", "non-member", "member"),
            ("non-member", "non-member", "non-member"),
        ]
    );
    let (value, bound) = s.simplex5_separator.unwrap();
    assert!(value < bound);
}

#[test]
fn file_formats_example() {
    let dir = tempfile::tempdir().unwrap();
    let s = file_formats::run_example(dir.path()).unwrap();
    assert!(s.exact_round_trip && s.float_round_trip && s.frame_round_trip && s.json_round_trip);
}

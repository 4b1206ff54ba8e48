use elliptope4::frames::{simplex_etf, simplex_gram, VectorSystem};
use elliptope4::membership::*;
use elliptope4::numkit::DenseMatrix;
use elliptope4::separability::all_cuts;
use elliptope4::witnesses::{validate_witness, witness_to_moments};
use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;

fn ones(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |_, _| 1.0)
}

fn replay(x: &DenseMatrix, v: &MembershipVerdict) {
    match &v.status {
        Status::Member(MemberWitness::Cuts(dec)) => assert!(dec.gram().max_abs_diff(x).unwrap() <= 1e-6),
        Status::Member(MemberWitness::Eigen(e)) => {
            assert!(e.min() >= -1e-8);
            assert!(e.reconstruct().max_abs_diff(x).unwrap() <= 1e-8);
        }
        Status::Member(MemberWitness::Block(w)) => assert!(validate_witness(w, 1e-6).unwrap().passed),
        other => panic!("not a member: {other:?}"),
    }
}

#[test]
fn e2_examples() {
    let x3 = simplex_gram(3).to_dense();
    let v = e2_membership(&x3, 1e-9).unwrap();
    assert!(v.is_member());
    replay(&x3, &v);
    assert!(e2_membership(&ones(4), 1e-9).unwrap().is_member());

    let bad = DenseMatrix::identity(3).scale(2.0).sub(&ones(3)).unwrap();
    let v = e2_membership(&bad, 1e-9).unwrap();
    assert!(v.is_non_member());
    if let Status::NonMember { gap, .. } = v.status {
        assert!((gap - 1.0).abs() < 1e-9);
    }
    let mut off_diag = DenseMatrix::identity(3);
    off_diag[(1, 1)] = 0.5;
    assert!(e2_membership(&off_diag, 1e-9).unwrap().is_non_member());
}

#[test]
fn identity_is_a_cut_member() {
    let x = DenseMatrix::identity(5);
    let v = cut_membership(&x, 1e-8, 5000).unwrap();
    assert!(v.is_member(), "{:?}", v.status);
    replay(&x, &v);
    assert_eq!(v.label(), "member");
}

#[test]
fn simplex_five_is_separated_from_the_cut_polytope() {
    let x = simplex_gram(5).to_dense();
    let v = cut_membership(&x, 1e-8, 5000).unwrap();
    let Status::NonMember { gap, separator: Some(sep) } = &v.status else {
        panic!("expected NonMember, got {:?}", v.status)
    };
    assert!(*gap > 0.0);
    // The separator is a valid inequality for every cut and is violated at X.
    let value = sep.w.frobenius_dot(&x).unwrap();
    assert!(value < sep.bound);
    for c in all_cuts(5) {
        let cf: Vec<f64> = c.iter().map(|&s| s as f64).collect();
        assert!(sep.w.quadratic_form(&cf).unwrap() >= sep.bound - 1e-9);
    }
    // The classical functional 𝟙𝟙ᵀ: ⟨𝟙𝟙ᵀ, X^(5)⟩ = 0 < 1 ≤ (Σx_i)² on odd-length cuts.
    let j = ones(5);
    assert!(j.frobenius_dot(&x).unwrap().abs() < 1e-12);
    for c in all_cuts(5) {
        let s: i32 = c.iter().map(|&v| v as i32).sum();
        assert!(s * s >= 1);
    }
}

#[test]
fn rank_one_cut_gives_single_term() {
    let mut rng = XorShiftRng::seed_from_u64(17);
    for _ in 0..5 {
        let x: Vec<i8> = (0..5).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let xf: Vec<f64> = x.iter().map(|&s| s as f64).collect();
        let g = DenseMatrix::outer(&xf, &xf);
        let v = cut_membership(&g, 1e-9, 2000).unwrap();
        match &v.status {
            Status::Member(MemberWitness::Cuts(dec)) => {
                let heavy: Vec<_> = dec.weights.iter().filter(|&&w| w > 1e-6).collect();
                assert_eq!(heavy.len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn cut_oracle_refuses_large_instances() {
    assert!(cut_membership(&DenseMatrix::identity(MAX_CUT_N + 1), 1e-8, 10).is_err());
}

#[test]
fn e4_feasibility_examples() {
    let sys = simplex_etf(5).unwrap();
    let v = e4_feasibility(&sys, 1e-8, 5000).unwrap();
    let Status::Member(MemberWitness::Block(w)) = &v.status else {
        panic!("expected a block witness, got {:?}", v.status)
    };
    assert!((w.objective(&sys).unwrap() - 25.0).abs() <= 1e-6);
    assert!(witness_to_moments(w, &sys, 1e-6).is_ok());

    let v = e4_feasibility(&VectorSystem::standard_basis(4), 1e-8, 5000).unwrap();
    assert!(v.is_member(), "{:?}", v.status);

    let v = e4_feasibility(&simplex_etf(3).unwrap(), 1e-8, 5000).unwrap();
    assert!(v.is_non_member(), "{:?}", v.status);
}

#[test]
fn e4_feasibility_refuses_the_28_vector_etf() {
    let v = e4_feasibility(&elliptope4::frames::etf_28_7(), 1e-8, 1000).unwrap();
    assert!(v.is_non_member(), "{:?}", v.status);
}

#[test]
fn e4_membership_examples() {
    for x in [simplex_gram(5).to_dense(), DenseMatrix::identity(5), simplex_gram(4).to_dense()] {
        let v = e4_membership(&x, 1e-8, 5000).unwrap();
        assert!(v.is_member(), "{:?}", v.status);
        replay(&x, &v);
    }
    let v = e4_membership(&simplex_gram(3).to_dense(), 1e-8, 5000).unwrap();
    assert!(v.is_non_member(), "{:?}", v.status);
}

#[test]
fn e4_feasibility_agrees_with_cut_oracle_in_rank_one() {
    let mut rng = XorShiftRng::seed_from_u64(2);
    for _ in 0..20 {
        let n = rng.random_range(2..=6);
        let x: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let sys = VectorSystem::from_signs(&x);
        let g = sys.gram();
        assert!(cut_membership(&g, 1e-9, 2000).unwrap().is_member());
        let v = e4_feasibility(&sys, 1e-9, 2000).unwrap();
        assert!(v.is_member(), "{x:?}: {:?}", v.status);
    }
}

#[test]
fn random_directions_are_orthonormal_and_deterministic() {
    let (a1, a2) = random_directions(5, 1).unwrap();
    for a in [&a1, &a2] {
        assert!(a.diag().iter().all(|&d| d == 0.0));
        assert_eq!(a.max_asymmetry(), 0.0);
    }
    assert!((a1.frobenius_dot(&a1).unwrap() - 1.0).abs() < 1e-12);
    assert!((a2.frobenius_dot(&a2).unwrap() - 1.0).abs() < 1e-12);
    assert!(a1.frobenius_dot(&a2).unwrap().abs() < 1e-12);
    let (b1, b2) = random_directions(5, 1).unwrap();
    assert_eq!((a1.clone(), a2.clone()), (b1, b2));
    let (c1, _) = random_directions(5, 2).unwrap();
    assert_ne!(a1, c1);
    assert!(random_directions(2, 1).is_err());
}

#[test]
fn small_cross_section_is_nested() {
    let (a1, a2) = random_directions(5, 1).unwrap();
    let opts = RayOptions::default();
    let cs = cross_section(&a1, &a2, 4, &opts).unwrap();
    assert_eq!(cs.theta.len(), 4);
    assert!(cs.radius_e2.iter().all(|&r| r > 0.0));
    assert!(cs.nesting_violation() <= 2.0 * opts.bisection_tol);
    let csv = cs.to_csv();
    assert!(csv.starts_with("theta,radius_cut,radius_e4,radius_e2\n"));
    assert_eq!(csv.lines().count(), 5);

    let bad = DenseMatrix::identity(5);
    assert!(cross_section(&bad, &a2, 4, &opts).is_err());
    assert!(cross_section(&a1, &a1, 4, &opts).is_err());
}

#[test]
fn e4_strictly_exceeds_cuts_toward_the_simplex() {
    let mut a = simplex_gram(5).to_dense().sub(&DenseMatrix::identity(5)).unwrap();
    a = a.scale(1.0 / a.frobenius());
    let opts = RayOptions::default();
    let (rc, re4, re2) = ray_radii(&a, &opts).unwrap();
    assert!(rc + opts.bisection_tol < re4, "ρ_C = {rc}, ρ_E4 = {re4}");
    assert!(re4 <= re2 + opts.bisection_tol);
    // X^(5) = I + ‖X^(5) − I‖·A lies on the E₂ boundary of this ray.
    let t = simplex_gram(5).to_dense().sub(&DenseMatrix::identity(5)).unwrap().frobenius();
    assert!((re2 - t).abs() <= opts.bisection_tol);
}

use elliptope4::error::Error;
use elliptope4::frames::{simplex_etf, VectorSystem};
use elliptope4::numkit::*;
use elliptope4::pseudomoments::{etf_degree4, parity_moments, point_mass_moments, pseudocovariance};
use elliptope4::witnesses::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xorshift::XorShiftRng;

fn random_symmetric(rng: &mut XorShiftRng, n: usize) -> DenseMatrix {
    let a = DenseMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    a.add(&a.transpose()).unwrap().scale(0.5)
}

fn sorted_eigh(m: &DenseMatrix) -> Eigh {
    symmetric_eigh(&m.symmetrized(), 1e-14).unwrap()
}

#[test]
fn identity_and_all_ones_witnesses_validate() {
    let w = BlockWitness::new(DenseMatrix::identity(6), 2).unwrap();
    let rep = validate_witness(&w, 1e-10).unwrap();
    assert!(rep.passed);
    assert!((rep.spectral_norm - 1.0).abs() < 1e-12);

    // 𝟙𝟙ᵀ ⊗ I_r has norm exactly N.
    let n = 4;
    let ones = DenseMatrix::from_fn(n, n, |_, _| 1.0);
    let w = BlockWitness::new(ones.kron(&DenseMatrix::identity(3)), 3).unwrap();
    let rep = validate_witness(&w, 1e-10).unwrap();
    assert!(rep.passed);
    assert!((rep.spectral_norm - n as f64).abs() < 1e-10);
    assert!((rep.max_block_norm - 1.0).abs() < 1e-10);
}

#[test]
fn non_symmetric_off_block_is_flagged() {
    let mut m = DenseMatrix::identity(4);
    // Block (0, 1) becomes a quarter-turn rotation; block (1, 0) its transpose keeps M symmetric.
    let rot = DenseMatrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
    m.set_submatrix(0, 2, &rot);
    m.set_submatrix(2, 0, &rot.transpose());
    let rep = validate_witness(&BlockWitness::new(m, 2).unwrap(), 1e-10).unwrap();
    assert!(!rep.passed);
    assert!((rep.symmetry_residual - 2.0).abs() < 1e-12);
}

#[test]
fn block_witness_shape_is_checked() {
    assert!(BlockWitness::new(DenseMatrix::identity(5), 2).is_err());
}

#[test]
fn identity_witness_does_not_certify_orthonormal_basis() {
    let sys = VectorSystem::standard_basis(3);
    let w = BlockWitness::new(DenseMatrix::identity(9), 3).unwrap();
    assert!(matches!(witness_to_moments(&w, &sys, 1e-10), Err(Error::NotOptimal { .. })));
}

#[test]
fn rank_one_round_trip() {
    let x = [1i8, -1, 1, 1, -1];
    let sys = VectorSystem::from_signs(&x);
    let y = point_mass_moments(&x);
    let w = moments_to_witness(&y, &sys, 1e-10).unwrap();
    assert_eq!(w.r(), 1);
    // vᵀMv = N² with unit diagonal forces M = xxᵀ, which is 𝟙𝟙ᵀ for x = 𝟙.
    let xf: Vec<f64> = x.iter().map(|&s| s as f64).collect();
    assert!(w.m.max_abs_diff(&DenseMatrix::outer(&xf, &xf)).unwrap() < 1e-10);
    let ones = [1i8; 4];
    let w1 = moments_to_witness(&point_mass_moments(&ones), &VectorSystem::from_signs(&ones), 1e-10).unwrap();
    assert!(w1.m.max_abs_diff(&DenseMatrix::from_fn(4, 4, |_, _| 1.0)).unwrap() < 1e-10);
    let back = witness_to_moments(&w, &sys, 1e-10).unwrap();
    assert!(back.matrix().max_abs_diff(y.matrix()).unwrap() < 1e-10);
}

#[test]
fn etf_witness_examples() {
    for (n, trace) in [(5usize, 20.0), (4, 12.0), (6, 30.0), (7, 42.0)] {
        let sys = simplex_etf(n).unwrap();
        let w = etf_witness(&sys, 1e-10).unwrap();
        assert!(validate_witness(&w, 1e-9).unwrap().passed);
        assert!((w.m.trace() - trace).abs() < 1e-9);
        let nn = (n * n) as f64;
        assert!((w.objective(&sys).unwrap() - nn).abs() < 1e-9 * nn);
        assert!(w.eigen_residual(&sys).unwrap() < 1e-10);
        assert!(w.block_transport_residual(&sys).unwrap() < 1e-9);

        // Moments from the witness equal the closed-form extension.
        let y = witness_to_moments(&w, &sys, 1e-10).unwrap();
        let reference = etf_degree4(&sys, 1e-10).unwrap();
        assert!(y.matrix().max_abs_diff(reference.matrix()).unwrap() < 1e-10);
    }
    assert!(matches!(etf_witness(&simplex_etf(3).unwrap(), 1e-10), Err(Error::MaximalEtf { .. })));
}

#[test]
fn moments_round_trip_full_rank_and_lifted() {
    let sys = simplex_etf(5).unwrap();
    let y = etf_degree4(&sys, 1e-10).unwrap();
    let w = moments_to_witness(&y, &sys, 1e-10).unwrap();
    assert!(validate_witness(&w, 1e-8).unwrap().passed);
    let back = witness_to_moments(&w, &sys, 1e-8).unwrap();
    assert!(back.matrix().max_abs_diff(y.matrix()).unwrap() <= 1e-8);

    let big = sys.embed(6).unwrap();
    let w6 = moments_to_witness(&y, &big, 1e-10).unwrap();
    assert_eq!(w6.r(), 6);
    assert!(validate_witness(&w6, 1e-8).unwrap().passed);
    let back = witness_to_moments(&w6, &big, 1e-8).unwrap();
    assert!(back.matrix().max_abs_diff(y.matrix()).unwrap() <= 1e-8);

    // Parity moments with the orthonormal basis.
    let basis = VectorSystem::standard_basis(4);
    let y = parity_moments(4);
    let w = moments_to_witness(&y, &basis, 1e-10).unwrap();
    let back = witness_to_moments(&w, &basis, 1e-8).unwrap();
    assert!(back.matrix().max_abs_diff(y.matrix()).unwrap() <= 1e-8);
}

#[test]
fn moments_for_another_gram_are_rejected() {
    let y = etf_degree4(&simplex_etf(5).unwrap(), 1e-10).unwrap();
    assert!(moments_to_witness(&y, &VectorSystem::standard_basis(5), 1e-10).is_err());
}

#[test]
fn sr_factorization_of_two_by_two() {
    let m = 0.6;
    let w = BlockWitness::new(DenseMatrix::from_rows(&[vec![1.0, m], vec![m, 1.0]]).unwrap(), 1).unwrap();
    let sr = sr_factorization(&w, 1e-12).unwrap();
    assert!((sr.s[0][(0, 0)] - 1.0).abs() < 1e-12);
    assert!((sr.s[1][(0, 0)] - m).abs() < 1e-12);
    assert!((sr.rr[1][(0, 0)].abs() - (1.0f64 - m * m).sqrt()).abs() < 1e-12);
    let u = sr.u();
    assert!(u.t_matmul(&u).unwrap().max_abs_diff(&w.m).unwrap() < 1e-12);
}

#[test]
fn sr_factorization_relations() {
    let w = BlockWitness::new(DenseMatrix::identity(6), 2).unwrap();
    let sr = sr_factorization(&w, 1e-12).unwrap();
    assert!(sr.s[1].max_abs() < 1e-12 && sr.s[2].max_abs() < 1e-12);
    assert!(sr.diagonal_residual < 1e-12 && sr.commutator_residual < 1e-12);

    let sys = simplex_etf(5).unwrap();
    let w = etf_witness(&sys, 1e-10).unwrap();
    let sr = sr_factorization(&w, 1e-10).unwrap();
    assert!(sr.diagonal_residual <= 1e-8 && sr.commutator_residual <= 1e-8);
    let u = sr.u();
    assert!(u.t_matmul(&u).unwrap().max_abs_diff(&w.m).unwrap() <= 1e-8);
}

#[test]
fn dual_certificate_properties() {
    let basis = VectorSystem::standard_basis(3);
    let d = dual_certificate(&basis, 1e-10).unwrap();
    assert!((d.trace() - 9.0).abs() < 1e-12);

    let sys = simplex_etf(5).unwrap();
    let d = dual_certificate(&sys, 1e-10).unwrap();
    assert!((d.trace() - 25.0).abs() < 1e-10);
    assert!(d.antisymmetry_residual().unwrap() < 1e-12);
    assert!(d.feasibility_min_eigenvalue(&sys).unwrap() >= -1e-10);
    let w = etf_witness(&sys, 1e-10).unwrap();
    assert!(d.complementary_slackness(&w, &sys).unwrap() <= 1e-8);

    // Weak duality: ⟨D, M⟩ ≥ vᵀMv for any witness, with equality at the optimum.
    let v = sys.stacked();
    let pairing = d.d.frobenius_dot(&w.m).unwrap();
    assert!((pairing - w.m.quadratic_form(&v).unwrap()).abs() < 1e-8);
}

#[test]
fn dual_certificate_needs_full_rank() {
    let v = DenseMatrix::from_rows(&[vec![1.0, 1.0, 1.0], vec![0.0, 0.0, 0.0]]).unwrap();
    assert!(matches!(dual_certificate(&VectorSystem::new(v), 1e-10), Err(Error::RankDeficient { .. })));
}

#[test]
fn vsym_projector_rank_and_range() {
    let sys = simplex_etf(5).unwrap();
    let p = vsym_projector(&sys, 1e-10).unwrap();
    assert!(p.matmul(&p).unwrap().max_abs_diff(&p).unwrap() < 1e-10);
    assert!(p.max_asymmetry() < 1e-12);
    assert_eq!(sorted_eigh(&p).rank(1e-8), 10);
    let mut rng = XorShiftRng::seed_from_u64(9);
    for _ in 0..20 {
        let s = random_symmetric(&mut rng, 4);
        let w = s.matmul(sys.synthesis()).unwrap().vec();
        assert!(projection_residual(&p, &w).unwrap() < 1e-10);
    }

    let signs = VectorSystem::from_signs(&[1, -1, 1]);
    let p1 = vsym_projector(&signs, 1e-10).unwrap();
    let v = signs.stacked();
    assert!(p1.max_abs_diff(&DenseMatrix::outer(&v, &v).scale(1.0 / 3.0)).unwrap() < 1e-12);

    let not_tight = VectorSystem::new(DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap());
    assert!(vsym_projector(&not_tight, 1e-10).is_err());
}

#[test]
fn vsym_prime_projector_paths_agree() {
    let sys = simplex_etf(5).unwrap();
    let p = vsym_prime_projector(&sys, 1e-10).unwrap();
    assert_eq!(sorted_eigh(&p).rank(1e-8), 5);

    let six = simplex_etf(6).unwrap();
    let etf = vsym_prime_projector_etf(&six, 1e-10).unwrap();
    let general = vsym_prime_projector_general(&six, 1e-10).unwrap();
    let gs = vsym_prime_projector_gram_schmidt(&six).unwrap();
    assert!(etf.max_abs_diff(&general).unwrap() <= 1e-10);
    assert!(etf.max_abs_diff(&gs).unwrap() <= 1e-8);

    // Every range element comes from S with v_iᵀ S v_i = 0.
    let mut rng = XorShiftRng::seed_from_u64(4);
    for _ in 0..10 {
        let z: Vec<f64> = (0..20).map(|_| rng.sample(StandardNormal)).collect();
        let w = p.matvec(&z).unwrap();
        let s = recover_symmetric(&w, &sys).unwrap();
        assert!(s.max_asymmetry() < 1e-12);
        for v in sys.vectors() {
            assert!(s.quadratic_form(&v).unwrap().abs() < 1e-9);
        }
        assert!(DenseMatrix::unvec(&w, 4, 5).unwrap().max_abs_diff(&s.matmul(sys.synthesis()).unwrap()).unwrap() < 1e-9);
    }
}

#[test]
fn isometry_on_random_pairs() {
    let mut rng = XorShiftRng::seed_from_u64(77);
    let sys = simplex_etf(6).unwrap();
    for _ in 0..50 {
        let s = random_symmetric(&mut rng, 5);
        let t = random_symmetric(&mut rng, 5);
        let a = isometry_embed(&s, &sys).unwrap();
        let b = isometry_embed(&t, &sys).unwrap();
        let tr = s.frobenius_dot(&t).unwrap();
        assert!((dot(&a, &b) - tr).abs() <= 1e-10 * (1.0 + tr.abs()));
    }
}

#[test]
fn witness_eigenvectors_lie_in_constrained_subspace() {
    for n in [4usize, 5, 6] {
        let sys = simplex_etf(n).unwrap();
        let w = etf_witness(&sys, 1e-10).unwrap();
        let p = vsym_prime_projector(&sys, 1e-10).unwrap();
        let v = sys.stacked();
        let nv = norm(&v);
        let e = sorted_eigh(&w.m);
        let top = e.max();
        for k in 0..e.values.len() {
            if e.values[k] <= 1e-8 * top {
                continue;
            }
            let u = e.vector(k);
            let along = dot(&u, &v) / nv;
            if (along.abs() - 1.0).abs() < 1e-8 {
                continue;
            }
            // Remove the v-component (eigenvalues may be degenerate with N).
            let u: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a - along * b / nv).collect();
            let un = norm(&u);
            if un < 1e-8 {
                continue;
            }
            let u: Vec<f64> = u.iter().map(|a| a / un).collect();
            assert!(projection_residual(&p, &u).unwrap() <= 1e-6, "N = {n}");
            let s = recover_symmetric(&u, &sys).unwrap();
            for vi in sys.vectors() {
                assert!(s.quadratic_form(&vi).unwrap().abs() <= 1e-6);
            }
        }
    }
}

#[test]
fn pseudocovariance_eigenvectors_lie_in_pert() {
    let sys = simplex_etf(5).unwrap();
    let y = etf_degree4(&sys, 1e-10).unwrap();
    let cov = pseudocovariance(&y, 1e-10).unwrap();
    let p = pert_projector(&sys, 1e-10).unwrap();
    let e = sorted_eigh(&cov);
    let mut checked = 0;
    for k in 0..e.values.len() {
        if e.values[k] > 1e-8 {
            assert!(projection_residual(&p, &e.vector(k)).unwrap() <= 1e-6);
            checked += 1;
        }
    }
    assert_eq!(checked, 5);
}

#[test]
fn partial_transpose_spectra() {
    let s = rank_one_pt_spectrum(&DenseMatrix::identity(2)).unwrap();
    let mut vals: Vec<f64> = s.eigenpairs.iter().map(|e| e.1).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert_eq!(vals.len(), 4);
    for (a, b) in vals.iter().zip([1.0, 1.0, 1.0, -1.0]) {
        assert!((a - b).abs() < 1e-12);
    }
    let neg: Vec<_> = s.eigenpairs.iter().filter(|e| e.1 < 0.0).collect();
    assert!(matches!(neg[0].0, PtKind::Antisymmetric(0, 1)));
    let a = &neg[0].2;
    // The antisymmetric vector is ±(e₁⊗e₂ − e₂⊗e₁)/√2.
    assert!((a[1].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12 && (a[1] + a[2]).abs() < 1e-12);

    let s = rank_one_pt_spectrum(&DenseMatrix::diagonal(&[2.0, 1.0])).unwrap();
    let mut vals: Vec<f64> = s.eigenpairs.iter().map(|e| e.1).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for (a, b) in vals.iter().zip([4.0, 2.0, 1.0, -2.0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn kernel_dimensions() {
    let rep = vsym_kernel_check(&VectorSystem::standard_basis(3), 1e-10).unwrap();
    assert!(rep.passed && rep.kernel_dim == 6);
    let rep = vsym_kernel_check(&simplex_etf(5).unwrap(), 1e-10).unwrap();
    assert!(rep.passed && rep.kernel_dim == 10 && rep.expected_dim == 10);

    let mut rng = XorShiftRng::seed_from_u64(8);
    let v = DenseMatrix::from_fn(2, 4, |_, _| rng.sample(StandardNormal));
    let rep = vsym_kernel_check(&VectorSystem::new(v), 1e-10).unwrap();
    assert!(rep.min_eigenvalue >= -1e-10);
    assert_eq!(rep.kernel_dim, 3);
}

#[test]
fn vsym_kernel_contains_witness_eigenvectors() {
    let sys = simplex_etf(5).unwrap();
    let basis = vsym_kernel_basis(&sys).unwrap();
    let p = projector_from_basis(&basis, 20);
    let w = etf_witness(&sys, 1e-10).unwrap();
    let e = sorted_eigh(&w.m);
    for k in 0..20 {
        if e.values[k] > 1e-8 {
            assert!(projection_residual(&p, &e.vector(k)).unwrap() <= 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn rank_one_pt_reconstruction(seed in any::<u64>(), r in 1usize..=3, extra in 0usize..=3) {
        let mut rng = XorShiftRng::seed_from_u64(seed);
        let n = r + extra;
        let v = DenseMatrix::from_fn(r, n, |_, _| rng.sample(StandardNormal));
        let s = rank_one_pt_spectrum(&v).unwrap();
        let vv = v.vec();
        let pt = DenseMatrix::outer(&vv, &vv).partial_transpose(r).unwrap();
        prop_assert!(s.reconstruction().max_abs_diff(&pt).unwrap() <= 1e-10 * (1.0 + pt.max_abs()));
        prop_assert!(s.orthonormality_residual() <= 1e-10);
    }

    #[test]
    fn optimal_witnesses_transport_vectors(n in 4usize..=7) {
        let sys = simplex_etf(n).unwrap();
        let w = etf_witness(&sys, 1e-10).unwrap();
        let v = sys.stacked();
        let mv = w.m.matvec(&v).unwrap();
        let gap = mv.iter().zip(&v).map(|(a, b)| (a - n as f64 * b).abs()).fold(0.0, f64::max);
        prop_assert!(gap <= 1e-9);
        prop_assert!(w.block_transport_residual(&sys).unwrap() <= 1e-9);
    }
}

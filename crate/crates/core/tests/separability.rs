use elliptope4::error::Error;
use elliptope4::frames::VectorSystem;
use elliptope4::membership::cut_membership;
use elliptope4::numkit::*;
use elliptope4::separability::*;
use elliptope4::witnesses::{etf_witness, validate_witness, BlockWitness};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;

/// Random decomposition over linearly independent cuts, so that `rank Gram = m`.
fn random_decomposition(rng: &mut XorShiftRng, n: usize) -> CutDecomposition {
    let mut cuts = all_cuts(n);
    loop {
        cuts.shuffle(rng);
        let m = rng.random_range(1..=n.min(cuts.len()));
        let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let dec = CutDecomposition::new(raw.iter().map(|w| w / total).collect(), cuts[..m].to_vec()).unwrap();
        if symmetric_eigh(&dec.gram(), 1e-13).unwrap().rank(1e-9) == m {
            return dec;
        }
    }
}

#[test]
fn single_cut_gives_all_ones_witness() {
    let dec = CutDecomposition::point(vec![1; 4]).unwrap();
    let sys = VectorSystem::from_signs(&[1, 1, 1, 1]);
    let sep = cuts_to_witness(&dec, &sys, 1e-10).unwrap();
    assert_eq!(sep.witness.r(), 1);
    assert!(sep.witness.m.max_abs_diff(&DenseMatrix::from_fn(4, 4, |_, _| 1.0)).unwrap() < 1e-12);
}

#[test]
fn identity_two_from_two_cuts() {
    let dec = CutDecomposition::new(vec![0.5, 0.5], vec![vec![1, 1], vec![1, -1]]).unwrap();
    assert!(dec.gram().max_abs_diff(&DenseMatrix::identity(2)).unwrap() < 1e-15);
    let sys = VectorSystem::standard_basis(2);
    let sep = cuts_to_witness(&dec, &sys, 1e-10).unwrap();
    assert!(validate_witness(&sep.witness, 1e-10).unwrap().passed);
    assert!((sep.witness.objective(&sys).unwrap() - 4.0).abs() < 1e-12);
    assert!(sep.resum().max_abs_diff(&sep.witness.m).unwrap() < 1e-12);
}

#[test]
fn identity_four_from_uniform_cuts() {
    let dec = CutDecomposition::uniform(4);
    assert_eq!(dec.m(), 8);
    assert!(dec.gram().max_abs_diff(&DenseMatrix::identity(4)).unwrap() < 1e-15);
    let exact = dec.exact_gram(64).unwrap();
    assert_eq!(exact, RationalMatrix::identity(4));
    let sys = VectorSystem::standard_basis(4);
    let sep = cuts_to_witness(&dec, &sys, 1e-10).unwrap();
    assert!(validate_witness(&sep.witness, 1e-10).unwrap().passed);
    assert!((sep.witness.objective(&sys).unwrap() - 16.0).abs() < 1e-10);
    for t in &sep.terms {
        assert!((norm(&t.a) - 1.0).abs() < 1e-12 && (norm(&t.b) - 1.0).abs() < 1e-12);
        assert!(t.rho >= 0.0);
    }
    assert!(sep.resum().max_abs_diff(&sep.witness.m).unwrap() < 1e-10);
}

#[test]
fn decomposition_must_match_system() {
    let dec = CutDecomposition::uniform(3);
    let sys = VectorSystem::from_signs(&[1, 1, 1]);
    assert!(cuts_to_witness(&dec, &sys, 1e-10).is_err());
    assert!(CutDecomposition::new(vec![0.5, 0.4], vec![vec![1, 1], vec![1, -1]]).is_err());
    assert!(CutDecomposition::new(vec![1.0], vec![vec![1, 0]]).is_err());
}

#[test]
fn hadamard_witnesses() {
    let h2 = sylvester_hadamard(1);
    let h4 = sylvester_hadamard(2);
    for h in [&h2, &h4, &sylvester_hadamard(3)] {
        check_hadamard(h).unwrap();
        let n = h.len();
        let w = hadamard_witness(h).unwrap();
        assert!(validate_witness(&w, 1e-10).unwrap().passed);
        let sys = VectorSystem::standard_basis(n);
        let nn = (n * n) as f64;
        assert!((w.objective(&sys).unwrap() - nn).abs() < 1e-9);
        assert_eq!(symmetric_eigh(&w.m, 1e-13).unwrap().rank(1e-9), n);
        let cuts = witness_to_cuts(&w, &sys, 1e-9).unwrap();
        assert!(cuts.gram().max_abs_diff(&DenseMatrix::identity(n)).unwrap() < 1e-9);
    }
    let not_h = vec![vec![1, 1, 1], vec![1, -1, 1], vec![1, 1, -1]];
    assert!(matches!(check_hadamard(&not_h), Err(Error::NotHadamard(_))));
    assert!(matches!(hadamard_witness(&not_h), Err(Error::NotHadamard(_))));
    assert!(check_hadamard(&[vec![1, 2], vec![1, -1]]).is_err());
}

#[test]
fn high_rank_witness_is_not_minimal() {
    // The simplex witness has rank above r, so no cut decomposition can be read off it.
    let sys = elliptope4::frames::simplex_etf(5).unwrap();
    let w = etf_witness(&sys, 1e-10).unwrap();
    assert!(matches!(witness_to_cuts(&w, &sys, 1e-9), Err(Error::NotMinimalRank { .. })));
}

#[test]
fn non_optimal_witness_is_refused() {
    let sys = VectorSystem::standard_basis(3);
    let w = BlockWitness::new(DenseMatrix::identity(9), 3).unwrap();
    assert!(matches!(witness_to_cuts(&w, &sys, 1e-9), Err(Error::NotOptimal { .. })));
}

#[test]
fn joint_diagonalization_of_commuting_family() {
    let q = DenseMatrix::from_rows(&[vec![0.6, 0.8], vec![-0.8, 0.6]]).unwrap();
    let d1 = DenseMatrix::diagonal(&[1.0, -1.0]);
    let d2 = DenseMatrix::diagonal(&[2.0, 2.0]);
    let conj = |d: &DenseMatrix| q.matmul(d).unwrap().matmul(&q.transpose()).unwrap();
    let b = joint_diagonalize(&[conj(&d2), conj(&d1)], CLUSTER_GAP).unwrap();
    for d in [&d1, &d2] {
        let t = b.t_matmul(&conj(d).matmul(&b).unwrap()).unwrap();
        assert!((t[(0, 1)]).abs() < 1e-12);
    }
}

#[test]
fn rationalization_recovers_simple_weights() {
    assert_eq!(rationalize(0.125, 64), ratio(1, 8));
    assert_eq!(rationalize(1.0 / 3.0, 64), ratio(1, 3));
    assert_eq!(rationalize(0.0, 64), int(0));
}

#[test]
fn extracted_cuts_are_confirmed_by_the_cut_oracle() {
    let mut rng = XorShiftRng::seed_from_u64(31);
    for _ in 0..5 {
        let dec = random_decomposition(&mut rng, 5);
        let x = dec.gram();
        let sys = VectorSystem::new(gram_factor(&x, 1e-10).unwrap());
        let sep = cuts_to_witness(&dec, &sys, 1e-9).unwrap();
        let back = witness_to_cuts(&sep.witness, &sys, 1e-8).unwrap();
        let v = cut_membership(&back.gram(), 1e-8, 2000).unwrap();
        assert!(v.is_member(), "{:?}", v.status);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cut_round_trip(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = XorShiftRng::seed_from_u64(seed);
        let dec = random_decomposition(&mut rng, n);
        let x = dec.gram();
        let sys = VectorSystem::new(gram_factor(&x, 1e-10).unwrap());
        let sep = cuts_to_witness(&dec, &sys, 1e-9).unwrap();
        prop_assert!(validate_witness(&sep.witness, 1e-8).unwrap().passed);
        prop_assert!(sep.resum().max_abs_diff(&sep.witness.m).unwrap() <= 1e-9);
        let nn = (n * n) as f64;
        prop_assert!((sep.witness.objective(&sys).unwrap() - nn).abs() <= 1e-8 * nn);
        let back = witness_to_cuts(&sep.witness, &sys, 1e-8).unwrap();
        prop_assert!(back.gram().max_abs_diff(&x).unwrap() <= 1e-8);
        let total: f64 = back.weights.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
    }
}

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::continuous::potential;
use crate::discrete::potential_seq;
use crate::matkernel::tests::{c, random_cmat};
use crate::quadruple::tests::{q1, q2, random_strong_quadruple};

fn scalar_realization(
    gamma: Complex<f64>,
    input: Complex<f64>,
    output: Complex<f64>,
    convention: Convention,
) -> StateSpaceRealization {
    StateSpaceRealization::new(
        CMat::from_element(1, 1, gamma),
        CMat::from_element(1, 1, input),
        CMat::from_element(1, 1, output),
        convention,
    )
    .unwrap()
}

fn random_realization(
    rng: &mut ChaCha8Rng,
    n: usize,
    out_dim: usize,
    in_dim: usize,
    convention: Convention,
) -> StateSpaceRealization {
    StateSpaceRealization::new(
        random_cmat(rng, n, n),
        random_cmat(rng, n, in_dim),
        random_cmat(rng, out_dim, n),
        convention,
    )
    .unwrap()
}

fn sample_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<Complex<f64>> {
    (0..count)
        .map(|_| c(rng.gen_range(-4.0..4.0), rng.gen_range(2.0..6.0)))
        .collect()
}

#[test]
fn i_over_z_recovers_q1() {
    let phi = scalar_realization(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), Convention::Continuous);
    let q = invert_continuous(&phi).unwrap();
    let reference = q1();
    assert!((q.alpha() - reference.alpha()).norm() < 1e-12);
    assert!((q.s0() - reference.s0()).norm() < 1e-14);
    assert!((q.theta1() - reference.theta1()).norm() < 1e-12);
    assert!((q.theta2() - reference.theta2()).norm() < 1e-12);
}

#[test]
fn minus_2i_over_z_recovers_q2() {
    let r = 2f64.sqrt();
    let phi = scalar_realization(c(0.0, 0.0), c(r, 0.0), c(r, 0.0), Convention::Discrete);
    let q = invert_discrete(&phi).unwrap();
    let reference = q2();
    assert!((q.alpha() - reference.alpha()).norm() < 1e-12);
    assert!((q.theta1() - reference.theta1()).norm() < 1e-12);
    assert!((q.theta2() - reference.theta2()).norm() < 1e-12);
}

#[test]
fn zero_function_maps_to_empty_quadruple() {
    let phi = StateSpaceRealization::zero(2, 3, Convention::Continuous);
    let q = invert_continuous(&phi).unwrap();
    assert_eq!(q.n(), 0);
    assert_eq!((q.m1(), q.m2()), (3, 2));
    assert!(potential(&q, 1.0).unwrap().norm() == 0.0);

    let err = roundtrip_error(&phi, InverseMode::Continuous, &[c(0.0, 3.0)]).unwrap();
    assert!(err == 0.0);

    let phi_d = StateSpaceRealization::zero(1, 2, Convention::Discrete);
    let q_d = invert_discrete(&phi_d).unwrap();
    assert_eq!(q_d.n(), 0);
    let seq = potential_seq(&q_d, 3).unwrap();
    assert!((seq.c(2) - q_d.signature()).norm() == 0.0);
}

#[test]
fn convention_mismatch_is_rejected() {
    let phi = StateSpaceRealization::zero(1, 1, Convention::Discrete);
    assert!(matches!(
        invert_continuous(&phi),
        Err(Error::InvalidArgument(_))
    ));
    let phi = StateSpaceRealization::zero(1, 1, Convention::Continuous);
    assert!(matches!(
        invert_discrete(&phi),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn continuous_round_trip_for_random_realizations() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..5 {
        let n = rng.gen_range(1..=6);
        let m1 = rng.gen_range(1..=3);
        let m2 = rng.gen_range(1..=3);
        let phi = random_realization(&mut rng, n, m2, m1, Convention::Continuous);
        let q = invert_continuous(&phi).unwrap();

        // Paper normalization and strongness guarantees.
        assert!((q.s0() - CMat::identity(q.n(), q.n())).norm() == 0.0);
        assert!(q.validate(1e-10).passes);
        let flag = q.is_strong().unwrap();
        assert!(flag.is_strong());
        assert_eq!(
            matkernel::controllability_rank(q.alpha(), q.theta2()).unwrap(),
            q.n()
        );

        let samples = sample_points(&mut rng, 20);
        let err = roundtrip_error(&phi, InverseMode::Continuous, &samples).unwrap();
        assert!(err < 1e-8, "round-trip error {err}");
    }
}

#[test]
fn discrete_round_trip_for_random_realizations() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..5 {
        let n = rng.gen_range(1..=6);
        let m1 = rng.gen_range(1..=3);
        let m2 = rng.gen_range(1..=3);
        let phi = random_realization(&mut rng, n, m1, m2, Convention::Discrete);
        let q = invert_discrete(&phi).unwrap();
        assert!(q.validate(1e-10).passes);
        assert!(q.is_strong().unwrap().is_strong());

        let samples = sample_points(&mut rng, 20);
        let err = roundtrip_error(&phi, InverseMode::Discrete, &samples).unwrap();
        assert!(err < 1e-8, "round-trip error {err}");
    }
}

/// Potentials, not quadruples, are the unique objects: inverting the Weyl
/// function of Q must reproduce Q's potential even though the recovered
/// quadruple is a different representative.
#[test]
fn continuous_inverse_reproduces_the_potential() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let q = random_strong_quadruple(&mut rng, 3, 2, 1);
    let recovered = invert_continuous(&q.phi1()).unwrap();
    for k in 0..=10 {
        let x = 0.5 * k as f64;
        let v1 = potential(&q, x).unwrap();
        let v2 = potential(&recovered, x).unwrap();
        assert!((v1 - v2).norm() < 1e-8, "x = {x}");
    }
}

#[test]
fn discrete_inverse_reproduces_the_potential_sequence() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    let q = random_strong_quadruple(&mut rng, 3, 1, 2);
    let recovered = invert_discrete(&q.phi2()).unwrap();
    let seq1 = potential_seq(&q, 10).unwrap();
    let seq2 = potential_seq(&recovered, 10).unwrap();
    for k in 0..=10 {
        assert!((seq1.c(k) - seq2.c(k)).norm() < 1e-8, "k = {k}");
    }
}

#[test]
fn non_minimal_input_is_reduced_before_inversion() {
    // i/z padded with an unreachable state; must still recover Q1.
    let mut state = CMat::zeros(2, 2);
    state[(1, 1)] = c(0.0, 3.0);
    let input = CMat::from_row_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
    let output = CMat::from_row_slice(1, 2, &[c(1.0, 0.0), c(0.0, 0.0)]);
    let phi = StateSpaceRealization::new(state, input, output, Convention::Continuous).unwrap();
    let q = invert_continuous(&phi).unwrap();
    assert_eq!(q.n(), 1);
    assert!((q.alpha()[(0, 0)] - c(0.0, 1.0)).norm() < 1e-12);
}

//! Acceptance suite: one test (and one printed PASS/FAIL line) per criterion.
//! Criteria 1-10 live here; criterion 11 (the command-line contract) is
//! exercised in the CLI crate's own `acceptance` integration test, next to
//! the binary it drives.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dirac_pe::matkernel;
use dirac_pe::{continuous, discrete, evolution, inverse};
use dirac_pe::{AdmissibleQuadruple, CMat, Convention, StateSpaceRealization};

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn random_cmat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Strongly admissible quadruple with sigma(alpha) near `center`*i (spread
/// ~15-20%). center = 2.0 keeps every operation in the suite well
/// conditioned: x-propagation growth stays modest, the k-recursion's moduli
/// are clustered, and the t-flow exponents (alpha -/+ i)^{-1} stay tame.
fn random_quadruple(
    rng: &mut ChaCha8Rng,
    n: usize,
    m1: usize,
    m2: usize,
    center: f64,
    spread: f64,
) -> AdmissibleQuadruple {
    loop {
        let e = random_cmat(rng, n, n);
        let alpha = (CMat::identity(n, n) * c(center, 0.0) + e * c(spread, 0.0)) * c(0.0, 1.0);
        let theta1 = random_cmat(rng, n, m1);
        let theta2 = random_cmat(rng, n, m2);
        let gram = &theta1 * theta1.adjoint() + &theta2 * theta2.adjoint();
        let Ok(s) = matkernel::sylvester_solve(&alpha, &(-alpha.adjoint()), &(gram * c(0.0, 1.0)))
        else {
            continue;
        };
        let s = (&s + s.adjoint()) * c(0.5, 0.0);
        let Ok(q) = AdmissibleQuadruple::new(alpha, s, theta1, theta2) else {
            continue;
        };
        let flag = q.is_strong().unwrap();
        if flag.is_strong() && flag.i_not_eigenvalue {
            return q;
        }
    }
}

/// Strongly admissible quadruple built for deep k-recursions: S0 = I
/// (admissibility then fixes the skew part of alpha to i Lambda Lambda* / 2,
/// leaving the Hermitian part free), with sigma(alpha) clustered near the
/// real point 3. Near-real eigenvalues make the one-step growth factors
/// |1 + i/lambda| and |1 - i/lambda| equal in modulus, so kappa(S_k) stays
/// below ~1e3 out to k = 30 and both fundamental-solution routes keep full
/// precision.
fn random_lattice_quadruple(
    rng: &mut ChaCha8Rng,
    n: usize,
    m1: usize,
    m2: usize,
) -> AdmissibleQuadruple {
    loop {
        let theta1 = random_cmat(rng, n, m1) * c(0.5, 0.0);
        let theta2 = random_cmat(rng, n, m2) * c(0.5, 0.0);
        let w = random_cmat(rng, n, n);
        let h = (&w + w.adjoint()) * c(0.08, 0.0) + CMat::identity(n, n) * c(3.0, 0.0);
        let gram = &theta1 * theta1.adjoint() + &theta2 * theta2.adjoint();
        let alpha = h + gram * c(0.0, 0.5);
        let Ok(q) = AdmissibleQuadruple::new(alpha, CMat::identity(n, n), theta1, theta2) else {
            continue;
        };
        let flag = q.is_strong().unwrap();
        if flag.is_strong() && flag.i_not_eigenvalue {
            return q;
        }
    }
}

fn random_dims(rng: &mut ChaCha8Rng) -> (usize, usize, usize) {
    (
        rng.gen_range(1..=6),
        rng.gen_range(1..=3),
        rng.gen_range(1..=3),
    )
}

/// The scalar single-soliton generator: alpha = i, S0 = theta1 = theta2 = 1.
fn q1() -> AdmissibleQuadruple {
    AdmissibleQuadruple::new(
        CMat::from_element(1, 1, c(0.0, 1.0)),
        CMat::from_element(1, 1, c(1.0, 0.0)),
        CMat::from_element(1, 1, c(1.0, 0.0)),
        CMat::from_element(1, 1, c(1.0, 0.0)),
    )
    .unwrap()
}

/// alpha = 2i, S0 = 1, theta1 = theta2 = sqrt(2): the discrete/evolution fixture.
fn q2() -> AdmissibleQuadruple {
    let r = c(2f64.sqrt(), 0.0);
    AdmissibleQuadruple::new(
        CMat::from_element(1, 1, c(0.0, 2.0)),
        CMat::from_element(1, 1, c(1.0, 0.0)),
        CMat::from_element(1, 1, r),
        CMat::from_element(1, 1, r),
    )
    .unwrap()
}

struct Criterion {
    number: u32,
    label: &'static str,
}

impl Criterion {
    fn new(number: u32, label: &'static str) -> Self {
        Criterion { number, label }
    }

    fn finish(self, failure: Option<String>) {
        match failure {
            None => println!("[PASS] criterion {:>2}: {}", self.number, self.label),
            Some(why) => {
                println!("[FAIL] criterion {:>2}: {} — {why}", self.number, self.label);
                panic!("criterion {} failed: {why}", self.number);
            }
        }
    }
}

#[test]
fn criterion_01_admissibility_preservation() {
    let crit = Criterion::new(1, "admissibility preserved by all four propagations");
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failure = None;
    let check = |tag: &str, moved: dirac_pe::Result<AdmissibleQuadruple>| -> bool {
        match moved {
            Ok(q) => {
                let report = q.validate(1e-9);
                let scale = 1.0 + q.s0().norm() + q.theta1().norm() + q.theta2().norm();
                if report.admissibility_residual / scale >= 1e-9 || report.min_eigenvalue <= 0.0 {
                    return false;
                }
                let _ = tag;
                true
            }
            Err(_) => false,
        }
    };
    'outer: for trial in 0..200 {
        let (n, m1, m2) = random_dims(&mut rng);
        let q = random_quadruple(&mut rng, n, m1, m2, 2.0, 0.2);
        for x in [0.5, 1.0, 2.0] {
            if !check("propagate_x", q.propagate_x(x)) {
                failure = Some(format!("trial {trial}: propagate_x({x})"));
                break 'outer;
            }
        }
        if !check("propagate_k", q.propagate_k(20)) {
            failure = Some(format!("trial {trial}: propagate_k(20)"));
            break;
        }
        for t in [0.5, 1.0] {
            if !check("flow_gdhm", q.flow_gdhm(t))
                || !check("flow_zs2", q.flow_zs(t, 2))
                || !check("flow_zs3", q.flow_zs(t, 3))
            {
                failure = Some(format!("trial {trial}: t-flow at t = {t}"));
                break 'outer;
            }
        }
    }
    crit.finish(failure);
}

#[test]
fn criterion_02_transfer_function_identities() {
    let crit = Criterion::new(2, "transfer-function identities and real-line unitarity");
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut failure = None;
    'outer: for _ in 0..20 {
        let (n, m1, m2) = random_dims(&mut rng);
        let q = random_quadruple(&mut rng, n, m1, m2, 2.0, 0.2);
        let lambda = q.lambda();
        let id_m = CMat::identity(q.m(), q.m());
        let id_n = CMat::identity(n, n);
        for _ in 0..10 {
            // sigma(alpha) clusters near 2i; keep the sample points in the
            // band Im in (0.3, 1.0) so both resolvents stay well conditioned.
            let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.3..1.0));
            let zeta = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.3..1.0));
            let rz = (&id_n * z - q.alpha()).try_inverse().unwrap();
            let rzeta_star = (&id_n * zeta.conj() - q.alpha().adjoint())
                .try_inverse()
                .unwrap();
            let wz = q.transfer(z).unwrap();
            let wzeta = q.transfer(zeta).unwrap();
            // I - W(z)W(zeta)* = i(z - conj(zeta)) Lambda* S0^{-1} (zI - alpha)^{-1}
            //                    S0 (conj(zeta)I - alpha*)^{-1} S0^{-1} Lambda.
            let lhs1 = &id_m - &wz * wzeta.adjoint();
            let rhs1 = lambda.adjoint()
                * q.s0_inv()
                * &rz
                * q.s0()
                * &rzeta_star
                * q.s0_inv()
                * &lambda
                * (c(0.0, 1.0) * (z - zeta.conj()));
            // I - W(z)*W(z) = i(z - conj z) Lambda* (resolvent)* S0^{-1} (resolvent) Lambda.
            let lhs2 = &id_m - wz.adjoint() * &wz;
            let rhs2 = lambda.adjoint() * rz.adjoint() * q.s0_inv() * &rz * &lambda
                * (c(0.0, 1.0) * (z - z.conj()));
            let scale = 1.0 + rz.norm() * rzeta_star.norm();
            if (lhs1 - rhs1).norm() >= 1e-10 * scale || (lhs2 - rhs2).norm() >= 1e-10 * scale {
                failure = Some(format!("identity residual too large at z = {z}, zeta = {zeta}"));
                break 'outer;
            }
            // Real-line unitarity.
            let lam = c(rng.gen_range(-4.0..4.0), 0.0);
            let wl = q.transfer(lam).unwrap();
            if (&wl * wl.adjoint() - &id_m).norm() >= 1e-10 {
                failure = Some(format!("not unitary at lambda = {lam}"));
                break 'outer;
            }
        }
    }
    crit.finish(failure);
}

#[test]
fn criterion_03_scalar_continuous_fixture() {
    let crit = Criterion::new(3, "scalar continuous fixture: 2 sech 2x, phi = i/z");
    let q = q1();
    let mut failure = None;
    for x in [0.0, 0.5, 1.0, 2.0] {
        let v = continuous::potential(&q, x).unwrap()[(0, 0)];
        let expected = 2.0 / (2.0 * x).cosh();
        if (v - c(expected, 0.0)).norm() >= 1e-12 {
            failure = Some(format!("v({x}) = {v}, expected {expected}"));
        }
        let alt = continuous::potential_alt(&q, x).unwrap()[(0, 0)];
        if (v - alt).norm() >= 1e-10 {
            failure = Some(format!("potential_alt disagrees at x = {x}"));
        }
    }
    let phi = continuous::weyl(&q);
    for z in [c(0.0, 2.0), c(1.0, 1.0), c(-2.0, 0.7)] {
        if (phi.eval(z).unwrap()[(0, 0)] - c(0.0, 1.0) / z).norm() >= 1e-13 {
            failure = Some(format!("phi({z}) != i/z"));
        }
    }
    crit.finish(failure);
}

#[test]
fn criterion_04_scalar_discrete_fixture() {
    let crit = Criterion::new(4, "scalar discrete fixture: C0, phi = -2i/z, H annihilation");
    let q = q2();
    let mut failure = None;
    let seq = discrete::potential_seq(&q, 1).unwrap();
    let expected = CMat::from_row_slice(
        2,
        2,
        &[c(-0.6, 0.0), c(0.8, 0.0), c(0.8, 0.0), c(0.6, 0.0)],
    );
    if (seq.c(0) - expected).norm() >= 1e-14 {
        failure = Some(format!("C0 = {}", seq.c(0)));
    }
    let phi = discrete::weyl_d(&q);
    for z in [c(0.0, 2.0), c(1.5, 1.0)] {
        if (phi.eval(z).unwrap()[(0, 0)] - c(0.0, -2.0) / z).norm() >= 1e-13 {
            failure = Some(format!("phi({z}) != -2i/z"));
        }
    }
    let (h_plus, h_minus) = seq.h_pm(0).unwrap();
    let id = CMat::identity(2, 2);
    let c0 = seq.c(0);
    let (h1_plus, h1_minus) = seq.h_pm(1).unwrap();
    let worst = ((&id - c0) * &h_plus)
        .norm()
        .max((&h1_plus * (&id - c0)).norm())
        .max(((&id + c0) * &h_minus).norm())
        .max((&h1_minus * (&id + c0)).norm());
    if worst >= 1e-12 {
        failure = Some(format!("annihilation residual {worst:e}"));
    }
    crit.finish(failure);
}

#[test]
fn criterion_05_inverse_round_trips() {
    let crit = Criterion::new(5, "inverse problems: 100 random round trips per mode");
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut failure = None;
    'outer: for mode in [inverse::InverseMode::Continuous, inverse::InverseMode::Discrete] {
        for trial in 0..100 {
            let n = rng.gen_range(1..=6);
            let out_dim = rng.gen_range(1..=3);
            let in_dim = rng.gen_range(1..=3);
            let convention = match mode {
                inverse::InverseMode::Continuous => Convention::Continuous,
                inverse::InverseMode::Discrete => Convention::Discrete,
            };
            let phi = StateSpaceRealization::new(
                random_cmat(&mut rng, n, n),
                random_cmat(&mut rng, n, in_dim),
                random_cmat(&mut rng, out_dim, n),
                convention,
            )
            .unwrap();
            let samples: Vec<Complex<f64>> = (0..10)
                .map(|_| c(rng.gen_range(-4.0..4.0), rng.gen_range(2.0..6.0)))
                .collect();
            let err = inverse::roundtrip_error(&phi, mode, &samples).unwrap();
            if err >= 1e-8 {
                failure = Some(format!("{convention:?} trial {trial}: sample error {err:e}"));
                break 'outer;
            }
            let q = match mode {
                inverse::InverseMode::Continuous => inverse::invert_continuous(&phi).unwrap(),
                inverse::InverseMode::Discrete => inverse::invert_discrete(&phi).unwrap(),
            };
            if !q.validate(1e-10).passes || !q.is_strong().unwrap().is_strong() {
                failure = Some(format!("{convention:?} trial {trial}: weak recovery"));
                break 'outer;
            }
            // Riccati certificate on the minimal realization actually inverted:
            // gamma X - X gamma* - i X b b* X + i q0 = 0 with X Hermitian PD.
            let minimal = phi.minimal().unwrap();
            let gamma = minimal.state().clone();
            let (b, q0) = match mode {
                inverse::InverseMode::Continuous => (
                    minimal.output().adjoint(),
                    minimal.input() * minimal.input().adjoint(),
                ),
                inverse::InverseMode::Discrete => (
                    minimal.output().adjoint(),
                    minimal.input() * minimal.input().adjoint(),
                ),
            };
            let x = matkernel::care_solve(&gamma, &b, &q0).unwrap();
            let residual = (&gamma * &x
                - &x * gamma.adjoint()
                - (&x * &b * b.adjoint() * &x) * c(0.0, 1.0)
                + &q0 * c(0.0, 1.0))
                .norm();
            let min_eig = matkernel::spectrum(&((&x + x.adjoint()) * c(0.5, 0.0)))
                .unwrap()
                .eigenvalues
                .iter()
                .map(|z| z.re)
                .fold(f64::INFINITY, f64::min);
            if residual >= 1e-10 * (1.0 + x.norm()) || min_eig <= 0.0 {
                failure = Some(format!(
                    "{convention:?} trial {trial}: Riccati residual {residual:e}, min eig {min_eig:e}"
                ));
                break 'outer;
            }
        }
    }
    crit.finish(failure);
}

#[test]
fn criterion_06_discrete_fundamental_solution() {
    let crit = Criterion::new(6, "closed-form discrete fundamental solution vs recursion");
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut failure = None;
    'outer: for trial in 0..50 {
        let (n, m1, m2) = random_dims(&mut rng);
        let q = random_lattice_quadruple(&mut rng, n, m1, m2);
        let seq = discrete::potential_seq(&q, 30).unwrap();
        for _ in 0..5 {
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(1.2..3.0));
            for k in [10, 20, 30] {
                let closed = seq.fundamental_w(k, z).unwrap();
                let recursive = seq.fundamental_w_recursive(k, z).unwrap();
                let rel = (&closed - &recursive).norm() / (1.0 + closed.norm());
                if rel >= 1e-11 {
                    failure = Some(format!("trial {trial}, k = {k}, z = {z}: {rel:e}"));
                    break 'outer;
                }
            }
        }
    }
    crit.finish(failure);
}

#[test]
fn criterion_07_weyl_summability_contrast() {
    let crit = Criterion::new(7, "Weyl series converges for phi, diverges for impostor");
    let q = q2();
    let z = c(0.0, 2.0);
    let mut failure = None;
    let norms = discrete::weyl_summation(&q, &discrete::weyl_d(&q), z, 60).unwrap();
    let late_increment = (norms[55] - norms[45]).abs();
    if late_increment >= 1e-8 {
        failure = Some(format!("genuine phi still increasing: {late_increment:e}"));
    }
    // Sign-flipped impostor +2i/z.
    let impostor = StateSpaceRealization::new(
        CMat::from_element(1, 1, c(0.0, 0.0)),
        CMat::from_element(1, 1, c(2f64.sqrt(), 0.0)),
        -CMat::from_element(1, 1, c(2f64.sqrt(), 0.0)),
        Convention::Discrete,
    )
    .unwrap();
    let bad = discrete::weyl_summation(&q, &impostor, z, 60).unwrap();
    if *bad.last().unwrap() <= 1e6 {
        failure = Some(format!("impostor sum only reached {:e}", bad.last().unwrap()));
    }
    crit.finish(failure);
}

#[test]
fn criterion_08_gdhm_explicit_solution() {
    let crit = Criterion::new(8, "magnet-model and zero-curvature residuals, O(h^2)");
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut failure = None;
    let z = c(1.5, 1.0);
    let mut quadruples = vec![q2()];
    for _ in 0..20 {
        let n = rng.gen_range(1..=4);
        let m1 = rng.gen_range(1..=2);
        let m2 = rng.gen_range(1..=2);
        quadruples.push(random_lattice_quadruple(&mut rng, n, m1, m2));
    }
    'outer: for (i, q) in quadruples.iter().enumerate() {
        for t in [0.3, 0.8] {
            for k in 0..=4usize {
                let g = evolution::gdhm_residual(q, t, k, 1e-4).unwrap();
                let zc = evolution::zcc_residual(q, t, k, z, 1e-4).unwrap();
                if g >= 1e-6 || zc >= 1e-6 {
                    failure = Some(format!("q{i}, t = {t}, k = {k}: gdhm {g:e}, zcc {zc:e}"));
                    break 'outer;
                }
            }
            // Order-2 convergence, measured above the roundoff floor.
            let (g1, g2) = (
                evolution::gdhm_residual(q, t, 1, 1e-3).unwrap(),
                evolution::gdhm_residual(q, t, 1, 2e-3).unwrap(),
            );
            let (z1, z2) = (
                evolution::zcc_residual(q, t, 1, z, 1e-3).unwrap(),
                evolution::zcc_residual(q, t, 1, z, 2e-3).unwrap(),
            );
            if g1 > 1e-9 && !(3.5..=4.5).contains(&(g2 / g1)) {
                failure = Some(format!("q{i}, t = {t}: gdhm ratio {}", g2 / g1));
                break 'outer;
            }
            if z1 > 1e-9 && !(3.5..=4.5).contains(&(z2 / z1)) {
                failure = Some(format!("q{i}, t = {t}: zcc ratio {}", z2 / z1));
                break 'outer;
            }
        }
    }
    if failure.is_none() {
        // C0(t) phase rotation for the fixture.
        for t in [0.3, 0.8] {
            let c0 = evolution::gdhm_c(&q2(), t, 0).unwrap();
            let phase = c(0.0, -4.0 * t / 3.0).exp();
            let expected = CMat::from_row_slice(
                2,
                2,
                &[c(-0.6, 0.0), phase * 0.8, phase.conj() * 0.8, c(0.6, 0.0)],
            );
            if (c0 - expected).norm() >= 1e-12 {
                failure = Some(format!("C0({t}) phase formula mismatch"));
            }
        }
    }
    crit.finish(failure);
}

#[test]
fn criterion_09_weyl_evolution_consistency() {
    let crit = Criterion::new(9, "Weyl evolution equals the flow route; Q2 closed form");
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut failure = None;
    'outer: for trial in 0..10 {
        let n = rng.gen_range(1..=4);
        let m1 = rng.gen_range(1..=2);
        let m2 = rng.gen_range(1..=2);
        let q = random_quadruple(&mut rng, n, m1, m2, 2.0, 0.2);
        let t = rng.gen_range(-1.0..1.0);
        let direct = evolution::weyl_evolution(&q, t).unwrap();
        let via_flow = discrete::weyl_d(&q.flow_gdhm(t).unwrap());
        for _ in 0..10 {
            let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(1.5..4.0));
            let diff = (direct.eval(z).unwrap() - via_flow.eval(z).unwrap()).norm();
            if diff >= 1e-10 {
                failure = Some(format!("trial {trial}, z = {z}: routes differ by {diff:e}"));
                break 'outer;
            }
        }
    }
    if failure.is_none() {
        let t = 0.6;
        let phi = evolution::weyl_evolution(&q2(), t).unwrap();
        for z in [c(0.0, 2.0), c(1.3, 0.4)] {
            let expected = c(0.0, -2.0) * c(0.0, -4.0 * t / 3.0).exp() / z;
            if (phi.eval(z).unwrap()[(0, 0)] - expected).norm() >= 1e-12 {
                failure = Some(format!("Q2 closed form mismatch at z = {z}"));
            }
        }
    }
    crit.finish(failure);
}

#[test]
fn criterion_10_nls_mkdv() {
    let crit = Criterion::new(10, "NLS/mKdV solution families and residual convergence");
    let q = q1();
    let mut failure = None;
    for (x, t) in [(0.0, 0.0), (0.7, 0.4), (-1.1, 1.0)] {
        let v = evolution::vxt(&q, x, t, 2).unwrap()[(0, 0)];
        let expected = c(0.0, -2.0 * t).exp() * 2.0 / (2.0 * x).cosh();
        if (v - expected).norm() >= 1e-12 {
            failure = Some(format!("v({x}, {t}) off by {:e}", (v - expected).norm()));
        }
    }
    let nls = evolution::nls_residual(&q, 0.5, 0.3, 1e-3).unwrap();
    if nls >= 1e-5 {
        failure = Some(format!("NLS residual {nls:e}"));
    }
    let mkdv = evolution::mkdv_residual(&q, 0.5, 0.3, 2e-3).unwrap();
    if mkdv >= 1e-3 {
        failure = Some(format!("mKdV residual {mkdv:e}"));
    }
    let nls2 = evolution::nls_residual(&q, 0.5, 0.3, 2e-3).unwrap();
    if !(3.5..=4.5).contains(&(nls2 / nls)) {
        failure = Some(format!("NLS ratio {}", nls2 / nls));
    }
    let mkdv2 = evolution::mkdv_residual(&q, 0.5, 0.3, 4e-3).unwrap();
    if !(3.0..=5.0).contains(&(mkdv2 / mkdv)) {
        failure = Some(format!("mKdV ratio {}", mkdv2 / mkdv));
    }
    crit.finish(failure);
}

//! Time-dependent structures: the doubly-indexed quadruples Sigma_{t,k},
//! explicit solutions of the generalized discrete Heisenberg magnet model
//! (C_k(t) and H_k^+/-(t)), the auxiliary linear systems with their joint
//! solution Y_k(t,z), residual verifiers for the compatibility conditions,
//! the Weyl-function evolution, and the x/t potential families solving the
//! matrix NLS and mKdV equations.

use num_complex::Complex;

use crate::continuous;
use crate::discrete::{self, DiscretePotentialSequence};
use crate::error::{Error, Result};
use crate::matkernel::CMat;
use crate::quadruple::{projections, AdmissibleQuadruple};
use crate::realization::{Convention, StateSpaceRealization};

/// The quadruple Sigma_{t,k} together with its construction context and the
/// transfer-function values at +/- i that the H-machinery reuses.
#[derive(Debug, Clone)]
pub struct EvolvedState {
    base: AdmissibleQuadruple,
    t: f64,
    k: usize,
    sigma: AdmissibleQuadruple,
    w_at_i: CMat,
    w_at_minus_i: CMat,
}

impl EvolvedState {
    pub fn base(&self) -> &AdmissibleQuadruple {
        &self.base
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sigma(&self) -> &AdmissibleQuadruple {
        &self.sigma
    }

    /// H_k^+(t) = W(i)(I + j)W(-i)* and H_k^-(t) = W(-i)(I - j)W(i)* from
    /// the cached transfer values.
    pub fn h_pm(&self) -> (CMat, CMat) {
        let (p1, p2) = projections(self.base.m1(), self.base.m2());
        let two = Complex::new(2.0, 0.0);
        let h_plus = &self.w_at_i * p1 * self.w_at_minus_i.adjoint() * two;
        let h_minus = &self.w_at_minus_i * p2 * self.w_at_i.adjoint() * two;
        (h_plus, h_minus)
    }
}

/// Builds Sigma_{t,k}, verifying that the two construction orders
/// (t-flow then k-steps, k-steps then t-flow) agree.
pub fn state(q: &AdmissibleQuadruple, t: f64, k: usize) -> Result<EvolvedState> {
    let via_flow_first = q.flow_gdhm(t)?.propagate_k(k)?;
    let via_steps_first = q.propagate_k(k)?.flow_gdhm(t)?;
    let scale = 1.0 + via_flow_first.s0().norm();
    let disagreement = (via_flow_first.s0() - via_steps_first.s0()).norm()
        + (via_flow_first.theta1() - via_steps_first.theta1()).norm()
        + (via_flow_first.theta2() - via_steps_first.theta2()).norm();
    if disagreement > 1e-10 * scale {
        return Err(Error::Inconsistent(format!(
            "Sigma_(t,k) construction orders disagree by {disagreement:.3e} at t = {t}, k = {k}"
        )));
    }
    let (w_at_i, w_at_minus_i) = if q.n() == 0 {
        let id = CMat::identity(q.m(), q.m());
        (id.clone(), id)
    } else {
        (
            via_flow_first.transfer(Complex::new(0.0, 1.0))?,
            via_flow_first.transfer(Complex::new(0.0, -1.0))?,
        )
    };
    Ok(EvolvedState {
        base: q.clone(),
        t,
        k,
        sigma: via_flow_first,
        w_at_i,
        w_at_minus_i,
    })
}

fn evolved_sequence(
    q: &AdmissibleQuadruple,
    t: f64,
    horizon: usize,
) -> Result<DiscretePotentialSequence> {
    discrete::potential_seq(&q.flow_gdhm(t)?, horizon)
}

/// C_k(t): the k-th potential matrix of the sequence generated by Sigma_t.
pub fn gdhm_c(q: &AdmissibleQuadruple, t: f64, k: usize) -> Result<CMat> {
    Ok(evolved_sequence(q, t, k)?.c(k).clone())
}

/// (H_k^+(t), H_k^-(t)).
pub fn gdhm_h(q: &AdmissibleQuadruple, t: f64, k: usize) -> Result<(CMat, CMat)> {
    Ok(state(q, t, k)?.h_pm())
}

/// Discrete-direction auxiliary system matrix G_k(t, z) = I + (i/z) C_k(t).
pub fn aux_g(q: &AdmissibleQuadruple, t: f64, k: usize, z: Complex<f64>) -> Result<CMat> {
    if z.norm() == 0.0 {
        return Err(Error::NearPole(z));
    }
    let m = q.m();
    Ok(CMat::identity(m, m) + gdhm_c(q, t, k)? * (Complex::new(0.0, 1.0) / z))
}

/// Time-direction auxiliary system matrix
/// F_k(t, z) = -H_k^+(t)/(z + i) - H_k^-(t)/(z - i).
pub fn aux_f(q: &AdmissibleQuadruple, t: f64, k: usize, z: Complex<f64>) -> Result<CMat> {
    let i = Complex::new(0.0, 1.0);
    if (z + i).norm() < 1e-12 || (z - i).norm() < 1e-12 {
        return Err(Error::NearPole(z));
    }
    let (h_plus, h_minus) = gdhm_h(q, t, k)?;
    Ok(-(h_plus / (z + i)) - h_minus / (z - i))
}

/// Joint explicit solution of both auxiliary systems:
/// Y_k(t, z) = W_{Sigma_{t,k}}(-z) (I + (i/z) j)^k
///             exp{ -2t (P1/(z+i) + P2/(z-i)) }.
pub fn y_explicit(
    q: &AdmissibleQuadruple,
    t: f64,
    k: usize,
    z: Complex<f64>,
) -> Result<CMat> {
    let i = Complex::new(0.0, 1.0);
    if z.norm() == 0.0 || (z + i).norm() < 1e-12 || (z - i).norm() < 1e-12 {
        return Err(Error::NearPole(z));
    }
    let ev = state(q, t, k)?;
    let w = ev.sigma().transfer(-z)?;
    let m = q.m();
    let j = q.signature();
    let step = CMat::identity(m, m) + j * (i / z);
    let mut middle = CMat::identity(m, m);
    for _ in 0..k {
        middle = &middle * &step;
    }
    // P1 and P2 are complementary diagonal projections, so the exponential
    // is diagonal with scalar entries exp(-2t/(z +/- i)).
    let e1 = (Complex::new(-2.0 * t, 0.0) / (z + i)).exp();
    let e2 = (Complex::new(-2.0 * t, 0.0) / (z - i)).exp();
    let m1 = q.m1();
    let exp_f = CMat::from_fn(m, m, |r, c| {
        if r != c {
            Complex::new(0.0, 0.0)
        } else if r < m1 {
            e1
        } else {
            e2
        }
    });
    Ok(w * middle * exp_f)
}

/// Central-difference residual of the magnet-model equation
/// i dC_k/dt = (H_{k+1}^- - H_{k+1}^+) C_k - C_k (H_k^- - H_k^+).
pub fn gdhm_residual(q: &AdmissibleQuadruple, t: f64, k: usize, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("step h must be positive".into()));
    }
    let c_plus = gdhm_c(q, t + h, k)?;
    let c_minus = gdhm_c(q, t - h, k)?;
    let dc = (c_plus - c_minus) * (Complex::new(0.0, 1.0) / Complex::new(2.0 * h, 0.0));

    let seq = evolved_sequence(q, t, k + 1)?;
    let ck = seq.c(k);
    let (hk_plus, hk_minus) = seq.h_pm(k)?;
    let (hk1_plus, hk1_minus) = seq.h_pm(k + 1)?;
    let rhs = (hk1_minus - hk1_plus) * ck - ck * (hk_minus - hk_plus);
    Ok((dc - rhs).norm())
}

/// Central-difference residual of the zero-curvature (compatibility)
/// condition dG_k/dt = F_{k+1} G_k - G_k F_k of the auxiliary systems.
pub fn zcc_residual(
    q: &AdmissibleQuadruple,
    t: f64,
    k: usize,
    z: Complex<f64>,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("step h must be positive".into()));
    }
    let g_plus = aux_g(q, t + h, k, z)?;
    let g_minus = aux_g(q, t - h, k, z)?;
    let dg = (g_plus - g_minus) / Complex::new(2.0 * h, 0.0);
    let g = aux_g(q, t, k, z)?;
    let f_k = aux_f(q, t, k, z)?;
    let f_k1 = aux_f(q, t, k + 1, z)?;
    Ok((dg - (f_k1 * &g - g * f_k)).norm())
}

/// Evolved discrete Weyl function phi(t, z) = -i theta1* e^{-2t(alpha*+i)^{-1}}
/// S0(t)^{-1} (zI + beta(t))^{-1} e^{-2t(alpha+i)^{-1}} theta2, assembled
/// directly from the flow exponentials.
pub fn weyl_evolution(q: &AdmissibleQuadruple, t: f64) -> Result<StateSpaceRealization> {
    if q.n() == 0 {
        return Ok(StateSpaceRealization::zero(
            q.m1(),
            q.m2(),
            Convention::Discrete,
        ));
    }
    let moved = q.flow_gdhm(t)?;
    let input = moved.theta2().clone(); // e^{-2t(alpha+i)^{-1}} theta2
    let output = moved.theta1().adjoint() * moved.s0_inv(); // theta1* e^{-2t(alpha*+i)^{-1}} S0(t)^{-1}
    let beta = q.alpha() - (&input * input.adjoint() * moved.s0_inv()) * Complex::new(0.0, 1.0);
    StateSpaceRealization::new(beta, input, output, Convention::Discrete)
}

/// Two-parameter potential family v(x, t) from the Zakharov-Shabat flow of
/// power p (2: NLS, 3: mKdV) composed with the continuous x-propagation.
pub fn vxt(q: &AdmissibleQuadruple, x: f64, t: f64, p: u32) -> Result<CMat> {
    continuous::potential(&q.flow_zs(t, p)?, x)
}

/// Central-difference residual of the matrix NLS equation
/// 2 v_t + i v_xx + 2i v v* v = 0 on the p = 2 family.
pub fn nls_residual(q: &AdmissibleQuadruple, x: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("step h must be positive".into()));
    }
    let v = vxt(q, x, t, 2)?;
    let v_t = (vxt(q, x, t + h, 2)? - vxt(q, x, t - h, 2)?) / Complex::new(2.0 * h, 0.0);
    let v_xx = (vxt(q, x + h, t, 2)? - &v * Complex::new(2.0, 0.0) + vxt(q, x - h, t, 2)?)
        / Complex::new(h * h, 0.0);
    let i = Complex::new(0.0, 1.0);
    let cubic = &v * v.adjoint() * &v;
    Ok((v_t * Complex::new(2.0, 0.0) + v_xx * i + cubic * (2.0 * i)).norm())
}

/// Central-difference residual of the matrix mKdV equation
/// 4 v_t + v_xxx + 3 (v_x v* v + v v* v_x) = 0 on the p = 3 family.
pub fn mkdv_residual(q: &AdmissibleQuadruple, x: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("step h must be positive".into()));
    }
    let v = vxt(q, x, t, 3)?;
    let v_t = (vxt(q, x, t + h, 3)? - vxt(q, x, t - h, 3)?) / Complex::new(2.0 * h, 0.0);
    let v_x = (vxt(q, x + h, t, 3)? - vxt(q, x - h, t, 3)?) / Complex::new(2.0 * h, 0.0);
    // Four-point central stencil for the third derivative.
    let v_xxx = (vxt(q, x + 2.0 * h, t, 3)? - vxt(q, x + h, t, 3)? * Complex::new(2.0, 0.0)
        + vxt(q, x - h, t, 3)? * Complex::new(2.0, 0.0)
        - vxt(q, x - 2.0 * h, t, 3)?)
        / Complex::new(2.0 * h * h * h, 0.0);
    let nonlinear = &v_x * v.adjoint() * &v + &v * v.adjoint() * &v_x;
    Ok((v_t * Complex::new(4.0, 0.0) + v_xxx + nonlinear * Complex::new(3.0, 0.0)).norm())
}

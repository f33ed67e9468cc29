//! Explicit inverse problems: recovering the generating quadruple of a
//! continuous or discrete Dirac system from its (strictly proper rational)
//! Weyl function.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matkernel::{self, CMat, I};
use crate::quadruple::AdmissibleQuadruple;
use crate::realization::{Convention, StateSpaceRealization};

/// Which inverse procedure to apply to a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseMode {
    Continuous,
    Discrete,
}

/// Recovers the quadruple generating the continuous system whose Weyl
/// function is `phi`. Steps: minimal realization phi(z) = i theta2*
/// (zI - gamma)^{-1} theta1; unique positive definite X with
/// gamma X - X gamma* - iX theta2 theta2* X + i theta1 theta1* = 0; then
/// S0 = I, vartheta1 = X^{-1/2} theta1, vartheta2 = X^{1/2} theta2,
/// alpha = X^{-1/2} gamma X^{1/2} + i vartheta1 vartheta1*.
pub fn invert_continuous(phi: &StateSpaceRealization) -> Result<AdmissibleQuadruple> {
    if phi.convention() != Convention::Continuous {
        return Err(Error::InvalidArgument(
            "invert_continuous expects a continuous-convention realization".into(),
        ));
    }
    // The Riccati uniqueness argument needs minimality; reduce always.
    let minimal = phi.minimal()?;
    let (m2, m1) = (minimal.out_dim(), minimal.in_dim());
    if minimal.state_dim() == 0 {
        return Ok(AdmissibleQuadruple::empty(m1, m2));
    }
    let gamma = minimal.state().clone();
    let theta1 = minimal.input().clone();
    let theta2 = minimal.output().adjoint();

    let x = matkernel::care_solve(&gamma, &theta2, &(&theta1 * theta1.adjoint()))?;
    let x_half = matkernel::pd_sqrt(&x)?;
    let x_half_inv = matkernel::pd_sqrt_inv(&x)?;

    let vartheta1 = &x_half_inv * theta1;
    let vartheta2 = &x_half * theta2;
    let alpha = &x_half_inv * gamma * &x_half + (&vartheta1 * vartheta1.adjoint()) * I;
    let n = alpha.nrows();
    AdmissibleQuadruple::with_tolerance(alpha, CMat::identity(n, n), vartheta1, vartheta2, 1e-10)
}

/// Recovers the quadruple generating the discrete system whose Weyl function
/// is `phi`. Steps: minimal realization phi(z) = -i theta1* (zI + gamma)^{-1}
/// theta2; unique positive definite X with gamma X - X gamma* -
/// iX theta1 theta1* X + i theta2 theta2* = 0; then S0 = I,
/// vartheta1 = X^{1/2} theta1, vartheta2 = X^{-1/2} theta2,
/// alpha = X^{-1/2} gamma X^{1/2} + i vartheta2 vartheta2*.
pub fn invert_discrete(phi: &StateSpaceRealization) -> Result<AdmissibleQuadruple> {
    if phi.convention() != Convention::Discrete {
        return Err(Error::InvalidArgument(
            "invert_discrete expects a discrete-convention realization".into(),
        ));
    }
    let minimal = phi.minimal()?;
    let (m1, m2) = (minimal.out_dim(), minimal.in_dim());
    if minimal.state_dim() == 0 {
        return Ok(AdmissibleQuadruple::empty(m1, m2));
    }
    let gamma = minimal.state().clone();
    let theta2 = minimal.input().clone();
    let theta1 = minimal.output().adjoint();

    let x = matkernel::care_solve(&gamma, &theta1, &(&theta2 * theta2.adjoint()))?;
    let x_half = matkernel::pd_sqrt(&x)?;
    let x_half_inv = matkernel::pd_sqrt_inv(&x)?;

    let vartheta1 = &x_half * theta1;
    let vartheta2 = &x_half_inv * theta2;
    let alpha = &x_half_inv * gamma * &x_half + (&vartheta2 * vartheta2.adjoint()) * I;
    let n = alpha.nrows();
    AdmissibleQuadruple::with_tolerance(alpha, CMat::identity(n, n), vartheta1, vartheta2, 1e-10)
}

/// Max deviation over `samples` between `phi` and the Weyl function of the
/// quadruple recovered from it.
pub fn roundtrip_error(
    phi: &StateSpaceRealization,
    mode: InverseMode,
    samples: &[Complex<f64>],
) -> Result<f64> {
    let reconstructed = match mode {
        InverseMode::Continuous => invert_continuous(phi)?.phi1(),
        InverseMode::Discrete => invert_discrete(phi)?.phi2(),
    };
    let mut worst: f64 = 0.0;
    for &z in samples {
        let diff = (phi.eval(z)? - reconstructed.eval(z)?).norm();
        worst = worst.max(diff);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests;

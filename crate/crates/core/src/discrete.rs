//! Discrete skew-selfadjoint Dirac system: the pseudo-exponential potential
//! sequence C_k, the normalized fundamental solution, the discrete Weyl
//! function, and the H_k^+/- matrices with their annihilation identities.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matkernel::{self, CMat, I};
use crate::quadruple::{projections, AdmissibleQuadruple};
use crate::realization::StateSpaceRealization;

/// The potential sequence C_0..C_K together with the propagated quadruples
/// Sigma_0..Sigma_{K+1} they were built from (each quadruple caches its own
/// S_k inverse, reused by the transfer-function evaluations below).
#[derive(Debug, Clone)]
pub struct DiscretePotentialSequence {
    source: AdmissibleQuadruple,
    sigmas: Vec<AdmissibleQuadruple>,
    c: Vec<CMat>,
}

/// Diagnostics for a candidate potential matrix C.
#[derive(Debug, Clone, Copy)]
pub struct InvolutionReport {
    pub hermitian_residual: f64,
    /// ||C^2 - I||.
    pub involution_residual: f64,
    pub rank_plus: usize,
    pub rank_minus: usize,
    pub passes: bool,
}

/// Hermitian/involution diagnostics of C, with ranks of I + C and I - C.
pub fn involution_check(c: &CMat) -> Result<InvolutionReport> {
    matkernel::check_square(c, "potential matrix C")?;
    let m = c.nrows();
    let id = CMat::identity(m, m);
    let hermitian_residual = (c - c.adjoint()).norm();
    let involution_residual = (c * c - &id).norm();
    let rank_plus = matkernel::rank(&(&id + c));
    let rank_minus = matkernel::rank(&(&id - c));
    let scale = 1.0 + c.norm();
    Ok(InvolutionReport {
        hermitian_residual,
        involution_residual,
        rank_plus,
        rank_minus,
        passes: hermitian_residual <= 1e-10 * scale && involution_residual <= 1e-9 * scale,
    })
}

/// Builds C_k = j + Lambda_k* S_k^{-1} Lambda_k - Lambda_{k+1}* S_{k+1}^{-1}
/// Lambda_{k+1} for k = 0..K, caching the propagated quadruples.
pub fn potential_seq(q: &AdmissibleQuadruple, horizon: usize) -> Result<DiscretePotentialSequence> {
    let j = q.signature();
    if q.n() == 0 {
        // Zero generator: every C_k degenerates to the signature matrix.
        return Ok(DiscretePotentialSequence {
            source: q.clone(),
            sigmas: vec![q.clone(); horizon + 2],
            c: vec![j; horizon + 1],
        });
    }
    q.require_strong()?;
    let mut sigmas = Vec::with_capacity(horizon + 2);
    sigmas.push(q.clone());
    for _ in 0..=horizon {
        let next = sigmas.last().unwrap().propagate_k(1)?;
        sigmas.push(next);
    }
    let weight = |k: usize| -> CMat {
        let lam = sigmas[k].lambda();
        lam.adjoint() * sigmas[k].s0_inv() * lam
    };
    let mut c = Vec::with_capacity(horizon + 1);
    let mut current = weight(0);
    for k in 0..=horizon {
        let next = weight(k + 1);
        let ck = &j + &current - &next;
        c.push((&ck + ck.adjoint()) * Complex::new(0.5, 0.0));
        current = next;
    }
    Ok(DiscretePotentialSequence {
        source: q.clone(),
        sigmas,
        c,
    })
}

impl DiscretePotentialSequence {
    pub fn source(&self) -> &AdmissibleQuadruple {
        &self.source
    }

    /// Largest k for which C_k is available.
    pub fn horizon(&self) -> usize {
        self.c.len() - 1
    }

    pub fn c(&self, k: usize) -> &CMat {
        &self.c[k]
    }

    pub fn c_all(&self) -> &[CMat] {
        &self.c
    }

    /// Propagated quadruple Sigma_k, available for k <= horizon + 1.
    pub fn sigma(&self, k: usize) -> &AdmissibleQuadruple {
        &self.sigmas[k]
    }

    /// Closed-form normalized fundamental solution
    /// w_k(z) = W_{Sigma_k}(-z) (I + (i/z) j)^k W_{Sigma_0}(-z)^{-1}.
    pub fn fundamental_w(&self, k: usize, z: Complex<f64>) -> Result<CMat> {
        if z.norm() == 0.0 {
            return Err(Error::NearPole(z));
        }
        let m = self.source.m();
        let j = self.source.signature();
        let w0_inv = self
            .sigmas[0]
            .transfer(-z)?
            .try_inverse()
            .ok_or(Error::Singular)?;
        let wk = self.sigmas[k].transfer(-z)?;
        let step = CMat::identity(m, m) + j * (I / z);
        let mut middle = CMat::identity(m, m);
        for _ in 0..k {
            middle = &middle * &step;
        }
        Ok(wk * middle * w0_inv)
    }

    /// Step-by-step product w_k(z) = prod_{l<k} (I + (i/z) C_l) taken as an
    /// independent route to the same solution; needs k <= horizon + 1.
    pub fn fundamental_w_recursive(&self, k: usize, z: Complex<f64>) -> Result<CMat> {
        if z.norm() == 0.0 {
            return Err(Error::NearPole(z));
        }
        let m = self.source.m();
        let mut w = CMat::identity(m, m);
        for l in 0..k {
            w = (CMat::identity(m, m) + &self.c[l] * (I / z)) * w;
        }
        Ok(w)
    }

    /// H_k^+ = 2 W_{Sigma_k}(i) P1 W_{Sigma_k}(-i)* and
    /// H_k^- = 2 W_{Sigma_k}(-i) P2 W_{Sigma_k}(i)*; needs i off sigma(alpha).
    pub fn h_pm(&self, k: usize) -> Result<(CMat, CMat)> {
        if self.source.n() > 0 && !self.source.is_strong()?.i_not_eigenvalue {
            return Err(Error::IEigenvalue);
        }
        let (p1, p2) = projections(self.source.m1(), self.source.m2());
        let zi = Complex::new(0.0, 1.0);
        let w_plus = self.sigmas[k].transfer(zi)?;
        let w_minus = self.sigmas[k].transfer(-zi)?;
        let h_plus = &w_plus * p1 * w_minus.adjoint() * Complex::new(2.0, 0.0);
        let h_minus = &w_minus * p2 * w_plus.adjoint() * Complex::new(2.0, 0.0);
        Ok((h_plus, h_minus))
    }
}

/// Discrete Weyl function phi(z) = -i theta1* S0^{-1} (zI + beta)^{-1} theta2,
/// beta = alpha - i theta2 theta2* S0^{-1}; identical to the second
/// associated function of the quadruple.
pub fn weyl_d(q: &AdmissibleQuadruple) -> StateSpaceRealization {
    q.phi2()
}

/// Norms of the partial sums sum_{k<=K} [phi* I] w_k(z)* w_k(z) [phi; I] for
/// a candidate Weyl function; the genuine Weyl function keeps them bounded
/// for Im z > 1/2, any other rational candidate makes them blow up.
pub fn weyl_summation(
    q: &AdmissibleQuadruple,
    candidate: &StateSpaceRealization,
    z: Complex<f64>,
    k_max: usize,
) -> Result<Vec<f64>> {
    let (m1, m2) = (q.m1(), q.m2());
    if candidate.out_dim() != m1 || candidate.in_dim() != m2 {
        return Err(Error::DimensionMismatch(format!(
            "candidate is {}x{}, expected {}x{}",
            candidate.out_dim(),
            candidate.in_dim(),
            m1,
            m2
        )));
    }
    let seq = potential_seq(q, k_max)?;
    let phi = candidate.eval(z)?;
    let mut column = CMat::zeros(q.m(), m2);
    column.view_mut((0, 0), (m1, m2)).copy_from(&phi);
    column
        .view_mut((m1, 0), (m2, m2))
        .copy_from(&CMat::identity(m2, m2));

    let m = q.m();
    let mut w = CMat::identity(m, m);
    let mut sum = CMat::zeros(m2, m2);
    let mut norms = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let wc = &w * &column;
        sum += wc.adjoint() * wc;
        norms.push(sum.norm());
        w = (CMat::identity(m, m) + seq.c(k) * (I / z)) * w;
    }
    Ok(norms)
}

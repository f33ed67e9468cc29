//! The central generating object {alpha, S0, theta1, theta2}: validation,
//! transfer function, associated rational functions, the associate
//! quadruple, and the four propagation flows (continuous x, discrete k,
//! magnet-model t, Zakharov-Shabat t).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matkernel::{self, CMat, I, ONE};
use crate::realization::{Convention, StateSpaceRealization};

/// Default admissibility tolerance for the identity residual.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

/// Outcome of checking raw matrices against the admissibility conditions.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// ||S0 - S0*||.
    pub hermitian_residual: f64,
    /// Smallest eigenvalue of the Hermitian part of S0.
    pub min_eigenvalue: f64,
    /// ||alpha S0 - S0 alpha* - i (theta1 theta1* + theta2 theta2*)||.
    pub admissibility_residual: f64,
    pub passes: bool,
    pub failure: Option<String>,
}

/// Strong-admissibility diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct StrongFlag {
    /// The pair {alpha, theta1} is controllable.
    pub controllable: bool,
    /// sigma(alpha) lies strictly in the open upper half-plane.
    pub spectrum_in_upper_half_plane: bool,
    /// i is not an eigenvalue of alpha.
    pub i_not_eigenvalue: bool,
}

impl StrongFlag {
    pub fn is_strong(&self) -> bool {
        self.controllable && self.spectrum_in_upper_half_plane
    }
}

/// An admissible quadruple {alpha, S0, theta1, theta2}: S0 Hermitian
/// positive definite with alpha S0 - S0 alpha* = i(theta1 theta1* +
/// theta2 theta2*). Immutable; every flow returns a new value.
#[derive(Debug, Clone)]
pub struct AdmissibleQuadruple {
    alpha: CMat,
    s0: CMat,
    theta1: CMat,
    theta2: CMat,
    s0_inv: CMat,
    alpha_eigs: Vec<Complex<f64>>,
}

/// Checks raw matrices against the admissibility conditions without
/// constructing a quadruple. Errors only on dimension mismatch.
pub fn validate(
    alpha: &CMat,
    s0: &CMat,
    theta1: &CMat,
    theta2: &CMat,
    tol: f64,
) -> Result<ValidationReport> {
    matkernel::check_square(alpha, "alpha")?;
    matkernel::check_square(s0, "S0")?;
    let n = alpha.nrows();
    if s0.nrows() != n || theta1.nrows() != n || theta2.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "alpha is {n}x{n} but S0/theta1/theta2 have {}/{}/{} rows",
            s0.nrows(),
            theta1.nrows(),
            theta2.nrows()
        )));
    }
    for (m, what) in [
        (alpha, "alpha"),
        (s0, "S0"),
        (theta1, "theta1"),
        (theta2, "theta2"),
    ] {
        matkernel::check_finite(m, what)?;
    }

    let s_norm = s0.norm();
    let hermitian_residual = matkernel::hermitian_residual(s0);
    let min_eigenvalue = if n == 0 {
        f64::INFINITY
    } else {
        let sym = (s0 + s0.adjoint()) * Complex::new(0.5, 0.0);
        matkernel::hermitian_eigenvalues(&sym)[0]
    };
    let gram = theta1 * theta1.adjoint() + theta2 * theta2.adjoint();
    let admissibility_residual = (alpha * s0 - s0 * alpha.adjoint() - gram * I).norm();

    let scale = 1.0 + alpha.norm() * s_norm;
    let mut failure = None;
    if hermitian_residual > 1e-10 * s_norm.max(1.0) {
        failure = Some(format!("S0 not Hermitian (residual {hermitian_residual:.3e})"));
    } else if min_eigenvalue <= 0.0 {
        failure = Some(format!("S0 not positive definite (min eigenvalue {min_eigenvalue:.3e})"));
    } else if admissibility_residual > tol * scale {
        failure = Some(format!(
            "identity residual {admissibility_residual:.3e} exceeds {:.3e}",
            tol * scale
        ));
    }
    Ok(ValidationReport {
        hermitian_residual,
        min_eigenvalue,
        admissibility_residual,
        passes: failure.is_none(),
        failure,
    })
}

impl AdmissibleQuadruple {
    /// Validates and constructs, with the default identity tolerance.
    pub fn new(alpha: CMat, s0: CMat, theta1: CMat, theta2: CMat) -> Result<Self> {
        Self::with_tolerance(alpha, s0, theta1, theta2, ADMISSIBILITY_TOL)
    }

    pub fn with_tolerance(
        alpha: CMat,
        s0: CMat,
        theta1: CMat,
        theta2: CMat,
        tol: f64,
    ) -> Result<Self> {
        let report = validate(&alpha, &s0, &theta1, &theta2, tol)?;
        if !report.passes {
            return Err(Error::NotAdmissible(report.failure.unwrap()));
        }
        let s0_inv = if alpha.nrows() == 0 {
            CMat::zeros(0, 0)
        } else {
            s0.clone().try_inverse().ok_or(Error::Singular)?
        };
        let alpha_eigs = matkernel::spectrum(&alpha)?.eigenvalues;
        Ok(Self {
            alpha,
            s0,
            theta1,
            theta2,
            s0_inv,
            alpha_eigs,
        })
    }

    /// The degenerate n = 0 quadruple generating the zero potential.
    pub fn empty(m1: usize, m2: usize) -> Self {
        Self {
            alpha: CMat::zeros(0, 0),
            s0: CMat::zeros(0, 0),
            theta1: CMat::zeros(0, m1),
            theta2: CMat::zeros(0, m2),
            s0_inv: CMat::zeros(0, 0),
            alpha_eigs: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn m1(&self) -> usize {
        self.theta1.ncols()
    }

    pub fn m2(&self) -> usize {
        self.theta2.ncols()
    }

    pub fn m(&self) -> usize {
        self.m1() + self.m2()
    }

    pub fn alpha(&self) -> &CMat {
        &self.alpha
    }

    pub fn s0(&self) -> &CMat {
        &self.s0
    }

    pub fn theta1(&self) -> &CMat {
        &self.theta1
    }

    pub fn theta2(&self) -> &CMat {
        &self.theta2
    }

    pub fn s0_inv(&self) -> &CMat {
        &self.s0_inv
    }

    pub fn alpha_eigenvalues(&self) -> &[Complex<f64>] {
        &self.alpha_eigs
    }

    /// Lambda = [theta1 theta2], the combined n x m map.
    pub fn lambda(&self) -> CMat {
        let n = self.n();
        let mut l = CMat::zeros(n, self.m());
        l.view_mut((0, 0), (n, self.m1())).copy_from(&self.theta1);
        l.view_mut((0, self.m1()), (n, self.m2()))
            .copy_from(&self.theta2);
        l
    }

    /// The signature matrix j = diag(I_m1, -I_m2).
    pub fn signature(&self) -> CMat {
        signature(self.m1(), self.m2())
    }

    /// Re-checks the admissibility conditions at the given tolerance.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        validate(&self.alpha, &self.s0, &self.theta1, &self.theta2, tol)
            .expect("dimensions verified at construction")
    }

    /// Strong-admissibility diagnostics: controllability of {alpha, theta1},
    /// strict upper-half-plane spectrum, and i not being an eigenvalue.
    pub fn is_strong(&self) -> Result<StrongFlag> {
        let controllable =
            matkernel::controllability_rank(&self.alpha, &self.theta1)? == self.n();
        let margin = 1e-10;
        let spectrum_in_upper_half_plane = self.alpha_eigs.iter().all(|z| z.im > margin);
        let i_tol = 1e-10 * (1.0 + self.alpha.norm());
        let i_not_eigenvalue = self.alpha_eigs.iter().all(|z| (z - I).norm() > i_tol);
        Ok(StrongFlag {
            controllable,
            spectrum_in_upper_half_plane,
            i_not_eigenvalue,
        })
    }

    pub(crate) fn require_strong(&self) -> Result<StrongFlag> {
        let flag = self.is_strong()?;
        if !flag.controllable {
            return Err(Error::NotStrong("{alpha, theta1} is not controllable".into()));
        }
        if !flag.spectrum_in_upper_half_plane {
            return Err(Error::NotStrong(
                "sigma(alpha) is not strictly inside the upper half-plane".into(),
            ));
        }
        Ok(flag)
    }

    fn pole_distance(&self, z: Complex<f64>) -> f64 {
        self.alpha_eigs
            .iter()
            .map(|l| (z - l).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Transfer function W(z) = I_m + i Lambda* S0^{-1} (zI - alpha)^{-1} Lambda.
    pub fn transfer(&self, z: Complex<f64>) -> Result<CMat> {
        let n = self.n();
        let m = self.m();
        if n == 0 {
            return Ok(CMat::identity(m, m));
        }
        if self.pole_distance(z) < 1e-12 * (1.0 + self.alpha.norm()) {
            return Err(Error::NearPole(z));
        }
        let res = (CMat::identity(n, n) * z - &self.alpha)
            .lu()
            .try_inverse()
            .ok_or(Error::NearPole(z))?;
        let lambda = self.lambda();
        Ok(CMat::identity(m, m) + lambda.adjoint() * &self.s0_inv * res * lambda * I)
    }

    /// First associated function phi_1(z) = i theta2* S0^{-1} (zI - beta1)^{-1} theta1,
    /// beta1 = alpha - i theta1 theta1* S0^{-1}.
    pub fn phi1(&self) -> StateSpaceRealization {
        let beta1 = &self.alpha - (&self.theta1 * self.theta1.adjoint() * &self.s0_inv) * I;
        StateSpaceRealization::new(
            beta1,
            self.theta1.clone(),
            self.theta2.adjoint() * &self.s0_inv,
            Convention::Continuous,
        )
        .expect("dimensions verified at construction")
    }

    /// Second associated function phi_2(z) = -i theta1* S0^{-1} (zI + beta2)^{-1} theta2,
    /// beta2 = alpha - i theta2 theta2* S0^{-1}.
    pub fn phi2(&self) -> StateSpaceRealization {
        let beta2 = &self.alpha - (&self.theta2 * self.theta2.adjoint() * &self.s0_inv) * I;
        StateSpaceRealization::new(
            beta2,
            self.theta2.clone(),
            self.theta1.adjoint() * &self.s0_inv,
            Convention::Discrete,
        )
        .expect("dimensions verified at construction")
    }

    /// The associate quadruple {alpha, S0, theta2, theta1}.
    pub fn associate(&self) -> Self {
        Self {
            alpha: self.alpha.clone(),
            s0: self.s0.clone(),
            theta1: self.theta2.clone(),
            theta2: self.theta1.clone(),
            s0_inv: self.s0_inv.clone(),
            alpha_eigs: self.alpha_eigs.clone(),
        }
    }

    fn rebuild(&self, s: CMat, theta1: CMat, theta2: CMat) -> Result<Self> {
        Self::new(self.alpha.clone(), s, theta1, theta2)
    }

    /// Continuous-x propagation Sigma(x) = {alpha, S(x), e^{-ix alpha} theta1,
    /// e^{ix alpha} theta2}, with S(x) from the closed 2n x 2n exponential
    /// formula, cross-checked against quadrature of the defining integral.
    pub fn propagate_x(&self, x: f64) -> Result<Self> {
        let moved = self.propagate_x_fast(x)?;
        if self.n() == 0 || x == 0.0 {
            return Ok(moved);
        }
        let quad = self.s_of_x_quadrature(x, 1e-8)?;
        let diff = (&quad - &moved.s0).norm();
        if diff > 1e-6 * (1.0 + moved.s0.norm()) {
            return Err(Error::Inconsistent(format!(
                "closed-form S(x) and quadrature disagree by {diff:.3e} at x = {x}"
            )));
        }
        Ok(moved)
    }

    /// Same propagation without the quadrature self-check; used by batch
    /// sampling and finite-difference grids.
    pub fn propagate_x_fast(&self, x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument("x must be finite".into()));
        }
        if self.n() == 0 {
            return Ok(self.clone());
        }
        if x == 0.0 {
            return Ok(self.clone());
        }
        let n = self.n();
        let exp_plus = matkernel::mat_exp(&(&self.alpha * (I * x)))?; // e^{ix alpha}
        let exp_minus = matkernel::mat_exp(&(&self.alpha * (-I * x)))?; // e^{-ix alpha}
        let theta1 = &exp_minus * &self.theta1;
        let theta2 = &exp_plus * &self.theta2;

        // S(x) = e^{ix alpha} ([S0 -iI] e^{-2ixA} [I; 0]) e^{ix alpha*},
        // A = [[alpha*, 0], [-theta1 theta1*, alpha]].
        let mut a2 = CMat::zeros(2 * n, 2 * n);
        a2.view_mut((0, 0), (n, n)).copy_from(&self.alpha.adjoint());
        a2.view_mut((n, 0), (n, n))
            .copy_from(&(-(&self.theta1 * self.theta1.adjoint())));
        a2.view_mut((n, n), (n, n)).copy_from(&self.alpha);
        let big = matkernel::mat_exp(&(a2 * (-2.0 * x * I)))?;
        let mut left = CMat::zeros(n, 2 * n);
        left.view_mut((0, 0), (n, n)).copy_from(&self.s0);
        left.view_mut((0, n), (n, n))
            .copy_from(&(CMat::identity(n, n) * (-I)));
        let q = left * big.columns(0, n);
        // e^{ix alpha*} = (e^{-ix alpha})*.
        let s = &exp_plus * q * exp_minus.adjoint();
        let s = (&s + s.adjoint()) * Complex::new(0.5, 0.0);
        self.rebuild(s, theta1, theta2)
    }

    /// S(x) = S0 + int_0^x Lambda(t) j Lambda(t)* dt by adaptive Simpson.
    fn s_of_x_quadrature(&self, x: f64, tol: f64) -> Result<CMat> {
        let j = self.signature();
        let f = |t: f64| -> Result<CMat> {
            let e_m = matkernel::mat_exp(&(&self.alpha * (-I * t)))?;
            let e_p = matkernel::mat_exp(&(&self.alpha * (I * t)))?;
            let n = self.n();
            let mut lam = CMat::zeros(n, self.m());
            lam.view_mut((0, 0), (n, self.m1()))
                .copy_from(&(&e_m * &self.theta1));
            lam.view_mut((0, self.m1()), (n, self.m2()))
                .copy_from(&(&e_p * &self.theta2));
            Ok(&lam * &j * lam.adjoint())
        };
        let integral = adaptive_simpson(&f, 0.0, x, tol, 18)?;
        Ok(&self.s0 + integral)
    }

    /// Discrete propagation Sigma_k via the recursions
    /// Lambda_{k+1} = Lambda_k + i alpha^{-1} Lambda_k j and
    /// S_{k+1} = S_k + alpha^{-1} S_k alpha^{-*} + alpha^{-1} Lambda_k j Lambda_k* alpha^{-*}.
    pub fn propagate_k(&self, k: usize) -> Result<Self> {
        if self.n() == 0 {
            return Ok(self.clone());
        }
        self.require_strong()?;
        if k == 0 {
            return Ok(self.clone());
        }
        let ainv = self
            .alpha
            .clone()
            .try_inverse()
            .ok_or(Error::Singular)?;
        let j = self.signature();
        let mut lam = self.lambda();
        let mut s = self.s0.clone();
        for _ in 0..k {
            let lam_j = &lam * &j;
            s = &s + &ainv * &s * ainv.adjoint() + &ainv * &lam_j * lam.adjoint() * ainv.adjoint();
            s = (&s + s.adjoint()) * Complex::new(0.5, 0.0);
            lam = &lam + (&ainv * lam_j) * I;
        }
        let theta1 = lam.columns(0, self.m1()).clone_owned();
        let theta2 = lam.columns(self.m1(), self.m2()).clone_owned();
        self.rebuild(s, theta1, theta2)
    }

    /// Magnet-model t-flow: theta1(t) = e^{-2t(alpha - iI)^{-1}} theta1,
    /// theta2(t) = e^{-2t(alpha + iI)^{-1}} theta2, with S(t) recovered as
    /// the unique solution of alpha S - S alpha* = i Lambda(t) Lambda(t)*.
    pub fn flow_gdhm(&self, t: f64) -> Result<Self> {
        if self.n() == 0 {
            return Ok(self.clone());
        }
        let flag = self.require_strong()?;
        if !flag.i_not_eigenvalue {
            return Err(Error::IEigenvalue);
        }
        if t == 0.0 {
            return Ok(self.clone());
        }
        let n = self.n();
        let id = CMat::identity(n, n);
        let r_minus = (&self.alpha - &id * I).try_inverse().ok_or(Error::Singular)?;
        let r_plus = (&self.alpha + &id * I).try_inverse().ok_or(Error::IEigenvalue)?;
        let theta1 = matkernel::mat_exp(&(r_minus * Complex::new(-2.0 * t, 0.0)))? * &self.theta1;
        let theta2 = matkernel::mat_exp(&(r_plus * Complex::new(-2.0 * t, 0.0)))? * &self.theta2;
        let s = self.s_from_sylvester(&theta1, &theta2)?;
        self.rebuild(s, theta1, theta2)
    }

    /// Zakharov-Shabat t-flow of power p (2 for the NLS family, 3 for mKdV):
    /// theta1(t) = e^{-it alpha^p} theta1, theta2(t) = e^{it alpha^p} theta2,
    /// with S(t) from the same Sylvester uniqueness argument.
    pub fn flow_zs(&self, t: f64, p: u32) -> Result<Self> {
        if !(p == 2 || p == 3) {
            return Err(Error::InvalidArgument(format!(
                "flow power must be 2 or 3, got {p}"
            )));
        }
        if self.n() == 0 {
            return Ok(self.clone());
        }
        self.require_strong()?;
        if t == 0.0 {
            return Ok(self.clone());
        }
        let mut ap = self.alpha.clone();
        for _ in 1..p {
            ap = &ap * &self.alpha;
        }
        let theta1 = matkernel::mat_exp(&(&ap * (-I * t)))? * &self.theta1;
        let theta2 = matkernel::mat_exp(&(&ap * (I * t)))? * &self.theta2;
        let s = self.s_from_sylvester(&theta1, &theta2)?;
        self.rebuild(s, theta1, theta2)
    }

    /// Unique S with alpha S - S alpha* = i Lambda Lambda*, valid when
    /// sigma(alpha) lies strictly in the upper half-plane.
    fn s_from_sylvester(&self, theta1: &CMat, theta2: &CMat) -> Result<CMat> {
        let gram = theta1 * theta1.adjoint() + theta2 * theta2.adjoint();
        let s = matkernel::sylvester_solve(&self.alpha, &(-self.alpha.adjoint()), &(gram * I))?;
        Ok((&s + s.adjoint()) * Complex::new(0.5, 0.0))
    }
}

/// The m x m signature matrix diag(I_m1, -I_m2).
pub fn signature(m1: usize, m2: usize) -> CMat {
    let m = m1 + m2;
    CMat::from_fn(m, m, |i, j| {
        if i != j {
            Complex::new(0.0, 0.0)
        } else if i < m1 {
            ONE
        } else {
            -ONE
        }
    })
}

/// Projections P1 = (I + j)/2 and P2 = (I - j)/2.
pub fn projections(m1: usize, m2: usize) -> (CMat, CMat) {
    let m = m1 + m2;
    let j = signature(m1, m2);
    let id = CMat::identity(m, m);
    (
        (&id + &j) * Complex::new(0.5, 0.0),
        (&id - &j) * Complex::new(0.5, 0.0),
    )
}

fn adaptive_simpson(
    f: &dyn Fn(f64) -> Result<CMat>,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
) -> Result<CMat> {
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = simpson(&fa, &fm, &fb, b - a);
    simpson_step(f, a, b, &fa, &fm, &fb, &whole, tol, depth)
}

fn simpson(fa: &CMat, fm: &CMat, fb: &CMat, h: f64) -> CMat {
    (fa + fm * Complex::new(4.0, 0.0) + fb) * Complex::new(h / 6.0, 0.0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> Result<CMat>,
    a: f64,
    b: f64,
    fa: &CMat,
    fm: &CMat,
    fb: &CMat,
    whole: &CMat,
    tol: f64,
    depth: u32,
) -> Result<CMat> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(fa, &flm, fm, m - a);
    let right = simpson(fm, &frm, fb, b - m);
    let refined = &left + &right;
    let err = (&refined - whole).norm();
    if err < 15.0 * tol || depth == 0 {
        let correction = (&refined - whole) * Complex::new(1.0 / 15.0, 0.0);
        return Ok(refined + correction);
    }
    let l = simpson_step(f, a, m, fa, &flm, fm, &left, tol / 2.0, depth - 1)?;
    let r = simpson_step(f, m, b, fm, &frm, fb, &right, tol / 2.0, depth - 1)?;
    Ok(l + r)
}

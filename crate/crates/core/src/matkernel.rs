//! Dense complex linear-algebra kernels used throughout the crate:
//! matrix exponential, positive-definite square root, Sylvester and
//! Riccati solvers, spectra, controllability and minimal realization.
//!
//! All routines operate on dense `DMatrix<Complex<f64>>` values at desk
//! scale (n up to a few dozen); none of them are tuned for large n.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

/// The universal matrix carrier of the crate.
pub type CMat = DMatrix<Complex<f64>>;

pub(crate) const ONE: Complex<f64> = Complex::new(1.0, 0.0);
pub(crate) const I: Complex<f64> = Complex::new(0.0, 1.0);

/// Relative scale of the default rank tolerance tau = dim * sigma_max * RANK_EPS.
pub const RANK_EPS: f64 = 1e-12;

/// Eigenvalues of a square matrix together with the extreme imaginary parts.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex<f64>>,
    pub max_imag: f64,
    pub min_imag: f64,
}

pub(crate) fn check_finite(a: &CMat, what: &'static str) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub(crate) fn check_square(a: &CMat, what: &str) -> Result<()> {
    if a.nrows() == a.ncols() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )))
    }
}

pub(crate) fn hermitian_residual(a: &CMat) -> f64 {
    (a - a.adjoint()).norm()
}

/// Hermitian eigenvalues of a Hermitian matrix, ascending.
pub(crate) fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let se = nalgebra::SymmetricEigen::new(a.clone());
    let mut ev: Vec<f64> = se.eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Matrix exponential by scaling-and-squaring with the diagonal Pade
/// approximant of order 13.
pub fn mat_exp(a: &CMat) -> Result<CMat> {
    check_square(a, "mat_exp input")?;
    check_finite(a, "mat_exp input")?;
    let n = a.nrows();
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }

    const THETA_13: f64 = 5.371920351148152;
    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.map(|z| z / Complex::new(2f64.powi(s as i32), 0.0));

    // Pade(13,13) coefficients.
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let id = CMat::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6 * (&a6 * cmul(B[13]) + &a4 * cmul(B[11]) + &a2 * cmul(B[9]))
        + &a6 * cmul(B[7])
        + &a4 * cmul(B[5])
        + &a2 * cmul(B[3])
        + &id * cmul(B[1]);
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * cmul(B[12]) + &a4 * cmul(B[10]) + &a2 * cmul(B[8]))
        + &a6 * cmul(B[6])
        + &a4 * cmul(B[4])
        + &a2 * cmul(B[2])
        + &id * cmul(B[0]);

    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .ok_or(Error::Singular)?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

fn cmul(x: f64) -> Complex<f64> {
    Complex::new(x, 0.0)
}

fn one_norm(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Hermitian positive definite square root.
///
/// Fails if the input deviates from Hermitian by more than `1e-10 * ||S||`
/// or has a non-positive eigenvalue.
pub fn pd_sqrt(s: &CMat) -> Result<CMat> {
    check_square(s, "pd_sqrt input")?;
    check_finite(s, "pd_sqrt input")?;
    let n = s.nrows();
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    let scale = s.norm().max(1.0);
    let herm = hermitian_residual(s);
    if herm > 1e-10 * scale {
        return Err(Error::NotHermitian { residual: herm });
    }
    let sym = (s + s.adjoint()) * cmul(0.5);
    let se = nalgebra::SymmetricEigen::new(sym);
    let min_eig = se.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eig });
    }
    let d = DMatrix::from_diagonal(&se.eigenvalues.map(|x| cmul(x.sqrt())));
    let r = &se.eigenvectors * d * se.eigenvectors.adjoint();
    Ok((&r + r.adjoint()) * cmul(0.5))
}

/// Inverse of the positive definite square root, via the same eigendecomposition.
pub fn pd_sqrt_inv(s: &CMat) -> Result<CMat> {
    let r = pd_sqrt(s)?;
    r.clone().try_inverse().ok_or(Error::Singular)
}

/// Solves A X + X B = C by Bartels-Stewart on the complex Schur forms of
/// A and B. Fails when the spectra of A and -B overlap.
pub fn sylvester_solve(a: &CMat, b: &CMat, c: &CMat) -> Result<CMat> {
    check_square(a, "sylvester A")?;
    check_square(b, "sylvester B")?;
    check_finite(a, "sylvester A")?;
    check_finite(b, "sylvester B")?;
    check_finite(c, "sylvester C")?;
    let p = a.nrows();
    let q = b.nrows();
    if c.nrows() != p || c.ncols() != q {
        return Err(Error::DimensionMismatch(format!(
            "sylvester C must be {p}x{q}, got {}x{}",
            c.nrows(),
            c.ncols()
        )));
    }
    if p == 0 || q == 0 {
        return Ok(CMat::zeros(p, q));
    }

    let (qa, ta) = a.clone().schur().unpack();
    let (qb, tb) = b.clone().schur().unpack();
    let f = qa.adjoint() * c * &qb;

    let scale = one_norm(a).max(one_norm(b)).max(1.0);
    let mut y = CMat::zeros(p, q);
    for j in 0..q {
        // rhs_j = f_j - sum_{k<j} y_k tb[k,j]
        let mut rhs = f.column(j).clone_owned();
        for k in 0..j {
            rhs -= y.column(k) * tb[(k, j)];
        }
        // (T_A + tb[j,j] I) y_j = rhs, T_A upper triangular.
        let shift = tb[(j, j)];
        for i in (0..p).rev() {
            let mut acc = rhs[i];
            for l in (i + 1)..p {
                acc -= ta[(i, l)] * y[(l, j)];
            }
            let diag = ta[(i, i)] + shift;
            if diag.norm() < 1e-14 * scale {
                return Err(Error::SylvesterSingular);
            }
            y[(i, j)] = acc / diag;
        }
    }
    Ok(qa * y * qb.adjoint())
}

/// Solves the skew-form Riccati equation
/// `gamma X - X gamma* - i X B B* X + i Q = 0`
/// for the Hermitian positive definite X, via the ordered Schur form of
/// the Hamiltonian of the equivalent standard CARE
/// `A* X + X A - X (B B*) X + Q = 0` with `A = i gamma*`,
/// followed by Newton refinement through Sylvester solves.
pub fn care_solve(gamma: &CMat, b: &CMat, q: &CMat) -> Result<CMat> {
    check_square(gamma, "care gamma")?;
    check_square(q, "care Q")?;
    check_finite(gamma, "care gamma")?;
    check_finite(b, "care B")?;
    check_finite(q, "care Q")?;
    let n = gamma.nrows();
    if b.nrows() != n || q.nrows() != n {
        return Err(Error::DimensionMismatch(
            "care_solve: gamma, B, Q row counts differ".into(),
        ));
    }
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }

    let a = gamma.adjoint() * I;
    let bb = b * b.adjoint();

    // Hamiltonian [[A, -BB*], [-Q, -A*]].
    let mut h = CMat::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&a);
    h.view_mut((0, n), (n, n)).copy_from(&(-&bb));
    h.view_mut((n, 0), (n, n)).copy_from(&(-q));
    h.view_mut((n, n), (n, n)).copy_from(&(-a.adjoint()));

    // Leading n Schur vectors of the reordered form span the stable
    // invariant subspace {[v; Xv]}.
    let (qs, ts) = ordered_schur_stable_first(&h)?;
    let stable = (0..2 * n).filter(|&i| ts[(i, i)].re < 0.0).count();
    if stable != n {
        return Err(Error::RiccatiFailure(format!(
            "stable subspace has dimension {stable}, expected {n} (non-minimal input?)"
        )));
    }
    let basis = qs.columns(0, n).clone_owned();
    let u1 = basis.rows(0, n).clone_owned();
    let u2 = basis.rows(n, n).clone_owned();
    let mut x = u1
        .transpose()
        .lu()
        .solve(&u2.transpose())
        .ok_or_else(|| Error::RiccatiFailure("singular subspace basis".into()))?
        .transpose();
    x = (&x + x.adjoint()) * cmul(0.5);

    // Newton refinement: Acl* D + D Acl = -R(X), X <- X + D.
    for _ in 0..5 {
        let r = residual_care(&a, &bb, q, &x);
        if r.norm() < 1e-13 * (1.0 + x.norm() * x.norm()) {
            break;
        }
        let acl = &a - &bb * &x;
        match sylvester_solve(&acl.adjoint(), &acl, &(-r)) {
            Ok(d) => {
                x += d;
                x = (&x + x.adjoint()) * cmul(0.5);
            }
            Err(_) => break,
        }
    }

    let min_eig = hermitian_eigenvalues(&x)
        .first()
        .copied()
        .unwrap_or(f64::NEG_INFINITY);
    if min_eig <= 0.0 {
        return Err(Error::RiccatiFailure(format!(
            "solution is not positive definite (min eigenvalue {min_eig:.3e})"
        )));
    }
    let skew_resid = (gamma * &x - &x * gamma.adjoint() - (&x * &bb * &x) * I + q * I).norm();
    if skew_resid > 1e-10 * (1.0 + x.norm() * x.norm()) {
        return Err(Error::RiccatiFailure(format!(
            "refinement did not converge (residual {skew_resid:.3e})"
        )));
    }
    Ok(x)
}

fn residual_care(a: &CMat, bb: &CMat, q: &CMat, x: &CMat) -> CMat {
    a.adjoint() * x + x * a - x * bb * x + q
}

/// Complex Schur form H = Q T Q* reordered by adjacent unitary swaps so
/// that every eigenvalue with negative real part precedes every other one
/// on the diagonal of T.
fn ordered_schur_stable_first(h: &CMat) -> Result<(CMat, CMat)> {
    let n = h.nrows();
    let (mut q, mut t) = h
        .clone()
        .try_schur(f64::EPSILON, 0)
        .ok_or(Error::EigenFailure)?
        .unpack();

    // Bubble stable eigenvalues to the front; each adjacent swap is a
    // unitary similarity built from the trailing eigenvalue's eigenvector
    // of the 2x2 diagonal block.
    loop {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1) {
            let t11 = t[(k, k)];
            let t22 = t[(k + 1, k + 1)];
            if t11.re < 0.0 || t22.re >= 0.0 {
                continue;
            }
            let t12 = t[(k, k + 1)];
            // (block - t22 I) v = 0 with block = [[t11, t12], [0, t22]].
            let v = nalgebra::Vector2::new(-t12, t11 - t22);
            let nrm = v.norm();
            if nrm == 0.0 {
                return Err(Error::RiccatiFailure(
                    "degenerate Schur reordering".into(),
                ));
            }
            let c = v[0] / cmul(nrm);
            let s = v[1] / cmul(nrm);
            let g = nalgebra::Matrix2::new(c, -s.conj(), s, c.conj());
            let cols = t.columns(k, 2) * g;
            t.view_mut((0, k), (n, 2)).copy_from(&cols);
            let rows = g.adjoint() * t.rows(k, 2);
            t.view_mut((k, 0), (2, n)).copy_from(&rows);
            t[(k + 1, k)] = cmul(0.0);
            let qc = q.columns(k, 2) * g;
            q.view_mut((0, k), (n, 2)).copy_from(&qc);
            swapped = true;
        }
        if !swapped {
            break;
        }
    }
    Ok((q, t))
}

/// Eigenvalues with multiplicity, from the complex Schur form.
pub fn spectrum(a: &CMat) -> Result<SpectrumReport> {
    check_square(a, "spectrum input")?;
    check_finite(a, "spectrum input")?;
    let n = a.nrows();
    if n == 0 {
        return Ok(SpectrumReport {
            eigenvalues: Vec::new(),
            max_imag: f64::NEG_INFINITY,
            min_imag: f64::INFINITY,
        });
    }
    let t = a
        .clone()
        .try_schur(f64::EPSILON, 0)
        .ok_or(Error::EigenFailure)?
        .unpack()
        .1;
    let eigenvalues: Vec<Complex<f64>> = (0..n).map(|i| t[(i, i)]).collect();
    let max_imag = eigenvalues.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
    let min_imag = eigenvalues.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    Ok(SpectrumReport {
        eigenvalues,
        max_imag,
        min_imag,
    })
}

/// Rank of the controllability matrix [B, AB, ..., A^{n-1} B] at the
/// scale-aware tolerance tau = n * sigma_max * RANK_EPS.
pub fn controllability_rank(a: &CMat, b: &CMat) -> Result<usize> {
    check_square(a, "controllability A")?;
    let n = a.nrows();
    if b.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "controllability B must have {n} rows, got {}",
            b.nrows()
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    let k = controllability_matrix(a, b);
    Ok(svd_rank(&k, n as f64))
}

fn controllability_matrix(a: &CMat, b: &CMat) -> CMat {
    let n = a.nrows();
    let m = b.ncols();
    let mut k = CMat::zeros(n, n * m);
    let mut block = b.clone();
    for p in 0..n {
        k.view_mut((0, p * m), (n, m)).copy_from(&block);
        block = a * block;
    }
    k
}

/// Numerical rank at the default tolerance tau = max(rows, cols) *
/// sigma_max * RANK_EPS.
pub fn rank(a: &CMat) -> usize {
    svd_rank(a, a.nrows().max(a.ncols()) as f64)
}

fn svd_rank(k: &CMat, dim: f64) -> usize {
    if k.nrows() == 0 || k.ncols() == 0 {
        return 0;
    }
    let sv = k.clone().svd(false, false).singular_values;
    let tol = dim * sv.max() * RANK_EPS;
    sv.iter().filter(|&&s| s > tol).count()
}

/// Orthonormal basis of the column space of `k`, as the leading left
/// singular vectors above the rank tolerance.
fn range_basis(k: &CMat, dim: f64) -> CMat {
    let n = k.nrows();
    if n == 0 || k.ncols() == 0 {
        return CMat::zeros(n, 0);
    }
    let svd = k.clone().svd(true, false);
    let u = svd.u.unwrap();
    let tol = dim * svd.singular_values.max() * RANK_EPS;
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    u.columns(0, rank).clone_owned()
}

/// Kalman reduction of a strictly proper triple to a minimal one realizing
/// the same rational function `C (zI - gamma)^{-1} B`.
///
/// Returns the reduced triple and its McMillan degree (0 allowed).
pub fn minimal_realization(gamma: &CMat, b: &CMat, c: &CMat) -> Result<(CMat, CMat, CMat, usize)> {
    check_square(gamma, "realization state matrix")?;
    let n = gamma.nrows();
    if b.nrows() != n || c.ncols() != n {
        return Err(Error::DimensionMismatch(
            "realization maps do not conform to the state dimension".into(),
        ));
    }
    check_finite(gamma, "realization state matrix")?;
    check_finite(b, "realization input map")?;
    check_finite(c, "realization output map")?;

    // Controllable part.
    let v = range_basis(&controllability_matrix(gamma, b), n as f64);
    let a1 = v.adjoint() * gamma * &v;
    let b1 = v.adjoint() * b;
    let c1 = c * &v;

    // Observable part of the controllable restriction (dual staircase).
    let r = a1.nrows();
    let w = range_basis(
        &controllability_matrix(&a1.adjoint(), &c1.adjoint()),
        r.max(1) as f64,
    );
    let a2 = w.adjoint() * &a1 * &w;
    let b2 = w.adjoint() * &b1;
    let c2 = &c1 * &w;
    let degree = a2.nrows();
    Ok((a2, b2, c2, degree))
}

//! Strictly proper rational matrix functions as state-space triples.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matkernel::{self, CMat, I};

/// Sign/shift convention of the realization.
///
/// `Continuous`: phi(z) = i * out * (zI - gamma)^{-1} * in.
/// `Discrete`:   phi(z) = -i * out * (zI + gamma)^{-1} * in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Continuous,
    Discrete,
}

/// A strictly proper rational matrix function held as (state, input, output)
/// matrices; no feedthrough term.
#[derive(Debug, Clone)]
pub struct StateSpaceRealization {
    state: CMat,
    input: CMat,
    output: CMat,
    convention: Convention,
}

impl StateSpaceRealization {
    pub fn new(state: CMat, input: CMat, output: CMat, convention: Convention) -> Result<Self> {
        matkernel::check_square(&state, "realization state matrix")?;
        let n = state.nrows();
        if input.nrows() != n || output.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "realization maps must conform to state dimension {n}"
            )));
        }
        matkernel::check_finite(&state, "realization state matrix")?;
        matkernel::check_finite(&input, "realization input map")?;
        matkernel::check_finite(&output, "realization output map")?;
        Ok(Self {
            state,
            input,
            output,
            convention,
        })
    }

    /// The zero function of the given output/input sizes (empty state).
    pub fn zero(out_dim: usize, in_dim: usize, convention: Convention) -> Self {
        Self {
            state: CMat::zeros(0, 0),
            input: CMat::zeros(0, in_dim),
            output: CMat::zeros(out_dim, 0),
            convention,
        }
    }

    pub fn state_dim(&self) -> usize {
        self.state.nrows()
    }

    pub fn out_dim(&self) -> usize {
        self.output.nrows()
    }

    pub fn in_dim(&self) -> usize {
        self.input.ncols()
    }

    pub fn state(&self) -> &CMat {
        &self.state
    }

    pub fn input(&self) -> &CMat {
        &self.input
    }

    pub fn output(&self) -> &CMat {
        &self.output
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Poles of the function (eigenvalues of the state matrix, shifted by
    /// the convention).
    pub fn poles(&self) -> Result<Vec<Complex<f64>>> {
        let spec = matkernel::spectrum(&self.state)?;
        Ok(match self.convention {
            Convention::Continuous => spec.eigenvalues,
            Convention::Discrete => spec.eigenvalues.iter().map(|z| -z).collect(),
        })
    }

    /// Evaluates the function at a point off the pole set.
    pub fn eval(&self, z: Complex<f64>) -> Result<CMat> {
        let n = self.state_dim();
        if n == 0 {
            return Ok(CMat::zeros(self.out_dim(), self.in_dim()));
        }
        let shifted = match self.convention {
            Convention::Continuous => CMat::identity(n, n) * z - &self.state,
            Convention::Discrete => CMat::identity(n, n) * z + &self.state,
        };
        let res = shifted.lu().try_inverse().ok_or(Error::NearPole(z))?;
        let sign = match self.convention {
            Convention::Continuous => I,
            Convention::Discrete => -I,
        };
        Ok(&self.output * res * &self.input * sign)
    }

    /// Kalman reduction to a minimal triple realizing the same function.
    pub fn minimal(&self) -> Result<Self> {
        let (g, b, c) = match self.convention {
            Convention::Continuous => (self.state.clone(), self.input.clone(), self.output.clone()),
            // phi(z) = -i out (zI - (-gamma))^{-1} in: minimize on -gamma.
            Convention::Discrete => (-self.state.clone(), self.input.clone(), self.output.clone()),
        };
        let (g2, b2, c2, _deg) = matkernel::minimal_realization(&g, &b, &c)?;
        let state = match self.convention {
            Convention::Continuous => g2,
            Convention::Discrete => -g2,
        };
        Self::new(state, b2, c2, self.convention)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn continuous_scalar_i_over_z() {
        let r = StateSpaceRealization::new(
            CMat::zeros(1, 1),
            CMat::from_element(1, 1, c(1.0, 0.0)),
            CMat::from_element(1, 1, c(1.0, 0.0)),
            Convention::Continuous,
        )
        .unwrap();
        let z = c(0.5, 2.0);
        assert!((r.eval(z).unwrap()[(0, 0)] - c(0.0, 1.0) / z).norm() < 1e-14);
    }

    #[test]
    fn discrete_scalar_minus_2i_over_z() {
        let r = StateSpaceRealization::new(
            CMat::zeros(1, 1),
            CMat::from_element(1, 1, c(2f64.sqrt(), 0.0)),
            CMat::from_element(1, 1, c(2f64.sqrt(), 0.0)),
            Convention::Discrete,
        )
        .unwrap();
        let z = c(-0.3, 1.5);
        assert!((r.eval(z).unwrap()[(0, 0)] - c(0.0, -2.0) / z).norm() < 1e-14);
    }

    #[test]
    fn zero_function_evaluates_to_zero() {
        let r = StateSpaceRealization::zero(2, 3, Convention::Continuous);
        let v = r.eval(c(1.0, 1.0)).unwrap();
        assert_eq!((v.nrows(), v.ncols()), (2, 3));
        assert!(v.norm() == 0.0);
    }

    #[test]
    fn discrete_minimal_preserves_function() {
        // -i/(z+1) padded with a dead state.
        let mut state = CMat::zeros(2, 2);
        state[(0, 0)] = c(1.0, 0.0);
        state[(1, 1)] = c(5.0, 0.0);
        let input = CMat::from_row_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let output = CMat::from_row_slice(1, 2, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let r = StateSpaceRealization::new(state, input, output, Convention::Discrete).unwrap();
        let rm = r.minimal().unwrap();
        assert_eq!(rm.state_dim(), 1);
        for k in 0..5 {
            let z = c(0.2 * k as f64, 2.0);
            assert!((r.eval(z).unwrap() - rm.eval(z).unwrap()).norm() < 1e-12);
        }
    }
}

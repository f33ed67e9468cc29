//! Explicit direct and inverse problems for continuous and discrete
//! skew-selfadjoint Dirac systems with pseudo-exponential (possibly
//! non-square) potentials, and explicit solutions of the generalized
//! discrete Heisenberg magnet model.

pub mod continuous;
pub mod discrete;
pub mod document;
pub mod error;
pub mod evolution;
pub mod inverse;
pub mod matkernel;
pub mod quadruple;
pub mod realization;

pub use error::{Error, Result};
pub use matkernel::CMat;
pub use quadruple::AdmissibleQuadruple;
pub use realization::{Convention, StateSpaceRealization};

use num_complex::Complex;

/// Error type shared by all modules of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eig:.3e})")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("no unique solution: spectra of A and -B overlap")]
    SylvesterSingular,

    #[error("Riccati solver failed: {0}")]
    RiccatiFailure(String),

    #[error("eigenvalue iteration failed")]
    EigenFailure,

    #[error("matrix is singular")]
    Singular,

    #[error("evaluation point {0} is within pole tolerance of the spectrum")]
    NearPole(Complex<f64>),

    #[error("quadruple is not admissible: {0}")]
    NotAdmissible(String),

    #[error("quadruple is not strongly admissible: {0}")]
    NotStrong(String),

    #[error("i is an eigenvalue of alpha")]
    IEigenvalue,

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

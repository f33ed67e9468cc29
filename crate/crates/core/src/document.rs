//! JSON document schemas (schemaVersion "1") for quadruples and state-space
//! realizations. Complex entries are serialized as [re, im] arrays; matrices
//! as nested arrays of such pairs. Parsing checks dimensional consistency
//! only — admissibility validation is a separate explicit step.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::CMat;
use crate::quadruple::AdmissibleQuadruple;
use crate::realization::{Convention, StateSpaceRealization};

pub const SCHEMA_VERSION: &str = "1";

/// Matrix wire format: rows of [re, im] pairs.
pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_doc(m: &CMat) -> MatrixDoc {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

/// Converts the wire format back to a matrix, enforcing rectangularity and
/// the expected shape. An expected dimension of 0 rows or columns is allowed
/// only for an empty document.
pub fn matrix_from_doc(doc: &MatrixDoc, rows: usize, cols: usize, name: &str) -> Result<CMat> {
    if doc.len() != rows || doc.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!(
            "{name}: expected {rows}x{cols}, got {}x{:?}",
            doc.len(),
            doc.first().map(|r| r.len()).unwrap_or(0)
        )));
    }
    Ok(CMat::from_fn(rows, cols, |r, c| {
        Complex::new(doc[r][c][0], doc[r][c][1])
    }))
}

/// Wire form of an admissible-quadruple candidate.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct QuadrupleDocument {
    pub schema_version: String,
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    pub alpha: MatrixDoc,
    pub s0: MatrixDoc,
    pub theta1: MatrixDoc,
    pub theta2: MatrixDoc,
}

impl QuadrupleDocument {
    pub fn from_quadruple(q: &AdmissibleQuadruple) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            n: q.n(),
            m1: q.m1(),
            m2: q.m2(),
            alpha: matrix_to_doc(q.alpha()),
            s0: matrix_to_doc(q.s0()),
            theta1: matrix_to_doc(q.theta1()),
            theta2: matrix_to_doc(q.theta2()),
        }
    }

    fn check_version(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported schemaVersion {:?}, expected {:?}",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        Ok(())
    }

    /// Raw matrices, shape-checked against the declared counts but not
    /// validated for admissibility.
    pub fn matrices(&self) -> Result<(CMat, CMat, CMat, CMat)> {
        self.check_version()?;
        Ok((
            matrix_from_doc(&self.alpha, self.n, self.n, "alpha")?,
            matrix_from_doc(&self.s0, self.n, self.n, "s0")?,
            matrix_from_doc(&self.theta1, self.n, self.m1, "theta1")?,
            matrix_from_doc(&self.theta2, self.n, self.m2, "theta2")?,
        ))
    }

    /// Shape check plus admissibility validation at the given tolerance.
    pub fn to_quadruple(&self, tol: f64) -> Result<AdmissibleQuadruple> {
        let (alpha, s0, theta1, theta2) = self.matrices()?;
        if self.n == 0 {
            return Ok(AdmissibleQuadruple::empty(self.m1, self.m2));
        }
        AdmissibleQuadruple::with_tolerance(alpha, s0, theta1, theta2, tol)
    }
}

/// Wire form of a strictly proper rational function realization.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RealizationDocument {
    pub schema_version: String,
    pub convention: String,
    pub gamma: MatrixDoc,
    pub input_map: MatrixDoc,
    pub output_map: MatrixDoc,
}

impl RealizationDocument {
    pub fn from_realization(r: &StateSpaceRealization) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            convention: match r.convention() {
                Convention::Continuous => "continuous".to_string(),
                Convention::Discrete => "discrete".to_string(),
            },
            gamma: matrix_to_doc(r.state()),
            input_map: matrix_to_doc(r.input()),
            output_map: matrix_to_doc(r.output()),
        }
    }

    pub fn to_realization(&self) -> Result<StateSpaceRealization> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported schemaVersion {:?}, expected {:?}",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        let convention = match self.convention.as_str() {
            "continuous" => Convention::Continuous,
            "discrete" => Convention::Discrete,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "convention must be \"continuous\" or \"discrete\", got {other:?}"
                )))
            }
        };
        let n = self.gamma.len();
        let in_dim = self.input_map.first().map(|r| r.len()).unwrap_or(0);
        let out_dim = self.output_map.len();
        let gamma = matrix_from_doc(&self.gamma, n, n, "gamma")?;
        let input = matrix_from_doc(&self.input_map, n, in_dim, "inputMap")?;
        let output = matrix_from_doc(&self.output_map, out_dim, n, "outputMap")?;
        StateSpaceRealization::new(gamma, input, output, convention)
    }
}

#[cfg(test)]
mod tests;

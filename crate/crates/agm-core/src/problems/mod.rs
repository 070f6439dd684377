//! Benchmark problem families: spectral quadratics, L2-regularised
//! logistic regression, and Huber-TV image denoising, plus the
//! high-precision reference solver used when no closed-form minimizer
//! exists.
//!
//! Problems are immutable after construction; value, gradient, and
//! Hessian-vector evaluations are concurrently callable.

pub mod denoise;
pub mod logistic;
pub mod quadratic;
pub mod reference;

use core::fmt;

use crate::linalg::OperatorError;

/// Errors from problem constructors and generators.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemError {
    Operator(OperatorError),
    /// Vector or matrix dimensions disagree.
    DimensionMismatch { expected: usize, got: usize },
    /// A supplied minimizer does not solve the normal equations.
    MinimizerInconsistent { residual_norm: f64 },
    /// A label was not exactly +1 or -1.
    InvalidLabel { index: usize, value: f64 },
    /// A scalar parameter was outside its admissible range.
    InvalidParameter(&'static str),
    /// The image grid is smaller than 2x2.
    GridTooSmall { rows: usize, cols: usize },
}

impl From<OperatorError> for ProblemError {
    fn from(e: OperatorError) -> Self {
        ProblemError::Operator(e)
    }
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::Operator(e) => write!(f, "{e}"),
            ProblemError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            ProblemError::MinimizerInconsistent { residual_norm } => {
                write!(f, "claimed minimizer leaves residual norm {residual_norm}")
            }
            ProblemError::InvalidLabel { index, value } => {
                write!(f, "label {index} must be +1 or -1, got {value}")
            }
            ProblemError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            ProblemError::GridTooSmall { rows, cols } => {
                write!(f, "image grid must be at least 2x2, got {rows}x{cols}")
            }
        }
    }
}

impl core::error::Error for ProblemError {}

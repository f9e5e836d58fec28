//! Graded vector spaces, superdeterminants and flat determinants of finite matrices.

mod flat_det;
mod graded;
pub mod quadrature;

use num_complex::Complex64;
use thiserror::Error;

pub use flat_det::{flat_det, mellin_f, FlatDetMode, FlatDetResult, QUADRATURE_TOL};
pub use graded::{sdet, GradedOperator, GradedVectorSpace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GradedError {
    #[error("block in degree {0} is singular")]
    SingularBlock(i32),
    #[error("block in degree {degree} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("operator has degree {0}, superdeterminant needs a degree-preserving map")]
    NotDegreePreserving(i32),
    #[error("graded spaces do not match for composition")]
    IncompatibleComposition,
    #[error("Mellin integral diverges: eigenvalue {eigenvalue} has non-positive real part")]
    MellinDivergence { eigenvalue: Complex64 },
    #[error("quadrature did not converge (residual {residual:e})")]
    QuadratureFailure { residual: f64 },
}

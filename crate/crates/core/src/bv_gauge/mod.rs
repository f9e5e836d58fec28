//! Finite-dimensional BV gauge fixing of abelian BF theory on a twisted complex.

mod contraction;
mod fields;
mod gauge;
mod gaussian;
mod poly;
mod scan;

use thiserror::Error;

use crate::twisted_complex::ComplexError;

pub use contraction::{
    degenerate_contraction, hodge_contraction, lie_derivative_conditioning, random_contraction, Contraction,
    ContractionFamily, CONTRACTION_TOL,
};
pub use fields::{build_bf_fields, BFFieldSpace, CVec};
pub use gauge::{
    annihilator, contraction_gauge, is_lagrangian, metric_gauge, partition_function, restricted_action, skewed_gauge,
    GaugeKind, GaugeSubspace, LagrangianReport, Partition, DEGENERACY_TOL,
};
pub use gaussian::{chart_from_gauge, gaussian_expectation, weighted_laplacian, DarbouxChart, Expectation, Keep};
pub use poly::{random_poly, Monomial, PolyObservable, DEFAULT_MAX_DEGREE};
pub use scan::{homotopy_scan, ScanRecord, ScanReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BvError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("pairing between A and B fields is not perfect (residual {residual:e})")]
    ImperfectPairing { residual: f64 },
    #[error("gauge-fixed action is singular in degree {degree}")]
    DegenerateGauge { degree: usize },
    #[error("contraction degenerates at sample {sample} (t = {t})")]
    DegenerateContraction { sample: usize, t: f64 },
    #[error("invalid contraction: {0}")]
    InvalidContraction(String),
    #[error("subspace is not Lagrangian")]
    NotLagrangian,
    #[error("polynomial degree {degree} exceeds the bound {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("weight is not positive definite on the kept even coordinates")]
    IndefiniteWeight,
}

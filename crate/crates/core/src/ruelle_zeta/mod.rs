//! Twisted Ruelle zeta functions of orbit spectra: Euler products with certified
//! truncation bounds, k-form factors, flat-trace pairings, the Mellin route, exact
//! resummations for suspensions and the discrete Fried comparison.

mod closed_form;
mod euler;
mod flat_trace;
mod fried;
mod orbits;

use thiserror::Error;

use crate::anosov_orbits::OrbitError;
use crate::twisted_complex::ComplexError;

pub use closed_form::{closed_form_suspension, ClosedForm};
pub use euler::{decomposition_residual, log_zeta, log_zeta_full, log_zeta_k, Degree, ZetaEvaluation};
pub use flat_trace::{flat_trace_pairing, mellin_f, mellin_log_zeta, Bump, MellinEvaluation};
pub use fried::{calibrate_fried_exponent, fried_report, fried_residual, FriedReport, FRIED_ANCHOR_TOL};
pub use orbits::Orbits;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("Euler product diverges at Re λ = {re_lambda} (needs Re λ > {threshold})")]
    DivergentRegion { re_lambda: f64, threshold: f64 },
    #[error("test function support reaches t = {lower} <= 0")]
    SupportTooWide { lower: f64 },
    #[error("orbits are enumerated up to period {available}, {needed} needed")]
    TruncationTooShort { needed: u32, available: u32 },
    #[error("degree {0} is outside 0..=2")]
    InvalidDegree(usize),
    #[error("expanding eigenvalue is negative (trace {trace}); unstable bundle is not orientable")]
    NonOrientable { trace: i64 },
    #[error("no torsion exponent reproduces the anchor (residuals {plus:e}, {minus:e})")]
    CalibrationFailed { plus: f64, minus: f64 },
}

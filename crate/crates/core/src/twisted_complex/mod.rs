//! Finite cochain complexes twisted by unitary representations: Laplacians,
//! analytic torsion and the resolution form of the partition function.

mod builders;
mod cell;
mod complex;
mod format;
mod random;
mod rep;
mod torsion;

use thiserror::Error;

pub use builders::{
    circle_cells, circle_complex, mapping_torus_cells, mapping_torus_complex, torus_cells, torus_complex, torus_relator,
};
pub use cell::{CellComplex, IncidenceTerm, Word};
pub use complex::{build_twisted_complex, DualPairing, TwistedComplex, COMPLEX_TOL};
pub use format::{load_complex, read_complex, save_complex, write_complex};
pub use random::{random_acyclic_complex, RandomComplexConfig};
pub use rep::{UnitaryRep, RELATOR_TOL, UNITARY_TOL};
pub use torsion::{
    analytic_torsion, det_relations_report, log_schwarz_partition, resolution, schwarz_partition, torsion_report,
    DetRelationsReport, Resolution, TorsionConvention, TorsionReport, TORSION_AGREEMENT_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexError {
    #[error("d_{} d_{} does not vanish (residual {residual:e})", degree + 1, degree)]
    NotAComplex { degree: usize, residual: f64 },
    #[error("relator {relator} maps to a matrix at distance {residual:e} from the identity")]
    RelatorViolation { relator: String, residual: f64 },
    #[error("image of generator `{generator}` is not unitary (residual {residual:e})")]
    NotUnitary { generator: String, residual: f64 },
    #[error("no image for generator `{0}`")]
    MissingGenerator(String),
    #[error("complex is not acyclic: b_{degree} = {betti}")]
    NotAcyclic { degree: usize, betti: usize },
    #[error("resolution degenerates at stage {stage}")]
    DegenerateResolution { stage: usize },
    #[error("monodromy is not hyperbolic (trace {trace})")]
    NotHyperbolic { trace: i64 },
    #[error("Laplacian and coexact torsion disagree: {laplacian} vs {coexact} (residual {residual:e})")]
    TorsionMismatch { laplacian: f64, coexact: f64, residual: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    InvalidInput(String),
}

//! Periodic-orbit data of suspensions of hyperbolic toral automorphisms, and
//! ingestion of externally computed orbit spectra.

mod counts;
mod poincare;
mod spectrum;

use num_complex::Complex64;
use thiserror::Error;

pub use counts::{count_fixed_points, enumerate_primitive_orbits, primitive_counts};
pub use poincare::{identity_residual, poincare_data, PoincareData, N_TRANSVERSE};
pub use spectrum::{load_orbit_spectrum, read_orbit_spectrum, save_orbit_spectrum, write_orbit_spectrum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("monodromy is not hyperbolic (trace {trace})")]
    NotHyperbolic { trace: i64 },
    #[error("monodromy must have |det| = 1, got {det}")]
    NotUnimodular { det: i64 },
    #[error("roof must be positive and finite, got {0}")]
    InvalidRoof(f64),
    #[error("period must be at least 1")]
    InvalidPeriod,
    #[error("primitive orbit count for period {period} does not fit in 128 bits")]
    Overflow { period: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: invalid {field}")]
    Validation { line: usize, field: String },
    #[error("{0}")]
    Io(String),
}

/// Hyperbolic toral automorphism with a constant roof. `mu` is the eigenvalue of
/// largest modulus; the other one is `det A / mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToralAutomorphism {
    pub a: [[i64; 2]; 2],
    pub mu: f64,
    pub roof: f64,
}

impl ToralAutomorphism {
    pub fn new(a: [[i64; 2]; 2]) -> Result<Self, OrbitError> {
        Self::with_roof(a, 1.0)
    }

    pub fn with_roof(a: [[i64; 2]; 2], roof: f64) -> Result<Self, OrbitError> {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det.abs() != 1 {
            return Err(OrbitError::NotUnimodular { det });
        }
        let trace = a[0][0] + a[1][1];
        if trace.abs() <= 2 {
            return Err(OrbitError::NotHyperbolic { trace });
        }
        if !(roof.is_finite() && roof > 0.0) {
            return Err(OrbitError::InvalidRoof(roof));
        }
        let (t, dt) = (trace as f64, det as f64);
        let root = (t * t - 4.0 * dt).sqrt();
        // larger root without cancellation
        let mu = 0.5 * (t + t.signum() * root);
        Ok(ToralAutomorphism { a, mu, roof })
    }

    /// The hyperbolic cat map `[[2,1],[1,1]]`.
    pub fn cat_map() -> Self {
        Self::new([[2, 1], [1, 1]]).expect("cat map is hyperbolic")
    }

    pub fn trace(&self) -> i64 {
        self.a[0][0] + self.a[1][1]
    }

    pub fn det(&self) -> i64 {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.mu, self.det() as f64 / self.mu)
    }

    /// Both invariant line bundles are preserved with orientation along closed orbits
    /// exactly when the expanding eigenvalue is positive.
    pub fn unstable_orientable(&self) -> bool {
        self.mu > 0.0
    }
}

/// Closed-orbit data. `holonomy` overrides the character `e^{iθ·winding}` for ingested
/// spectra, whose holonomies are given directly.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord {
    pub period: u32,
    pub length: f64,
    pub count: u128,
    pub primitive: bool,
    pub poincare_eigs: (f64, f64),
    pub winding: i64,
    pub holonomy: Option<Complex64>,
}

impl OrbitRecord {
    /// `ρ([γ])` for the character `t ↦ e^{iθ}` of the suspension direction.
    pub fn character(&self, theta: f64) -> Complex64 {
        self.holonomy.unwrap_or_else(|| Complex64::from_polar(1.0, theta * self.winding as f64))
    }
}

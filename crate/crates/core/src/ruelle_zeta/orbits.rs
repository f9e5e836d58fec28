use num_complex::Complex64;

use super::ZetaError;
use crate::anosov_orbits::{enumerate_primitive_orbits, poincare_data, OrbitRecord, PoincareData, ToralAutomorphism};

/// Orbit data feeding the zeta sums.
///
/// A suspension keeps its monodromy, which gives exact growth rates for tail bounds;
/// its sums are truncated at total period `J`. An ingested spectrum is a finite list of
/// orbits whose sums are truncated at `J` iterates per primitive orbit; non-primitive
/// records are ignored.
#[derive(Debug, Clone)]
pub enum Orbits {
    Suspension { map: ToralAutomorphism, records: Vec<OrbitRecord>, max_period: u32 },
    Spectrum(Vec<OrbitRecord>),
}

/// One iterate `γ^j` of a primitive orbit, with multiplicity `count`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Iterate {
    pub j: u32,
    pub length: f64,
    pub count: f64,
    pub rho: Complex64,
    pub poincare: PoincareData,
}

impl Orbits {
    pub fn suspension(map: ToralAutomorphism, max_period: u32) -> Result<Self, ZetaError> {
        let records = enumerate_primitive_orbits(&map, max_period)?;
        Ok(Orbits::Suspension { map, records, max_period })
    }

    pub fn spectrum(records: Vec<OrbitRecord>) -> Self {
        Orbits::Spectrum(records)
    }

    pub fn records(&self) -> &[OrbitRecord] {
        match self {
            Orbits::Suspension { records, .. } => records,
            Orbits::Spectrum(records) => records,
        }
    }

    fn rho_power(rec: &OrbitRecord, theta: f64, j: u32) -> Complex64 {
        match rec.holonomy {
            Some(h) => h.powi(j as i32),
            None => Complex64::from_polar(1.0, theta * (rec.winding as f64) * f64::from(j)),
        }
    }

    fn iterate(rec: &OrbitRecord, theta: f64, j: u32) -> Iterate {
        Iterate {
            j,
            length: rec.length,
            count: rec.count as f64,
            rho: Self::rho_power(rec, theta, j),
            poincare: poincare_data(rec.poincare_eigs, j),
        }
    }

    /// Iterates entering a sum truncated at `truncation`, in a fixed order.
    pub(crate) fn iterates(&self, theta: f64, truncation: u32) -> Result<Vec<Iterate>, ZetaError> {
        let mut out = Vec::new();
        match self {
            Orbits::Suspension { records, max_period, .. } => {
                if truncation > *max_period {
                    return Err(ZetaError::TruncationTooShort { needed: truncation, available: *max_period });
                }
                for rec in records {
                    for j in (1..).take_while(|j| rec.period * j <= truncation) {
                        out.push(Self::iterate(rec, theta, j));
                    }
                }
            }
            Orbits::Spectrum(records) => {
                for rec in records.iter().filter(|r| r.primitive) {
                    for j in 1..=truncation {
                        out.push(Self::iterate(rec, theta, j));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Iterates whose time `j ℓ` is below `t_max`.
    pub(crate) fn iterates_below(&self, theta: f64, t_max: f64) -> Result<Vec<Iterate>, ZetaError> {
        let mut out = Vec::new();
        match self {
            Orbits::Suspension { map, records, max_period } => {
                let needed = (t_max / map.roof).ceil().max(1.0) as u32;
                if needed > *max_period {
                    return Err(ZetaError::TruncationTooShort { needed, available: *max_period });
                }
                for rec in records {
                    for j in (1..).take_while(|&j| f64::from(j) * rec.length < t_max) {
                        out.push(Self::iterate(rec, theta, j));
                    }
                }
            }
            Orbits::Spectrum(records) => {
                for rec in records.iter().filter(|r| r.primitive) {
                    for j in (1..).take_while(|&j| f64::from(j) * rec.length < t_max) {
                        out.push(Self::iterate(rec, theta, j));
                    }
                }
            }
        }
        Ok(out)
    }
}

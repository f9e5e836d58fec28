use num_complex::Complex64;

use super::{closed_form_suspension, ZetaError};
use crate::anosov_orbits::{ToralAutomorphism, N_TRANSVERSE};
use crate::twisted_complex::{analytic_torsion, mapping_torus_complex, TorsionConvention};

/// Residual the anchor must reach for an exponent to be accepted.
pub const FRIED_ANCHOR_TOL: f64 = 1e-10;

const ANCHOR: [[i64; 2]; 2] = [[2, 1], [1, 1]];
const ANCHOR_THETA: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FriedReport {
    /// `|ζ(0)|^{(−1)^n}` from the exact resummation.
    pub zeta_side: f64,
    /// Torsion of the twisted mapping torus in the requested convention.
    pub torsion: f64,
    pub exponent: i32,
    pub residual: f64,
}

fn sides(a: [[i64; 2]; 2], theta: f64, convention: TorsionConvention) -> Result<(f64, f64), ZetaError> {
    let map = ToralAutomorphism::new(a)?;
    if !map.unstable_orientable() {
        return Err(ZetaError::NonOrientable { trace: map.trace() });
    }
    let torsion = analytic_torsion(&mapping_torus_complex(a, theta)?, convention)?;
    let cf = closed_form_suspension(&map, theta, Complex64::new(0.0, 0.0));
    debug_assert_eq!(N_TRANSVERSE % 2, 1);
    Ok((cf.full_power.norm(), torsion))
}

/// Exponent `σ_F ∈ {+1, −1}` with `|ζ(0)|^{(−1)^n} τ^{σ_F} = 1` on the cat map at `θ = π`.
pub fn calibrate_fried_exponent(convention: TorsionConvention) -> Result<i32, ZetaError> {
    let (zeta, tau) = sides(ANCHOR, ANCHOR_THETA, convention)?;
    let plus = (zeta * tau - 1.0).abs();
    let minus = (zeta / tau - 1.0).abs();
    if plus < FRIED_ANCHOR_TOL {
        Ok(1)
    } else if minus < FRIED_ANCHOR_TOL {
        Ok(-1)
    } else {
        Err(ZetaError::CalibrationFailed { plus, minus })
    }
}

pub fn fried_report(a: [[i64; 2]; 2], theta: f64, convention: TorsionConvention) -> Result<FriedReport, ZetaError> {
    let exponent = calibrate_fried_exponent(convention)?;
    let (zeta_side, torsion) = sides(a, theta, convention)?;
    let residual = (zeta_side * torsion.powi(exponent) - 1.0).abs();
    Ok(FriedReport { zeta_side, torsion, exponent, residual })
}

/// `| |ζ(0)|^{(−1)^n} τ^{σ_F} − 1 |` with `σ_F` frozen by the anchor.
pub fn fried_residual(a: [[i64; 2]; 2], theta: f64, convention: TorsionConvention) -> Result<f64, ZetaError> {
    Ok(fried_report(a, theta, convention)?.residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted_complex::ComplexError;
    use std::f64::consts::PI;

    #[test]
    fn anchor_values() {
        let r = fried_report(ANCHOR, PI, TorsionConvention::RaySinger).unwrap();
        assert!((r.zeta_side - 0.8).abs() < 1e-14);
        assert!((r.torsion - 0.8).abs() < 1e-12);
        assert_eq!(r.exponent, -1);
        let r = fried_report(ANCHOR, PI, TorsionConvention::Reciprocal).unwrap();
        assert!((r.torsion - 1.25).abs() < 1e-12);
        assert_eq!(r.exponent, 1);
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn other_characters_and_monodromies() {
        let maps = [[[2, 1], [1, 1]], [[3, 1], [1, 0]], [[3, 1], [2, 1]], [[4, 1], [1, 0]], [[5, 2], [2, 1]], [[4, 1], [3, 1]]];
        for a in maps {
            for theta in [PI / 2.0, 2.0 * PI / 3.0, PI] {
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                if det == -1 && theta == PI {
                    // z det A = 1: the top fibre class survives
                    assert!(fried_residual(a, theta, TorsionConvention::RaySinger).is_err());
                    continue;
                }
                for conv in [TorsionConvention::RaySinger, TorsionConvention::Reciprocal] {
                    let r = fried_residual(a, theta, conv).unwrap();
                    assert!(r < 1e-10, "{a:?} θ = {theta}: {r:e}");
                }
            }
        }
    }

    #[test]
    fn refusals() {
        assert_eq!(
            fried_residual([[-2, -1], [-1, -1]], PI, TorsionConvention::RaySinger).unwrap_err(),
            ZetaError::NonOrientable { trace: -3 }
        );
        assert!(matches!(
            fried_residual(ANCHOR, 0.0, TorsionConvention::RaySinger),
            Err(ZetaError::Complex(ComplexError::NotAcyclic { .. }))
        ));
    }
}

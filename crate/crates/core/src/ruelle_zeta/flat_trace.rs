use num_complex::Complex64;

use super::euler::weight;
use super::{Degree, Orbits, ZetaError};
use crate::graded_linalg::quadrature::{derivative_at_zero, rgamma, DERIVATIVE_STEP};

/// Smooth bump `φ(t) = exp(1 − 1/(1 − u²))`, `u = (t − center)/width`, with `φ(center) = 1`
/// and support `(center − width, center + width)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
}

impl Bump {
    pub fn value(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.width;
        if u.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - u * u)).exp()
        }
    }
}

/// `⟨tr^♭ e^{−t L_k}, φ⟩ = Σ_γ Σ_j ℓ φ(j ℓ) ρ^j tr ∧^k P^j / |det(I − P^j)|`.
pub fn flat_trace_pairing(orbits: &Orbits, theta: f64, k: usize, bump: Bump) -> Result<Complex64, ZetaError> {
    if k > 2 {
        return Err(ZetaError::InvalidDegree(k));
    }
    let lower = bump.center - bump.width;
    if lower <= 0.0 {
        return Err(ZetaError::SupportTooWide { lower });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for it in orbits.iterates_below(theta, bump.center + bump.width)? {
        let phi = bump.value(f64::from(it.j) * it.length);
        if phi != 0.0 {
            acc += it.rho * (it.count * it.length * phi * weight(&it, Degree::Form(k)));
        }
    }
    Ok(acc)
}

/// `F(λ, s) = Γ(s)^{-1} ∫_0^∞ t^{s−1} e^{−tλ} tr^♭ e^{−t L_k} dt`. The flat trace is a sum
/// of point masses, so the integral collapses to `Σ ℓ (jℓ)^{s−1} e^{−λ j ℓ} ρ^j w_k`.
pub fn mellin_f(orbits: &Orbits, theta: f64, lambda: Complex64, k: usize, truncation: u32, s: f64) -> Result<Complex64, ZetaError> {
    // convergence is governed by the same half-plane as the Euler product
    super::log_zeta(orbits, theta, lambda, Degree::Form(k), truncation)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for it in orbits.iterates(theta, truncation)? {
        let t = f64::from(it.j) * it.length;
        acc += (-lambda * t).exp() * it.rho * (it.count * it.length * t.powf(s - 1.0) * weight(&it, Degree::Form(k)));
    }
    Ok(acc * rgamma(s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinEvaluation {
    /// `−∂_s F(λ, s)` at `s = 0`.
    pub value: Complex64,
    pub richardson_correction: f64,
}

/// `log ζ_k(λ)` through the regularized determinant: `−∂_s|_{s=0} F(λ, s)`.
pub fn mellin_log_zeta(orbits: &Orbits, theta: f64, lambda: Complex64, k: usize, truncation: u32) -> Result<MellinEvaluation, ZetaError> {
    let mut err = None;
    let (d, corr) = derivative_at_zero(
        |s| match mellin_f(orbits, theta, lambda, k, truncation, s) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        },
        DERIVATIVE_STEP,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(MellinEvaluation { value: -d, richardson_correction: corr })
}

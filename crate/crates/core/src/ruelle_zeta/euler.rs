use num_complex::Complex64;

use super::orbits::Iterate;
use super::{Orbits, ZetaError};
use crate::anosov_orbits::N_TRANSVERSE;

/// Which zeta function: the k-form factor or the full product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Form(usize),
    Full,
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degree::Form(k) => write!(f, "{k}"),
            Degree::Full => write!(f, "full"),
        }
    }
}

/// Truncated `log ζ` with a certificate: `|log ζ − value| ≤ truncation_error_bound`,
/// the sum of the analytic tail bound and a bound on floating-point rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaEvaluation {
    pub lambda: (f64, f64),
    pub degree: Degree,
    pub value: Complex64,
    pub truncation: u32,
    pub tail_bound: f64,
    pub rounding_bound: f64,
    pub truncation_error_bound: f64,
    pub bound_formula: &'static str,
}

const SUSPENSION_FORMULA: &str = "r = exp(-Re(lambda) roof), g = |mu|; k = 0, 2: r^(J+1) / ((J+1)(1-r)); \
    k = 1: ((rg)^(J+1)/(1-rg) + r^(J+1)/(1-r)) / (J+1); full: ((rg)^(J+1)/(1-rg) + 2 r^(J+1)/(1-r)) / (J+1)";
const SPECTRUM_FORMULA: &str = "sum over primitive orbits of count C_k r^(J+1) / ((J+1)(1-r)), r = exp(-Re(lambda) length), \
    C_0 = 1/((|a|-1)(1-|b|)), C_1 = (|a|+1) C_0, C_2 = |a| C_0, C_full = 1";

fn geometric_tail(r: f64, truncation: u32) -> f64 {
    let n = f64::from(truncation) + 1.0;
    r.powf(n) / (n * (1.0 - r))
}

fn divergent(lambda: Complex64, threshold: f64) -> ZetaError {
    ZetaError::DivergentRegion { re_lambda: lambda.re, threshold }
}

fn tail_bound(orbits: &Orbits, lambda: Complex64, degree: Degree, truncation: u32) -> Result<f64, ZetaError> {
    match orbits {
        Orbits::Suspension { map, .. } => {
            let r = (-lambda.re * map.roof).exp();
            let g = map.mu.abs();
            let needs_growth = matches!(degree, Degree::Form(1) | Degree::Full);
            let threshold = if needs_growth { g.ln() / map.roof } else { 0.0 };
            if lambda.re <= threshold {
                return Err(divergent(lambda, threshold));
            }
            Ok(match degree {
                Degree::Form(1) => geometric_tail(r * g, truncation) + geometric_tail(r, truncation),
                Degree::Full => geometric_tail(r * g, truncation) + 2.0 * geometric_tail(r, truncation),
                _ => geometric_tail(r, truncation),
            })
        }
        Orbits::Spectrum(records) => {
            if lambda.re <= 0.0 {
                return Err(divergent(lambda, 0.0));
            }
            let mut total = 0.0;
            for rec in records.iter().filter(|r| r.primitive) {
                let (e0, e1) = rec.poincare_eigs;
                let (a, b) = if e0.abs() >= e1.abs() { (e0.abs(), e1.abs()) } else { (e1.abs(), e0.abs()) };
                let c0 = 1.0 / ((a - 1.0) * (1.0 - b));
                let c = match degree {
                    Degree::Form(0) => c0,
                    Degree::Form(1) => (a + 1.0) * c0,
                    Degree::Form(_) => a * c0,
                    Degree::Full => 1.0,
                };
                total += rec.count as f64 * c * geometric_tail((-lambda.re * rec.length).exp(), truncation);
            }
            Ok(total)
        }
    }
}

/// `log ζ_k` or `log ζ`, summed over the iterates in order, with the rounding certificate
/// `2 ε Σ_i |t_i| (n + 8 + 2 j_i + |λ| j_i ℓ_i)`.
pub fn log_zeta(orbits: &Orbits, theta: f64, lambda: Complex64, degree: Degree, truncation: u32) -> Result<ZetaEvaluation, ZetaError> {
    if let Degree::Form(k) = degree {
        if k > 2 * N_TRANSVERSE as usize {
            return Err(ZetaError::InvalidDegree(k));
        }
    }
    let tail = tail_bound(orbits, lambda, degree, truncation)?;
    let iterates = orbits.iterates(theta, truncation)?;
    let n = iterates.len() as f64;
    let mut value = Complex64::new(0.0, 0.0);
    let mut rounding = 0.0;
    for it in &iterates {
        let t = term(it, lambda, degree);
        value += t;
        let j = f64::from(it.j);
        rounding += t.norm() * (n + 8.0 + 2.0 * j + lambda.norm() * j * it.length);
    }
    let rounding = 2.0 * f64::EPSILON * rounding;
    Ok(ZetaEvaluation {
        lambda: (lambda.re, lambda.im),
        degree,
        value,
        truncation,
        tail_bound: tail,
        rounding_bound: rounding,
        truncation_error_bound: tail + rounding,
        bound_formula: match orbits {
            Orbits::Suspension { .. } => SUSPENSION_FORMULA,
            Orbits::Spectrum(_) => SPECTRUM_FORMULA,
        },
    })
}

/// `−(count/j) ρ^j e^{−λ j ℓ} w` with `w = tr ∧^k P^j / |det(I − P^j)|`, or `w = 1` for the full product.
pub(crate) fn term(it: &Iterate, lambda: Complex64, degree: Degree) -> Complex64 {
    let j = f64::from(it.j);
    (-lambda * j * it.length).exp() * it.rho * (-it.count * weight(it, degree) / j)
}

pub(crate) fn weight(it: &Iterate, degree: Degree) -> f64 {
    match degree {
        Degree::Form(k) => it.poincare.traces[k] / it.poincare.det_i_minus_p.abs(),
        Degree::Full => 1.0,
    }
}

/// `log ζ_k(λ) = −Σ_γ Σ_j (1/j) e^{−λ j ℓ} ρ^j tr ∧^k P^j / |det(I − P^j)|`.
pub fn log_zeta_k(orbits: &Orbits, theta: f64, lambda: Complex64, k: usize, truncation: u32) -> Result<ZetaEvaluation, ZetaError> {
    log_zeta(orbits, theta, lambda, Degree::Form(k), truncation)
}

/// `log ζ(λ) = Σ_γ log(1 − ρ([γ]) e^{−λ ℓ})`, expanded in iterates.
pub fn log_zeta_full(orbits: &Orbits, theta: f64, lambda: Complex64, truncation: u32) -> Result<ZetaEvaluation, ZetaError> {
    log_zeta(orbits, theta, lambda, Degree::Full, truncation)
}

/// `|(−1)^n log ζ − Σ_k (−1)^k log ζ_k|` with identical truncations.
pub fn decomposition_residual(orbits: &Orbits, theta: f64, lambda: Complex64, truncation: u32) -> Result<f64, ZetaError> {
    let sign = |p: u32| if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    let full = log_zeta_full(orbits, theta, lambda, truncation)?.value * sign(N_TRANSVERSE);
    let mut forms = Complex64::new(0.0, 0.0);
    for k in 0..=2 * N_TRANSVERSE as usize {
        forms += log_zeta_k(orbits, theta, lambda, k, truncation)?.value * sign(k as u32);
    }
    Ok((full - forms).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anosov_orbits::{read_orbit_spectrum, ToralAutomorphism};
    use std::f64::consts::PI;

    fn cat(j: u32) -> Orbits {
        Orbits::suspension(ToralAutomorphism::cat_map(), j).unwrap()
    }

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn zero_forms_at_lambda_one() {
        let e = log_zeta_k(&cat(40), 0.0, real(1.0), 0, 40).unwrap();
        let exact = (1.0 - (-1f64).exp()).ln();
        assert!((exact + 0.45868).abs() < 1e-5);
        assert!((e.value - exact).norm() <= e.truncation_error_bound);
        let e2 = log_zeta_k(&cat(40), 0.0, real(1.0), 2, 40).unwrap();
        assert!((e.value - e2.value).norm() < 1e-15);
    }

    #[test]
    fn one_forms_at_pi() {
        // oracle: log((1 − zμ)(1 − z/μ)) with z = −e^{−3}
        let mu = ToralAutomorphism::cat_map().mu;
        let z = -(-3f64).exp();
        let exact = (1.0 - z * mu).ln() + (1.0 - z / mu).ln();
        let e = log_zeta_k(&cat(40), PI, real(3.0), 1, 40).unwrap();
        assert!((e.value - exact).norm() <= e.truncation_error_bound);
        assert!((e.value - exact).norm() < 1e-12);
    }

    #[test]
    fn divergence_is_reported() {
        let ln_mu = ToralAutomorphism::cat_map().mu.ln();
        assert!(matches!(
            log_zeta_k(&cat(10), 0.0, real(0.9), 1, 10),
            Err(ZetaError::DivergentRegion { threshold, .. }) if (threshold - ln_mu).abs() < 1e-15
        ));
        assert!(log_zeta_full(&cat(10), 0.0, real(0.9), 10).is_err());
        assert!(log_zeta_k(&cat(10), 0.0, real(0.9), 0, 10).is_ok());
        assert!(matches!(log_zeta_k(&cat(10), 0.0, real(-0.1), 0, 10), Err(ZetaError::DivergentRegion { .. })));
        assert_eq!(log_zeta_k(&cat(10), 0.0, real(3.0), 3, 10).unwrap_err(), ZetaError::InvalidDegree(3));
    }

    #[test]
    fn decomposition_identity() {
        for lambda in [real(2.0), real(3.0), Complex64::new(3.0, 2.0)] {
            for theta in [0.0, 1.0, PI] {
                assert!(decomposition_residual(&cat(30), theta, lambda, 30).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn single_orbit_spectrum() {
        let orbits = Orbits::spectrum(read_orbit_spectrum("0.7 1 1 0 3 0.3333333333333333 1").unwrap());
        let lambda = real(2.0);
        let e = log_zeta_full(&orbits, 0.0, lambda, 60).unwrap();
        let exact = (1.0 - (-2.0 * 0.7f64).exp()).ln();
        assert!((e.value - exact).norm() < 1e-15);
        assert!(e.tail_bound < 1e-30);
    }

    #[test]
    fn two_orbit_spectrum_and_its_decomposition() {
        let text = "1.1 1 0 1 2.5 0.4 1\n1.9 1 -1 0 -4 -0.25 2\n";
        let orbits = Orbits::spectrum(read_orbit_spectrum(text).unwrap());
        let lambda = Complex64::new(1.5, 0.5);
        let e = log_zeta_full(&orbits, 0.0, lambda, 80).unwrap();
        let f1 = 1.0 - Complex64::i() * (-lambda * 1.1).exp();
        let f2 = 1.0 + (-lambda * 1.9).exp();
        let exact = f1.ln() + 2.0 * f2.ln();
        assert!((e.value - exact).norm() <= e.truncation_error_bound);
        assert!((e.value - exact).norm() < 1e-13);
        // eigenvalue pairs with positive expanding eigenvalue satisfy the per-orbit identity
        let pos = Orbits::spectrum(read_orbit_spectrum("1.1 1 0 1 2.5 0.4 1\n1.9 1 1 0 4 -0.25 2").unwrap());
        assert!(decomposition_residual(&pos, 0.0, lambda, 40).unwrap() < 1e-10);
    }

    #[test]
    fn nonprimitive_records_are_ignored() {
        let with = Orbits::spectrum(read_orbit_spectrum("1 1 1 0 3 0.3333333333333333 1\n2 0 1 0 9 0.1111111111111111 1").unwrap());
        let without = Orbits::spectrum(read_orbit_spectrum("1 1 1 0 3 0.3333333333333333 1").unwrap());
        let a = log_zeta_k(&with, 0.0, real(2.0), 1, 20).unwrap();
        let b = log_zeta_k(&without, 0.0, real(2.0), 1, 20).unwrap();
        assert_eq!(a.value, b.value);
    }
}

//! Gauss–Legendre rules, the reciprocal gamma function near zero, and the
//! finite-difference recipe for `-d/ds|_{s=0}`.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` over `[a, b]` with a fixed Gauss–Legendre rule.
pub fn integrate<F>(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64, mut f: F) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.0.iter().zip(rule.1.iter()) {
        acc += f(mid + half * x) * *w;
    }
    acc * half
}

/// `1/Γ(s)`, written as `s/Γ(1+s)` so it stays regular through `s = 0`.
pub fn rgamma(s: f64) -> f64 {
    s / gamma(1.0 + s)
}

/// Step of the central difference used for derivatives in `s`.
pub const DERIVATIVE_STEP: f64 = 1e-4;

/// Central difference at `s = 0` with step `h` and one Richardson step (`h`, `h/2`).
/// Returns the derivative and the size of the Richardson correction.
pub fn derivative_at_zero<F>(mut f: F, h: f64) -> (Complex64, f64)
where
    F: FnMut(f64) -> Complex64,
{
    let coarse = (f(h) - f(-h)) / (2.0 * h);
    let fine = (f(0.5 * h) - f(-0.5 * h)) / h;
    let extrapolated = (fine * 4.0 - coarse) / 3.0;
    (extrapolated, (extrapolated - fine).norm())
}

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-5 {
        z + z * z / 2.0 + z * z * z / 6.0
    } else {
        z.exp() - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let rule = gauss_legendre(10);
        // degree 19 is the highest exact degree for 10 points
        let val = integrate(&rule, 0.0, 2.0, |x| Complex64::new(x.powi(19), 0.0));
        let exact = 2f64.powi(20) / 20.0;
        assert!((val.re - exact).abs() / exact < 1e-13);
        let w: f64 = rule.1.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rgamma_matches_known_values() {
        assert!((rgamma(1.0) - 1.0).abs() < 1e-14);
        assert!((rgamma(0.5) - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert_eq!(rgamma(0.0), 0.0);
        // d/ds (1/Γ(s)) at 0 equals 1
        let (d, _) = derivative_at_zero(|s| Complex64::new(rgamma(s), 0.0), DERIVATIVE_STEP);
        assert!((d.re - 1.0).abs() < 1e-10);
    }
}

use num_complex::Complex64;

use crate::anosov_orbits::ToralAutomorphism;

/// Exact resummation of the suspension zeta functions at `z = e^{iθ − λ·roof}`.
///
/// `zeta[k] = det(I − z ∧^k A)`; `full_power = ζ^{(−1)^n}`. The logarithms are sums of
/// principal logarithms of the linear factors, which is the branch of the Euler
/// product wherever it converges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub z: Complex64,
    pub zeta: [Complex64; 3],
    pub full_power: Complex64,
    pub log_zeta: [Complex64; 3],
    pub log_full: Complex64,
}

struct Factors {
    zeta: [Complex64; 3],
    log: [Complex64; 3],
}

fn factors(map: &ToralAutomorphism, z: Complex64) -> Factors {
    let (mu, nu) = map.eigenvalues();
    let det = map.det() as f64;
    let one = Complex64::new(1.0, 0.0);
    let (f_mu, f_nu) = (one - z * mu, one - z * nu);
    Factors {
        zeta: [one - z, one - z * map.trace() as f64 + z * z * det, one - z * det],
        log: [(one - z).ln(), f_mu.ln() + f_nu.ln(), (one - z * det).ln()],
    }
}

/// `ζ_0 = 1 − z`, `ζ_1 = det(I − zA)`, `ζ_2 = 1 − z det A`. For a positive expanding
/// eigenvalue `ζ^{−1} = ζ_0 ζ_2 / ζ_1`. For a negative one, `|det(I − A^j)|` alternates
/// sign against `det(I − A^j)` and the full product is the same expression at `−z`.
pub fn closed_form_suspension(map: &ToralAutomorphism, theta: f64, lambda: Complex64) -> ClosedForm {
    let z = Complex64::from_polar(1.0, theta) * (-lambda * map.roof).exp();
    let at_z = factors(map, z);
    let full = if map.unstable_orientable() { factors(map, z) } else { factors(map, -z) };
    ClosedForm {
        z,
        zeta: at_z.zeta,
        full_power: full.zeta[0] * full.zeta[2] / full.zeta[1],
        log_zeta: at_z.log,
        log_full: full.log[1] - full.log[0] - full.log[2],
    }
}

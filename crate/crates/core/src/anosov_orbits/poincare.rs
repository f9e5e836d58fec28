/// Half the transverse dimension: the Poincaré maps act on a plane.
pub const N_TRANSVERSE: u32 = 1;

/// `tr ∧^k P^j` for `k = 0, 1, 2` and the signed `det(I − P^j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareData {
    pub traces: [f64; 3],
    pub det_i_minus_p: f64,
}

impl PoincareData {
    pub fn alternating_trace(&self) -> f64 {
        self.traces[0] - self.traces[1] + self.traces[2]
    }
}

/// Exterior-power traces of the `j`-th iterate of a Poincaré map with eigenvalues `eigs`.
pub fn poincare_data(eigs: (f64, f64), j: u32) -> PoincareData {
    let (a, b) = (eigs.0.powi(j as i32), eigs.1.powi(j as i32));
    PoincareData { traces: [1.0, a + b, a * b], det_i_minus_p: (1.0 - a) * (1.0 - b) }
}

/// `|Σ_k (−1)^k tr ∧^k P^j − (−1)^n |det(I − P^j)|| / |det(I − P^j)|`.
pub fn identity_residual(eigs: (f64, f64), j: u32) -> f64 {
    let p = poincare_data(eigs, j);
    let sign = if N_TRANSVERSE.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = sign * p.det_i_minus_p.abs();
    (p.alternating_trace() - rhs).abs() / p.det_i_minus_p.abs()
}

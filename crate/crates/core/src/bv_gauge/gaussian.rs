use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{BFFieldSpace, BvError, GaugeSubspace, PolyObservable};

/// Which member of each Darboux pair `(x_i, ξ_i)` a coordinate Lagrangian keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    X,
    Xi,
}

/// Coordinate Lagrangian in a Darboux chart: the other member of each pair is set to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DarbouxChart {
    pub keep: Vec<Keep>,
}

impl DarbouxChart {
    pub fn pairs(&self) -> usize {
        self.keep.len()
    }

    pub fn purely_even(pairs: usize) -> Self {
        DarbouxChart { keep: vec![Keep::X; pairs] }
    }
}

/// Darboux chart adapted to a split gauge. In degree `k` the pairs are `(A_k, B̂_k)` along
/// the bases `L_A^k` and its complement; the even member is `A_k` for odd `k` and `B̂_k`
/// for even `k`. The gauge keeps `A` along `L_A^k` and `B̂` along the complement.
pub fn chart_from_gauge(fs: &BFFieldSpace, gs: &GaugeSubspace) -> DarbouxChart {
    let mut keep = Vec::new();
    for k in 0..=fs.top_degree() {
        let a_even = fs.a_parity(k) == 0;
        let (keep_a, keep_b) = if a_even { (Keep::X, Keep::Xi) } else { (Keep::Xi, Keep::X) };
        keep.extend(std::iter::repeat_n(keep_a, gs.la[k].ncols()));
        keep.extend(std::iter::repeat_n(keep_b, gs.ca[k].ncols()));
    }
    DarbouxChart { keep }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub value: Complex64,
    /// `Σ |coefficient · moment|` over the contributing monomials.
    pub scale: f64,
}

struct Moments {
    cov: DMatrix<f64>,
    memo: HashMap<Vec<u8>, f64>,
}

impl Moments {
    /// `E[Π x_i^{α_i}]` by `E[x_i m] = Σ_j C_ij E[∂_j m]`.
    fn get(&mut self, alpha: &[u8]) -> f64 {
        if let Some(&v) = self.memo.get(alpha) {
            return v;
        }
        let value = match alpha.iter().position(|&a| a > 0) {
            None => 1.0,
            Some(i) => {
                let mut rest = alpha.to_vec();
                rest[i] -= 1;
                let mut acc = 0.0;
                for j in 0..rest.len() {
                    if rest[j] > 0 && self.cov[(i, j)] != 0.0 {
                        let mut r2 = rest.clone();
                        r2[j] -= 1;
                        acc += self.cov[(i, j)] * f64::from(rest[j]) * self.get(&r2);
                    }
                }
                acc
            }
        };
        self.memo.insert(alpha.to_vec(), value);
        value
    }
}

/// `∫_L p e^{−x^T W x / 2}`, normalized so that the even Gaussian has mass one.
/// Kept `x` are integrated against the Gaussian, kept `ξ` by Berezin integration
/// `∫ dξ_{j_m} ⋯ dξ_{j_1} ξ_{j_1} ⋯ ξ_{j_m} = 1` in increasing index order.
pub fn gaussian_expectation(p: &PolyObservable, chart: &DarbouxChart, weight: &DMatrix<f64>) -> Result<Expectation, BvError> {
    let n = chart.pairs();
    if p.pairs != n || weight.shape() != (n, n) {
        return Err(BvError::InvalidContraction("observable, chart and weight sizes differ".into()));
    }
    let xs: Vec<usize> = (0..n).filter(|&i| chart.keep[i] == Keep::X).collect();
    let odd_mask: u64 = (0..n).filter(|&i| chart.keep[i] == Keep::Xi).fold(0, |m, i| m | 1 << i);
    let w = DMatrix::from_fn(xs.len(), xs.len(), |a, b| 0.5 * (weight[(xs[a], xs[b])] + weight[(xs[b], xs[a])]));
    let chol = w.clone().cholesky().ok_or(BvError::IndefiniteWeight)?;
    let mut moments = Moments { cov: chol.inverse(), memo: HashMap::new() };
    let mut value = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (m, c) in &p.terms {
        if m.xi != odd_mask {
            continue;
        }
        if (0..n).any(|i| chart.keep[i] == Keep::Xi && m.x[i] > 0) {
            continue;
        }
        let alpha: Vec<u8> = xs.iter().map(|&i| m.x[i]).collect();
        let mom = moments.get(&alpha);
        value += c * mom;
        scale += (c * mom).norm();
    }
    Ok(Expectation { value, scale })
}

/// `Δ_W h = Δh − Σ_i (W x)_i ∂_{ξ_i} h`, the Laplacian of the measure `e^{−x^T W x/2} dx dξ`.
pub fn weighted_laplacian(h: &PolyObservable, weight: &DMatrix<f64>) -> Result<PolyObservable, BvError> {
    let n = h.pairs;
    let mut out = h.bv_laplacian()?;
    for i in 0..n {
        let mut wx = PolyObservable::zero(n, h.max_degree);
        for j in 0..n {
            if weight[(i, j)] != 0.0 {
                wx = wx.add(&PolyObservable::x(n, h.max_degree, j).scale(Complex64::new(weight[(i, j)], 0.0)));
            }
        }
        out = out.sub(&wx.mul(&h.d_xi(i))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bv_gauge::{build_bf_fields, metric_gauge, random_poly};
    use crate::twisted_complex::circle_complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_weight<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
        let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.5..0.5));
        &g * g.transpose() + DMatrix::identity(n, n)
    }

    #[test]
    fn normalization_and_second_moment() {
        let chart = DarbouxChart::purely_even(1);
        let w = DMatrix::from_element(1, 1, 1.0);
        let one = PolyObservable::constant(1, 4, Complex64::new(1.0, 0.0));
        assert_eq!(gaussian_expectation(&one, &chart, &w).unwrap().value, Complex64::new(1.0, 0.0));
        let x = PolyObservable::x(1, 4, 0);
        let x2 = x.mul(&x).unwrap();
        assert!((gaussian_expectation(&x2, &chart, &w).unwrap().value.re - 1.0).abs() < 1e-15);
        let x4 = x2.mul(&x2).unwrap();
        assert!((gaussian_expectation(&x4, &chart, &w).unwrap().value.re - 3.0).abs() < 1e-14);
    }

    #[test]
    fn indefinite_weight_is_rejected() {
        let chart = DarbouxChart::purely_even(2);
        let w = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let one = PolyObservable::constant(2, 4, Complex64::new(1.0, 0.0));
        assert_eq!(gaussian_expectation(&one, &chart, &w).unwrap_err(), BvError::IndefiniteWeight);
    }

    #[test]
    fn berezin_picks_the_ordered_top_coefficient() {
        let chart = DarbouxChart { keep: vec![Keep::Xi, Keep::Xi] };
        let w = DMatrix::identity(2, 2);
        let a = PolyObservable::xi(2, 4, 0);
        let b = PolyObservable::xi(2, 4, 1);
        let v = gaussian_expectation(&a.mul(&b).unwrap(), &chart, &w).unwrap().value;
        assert_eq!(v, Complex64::new(1.0, 0.0));
        let v = gaussian_expectation(&b.mul(&a).unwrap(), &chart, &w).unwrap().value;
        assert_eq!(v, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn exact_observables_integrate_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let fs = build_bf_fields(&circle_complex(2.0)).unwrap();
        let gauge_chart = chart_from_gauge(&fs, &metric_gauge(&fs).unwrap());
        assert_eq!(gauge_chart.pairs(), 2);
        for trial in 0..50 {
            let n = 3;
            let chart = if trial % 2 == 0 {
                DarbouxChart { keep: (0..n).map(|_| if rng.random_bool(0.5) { Keep::X } else { Keep::Xi }).collect() }
            } else {
                DarbouxChart::purely_even(n)
            };
            let w = random_weight(n, &mut rng);
            let h = random_poly(n, 4, 3, None, 6, &mut rng);
            let g = weighted_laplacian(&h, &w).unwrap();
            let e = gaussian_expectation(&g, &chart, &w).unwrap();
            assert!(e.value.norm() <= 1e-10 * e.scale.max(1.0), "{e:?}");
        }
    }
}

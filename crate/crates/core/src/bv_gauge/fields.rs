use std::collections::BTreeMap;

use num_complex::Complex64;

use super::BvError;
use crate::graded_linalg::GradedVectorSpace;
use crate::linalg::{max_abs, CMat};
use crate::twisted_complex::TwistedComplex;

pub type CVec = nalgebra::DVector<Complex64>;

/// BV fields of abelian BF theory on a finite complex, in the orthonormal frame of the base.
///
/// `A_k ∈ C^k` has degree `1 − k`; its partner `B̂_k ∈ (C^k)^*` has degree `k − 2`, so the
/// pairing `Ω(A, B̂) = Σ_k B̂_k^T A_k` has degree −1. The action is `S = Σ_k B̂_{k+1}^T d_k A_k`.
#[derive(Debug, Clone)]
pub struct BFFieldSpace {
    pub base: TwistedComplex,
    pub a_fields: GradedVectorSpace,
    pub b_fields: GradedVectorSpace,
}

pub fn build_bf_fields(tc: &TwistedComplex) -> Result<BFFieldSpace, BvError> {
    tc.require_acyclic()?;
    let dims = tc.dims();
    let a: BTreeMap<i32, usize> = dims.iter().enumerate().map(|(k, &n)| (1 - k as i32, n)).collect();
    let b: BTreeMap<i32, usize> = dims.iter().enumerate().map(|(k, &n)| (k as i32 - 2, n)).collect();
    let fs = BFFieldSpace {
        base: tc.clone(),
        a_fields: GradedVectorSpace::new(a, 0),
        b_fields: GradedVectorSpace::new(b, 0),
    };
    let residual = fs.pairing_perfection_residual();
    if residual > 1e-12 {
        return Err(BvError::ImperfectPairing { residual });
    }
    Ok(fs)
}

impl BFFieldSpace {
    pub fn top_degree(&self) -> usize {
        self.base.top_degree()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.base.dims()
    }

    pub fn d(&self, k: usize) -> &CMat {
        self.base.orthonormal_differential(k)
    }

    /// Parity of `A_k`, which is also the parity of `B̂_{k+1}`.
    pub fn a_parity(&self, k: usize) -> u8 {
        self.a_fields.parity(1 - k as i32)
    }

    pub fn b_parity(&self, k: usize) -> u8 {
        self.b_fields.parity(k as i32 - 2)
    }

    /// Matrix of `Ω` between `A_k` and `B̂_k` in the standard bases.
    pub fn pairing_matrix(&self, k: usize) -> CMat {
        let n = self.dims()[k];
        CMat::identity(n, n)
    }

    /// Distance of every componentwise pairing matrix from an invertible one:
    /// `max_k |1 − σ_min|` over the unit-normalized blocks.
    pub fn pairing_perfection_residual(&self) -> f64 {
        (0..=self.top_degree())
            .map(|k| {
                let sv = crate::linalg::singular_values(&self.pairing_matrix(k));
                sv.iter().map(|s| (1.0 - s).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn pairing(&self, a: &[CVec], b: &[CVec]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| (y.transpose() * x)[(0, 0)]).sum()
    }

    pub fn action(&self, a: &[CVec], b: &[CVec]) -> Complex64 {
        (0..self.top_degree()).map(|k| (b[k + 1].transpose() * (self.d(k) * &a[k]))[(0, 0)]).sum()
    }

    /// Degree of `Ω`: the sum of the degrees of `A_k` and `B̂_k`, the same for every `k`.
    pub fn pairing_degree(&self) -> Option<i32> {
        let mut degrees = (0..=self.top_degree() as i32).map(|k| (1 - k) + (k - 2));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn max_abs_d(&self) -> f64 {
        (0..self.top_degree()).map(|k| max_abs(self.d(k))).fold(0.0, f64::max)
    }
}

use rand::Rng;

use super::{BFFieldSpace, BvError};
use crate::linalg::{
    complement_basis, hermitian_inv_sqrt, identity, max_abs, null_space, random_gaussian, random_hermitian, random_unitary, range_basis,
    singular_values, unitary_exp, CMat,
};

pub const CONTRACTION_TOL: f64 = 1e-12;

/// Degree −1 map `ι_k : C^k → C^{k−1}` with `ι² = 0`, together with a degree +1
/// injection `a_k : C^{k−1} → C^k` such that `ι a = id` on `ker ι`.
/// `iota[0]` and `a[0]` are the empty maps to and from `C^{−1} = 0`.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub iota: Vec<CMat>,
    pub a: Vec<CMat>,
}

impl Contraction {
    pub fn new(iota: Vec<CMat>, a: Vec<CMat>, dims: &[usize]) -> Result<Self, BvError> {
        if iota.len() != dims.len() || a.len() != dims.len() {
            return Err(BvError::InvalidContraction(format!("need {} maps in each direction", dims.len())));
        }
        for k in 0..dims.len() {
            let prev = if k == 0 { 0 } else { dims[k - 1] };
            if iota[k].shape() != (prev, dims[k]) || a[k].shape() != (dims[k], prev) {
                return Err(BvError::InvalidContraction(format!("maps in degree {k} have the wrong shape")));
            }
        }
        let c = Contraction { iota, a };
        let (square, normalization) = c.residuals();
        if square > CONTRACTION_TOL {
            return Err(BvError::InvalidContraction(format!("iota^2 = {square:e}")));
        }
        if normalization > CONTRACTION_TOL {
            return Err(BvError::InvalidContraction(format!("iota a - 1 on ker iota = {normalization:e}")));
        }
        Ok(c)
    }

    /// Partial-isometry contraction with `a = ι^*`.
    pub fn normalized(iota: Vec<CMat>, dims: &[usize]) -> Result<Self, BvError> {
        let a = iota.iter().map(|m| m.adjoint()).collect();
        Contraction::new(iota, a, dims)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.iota.iter().map(|m| m.ncols()).collect()
    }

    /// `max_k |ι_{k−1} ι_k|` and `max_k |(ι_k a_k − 1)|_{ker ι_{k−1}}|`.
    pub fn residuals(&self) -> (f64, f64) {
        let mut square: f64 = 0.0;
        let mut norm: f64 = 0.0;
        for k in 1..self.iota.len() {
            square = square.max(max_abs(&(&self.iota[k - 1] * &self.iota[k])));
            let ker = self.kernel(k - 1);
            let n = self.iota[k].nrows();
            norm = norm.max(max_abs(&((&self.iota[k] * &self.a[k] - identity(n)) * ker)));
        }
        (square, norm)
    }

    /// Orthonormal basis of `ker ι_k`.
    pub fn kernel(&self, k: usize) -> CMat {
        null_space(&self.iota[k])
    }

    /// `L_k = ι_{k+1} d_k + d_{k−1} ι_k` restricted to `ker ι_k`, which reduces to `ι_{k+1} d_k`,
    /// written in an orthonormal basis of `ker ι_k`.
    pub fn lie_derivative_blocks(&self, fs: &BFFieldSpace) -> Vec<CMat> {
        let n = fs.top_degree();
        (0..=n)
            .map(|k| {
                let ker = self.kernel(k);
                if k == n {
                    return CMat::zeros(ker.ncols(), ker.ncols());
                }
                ker.adjoint() * &self.iota[k + 1] * fs.d(k) * &ker
            })
            .collect()
    }

    /// Conjugation by unitaries `W_k`: `ι_k ↦ W_{k−1} ι_k W_k^*`, `a_k ↦ W_k a_k W_{k−1}^*`.
    pub fn conjugated(&self, w: &[CMat]) -> Contraction {
        let k_max = self.iota.len();
        let iota = (0..k_max)
            .map(|k| if k == 0 { self.iota[0].clone() } else { &w[k - 1] * &self.iota[k] * w[k].adjoint() })
            .collect();
        let a = (0..k_max)
            .map(|k| if k == 0 { self.a[0].clone() } else { &w[k] * &self.a[k] * w[k - 1].adjoint() })
            .collect();
        Contraction { iota, a }
    }
}

fn empty_maps(dims: &[usize]) -> (CMat, CMat) {
    (CMat::zeros(0, dims[0]), CMat::zeros(dims[0], 0))
}

/// Hodge contraction: the partial isometry of the polar decomposition of each `d_k`,
/// `ι_{k+1} = d_k^* (d_k d_k^*)^{-1/2}` on `im d_k` and zero on its complement.
pub fn hodge_contraction(fs: &BFFieldSpace) -> Result<Contraction, BvError> {
    let dims = fs.dims();
    let mut iota = vec![empty_maps(&dims).0];
    for k in 0..fs.top_degree() {
        let d = fs.d(k);
        // d = Q B P^H with B invertible; the polar factor of d is Q W P^H with W = B (B^H B)^{-1/2}
        let q = range_basis(d);
        let p = range_basis(&d.adjoint());
        let b = q.adjoint() * d * &p;
        let w = &b * hermitian_inv_sqrt(&(b.adjoint() * &b));
        iota.push(p * w.adjoint() * q.adjoint());
    }
    Contraction::normalized(iota, &dims)
}

/// Splits each `C^k` as `K_k ⊕ E_k` with `dim K_k = dim C^k − dim K_{k−1}` and
/// `ι_k = K_{k−1} V_k E_k^H`. Bases come from the columns of the unitaries `w`.
fn contraction_from_frames(dims: &[usize], w: &[CMat], v: &[CMat]) -> Result<Contraction, BvError> {
    let mut z_prev = 0usize;
    let mut kernels: Vec<CMat> = Vec::new();
    let mut iota = vec![empty_maps(dims).0];
    for (k, &n) in dims.iter().enumerate() {
        if z_prev > n {
            return Err(BvError::InvalidContraction(format!("degree {k} is too small for a contraction")));
        }
        let z = n - z_prev;
        let kernel = w[k].columns(0, z).into_owned();
        let e = w[k].columns(z, z_prev).into_owned();
        if k > 0 {
            iota.push(&kernels[k - 1] * &v[k] * e.adjoint());
        }
        kernels.push(kernel);
        z_prev = z;
    }
    Contraction::normalized(iota, dims)
}

fn split_sizes(dims: &[usize]) -> Vec<usize> {
    let mut z_prev = 0usize;
    dims.iter()
        .map(|&n| {
            let e = z_prev;
            z_prev = n.saturating_sub(z_prev);
            e
        })
        .collect()
}

/// Random normalized contraction with Haar-random frames.
pub fn random_contraction<R: Rng + ?Sized>(fs: &BFFieldSpace, rng: &mut R) -> Result<Contraction, BvError> {
    let dims = fs.dims();
    let e_sizes = split_sizes(&dims);
    let w: Vec<CMat> = dims.iter().map(|&n| random_unitary(n, rng)).collect();
    let v: Vec<CMat> = e_sizes.iter().map(|&e| random_unitary(e, rng)).collect();
    contraction_from_frames(&dims, &w, &v)
}

/// Normalized contraction whose `ker ι_1` contains a vector of `im d_0`, so `L_0` is singular.
pub fn degenerate_contraction<R: Rng + ?Sized>(fs: &BFFieldSpace, rng: &mut R) -> Result<Contraction, BvError> {
    let dims = fs.dims();
    if fs.top_degree() < 1 || dims[1] <= dims[0] {
        return Err(BvError::InvalidContraction("no room to make L_0 singular".into()));
    }
    let e_sizes = split_sizes(&dims);
    let mut w: Vec<CMat> = dims.iter().map(|&n| random_unitary(n, rng)).collect();
    let x = random_gaussian(dims[0], 1, rng);
    let dx = fs.d(0) * x;
    let first = range_basis(&dx);
    let rest = complement_basis(&first);
    let mut w1 = CMat::zeros(dims[1], dims[1]);
    w1.set_column(0, &first.column(0));
    for j in 0..rest.ncols() {
        w1.set_column(j + 1, &rest.column(j));
    }
    w[1] = w1;
    let v: Vec<CMat> = e_sizes.iter().map(|&e| random_unitary(e, rng)).collect();
    contraction_from_frames(&dims, &w, &v)
}

/// `ι(t) = W(t) ι_0 W(t)^*` with `W_k(t) = exp(i (t − t_0) H_k)`.
#[derive(Debug, Clone)]
pub struct ContractionFamily {
    pub start: Contraction,
    pub hamiltonians: Vec<CMat>,
    pub t0: f64,
}

impl ContractionFamily {
    pub fn constant(start: Contraction) -> Self {
        let hamiltonians = start.dims().iter().map(|&n| CMat::zeros(n, n)).collect();
        ContractionFamily { start, hamiltonians, t0: 0.0 }
    }

    pub fn random_rotation<R: Rng + ?Sized>(start: Contraction, t0: f64, rng: &mut R) -> Self {
        let hamiltonians = start.dims().iter().map(|&n| random_hermitian(n, rng)).collect();
        ContractionFamily { start, hamiltonians, t0 }
    }

    pub fn at(&self, t: f64) -> Contraction {
        let w: Vec<CMat> = self.hamiltonians.iter().map(|h| unitary_exp(h, t - self.t0)).collect();
        self.start.conjugated(&w)
    }
}

/// Smallest singular value of each `L_k`; `None` entries are empty blocks.
pub fn lie_derivative_conditioning(c: &Contraction, fs: &BFFieldSpace) -> Vec<Option<f64>> {
    c.lie_derivative_blocks(fs)
        .iter()
        .map(|l| singular_values(l).last().copied())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bv_gauge::build_bf_fields;
    use crate::linalg::from_real;
    use crate::twisted_complex::{circle_complex, random_acyclic_complex, RandomComplexConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn circle_unit_contraction() {
        let fs = build_bf_fields(&circle_complex(PI)).unwrap();
        let iota = vec![CMat::zeros(0, 1), from_real(1, 1, &[1.0])];
        let c = Contraction::normalized(iota, &fs.dims()).unwrap();
        let l = c.lie_derivative_blocks(&fs);
        assert!((l[0][(0, 0)].norm() - 2.0).abs() < 1e-15);
        assert_eq!(l[1].shape(), (0, 0));
    }

    #[test]
    fn hodge_contraction_gives_modulus_of_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tc = random_acyclic_complex(&RandomComplexConfig::default(), &mut rng);
        let fs = build_bf_fields(&tc).unwrap();
        let c = hodge_contraction(&fs).unwrap();
        let (sq, norm) = c.residuals();
        assert!(sq < 1e-12 && norm < 1e-12);
        for (k, l) in c.lie_derivative_blocks(&fs).iter().enumerate().take(fs.top_degree()) {
            // L_k is |d_k| on the coexact space, so its singular values are those of d_k
            let mut a = singular_values(l);
            let mut b: Vec<f64> = singular_values(fs.d(k)).into_iter().filter(|&s| s > 1e-10).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn random_contractions_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let tc = random_acyclic_complex(&RandomComplexConfig::default(), &mut rng);
            let fs = build_bf_fields(&tc).unwrap();
            let c = random_contraction(&fs, &mut rng).unwrap();
            let (sq, norm) = c.residuals();
            assert!(sq < 1e-12 && norm < 1e-12);
            let fam = ContractionFamily::random_rotation(c, 0.0, &mut rng);
            let (sq, norm) = fam.at(0.7).residuals();
            assert!(sq < 1e-12 && norm < 1e-12);
        }
    }

    #[test]
    fn degenerate_contraction_has_singular_l0() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let tc = random_acyclic_complex(&RandomComplexConfig::default(), &mut rng);
        let fs = build_bf_fields(&tc).unwrap();
        let c = degenerate_contraction(&fs, &mut rng).unwrap();
        let cond = lie_derivative_conditioning(&c, &fs);
        assert!(cond[0].unwrap() < 1e-10);
    }

    #[test]
    fn bad_contractions_are_rejected() {
        let dims = [1, 1];
        let iota = vec![CMat::zeros(0, 1), from_real(1, 1, &[2.0])];
        assert!(Contraction::normalized(iota, &dims).is_err());
    }
}

//! Small dense complex linear-algebra helpers shared by the other modules.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub type CMat = DMatrix<Complex64>;

/// Eigenvalues (and singular values) below this modulus count as kernel.
pub const KERNEL_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> CMat {
    CMat::from_row_slice(rows, cols, &data.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
}

pub fn conj_matrix(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

/// Largest entry modulus; 0 for empty matrices.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Numerical rank with a threshold relative to the largest singular value (floored at 1).
pub fn rank(m: &CMat) -> usize {
    let sv = singular_values(m);
    let scale = sv.iter().fold(1.0_f64, |a, &b| a.max(b));
    sv.iter().filter(|&&s| s > KERNEL_TOL * scale).count()
}

/// Orthonormal basis (as columns) of the column space: the leading columns of a
/// column-pivoted QR, as many as the numerical rank.
pub fn range_basis(m: &CMat) -> CMat {
    let n = m.nrows();
    if n == 0 || m.ncols() == 0 {
        return CMat::zeros(n, 0);
    }
    let r = rank(m);
    let q = m.clone().col_piv_qr().q();
    q.columns(0, r).into_owned()
}

/// Orthonormal basis of the orthogonal complement of the span of orthonormal columns `q`.
pub fn complement_basis(q: &CMat) -> CMat {
    let n = q.nrows();
    let proj = identity(n) - q * q.adjoint();
    let eig = proj.symmetric_eigen();
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    let mut out = CMat::zeros(n, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &eig.eigenvectors.column(i));
    }
    out
}

/// Orthonormal basis of the kernel.
pub fn null_space(m: &CMat) -> CMat {
    complement_basis(&range_basis(&m.adjoint()))
}

pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Log of the product of the eigenvalues above the kernel threshold, and the kernel dimension.
pub fn hermitian_log_det_nonzero(m: &CMat) -> (f64, usize) {
    let eigs = hermitian_eigenvalues(m);
    let mut log = 0.0;
    let mut kernel = 0;
    for e in eigs {
        if e.abs() <= KERNEL_TOL {
            kernel += 1;
        } else {
            log += e.ln();
        }
    }
    (log, kernel)
}

/// Square root of a Hermitian positive semi-definite matrix.
pub fn hermitian_sqrt(m: &CMat) -> CMat {
    let eig = m.clone().symmetric_eigen();
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|e| c(e.max(0.0).sqrt(), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Inverse square root of a Hermitian positive definite matrix.
pub fn hermitian_inv_sqrt(m: &CMat) -> CMat {
    let eig = m.clone().symmetric_eigen();
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|e| c(1.0 / e.sqrt(), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Eigenvalues of a general complex square matrix (complex Schur form).
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let (_, t) = m.clone().schur().unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let g = random_gaussian(n, n, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im) / std::f64::consts::SQRT_2
    })
}

/// Random Hermitian matrix with entries of unit scale.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = random_gaussian(n, n, rng);
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// Matrix exponential of i·H for Hermitian H, which is unitary.
pub fn unitary_exp(h: &CMat, t: f64) -> CMat {
    let eig = h.clone().symmetric_eigen();
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|e| cis(t * e)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Relative deviation |a/b - 1|, with the convention that two zeros agree.
pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

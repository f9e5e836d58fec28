use super::{ComplexError, TwistedComplex};
use crate::linalg::{conj_matrix, hermitian_eigenvalues, max_abs, rank, singular_values, CMat, KERNEL_TOL};

/// Agreement required between the Laplacian and coexact forms of the torsion.
pub const TORSION_AGREEMENT_TOL: f64 = 1e-10;

/// Exponent convention: `RaySinger` (σ = +1) is `Π det♭(Δ_k)^{(k/2)(-1)^{k+1}}`,
/// `Reciprocal` (σ = −1) is its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TorsionConvention {
    #[default]
    RaySinger,
    Reciprocal,
}

impl TorsionConvention {
    pub fn from_sigma(sigma: i32) -> Result<Self, ComplexError> {
        match sigma {
            1 => Ok(TorsionConvention::RaySinger),
            -1 => Ok(TorsionConvention::Reciprocal),
            s => Err(ComplexError::InvalidInput(format!("sigma must be +1 or -1, got {s}"))),
        }
    }

    pub fn sigma(self) -> i32 {
        match self {
            TorsionConvention::RaySinger => 1,
            TorsionConvention::Reciprocal => -1,
        }
    }

    pub fn apply(self, log_tau: f64) -> f64 {
        (self.sigma() as f64 * log_tau).exp()
    }
}

/// `log det♭` of a Hermitian positive semi-definite matrix whose kernel has
/// dimension `kernel`: the `kernel` smallest eigenvalues are dropped and the
/// rest must exceed the kernel threshold.
pub(crate) fn log_det_prime(m: &CMat, kernel: usize) -> Option<f64> {
    let eig = hermitian_eigenvalues(m);
    let scale = eig.last().copied().unwrap_or(0.0).max(1.0);
    let rest = &eig[kernel.min(eig.len())..];
    if rest.iter().any(|&e| e <= KERNEL_TOL * scale) {
        return None;
    }
    Some(rest.iter().map(|e| e.ln()).sum())
}

/// `log det♭(d^* d) = 2 Σ log σ_i` over the nonzero singular values.
fn log_det_prime_gram(d: &CMat) -> f64 {
    let sv = singular_values(d);
    let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
    sv.iter().filter(|&&s| s > KERNEL_TOL * scale).map(|s| 2.0 * s.ln()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionReport {
    /// `Σ_k (k/2)(−1)^{k+1} log det♭ Δ_k`.
    pub log_laplacian_form: f64,
    /// `Σ_k ((−1)^k/2) log det♭(d_k^* d_k)`.
    pub log_coexact_form: f64,
}

impl TorsionReport {
    pub fn value(&self, convention: TorsionConvention) -> f64 {
        convention.apply(self.log_laplacian_form)
    }
}

/// Both forms of the torsion of an acyclic complex, required to agree.
pub fn torsion_report(tc: &TwistedComplex) -> Result<TorsionReport, ComplexError> {
    tc.require_acyclic()?;
    let mut lap = 0.0;
    for k in 0..=tc.top_degree() {
        if k == 0 {
            continue;
        }
        let l = log_det_prime(&tc.orthonormal_laplacian(k), 0)
            .ok_or(ComplexError::NotAcyclic { degree: k, betti: 1 })?;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        lap += 0.5 * k as f64 * sign * l;
    }
    let mut coexact = 0.0;
    for k in 0..tc.top_degree() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        coexact += 0.5 * sign * log_det_prime_gram(tc.orthonormal_differential(k));
    }
    let residual = (lap - coexact).abs();
    if residual > TORSION_AGREEMENT_TOL * lap.abs().max(1.0) {
        return Err(ComplexError::TorsionMismatch { laplacian: lap, coexact, residual });
    }
    Ok(TorsionReport { log_laplacian_form: lap, log_coexact_form: coexact })
}

pub fn analytic_torsion(tc: &TwistedComplex, convention: TorsionConvention) -> Result<f64, ComplexError> {
    Ok(torsion_report(tc)?.value(convention))
}

/// Operators of the resolution of `ker T`, as explicit block matrices.
#[derive(Debug, Clone)]
pub struct Resolution {
    /// `T = [[0, d_1^*], [d_1, 0]]` on `C^1 ⊕ C^2`.
    pub t: CMat,
    /// `T_1 = diag(d_0, d_2^*)` from `C^0 ⊕ C^3`, then `T_j = d_{j+1}^*` for `j ≥ 2`.
    pub chain: Vec<CMat>,
}

fn embed(rows: usize, cols: usize, blocks: &[(usize, usize, &CMat)]) -> CMat {
    let mut m = CMat::zeros(rows, cols);
    for &(r, c, b) in blocks {
        m.view_mut((r, c), b.shape()).copy_from(b);
    }
    m
}

/// Builds `T` and its resolution `T_1, T_2, …` from the orthonormal-frame differentials.
/// The Hodge star of the smooth picture is replaced by the metric adjoint.
pub fn resolution(tc: &TwistedComplex) -> Resolution {
    let n = tc.top_degree();
    let dims = tc.dims();
    let dim = |k: usize| dims.get(k).copied().unwrap_or(0);
    let d = |k: usize| tc.orthonormal_differential(k);
    let (n1, n2) = (dim(1), dim(2));
    let t = if n >= 2 {
        let d1 = d(1);
        let d1s = d1.adjoint();
        embed(n1 + n2, n1 + n2, &[(0, n1, &d1s), (n1, 0, d1)])
    } else {
        CMat::zeros(n1, n1)
    };
    let mut chain = Vec::new();
    let (n0, n3) = (dim(0), if n >= 3 { dim(3) } else { 0 });
    let mut t1 = embed(n1 + n2, n0 + n3, &[(0, 0, d(0))]);
    if n >= 3 {
        let d2s = d(2).adjoint();
        t1.view_mut((n1, n0), d2s.shape()).copy_from(&d2s);
    }
    chain.push(t1);
    for j in 2..n.saturating_sub(1) {
        let ds = d(j + 1).adjoint();
        if j == 2 {
            chain.push(embed(n0 + n3, ds.ncols(), &[(n0, 0, &ds)]));
        } else {
            chain.push(ds);
        }
    }
    Resolution { t, chain }
}

fn check_exact(res: &Resolution) -> Result<(), ComplexError> {
    let rank_t = rank(&res.t);
    let mut kernel = res.t.ncols() - rank_t;
    let mut prev = &res.t;
    for (j, op) in res.chain.iter().enumerate() {
        let comp = max_abs(&(prev * op)) / (max_abs(prev) * max_abs(op)).max(1.0);
        let r = rank(op);
        if comp > 1e-12 || r != kernel {
            return Err(ComplexError::DegenerateResolution { stage: j + 1 });
        }
        kernel = op.ncols() - r;
        prev = op;
    }
    if kernel != 0 {
        return Err(ComplexError::DegenerateResolution { stage: res.chain.len() + 1 });
    }
    Ok(())
}

/// `log Z = −¼ log det♭(T²) + Σ_j ((−1)^{j+1}/2) log det♭(T_j T_j^*)`.
pub fn log_schwarz_partition(tc: &TwistedComplex) -> Result<f64, ComplexError> {
    tc.require_acyclic()?;
    let res = resolution(tc);
    check_exact(&res)?;
    let kernel_t = res.t.ncols() - rank(&res.t);
    let t2 = &res.t * &res.t;
    let mut log_z = -0.25 * log_det_prime(&t2, kernel_t).ok_or(ComplexError::DegenerateResolution { stage: 0 })?;
    for (i, op) in res.chain.iter().enumerate() {
        let j = i + 1;
        let kernel = op.nrows() - rank(op);
        let l = log_det_prime(&(op * op.adjoint()), kernel)
            .ok_or(ComplexError::DegenerateResolution { stage: j })?;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        log_z += 0.5 * sign * l;
    }
    Ok(log_z)
}

pub fn schwarz_partition(tc: &TwistedComplex) -> Result<f64, ComplexError> {
    Ok(log_schwarz_partition(tc)?.exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetRelationsReport {
    /// `max_k |det♭(d_k^* d_k) / det♭(d_k d_k^*) − 1|`.
    pub relation1: f64,
    /// `max_k |det♭(d_k^* d_k) / det♭(d_{N−k−1} d_{N−k−1}^*) − 1|`, only with a dual pairing.
    pub relation2: Option<f64>,
    /// `max_k |det♭ Δ_k / (det♭(d_{k−1} d_{k−1}^*) det♭(d_k^* d_k)) − 1|`.
    pub relation3: f64,
    /// `max_k |S_k conj(d_k^* d_k) S_k^{-1} − d_{N−k−1} d_{N−k−1}^*|`, relative.
    pub star_intertwining: Option<f64>,
}

fn rel_log(a: f64, b: f64) -> f64 {
    (a - b).exp_m1().abs()
}

pub fn det_relations_report(tc: &TwistedComplex) -> Result<DetRelationsReport, ComplexError> {
    let n = tc.top_degree();
    let dims = tc.dims();
    let ranks = tc.ranks();
    let betti = tc.betti_numbers();
    let fail = |k: usize| ComplexError::DegenerateResolution { stage: k };
    let mut star_star = Vec::with_capacity(n); // log det♭(d_k^* d_k)
    let mut star_after = Vec::with_capacity(n); // log det♭(d_k d_k^*)
    let mut relation1: f64 = 0.0;
    for k in 0..n {
        let dk = tc.orthonormal_differential(k);
        let a = log_det_prime(&(dk.adjoint() * dk), dims[k] - ranks[k]).ok_or_else(|| fail(k))?;
        let b = log_det_prime(&(dk * dk.adjoint()), dims[k + 1] - ranks[k]).ok_or_else(|| fail(k))?;
        relation1 = relation1.max(rel_log(a, b));
        star_star.push(a);
        star_after.push(b);
    }
    let mut relation3: f64 = 0.0;
    for k in 0..=n {
        let lap = log_det_prime(&tc.orthonormal_laplacian(k), betti[k]).ok_or_else(|| fail(k))?;
        let mut parts = 0.0;
        if k > 0 {
            parts += star_after[k - 1];
        }
        if k < n {
            parts += star_star[k];
        }
        relation3 = relation3.max(rel_log(lap, parts));
    }
    let (relation2, star_intertwining) = match tc.dual() {
        None => (None, None),
        Some(dual) => {
            let sq: Vec<CMat> = tc.grams().iter().map(crate::linalg::hermitian_sqrt).collect();
            let isq: Vec<CMat> = tc.grams().iter().map(crate::linalg::hermitian_inv_sqrt).collect();
            let mut r2: f64 = 0.0;
            let mut inter: f64 = 0.0;
            for k in 0..n {
                r2 = r2.max(rel_log(star_star[k], star_after[n - k - 1]));
                let s = &sq[n - k] * &dual.stars[k] * conj_matrix(&isq[k]);
                let sinv = s.clone().try_inverse().ok_or_else(|| fail(k))?;
                let dk = tc.orthonormal_differential(k);
                let dm = tc.orthonormal_differential(n - k - 1);
                let lhs = &s * conj_matrix(&(dk.adjoint() * dk)) * sinv;
                let rhs = dm * dm.adjoint();
                inter = inter.max(max_abs(&(lhs - &rhs)) / max_abs(&rhs).max(1.0));
            }
            (Some(r2), Some(inter))
        }
    };
    Ok(DetRelationsReport { relation1, relation2, relation3, star_intertwining })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cis, identity, random_unitary, rel_err};
    use crate::twisted_complex::{
        circle_complex, mapping_torus_complex, random_acyclic_complex, torus_complex, RandomComplexConfig,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// `Π_k |det(I − z A_k)|^{(−1)^{k+1}}` over the action on the cohomology of the fibre,
    /// computed from the 2×2 matrix directly.
    fn fibre_oracle(a: [[i64; 2]; 2], theta: f64) -> f64 {
        let z = cis(theta);
        let (p, q, r, s) = (a[0][0] as f64, a[0][1] as f64, a[1][0] as f64, a[1][1] as f64);
        let det_a = p * s - q * r;
        let det1 = (1.0 - z * p) * (1.0 - z * s) - z * z * q * r;
        det1.norm() / ((1.0 - z).norm() * (1.0 - z * det_a).norm())
    }

    #[test]
    fn circle_torsion_is_modulus_of_holonomy_minus_one() {
        for theta in [PI, 2.0 * PI / 3.0, 0.4] {
            let oracle = (cis(theta) - 1.0).norm();
            let tau = analytic_torsion(&circle_complex(theta), TorsionConvention::RaySinger).unwrap();
            assert!(rel_err(tau, oracle) < 1e-13, "{tau} vs {oracle}");
        }
        assert!((analytic_torsion(&circle_complex(2.0 * PI / 3.0), TorsionConvention::RaySinger).unwrap()
            - 3f64.sqrt())
        .abs()
            < 1e-13);
    }

    #[test]
    fn untwisted_circle_is_rejected() {
        let err = analytic_torsion(&circle_complex(0.0), TorsionConvention::RaySinger).unwrap_err();
        assert_eq!(err, ComplexError::NotAcyclic { degree: 0, betti: 1 });
    }

    #[test]
    fn mapping_torus_matches_fibre_oracle() {
        let tc = mapping_torus_complex([[2, 1], [1, 1]], PI).unwrap();
        let rs = analytic_torsion(&tc, TorsionConvention::RaySinger).unwrap();
        let rec = analytic_torsion(&tc, TorsionConvention::Reciprocal).unwrap();
        assert!((rs - 0.8).abs() < 1e-13);
        assert!((rec - 1.25).abs() < 1e-13);
        for a in [[[2, 1], [1, 1]], [[3, 1], [2, 1]], [[4, 1], [3, 1]], [[0, 1], [-1, 3]]] {
            for theta in [PI / 2.0, 2.0 * PI / 3.0, PI, 1.0] {
                let tc = mapping_torus_complex(a, theta).unwrap();
                let rec = analytic_torsion(&tc, TorsionConvention::Reciprocal).unwrap();
                assert!(rel_err(rec, fibre_oracle(a, theta)) < 1e-12);
            }
        }
        let mu = (3.0 + 5f64.sqrt()) / 2.0;
        let z = cis(PI / 2.0);
        let spec_form = ((1.0 - z * mu) * (1.0 - z / mu)).norm() / (1.0 - z).norm().powi(2);
        let tc = mapping_torus_complex([[2, 1], [1, 1]], PI / 2.0).unwrap();
        assert!(rel_err(analytic_torsion(&tc, TorsionConvention::Reciprocal).unwrap(), spec_form) < 1e-12);
    }

    #[test]
    fn schwarz_matches_torsion_on_builtins() {
        let cases = [
            circle_complex(PI),
            torus_complex(PI / 2.0, 0.0),
            torus_complex(0.3, 1.1),
            mapping_torus_complex([[2, 1], [1, 1]], PI).unwrap(),
            mapping_torus_complex([[3, 1], [2, 1]], 2.0).unwrap(),
        ];
        for tc in &cases {
            let tau = analytic_torsion(tc, TorsionConvention::RaySinger).unwrap();
            let z = schwarz_partition(tc).unwrap();
            assert!(rel_err(z, tau) < 1e-12, "{z} vs {tau}");
        }
        assert!((schwarz_partition(&circle_complex(PI)).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn schwarz_matches_torsion_on_random_complexes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for metric in [false, true] {
            let cfg = RandomComplexConfig { random_metric: metric, ..Default::default() };
            for _ in 0..15 {
                let tc = random_acyclic_complex(&cfg, &mut rng);
                let tau = analytic_torsion(&tc, TorsionConvention::RaySinger).unwrap();
                let z = schwarz_partition(&tc).unwrap();
                assert!(rel_err(z, tau) < 1e-10, "{z} vs {tau}");
                let rep = det_relations_report(&tc).unwrap();
                assert!(rep.relation1 < 1e-10 && rep.relation3 < 1e-10, "{rep:?}");
                assert!(rep.relation2.is_none());
            }
        }
    }

    #[test]
    fn resolution_is_a_complex() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = RandomComplexConfig { min_top_degree: 5, ..Default::default() };
        let tc = random_acyclic_complex(&cfg, &mut rng);
        let res = resolution(&tc);
        assert_eq!(res.chain.len(), 3);
        assert!(max_abs(&(&res.t * &res.chain[0])) < 1e-12);
        for w in res.chain.windows(2) {
            assert!(max_abs(&(&w[0] * &w[1])) < 1e-12);
        }
    }

    #[test]
    fn relations_on_dual_pairs() {
        let circle = det_relations_report(&circle_complex(PI)).unwrap();
        assert!(circle.relation1 == 0.0 || circle.relation1 < 1e-15);
        assert!(circle.relation2.unwrap() < 1e-14 && circle.star_intertwining.unwrap() < 1e-14);
        let torus = det_relations_report(&torus_complex(0.7, -1.9)).unwrap();
        assert!(torus.relation2.unwrap() < 1e-12, "{torus:?}");
        assert!(torus.star_intertwining.unwrap() < 1e-12);
        assert!(torus.relation1 < 1e-12 && torus.relation3 < 1e-12);
    }

    #[test]
    fn identity_twisted_cone_satisfies_relation_three() {
        let tc = TwistedComplex::from_differentials(vec![identity(3)]).unwrap();
        let rep = det_relations_report(&tc).unwrap();
        assert!(rep.relation1 < 1e-15 && rep.relation3 < 1e-15);
    }

    #[test]
    fn torsion_is_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let cfg = RandomComplexConfig::default();
        for _ in 0..5 {
            let tc = random_acyclic_complex(&cfg, &mut rng);
            let us: Vec<CMat> = tc.dims().iter().map(|&n| random_unitary(n, &mut rng)).collect();
            let moved = tc.change_basis(&us).unwrap();
            let a = analytic_torsion(&tc, TorsionConvention::RaySinger).unwrap();
            let b = analytic_torsion(&moved, TorsionConvention::RaySinger).unwrap();
            assert!(rel_err(a, b) < 1e-10);
        }
        let torus = torus_complex(0.4, 1.3);
        let us: Vec<CMat> = torus.dims().iter().map(|&n| random_unitary(n, &mut rng)).collect();
        let moved = torus.change_basis(&us).unwrap();
        let rep = det_relations_report(&moved).unwrap();
        assert!(rep.star_intertwining.unwrap() < 1e-12);
    }
}

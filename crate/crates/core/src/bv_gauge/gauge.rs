use std::collections::BTreeMap;

use serde::Serialize;

use super::{BFFieldSpace, BvError, Contraction};
use crate::graded_linalg::{sdet, GradedError, GradedOperator, GradedVectorSpace};
use crate::linalg::{complement_basis, conj_matrix, max_abs, null_space, range_basis, singular_values, CMat};

/// Smallest singular value below which a gauge block counts as singular.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GaugeKind {
    Metric,
    Contraction,
    /// Anything built by hand, for example to probe non-Lagrangian subspaces.
    Custom,
}

/// A split Lagrangian `L = ⊕_k (L_A^k ⊕ L_B^k)` with a declared complement, given by
/// orthonormal column bases. `L_B^k` and the complement's B part live in the dual
/// `(C^k)^*`, identified with `ℂ^n` through the bilinear pairing `b^T a`.
#[derive(Debug, Clone)]
pub struct GaugeSubspace {
    pub kind: GaugeKind,
    pub la: Vec<CMat>,
    pub lb: Vec<CMat>,
    pub ca: Vec<CMat>,
    pub cb: Vec<CMat>,
    /// `P_k` writes the B-coordinates on `L_B^{k+1}` in terms of parameters on `L_A^k`.
    pub parametrization: Vec<CMat>,
    /// `|sdet P|` with the parities of the A fields.
    pub jacobian: f64,
    pub contraction: Option<Contraction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagrangianReport {
    pub is_lagrangian: bool,
    pub isotropy_residual: f64,
    pub complement_isotropy_residual: f64,
    /// Smallest singular value of the pairing between the subspace and its complement.
    pub cross_pairing_min_singular_value: f64,
    pub dimension_defect: usize,
}

impl From<GradedError> for BvError {
    fn from(e: GradedError) -> Self {
        match e {
            GradedError::SingularBlock(k) => BvError::DegenerateGauge { degree: (1 - k) as usize },
            other => BvError::InvalidContraction(other.to_string()),
        }
    }
}

fn graded(fs: &BFFieldSpace, blocks: Vec<CMat>) -> Result<GradedOperator, BvError> {
    let map: BTreeMap<i32, CMat> = blocks.into_iter().enumerate().map(|(k, b)| (1 - k as i32, b)).collect();
    let dims = map.iter().map(|(&k, b)| (k, b.ncols())).collect();
    let space = GradedVectorSpace::new(dims, fs.a_fields.shift);
    Ok(GradedOperator::new(map, space.clone(), space, 0)?)
}

fn check_blocks(blocks: &[CMat]) -> Result<(), BvError> {
    for (k, b) in blocks.iter().enumerate() {
        if b.nrows() != b.ncols() {
            return Err(BvError::DegenerateGauge { degree: k });
        }
        if b.nrows() > 0 && singular_values(b).last().is_some_and(|&s| s < DEGENERACY_TOL) {
            return Err(BvError::DegenerateGauge { degree: k });
        }
    }
    Ok(())
}

/// `L_A = coexact A`, `L_B = ann(L_A)`; complement `exact A ⊕ ann(exact)`.
/// B on `L_B^{k+1}` is parametrized by coexact `η ∈ C^k` as `B̂ = conj(d_k η)`.
pub fn metric_gauge(fs: &BFFieldSpace) -> Result<GaugeSubspace, BvError> {
    fs.base.require_acyclic()?;
    let n = fs.top_degree();
    let dims = fs.dims();
    let coexact: Vec<CMat> = (0..=n)
        .map(|k| if k < n { range_basis(&fs.d(k).adjoint()) } else { CMat::zeros(dims[n], 0) })
        .collect();
    let exact: Vec<CMat> = (0..=n)
        .map(|k| if k > 0 { range_basis(fs.d(k - 1)) } else { CMat::zeros(dims[0], 0) })
        .collect();
    let la = coexact.clone();
    let lb: Vec<CMat> = exact.iter().map(conj_matrix).collect();
    let ca = exact.clone();
    let cb: Vec<CMat> = coexact.iter().map(conj_matrix).collect();
    let parametrization: Vec<CMat> = (0..=n)
        .map(|k| if k < n { exact[k + 1].adjoint() * fs.d(k) * &coexact[k] } else { CMat::zeros(0, 0) })
        .collect();
    check_blocks(&parametrization)?;
    let jacobian = sdet(&graded(fs, parametrization.clone())?)?.norm();
    Ok(GaugeSubspace {
        kind: GaugeKind::Metric,
        la,
        lb,
        ca,
        cb,
        parametrization,
        jacobian,
        contraction: None,
    })
}

/// `L_A = ker ι`, `L_B = ann(ker ι)`; complement `im a ⊕ ann(im a)`. The B fields on
/// `L_B^{k+1}` are parametrized isometrically by `ker ι_k` through `a`, so the Jacobian is 1.
pub fn contraction_gauge(fs: &BFFieldSpace, c: &Contraction) -> Result<GaugeSubspace, BvError> {
    fs.base.require_acyclic()?;
    if c.dims() != fs.dims() {
        return Err(BvError::InvalidContraction("contraction does not match the field space".into()));
    }
    let n = fs.top_degree();
    let dims = fs.dims();
    let kernels: Vec<CMat> = (0..=n).map(|k| c.kernel(k)).collect();
    let images: Vec<CMat> = (0..=n)
        .map(|k| if k > 0 { range_basis(&c.a[k]) } else { CMat::zeros(dims[0], 0) })
        .collect();
    let lb: Vec<CMat> = kernels.iter().map(|k| conj_matrix(&complement_basis(k))).collect();
    let cb: Vec<CMat> = images.iter().map(|e| conj_matrix(&complement_basis(e))).collect();
    let blocks = c.lie_derivative_blocks(fs);
    check_blocks(&blocks)?;
    let parametrization: Vec<CMat> = (0..=n)
        .map(|k| {
            if k < n {
                // coordinates of conj(a η) on the basis lb[k+1]
                lb[k + 1].transpose() * conj_matrix(&(&c.a[k + 1] * &kernels[k]))
            } else {
                CMat::zeros(0, 0)
            }
        })
        .collect();
    Ok(GaugeSubspace {
        kind: GaugeKind::Contraction,
        la: kernels,
        lb,
        ca: images,
        cb,
        parametrization,
        jacobian: 1.0,
        contraction: Some(c.clone()),
    })
}

/// `ker ι ⊕ ker ι` with B read through the Hermitian rather than the bilinear
/// identification: B̂ is asked to annihilate `im a` instead of `ker ι`. Not Lagrangian.
pub fn skewed_gauge(fs: &BFFieldSpace, c: &Contraction) -> Result<GaugeSubspace, BvError> {
    let mut gs = contraction_gauge(fs, c)?;
    gs.kind = GaugeKind::Custom;
    gs.lb = gs.la.iter().map(conj_matrix).collect();
    gs.cb = gs.ca.iter().map(conj_matrix).collect();
    Ok(gs)
}

pub fn is_lagrangian(gs: &GaugeSubspace) -> LagrangianReport {
    let mut iso: f64 = 0.0;
    let mut ciso: f64 = 0.0;
    let mut cross = f64::INFINITY;
    let mut defect = 0usize;
    for k in 0..gs.la.len() {
        let n = gs.la[k].nrows();
        if gs.la[k].ncols() + gs.lb[k].ncols() != n || gs.ca[k].ncols() + gs.cb[k].ncols() != n {
            defect += 1;
            continue;
        }
        iso = iso.max(max_abs(&(gs.lb[k].transpose() * &gs.la[k])));
        ciso = ciso.max(max_abs(&(gs.cb[k].transpose() * &gs.ca[k])));
        for block in [gs.lb[k].transpose() * &gs.ca[k], gs.cb[k].transpose() * &gs.la[k]] {
            if block.nrows() != block.ncols() {
                cross = 0.0;
            } else if block.nrows() > 0 {
                cross = cross.min(singular_values(&block).last().copied().unwrap_or(0.0));
            }
        }
    }
    let cross = if cross.is_finite() { cross } else { 1.0 };
    LagrangianReport {
        is_lagrangian: defect == 0 && iso < 1e-12 && ciso < 1e-12 && cross > DEGENERACY_TOL,
        isotropy_residual: iso,
        complement_isotropy_residual: ciso,
        cross_pairing_min_singular_value: cross,
        dimension_defect: defect,
    }
}

/// Partition function with its phase reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Partition {
    pub modulus: f64,
    pub phase: f64,
}

/// Restricted action in the orthonormal bases of the gauge: `R_k = L_B^{k+1 T} d_k L_A^k`.
pub fn restricted_action(fs: &BFFieldSpace, gs: &GaugeSubspace) -> Vec<CMat> {
    (0..fs.top_degree()).map(|k| gs.lb[k + 1].transpose() * fs.d(k) * &gs.la[k]).collect()
}

/// Metric gauge: `|sdet M|^{−1} |sdet P|` with `M_k = d_k^* d_k` on coexact parameters.
/// Contraction gauge: `|sdet(L|_{ker ι})|` with `L = ι d + d ι`, graded by the complex degree.
pub fn partition_function(fs: &BFFieldSpace, gs: &GaugeSubspace) -> Result<Partition, BvError> {
    let n = fs.top_degree();
    match gs.kind {
        GaugeKind::Metric => {
            let m: Vec<CMat> = (0..=n)
                .map(|k| {
                    if k < n {
                        let q = &gs.la[k];
                        q.adjoint() * fs.d(k).adjoint() * fs.d(k) * q
                    } else {
                        CMat::zeros(0, 0)
                    }
                })
                .collect();
            check_blocks(&m)?;
            let s = sdet(&graded(fs, m)?)?;
            let z = gs.jacobian / s;
            Ok(Partition { modulus: z.norm(), phase: z.arg() })
        }
        GaugeKind::Contraction => {
            let c = gs.contraction.as_ref().ok_or_else(|| BvError::InvalidContraction("missing contraction".into()))?;
            let blocks = c.lie_derivative_blocks(fs);
            check_blocks(&blocks)?;
            // complex grading: parity k, i.e. the A-field grading shifted once
            let s = sdet(&graded(fs, blocks)?.shifted(1))?;
            Ok(Partition { modulus: s.norm(), phase: s.arg() })
        }
        GaugeKind::Custom => {
            if !is_lagrangian(gs).is_lagrangian {
                return Err(BvError::NotLagrangian);
            }
            let r = restricted_action(fs, gs);
            let mut blocks = r;
            blocks.push(CMat::zeros(0, 0));
            check_blocks(&blocks)?;
            let s = sdet(&graded(fs, blocks)?.shifted(1))?;
            Ok(Partition { modulus: s.norm(), phase: s.arg() })
        }
    }
}

/// Orthonormal basis of the annihilator of the columns of `q` under `b^T a`.
pub fn annihilator(q: &CMat) -> CMat {
    null_space(&q.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bv_gauge::{build_bf_fields, hodge_contraction, random_contraction};
    use crate::linalg::{from_real, rel_err};
    use crate::twisted_complex::{
        analytic_torsion, circle_complex, mapping_torus_complex, random_acyclic_complex, RandomComplexConfig,
        TorsionConvention,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn circle_metric_gauge() {
        let fs = build_bf_fields(&circle_complex(PI)).unwrap();
        let gs = metric_gauge(&fs).unwrap();
        assert_eq!(gs.la[0].ncols(), 1);
        assert_eq!(gs.la[1].ncols(), 0);
        assert!(is_lagrangian(&gs).is_lagrangian);
        // restricted action in parameter coordinates is d^*d = 4
        let q = &gs.la[0];
        let m = q.adjoint() * fs.d(0).adjoint() * fs.d(0) * q;
        assert!((m[(0, 0)].re - 4.0).abs() < 1e-14);
        assert!((partition_function(&fs, &gs).unwrap().modulus - 2.0).abs() < 1e-14);
    }

    #[test]
    fn circle_contraction_gauge() {
        let fs = build_bf_fields(&circle_complex(PI)).unwrap();
        let iota = vec![CMat::zeros(0, 1), from_real(1, 1, &[1.0])];
        let c = Contraction::normalized(iota, &fs.dims()).unwrap();
        let gs = contraction_gauge(&fs, &c).unwrap();
        assert!(is_lagrangian(&gs).is_lagrangian);
        assert!((partition_function(&fs, &gs).unwrap().modulus - 2.0).abs() < 1e-14);
    }

    #[test]
    fn mapping_torus_both_gauges_match_torsion() {
        let tc = mapping_torus_complex([[2, 1], [1, 1]], PI).unwrap();
        let fs = build_bf_fields(&tc).unwrap();
        let tau = analytic_torsion(&tc, TorsionConvention::RaySinger).unwrap();
        let metric = partition_function(&fs, &metric_gauge(&fs).unwrap()).unwrap().modulus;
        let hodge = hodge_contraction(&fs).unwrap();
        let gs = contraction_gauge(&fs, &hodge).unwrap();
        assert!(is_lagrangian(&gs).is_lagrangian);
        let contact = partition_function(&fs, &gs).unwrap().modulus;
        assert!(rel_err(metric, tau) < 1e-12 && rel_err(contact, tau) < 1e-12);
        assert!((tau - 0.8).abs() < 1e-12);
    }

    #[test]
    fn random_gauges_agree_with_torsion() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for metric_kind in [false, true] {
            let cfg = RandomComplexConfig { random_metric: metric_kind, ..Default::default() };
            for _ in 0..6 {
                let tc = random_acyclic_complex(&cfg, &mut rng);
                let fs = build_bf_fields(&tc).unwrap();
                let tau = analytic_torsion(&tc, TorsionConvention::RaySinger).unwrap();
                let mg = metric_gauge(&fs).unwrap();
                let rep = is_lagrangian(&mg);
                assert!(rep.is_lagrangian && rep.isotropy_residual < 1e-12, "{rep:?}");
                assert!(rel_err(partition_function(&fs, &mg).unwrap().modulus, tau) < 1e-9);
                for _ in 0..3 {
                    let c = random_contraction(&fs, &mut rng).unwrap();
                    let gs = contraction_gauge(&fs, &c).unwrap();
                    let rep = is_lagrangian(&gs);
                    assert!(rep.is_lagrangian && rep.isotropy_residual < 1e-12, "{rep:?}");
                    let z = partition_function(&fs, &gs).unwrap();
                    assert!(rel_err(z.modulus, tau) < 1e-9, "{} vs {tau}", z.modulus);
                    // generic restricted-action evaluation agrees
                    let mut custom = gs.clone();
                    custom.kind = GaugeKind::Custom;
                    assert!(rel_err(partition_function(&fs, &custom).unwrap().modulus, tau) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn skewed_subspace_is_not_lagrangian() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tc = random_acyclic_complex(&RandomComplexConfig::default(), &mut rng);
        let fs = build_bf_fields(&tc).unwrap();
        let c = random_contraction(&fs, &mut rng).unwrap();
        let gs = skewed_gauge(&fs, &c).unwrap();
        let rep = is_lagrangian(&gs);
        assert!(!rep.is_lagrangian);
        assert!(rep.isotropy_residual > 0.1);
        assert_eq!(partition_function(&fs, &gs).unwrap_err(), BvError::NotLagrangian);
    }

    #[test]
    fn annihilator_kills_the_subspace() {
        let q = range_basis(&from_real(3, 1, &[1.0, 2.0, 2.0]));
        let ann = annihilator(&q);
        assert_eq!(ann.ncols(), 2);
        assert!(max_abs(&(ann.transpose() * q)) < 1e-14);
    }
}

use serde::Serialize;

use super::{contraction_gauge, is_lagrangian, partition_function, BFFieldSpace, BvError, ContractionFamily};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRecord {
    pub t: f64,
    pub modulus: f64,
    pub phase: f64,
    pub isotropy_residual: f64,
    pub cross_pairing_min_singular_value: f64,
    /// `|Z(t)/Z(0) − 1|`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub samples: Vec<ScanRecord>,
    pub max_deviation: f64,
}

impl ScanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scan reports serialize")
    }
}

/// Evaluates the contraction-gauge partition function at `t_j = j/(samples − 1)`.
pub fn homotopy_scan(fs: &BFFieldSpace, family: &ContractionFamily, samples: usize) -> Result<ScanReport, BvError> {
    let samples = samples.max(2);
    let mut records = Vec::with_capacity(samples);
    let mut z0 = None;
    for j in 0..samples {
        let t = j as f64 / (samples - 1) as f64;
        let c = family.at(t);
        let degenerate = |_| BvError::DegenerateContraction { sample: j, t };
        let gs = contraction_gauge(fs, &c).map_err(degenerate)?;
        let lag = is_lagrangian(&gs);
        let z = partition_function(fs, &gs).map_err(degenerate)?;
        let base = *z0.get_or_insert(z.modulus);
        records.push(ScanRecord {
            t,
            modulus: z.modulus,
            phase: z.phase,
            isotropy_residual: lag.isotropy_residual,
            cross_pairing_min_singular_value: lag.cross_pairing_min_singular_value,
            deviation: (z.modulus / base - 1.0).abs(),
        });
    }
    let max_deviation = records.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(ScanReport { samples: records, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bv_gauge::{build_bf_fields, degenerate_contraction, hodge_contraction};
    use crate::twisted_complex::{random_acyclic_complex, RandomComplexConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_family_has_zero_deviation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tc = random_acyclic_complex(&RandomComplexConfig::default(), &mut rng);
        let fs = build_bf_fields(&tc).unwrap();
        let fam = ContractionFamily::constant(hodge_contraction(&fs).unwrap());
        let rep = homotopy_scan(&fs, &fam, 5).unwrap();
        assert_eq!(rep.max_deviation, 0.0);
        assert_eq!(rep.samples.len(), 5);
        let json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(json["samples"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn rotation_from_hodge_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let tc = random_acyclic_complex(&RandomComplexConfig::default(), &mut rng);
        let fs = build_bf_fields(&tc).unwrap();
        let fam = ContractionFamily::random_rotation(hodge_contraction(&fs).unwrap(), 0.0, &mut rng);
        let rep = homotopy_scan(&fs, &fam, 10).unwrap();
        assert!(rep.max_deviation < 1e-9, "{}", rep.max_deviation);
    }

    #[test]
    fn crossing_a_degenerate_contraction_fails_at_that_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let tc = random_acyclic_complex(&RandomComplexConfig::default(), &mut rng);
        let fs = build_bf_fields(&tc).unwrap();
        let fam = ContractionFamily::random_rotation(degenerate_contraction(&fs, &mut rng).unwrap(), 0.5, &mut rng);
        match homotopy_scan(&fs, &fam, 11) {
            Err(BvError::DegenerateContraction { sample, t }) => {
                assert_eq!(sample, 5);
                assert!((t - 0.5).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }
}

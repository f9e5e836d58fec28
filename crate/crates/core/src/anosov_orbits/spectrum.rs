use std::path::Path;

use num_complex::Complex64;

use super::{OrbitError, OrbitRecord};

const UNIT_TOL: f64 = 1e-9;

fn validation(line: usize, field: &str) -> OrbitError {
    OrbitError::Validation { line, field: field.into() }
}

/// Parses `length primitive_flag holonomy_re holonomy_im eig1 eig2 count` records, one per line.
/// `#` starts a comment. Records equal in everything but the count are merged.
pub fn read_orbit_spectrum(text: &str) -> Result<Vec<OrbitRecord>, OrbitError> {
    let mut out: Vec<OrbitRecord> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 7 {
            return Err(OrbitError::Parse { line, message: format!("expected 7 fields, found {}", fields.len()) });
        }
        let num = |i: usize| {
            fields[i].parse::<f64>().map_err(|e| OrbitError::Parse { line, message: format!("`{}`: {e}", fields[i]) })
        };
        let int = |i: usize| {
            fields[i].parse::<u128>().map_err(|e| OrbitError::Parse { line, message: format!("`{}`: {e}", fields[i]) })
        };
        let length = num(0)?;
        if !(length.is_finite() && length > 0.0) {
            return Err(validation(line, "length"));
        }
        let primitive = match int(1)? {
            0 => false,
            1 => true,
            _ => return Err(validation(line, "primitive_flag")),
        };
        let holonomy = Complex64::new(num(2)?, num(3)?);
        if !holonomy.is_finite() || (holonomy.norm() - 1.0).abs() > UNIT_TOL {
            return Err(validation(line, "holonomy"));
        }
        let eigs = (num(4)?, num(5)?);
        let product = (eigs.0 * eigs.1).abs();
        let hyperbolic = eigs.0.abs() != 1.0 && eigs.1.abs() != 1.0;
        if !(eigs.0.is_finite() && eigs.1.is_finite() && hyperbolic && (product - 1.0).abs() <= UNIT_TOL) {
            return Err(validation(line, "eigenvalues"));
        }
        let count = int(6)?;
        if count == 0 {
            return Err(validation(line, "count"));
        }
        let rec = OrbitRecord {
            period: 1,
            length,
            count,
            primitive,
            poincare_eigs: eigs,
            winding: 0,
            holonomy: Some(holonomy),
        };
        match out.iter_mut().find(|r| OrbitRecord { count: r.count, ..rec.clone() } == **r) {
            Some(r) => r.count += count,
            None => out.push(rec),
        }
    }
    Ok(out)
}

/// Canonical writer; holonomies of enumerated orbits are evaluated at the character `θ`.
pub fn write_orbit_spectrum(records: &[OrbitRecord], theta: f64) -> String {
    let mut s = String::from("# length primitive holonomy_re holonomy_im eig1 eig2 count\n");
    for r in records {
        let h = r.character(theta);
        s.push_str(&format!(
            "{:e} {} {:e} {:e} {:e} {:e} {}\n",
            r.length,
            u8::from(r.primitive),
            h.re,
            h.im,
            r.poincare_eigs.0,
            r.poincare_eigs.1,
            r.count
        ));
    }
    s
}

pub fn load_orbit_spectrum(path: &Path) -> Result<Vec<OrbitRecord>, OrbitError> {
    let text = std::fs::read_to_string(path).map_err(|e| OrbitError::Io(format!("{}: {e}", path.display())))?;
    read_orbit_spectrum(&text)
}

pub fn save_orbit_spectrum(path: &Path, records: &[OrbitRecord], theta: f64) -> Result<(), OrbitError> {
    std::fs::write(path, write_orbit_spectrum(records, theta)).map_err(|e| OrbitError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anosov_orbits::{enumerate_primitive_orbits, ToralAutomorphism};

    const THREE: &str = "# three closed geodesics\n\
        1.5 1 1 0 4 0.25 1\n\
        2.0 1 0 1 -3 0.3333333333333333 2   # winding once\n\
        \n\
        3.25 1 -1 0 5 -0.2 1\n";

    #[test]
    fn well_formed_file() {
        let recs = read_orbit_spectrum(THREE).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[1].count, 2);
        assert_eq!(recs[1].holonomy, Some(Complex64::new(0.0, 1.0)));
        assert_eq!(recs[2].character(1.234), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn validation_errors() {
        let bad = "1 1 1 0 4 0.25 1\n-2 1 1 0 4 0.25 1\n";
        assert_eq!(read_orbit_spectrum(bad).unwrap_err(), validation(2, "length"));
        assert_eq!(read_orbit_spectrum("1 1 2 0 4 0.25 1").unwrap_err(), validation(1, "holonomy"));
        assert_eq!(read_orbit_spectrum("1 1 1 0 4 0.5 1").unwrap_err(), validation(1, "eigenvalues"));
        assert_eq!(read_orbit_spectrum("1 1 1 0 1 1 1").unwrap_err(), validation(1, "eigenvalues"));
        assert_eq!(read_orbit_spectrum("1 3 1 0 4 0.25 1").unwrap_err(), validation(1, "primitive_flag"));
        assert_eq!(read_orbit_spectrum("1 1 1 0 4 0.25 0").unwrap_err(), validation(1, "count"));
        assert!(matches!(read_orbit_spectrum("1 1 1 0 4 0.25").unwrap_err(), OrbitError::Parse { line: 1, .. }));
        assert!(matches!(read_orbit_spectrum("\n1 x 1 0 4 0.25 1").unwrap_err(), OrbitError::Parse { line: 2, .. }));
    }

    #[test]
    fn duplicates_are_merged() {
        let recs = read_orbit_spectrum("1.5 1 1 0 4 0.25 1\n1.5 1 1 0 4 0.25 1\n").unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].count, 2);
    }

    #[test]
    fn canonical_round_trip() {
        let recs = read_orbit_spectrum(THREE).unwrap();
        let text = write_orbit_spectrum(&recs, 0.0);
        assert_eq!(read_orbit_spectrum(&text).unwrap(), recs);
        assert_eq!(write_orbit_spectrum(&read_orbit_spectrum(&text).unwrap(), 0.0), text);
    }

    #[test]
    fn enumerated_orbits_survive_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cat.orbits");
        let recs = enumerate_primitive_orbits(&ToralAutomorphism::cat_map(), 6).unwrap();
        save_orbit_spectrum(&path, &recs, 0.5).unwrap();
        let back = load_orbit_spectrum(&path).unwrap();
        assert_eq!(back.len(), recs.len());
        for (a, b) in recs.iter().zip(&back) {
            assert_eq!(a.length, b.length);
            assert_eq!(a.count, b.count);
            assert_eq!(a.poincare_eigs, b.poincare_eigs);
            assert_eq!(a.character(0.5), b.character(0.0));
        }
        assert!(matches!(load_orbit_spectrum(&dir.path().join("missing")), Err(OrbitError::Io(_))));
    }
}

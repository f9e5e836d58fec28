use std::collections::BTreeMap;

use super::{ComplexError, Word};
use crate::linalg::{identity, max_abs, CMat};

pub const UNITARY_TOL: f64 = 1e-12;
pub const RELATOR_TOL: f64 = 1e-10;

/// Unitary representation of a finitely presented group on `ℂ^rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryRep {
    pub rank: usize,
    pub images: BTreeMap<String, CMat>,
    pub relators: Vec<Word>,
}

impl UnitaryRep {
    pub fn new(rank: usize, images: BTreeMap<String, CMat>, relators: Vec<Word>) -> Result<Self, ComplexError> {
        if rank == 0 {
            return Err(ComplexError::InvalidInput("representation rank must be positive".into()));
        }
        for (g, u) in &images {
            if u.shape() != (rank, rank) {
                return Err(ComplexError::InvalidInput(format!("image of `{g}` is not {rank}x{rank}")));
            }
            let residual = max_abs(&(u * u.adjoint() - identity(rank)));
            if residual >= UNITARY_TOL {
                return Err(ComplexError::NotUnitary { generator: g.clone(), residual });
            }
        }
        let rep = UnitaryRep { rank, images, relators };
        for w in &rep.relators {
            let residual = max_abs(&(rep.holonomy(w)? - identity(rank)));
            if residual >= RELATOR_TOL {
                return Err(ComplexError::RelatorViolation { relator: w.to_string(), residual });
            }
        }
        Ok(rep)
    }

    /// Rank-one representation from characters `g ↦ e^{iθ_g}`.
    pub fn characters(angles: &[(&str, f64)], relators: Vec<Word>) -> Result<Self, ComplexError> {
        let images = angles
            .iter()
            .map(|&(g, th)| (g.to_string(), CMat::from_element(1, 1, crate::linalg::cis(th))))
            .collect();
        UnitaryRep::new(1, images, relators)
    }

    /// `ρ(word)`; inverses use the adjoint.
    pub fn holonomy(&self, word: &Word) -> Result<CMat, ComplexError> {
        let mut m = identity(self.rank);
        for (g, e) in &word.0 {
            let u = self.images.get(g).ok_or_else(|| ComplexError::MissingGenerator(g.clone()))?;
            let step = if *e >= 0 { u.clone() } else { u.adjoint() };
            for _ in 0..e.unsigned_abs() {
                m *= &step;
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_real};

    #[test]
    fn holonomy_of_inverse_letters() {
        let rep = UnitaryRep::characters(&[("g", 0.3)], vec![]).unwrap();
        let h = rep.holonomy(&Word::parse("g.g^-1").unwrap()).unwrap();
        assert!((h[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        let h = rep.holonomy(&Word::parse("g^2").unwrap()).unwrap();
        assert!((h[(0, 0)] - crate::linalg::cis(0.6)).norm() < 1e-15);
    }

    #[test]
    fn non_unitary_and_relator_failures() {
        let images = [("g".to_string(), from_real(1, 1, &[2.0]))].into_iter().collect();
        assert!(matches!(UnitaryRep::new(1, images, vec![]), Err(ComplexError::NotUnitary { .. })));
        let swap = from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let diag = from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let images = [("a".to_string(), swap), ("b".to_string(), diag)].into_iter().collect();
        let r = UnitaryRep::new(2, images, vec![Word::parse("a.b.a^-1.b^-1").unwrap()]);
        assert!(matches!(r, Err(ComplexError::RelatorViolation { .. })));
    }
}

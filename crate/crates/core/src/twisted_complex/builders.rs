use super::{build_twisted_complex, CellComplex, ComplexError, DualPairing, IncidenceTerm, TwistedComplex, UnitaryRep, Word};
use crate::linalg::from_real;

fn term(row: usize, col: usize, coeff: i64, word: &str) -> IncidenceTerm {
    IncidenceTerm::new(row, col, coeff, Word::parse(word).expect("static word"))
}

/// One vertex, one edge labelled `g`; `d_0 = ρ(g) − 1`.
pub fn circle_cells() -> CellComplex {
    CellComplex::new(vec![1, 1], vec![vec![term(0, 0, 1, "g"), term(0, 0, -1, "1")]], vec!["g".into()])
        .expect("circle is a complex")
}

/// Circle twisted by `g ↦ e^{iθ}`, with the dual pairing `⋆_0 = ⋆_1 = 1`.
pub fn circle_complex(theta: f64) -> TwistedComplex {
    let rep = UnitaryRep::characters(&[("g", theta)], vec![]).expect("characters are unitary");
    build_twisted_complex(&circle_cells(), &rep)
        .and_then(|tc| tc.with_dual(DualPairing { stars: vec![from_real(1, 1, &[1.0]), from_real(1, 1, &[1.0])] }))
        .expect("circle builds")
}

/// Standard CW torus: vertex, edges `a`, `b`, one face with boundary `a b a^{-1} b^{-1}`.
pub fn torus_cells() -> CellComplex {
    CellComplex::new(
        vec![1, 2, 1],
        vec![
            vec![term(0, 0, 1, "a"), term(0, 0, -1, "1"), term(1, 0, 1, "b"), term(1, 0, -1, "1")],
            vec![term(0, 0, 1, "1"), term(0, 0, -1, "b"), term(0, 1, 1, "a"), term(0, 1, -1, "1")],
        ],
        vec!["a".into(), "b".into()],
    )
    .expect("torus is a complex")
}

pub fn torus_relator() -> Word {
    Word::parse("a.b.a^-1.b^-1").expect("static word")
}

/// Torus twisted by the character `(e^{iα}, e^{iβ})`, with its dual pairing
/// `⋆_0 = 1`, `⋆_1 = [[0, 1], [−1, 0]]`, `⋆_2 = 1`.
pub fn torus_complex(alpha: f64, beta: f64) -> TwistedComplex {
    let rep = UnitaryRep::characters(&[("a", alpha), ("b", beta)], vec![torus_relator()]).expect("abelian");
    let stars = vec![
        from_real(1, 1, &[1.0]),
        from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]),
        from_real(1, 1, &[1.0]),
    ];
    build_twisted_complex(&torus_cells(), &rep)
        .and_then(|tc| tc.with_dual(DualPairing { stars }))
        .expect("torus builds")
}

/// Cells of the mapping torus of `A` acting on `T²`, as the algebraic mapping torus of
/// the fibre cochains: `M^k = C^k(T²) ⊕ C^{k−1}(T²)`, `d(x, y) = (0, (t·A^*_k − 1) x)`.
/// Cells: `[v]`, `[e_t, a, b]`, `[F, P_a, P_b]`, `[W]`. The fibre carries the trivial twist.
pub fn mapping_torus_cells(a: [[i64; 2]; 2]) -> Result<CellComplex, ComplexError> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() != 1 {
        return Err(ComplexError::InvalidInput(format!("monodromy must have |det| = 1, got {det}")));
    }
    let trace = a[0][0] + a[1][1];
    if trace.abs() <= 2 {
        return Err(ComplexError::NotHyperbolic { trace });
    }
    let d0 = vec![term(0, 0, 1, "t"), term(0, 0, -1, "1")];
    let mut d1 = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            // row P_i, column of fibre edge j: t·A^T − 1
            if a[j][i] != 0 {
                d1.push(term(1 + i, 1 + j, a[j][i], "t"));
            }
        }
        d1.push(term(1 + i, 1 + i, -1, "1"));
    }
    let d2 = vec![term(0, 0, det, "t"), term(0, 0, -1, "1")];
    CellComplex::new(vec![1, 3, 3, 1], vec![d0, d1, d2], vec!["t".into()])
}

/// Mapping-torus complex twisted by `t ↦ e^{iθ}` on the suspension generator.
pub fn mapping_torus_complex(a: [[i64; 2]; 2], theta: f64) -> Result<TwistedComplex, ComplexError> {
    let cc = mapping_torus_cells(a)?;
    let rep = UnitaryRep::characters(&[("t", theta)], vec![])?;
    build_twisted_complex(&cc, &rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cis};
    use std::f64::consts::PI;

    #[test]
    fn circle_at_pi() {
        let tc = circle_complex(PI);
        assert!((tc.differential(0)[(0, 0)] - c(-2.0, 0.0)).norm() < 1e-15);
        assert_eq!(tc.betti_numbers(), vec![0, 0]);
        assert_eq!(circle_complex(0.0).betti_numbers(), vec![1, 1]);
    }

    #[test]
    fn torus_with_character_i_1_is_acyclic() {
        let tc = torus_complex(PI / 2.0, 0.0);
        // oracle: rank of d_0 is 1 since ρ(a) − 1 = i − 1 ≠ 0, and rank d_1 = 1 likewise
        assert_eq!(tc.ranks(), vec![1, 1]);
        assert_eq!(tc.betti_numbers(), vec![0, 0, 0]);
        assert_eq!(torus_complex(0.0, 0.0).betti_numbers(), vec![1, 2, 1]);
    }

    #[test]
    fn mapping_torus_betti() {
        let cat = [[2, 1], [1, 1]];
        assert_eq!(mapping_torus_complex(cat, PI).unwrap().betti_numbers(), vec![0, 0, 0, 0]);
        assert!(!mapping_torus_complex(cat, 0.0).unwrap().is_acyclic());
        assert_eq!(mapping_torus_complex([[1, 1], [0, 1]], PI).unwrap_err(), ComplexError::NotHyperbolic { trace: 2 });
        assert!(mapping_torus_complex([[2, 0], [0, 1]], PI).is_err());
    }

    #[test]
    fn mapping_torus_differential_entries() {
        let tc = mapping_torus_complex([[2, 1], [1, 1]], PI / 3.0).unwrap();
        let z = cis(PI / 3.0);
        let d1 = tc.differential(1);
        assert!((d1[(1, 1)] - (z * 2.0 - 1.0)).norm() < 1e-15);
        assert!((d1[(2, 1)] - z).norm() < 1e-15);
        assert!(d1.column(0).iter().all(|x| x.norm() == 0.0));
        assert!((tc.differential(2)[(0, 0)] - (z - 1.0)).norm() < 1e-15);
    }
}

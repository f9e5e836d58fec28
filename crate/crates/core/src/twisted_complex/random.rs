//! Random acyclic twisted complexes.
//!
//! A random integer cochain complex `C` (elementary pieces `x ↦ m·y` plus
//! cohomology cells, conjugated by unimodular matrices) and a random integer
//! cochain map `f` give the algebraic mapping torus
//! `M^k = C^k ⊕ C^{k−1}`, `d(x, y) = (dx, (t·f − 1)x − dy)`, twisted by a random
//! unitary image of `t`. Samples that are not acyclic or are badly conditioned
//! are redrawn.

use std::collections::BTreeMap;

use rand::Rng;

use super::{build_twisted_complex, CellComplex, ComplexError, IncidenceTerm, TwistedComplex, UnitaryRep, Word};
use crate::linalg::{c, random_gaussian, random_unitary, singular_values, CMat};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomComplexConfig {
    pub min_top_degree: usize,
    pub max_top_degree: usize,
    pub max_cells: usize,
    pub max_rank: usize,
    /// Draw random Gram matrices instead of the identity.
    pub random_metric: bool,
    /// Smallest accepted ratio of nonzero singular values of each `d_k`.
    pub min_conditioning: f64,
}

impl Default for RandomComplexConfig {
    fn default() -> Self {
        RandomComplexConfig {
            min_top_degree: 2,
            max_top_degree: 5,
            max_cells: 6,
            max_rank: 2,
            random_metric: false,
            min_conditioning: 1e-2,
        }
    }
}

type IMat = Vec<Vec<i64>>;

fn zeros(r: usize, c: usize) -> IMat {
    vec![vec![0; c]; r]
}

fn mul(a: &IMat, b: &IMat, inner: usize, cols: usize) -> IMat {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|l| row[l] * b[l][j]).sum()).collect())
        .collect()
}

fn add(a: &IMat, b: &IMat) -> IMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

/// Random unimodular matrix and its inverse, as a product of elementary operations.
fn unimodular<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (IMat, IMat) {
    let mut p = zeros(n, n);
    let mut q = zeros(n, n);
    for i in 0..n {
        p[i][i] = 1;
        q[i][i] = 1;
    }
    if n < 2 {
        return (p, q);
    }
    for _ in 0..n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s: i64 = if rng.random_bool(0.5) { 1 } else { -1 };
        // P ← (I + s e_ij) P, Q ← Q (I − s e_ij)
        for col in 0..n {
            p[i][col] += s * p[j][col];
        }
        for row in 0..n {
            q[row][j] -= s * q[row][i];
        }
    }
    (p, q)
}

struct IntegerComplex {
    counts: Vec<usize>,
    d: Vec<IMat>,
    f: Vec<IMat>,
}

fn random_integer_complex<R: Rng + ?Sized>(top: usize, max_cells: usize, rng: &mut R) -> IntegerComplex {
    // C has degrees 0..top-1; M^k = C^k ⊕ C^{k-1} needs c_k + c_{k-1} ≤ max_cells
    loop {
        let homology: Vec<usize> = (0..top).map(|_| rng.random_range(0..=2)).collect();
        let pieces: Vec<usize> = (0..top).map(|k| if k + 1 < top { rng.random_range(0..=2) } else { 0 }).collect();
        let counts: Vec<usize> = (0..top)
            .map(|k| homology[k] + pieces[k] + if k > 0 { pieces[k - 1] } else { 0 })
            .collect();
        let fits = (0..=top).all(|k| {
            let a = counts.get(k).copied().unwrap_or(0);
            let b = if k > 0 { counts[k - 1] } else { 0 };
            a + b <= max_cells
        });
        if !fits || counts[0] == 0 || counts[top - 1] == 0 {
            continue;
        }
        // layout in degree k: [homology, sources of pieces k, targets of pieces k-1]
        let src = |k: usize, i: usize| homology[k] + i;
        let tgt = |k: usize, i: usize| homology[k] + pieces[k] + i;
        let mut d = Vec::new();
        let mut f: Vec<IMat> = counts.iter().map(|&n| zeros(n, n)).collect();
        for k in 0..top.saturating_sub(1) {
            let mut m = zeros(counts[k + 1], counts[k]);
            for i in 0..pieces[k] {
                let mult = [1, -1, 2, 3][rng.random_range(0..4)];
                m[tgt(k + 1, i)][src(k, i)] = mult;
                let a = rng.random_range(-2..=2);
                f[k][src(k, i)][src(k, i)] = a;
                f[k + 1][tgt(k + 1, i)][tgt(k + 1, i)] = a;
            }
            d.push(m);
        }
        for k in 0..top {
            for i in 0..homology[k] {
                for j in 0..homology[k] {
                    f[k][i][j] = rng.random_range(-2..=2);
                }
                // cocycles that are coboundaries may be added freely
                if k > 0 {
                    for p in 0..pieces[k - 1] {
                        f[k][tgt(k, p)][i] = rng.random_range(-1..=1);
                    }
                }
            }
        }
        // homotopy term dK + Kd keeps f a cochain map
        for k in 0..top {
            if k == 0 {
                continue;
            }
            let mut kmat = zeros(counts[k - 1], counts[k]);
            for row in kmat.iter_mut() {
                for x in row.iter_mut() {
                    if rng.random_bool(0.3) {
                        *x = rng.random_range(-1..=1);
                    }
                }
            }
            // K: C^k → C^{k-1}; contributes d_{k-1} K to f_k and K d_{k-1} to f_{k-1}
            let dk = mul(&d[k - 1], &kmat, counts[k - 1], counts[k]);
            f[k] = add(&f[k], &dk);
            let kd = mul(&kmat, &d[k - 1], counts[k], counts[k - 1]);
            f[k - 1] = add(&f[k - 1], &kd);
        }
        let (p, q): (Vec<IMat>, Vec<IMat>) = counts.iter().map(|&n| unimodular(n, rng)).unzip();
        let d = d
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let pm = mul(&p[k + 1], m, counts[k + 1], counts[k]);
                mul(&pm, &q[k], counts[k], counts[k])
            })
            .collect();
        let f = f
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let pm = mul(&p[k], m, counts[k], counts[k]);
                mul(&pm, &q[k], counts[k], counts[k])
            })
            .collect();
        return IntegerComplex { counts, d, f };
    }
}

/// Cells of the algebraic mapping torus of `f` on `C`, with generator `t`.
fn mapping_torus_of(ic: &IntegerComplex) -> Result<CellComplex, ComplexError> {
    let top = ic.counts.len();
    let cnt = |k: isize| if k < 0 || k as usize >= top { 0 } else { ic.counts[k as usize] };
    let cells: Vec<usize> = (0..=top as isize).map(|k| cnt(k) + cnt(k - 1)).collect();
    let mut coboundary = Vec::new();
    for k in 0..top {
        let ki = k as isize;
        let off_row = cnt(ki + 1);
        let off_col = cnt(ki);
        let mut terms = Vec::new();
        if k + 1 < top {
            for (i, row) in ic.d[k].iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if v != 0 {
                        terms.push(IncidenceTerm::new(i, j, v, Word::identity()));
                    }
                }
            }
        }
        for (i, row) in ic.f[k].iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    terms.push(IncidenceTerm::new(off_row + i, j, v, Word::generator("t")));
                }
            }
            terms.push(IncidenceTerm::new(off_row + i, i, -1, Word::identity()));
        }
        if k > 0 {
            for (i, row) in ic.d[k - 1].iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if v != 0 {
                        terms.push(IncidenceTerm::new(off_row + i, off_col + j, -v, Word::identity()));
                    }
                }
            }
        }
        coboundary.push(terms);
    }
    CellComplex::new(cells, coboundary, vec!["t".into()])
}

fn well_conditioned(tc: &TwistedComplex, min_ratio: f64) -> bool {
    (0..tc.top_degree()).all(|k| {
        let sv = singular_values(tc.orthonormal_differential(k));
        let Some(&top) = sv.first() else { return true };
        let r = crate::linalg::rank(tc.orthonormal_differential(k));
        r == 0 || sv[r - 1] >= min_ratio * top
    })
}

fn random_gram<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = random_gaussian(n, n, rng) * c(0.3, 0.0);
    &g * g.adjoint() + CMat::identity(n, n)
}

/// Draws an acyclic twisted complex according to `cfg`.
pub fn random_acyclic_complex<R: Rng + ?Sized>(cfg: &RandomComplexConfig, rng: &mut R) -> TwistedComplex {
    loop {
        let top = rng.random_range(cfg.min_top_degree..=cfg.max_top_degree);
        let ic = random_integer_complex(top, cfg.max_cells, rng);
        let Ok(cc) = mapping_torus_of(&ic) else { continue };
        let rank = rng.random_range(1..=cfg.max_rank);
        let images: BTreeMap<String, CMat> = [("t".to_string(), random_unitary(rank, rng))].into_iter().collect();
        let Ok(rep) = UnitaryRep::new(rank, images, vec![]) else { continue };
        let Ok(mut tc) = build_twisted_complex(&cc, &rep) else { continue };
        if cfg.random_metric {
            let grams = tc.dims().iter().map(|&n| random_gram(n, rng)).collect();
            let Ok(with) = tc.with_gram(grams) else { continue };
            tc = with;
        }
        if tc.is_acyclic() && well_conditioned(&tc, cfg.min_conditioning) {
            return tc;
        }
    }
}

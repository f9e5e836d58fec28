//! Polynomials in Darboux coordinates `(x_i, ξ_i)`, `x_i` even and `ξ_i` odd, with the
//! odd Laplacian `Δ = Σ_i ∂_{x_i} ∂_{ξ_i}` (left derivatives, so `Δ(x ξ) = +1`) and the
//! bracket `{f, g} = Σ_i ∂_{x_i} f ∂_{ξ_i} g + (−1)^{|f|} ∂_{ξ_i} f ∂_{x_i} g`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::BvError;

pub const DEFAULT_MAX_DEGREE: usize = 4;
const MAX_PAIRS: usize = 64;

/// `Π x_i^{x[i]} · ξ_{j_1} ⋯ ξ_{j_m}` with `j_1 < … < j_m` the set bits of `xi`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub x: Vec<u8>,
    pub xi: u64,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { x: vec![0; n], xi: 0 }
    }

    pub fn degree(&self) -> usize {
        self.x.iter().map(|&e| e as usize).sum::<usize>() + self.xi.count_ones() as usize
    }

    pub fn parity(&self) -> u8 {
        (self.xi.count_ones() % 2) as u8
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyObservable {
    pub pairs: usize,
    pub max_degree: usize,
    pub terms: BTreeMap<Monomial, Complex64>,
}

fn sign(odd: bool) -> f64 {
    if odd {
        -1.0
    } else {
        1.0
    }
}

impl PolyObservable {
    pub fn zero(pairs: usize, max_degree: usize) -> Self {
        assert!(pairs <= MAX_PAIRS, "at most {MAX_PAIRS} Darboux pairs");
        PolyObservable { pairs, max_degree, terms: BTreeMap::new() }
    }

    pub fn constant(pairs: usize, max_degree: usize, c: Complex64) -> Self {
        let mut p = PolyObservable::zero(pairs, max_degree);
        p.add_term(Monomial::one(pairs), c);
        p
    }

    pub fn x(pairs: usize, max_degree: usize, i: usize) -> Self {
        let mut m = Monomial::one(pairs);
        m.x[i] = 1;
        let mut p = PolyObservable::zero(pairs, max_degree);
        p.add_term(m, Complex64::new(1.0, 0.0));
        p
    }

    pub fn xi(pairs: usize, max_degree: usize, i: usize) -> Self {
        let mut m = Monomial::one(pairs);
        m.xi = 1 << i;
        let mut p = PolyObservable::zero(pairs, max_degree);
        p.add_term(m, Complex64::new(1.0, 0.0));
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Complex64) {
        let entry = self.terms.entry(m).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn check_degree(&self) -> Result<(), BvError> {
        let degree = self.degree();
        if degree > self.max_degree {
            return Err(BvError::DegreeOverflow { degree, max: self.max_degree });
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Component of parity `p`.
    pub fn part(&self, p: u8) -> PolyObservable {
        let mut out = PolyObservable::zero(self.pairs, self.max_degree);
        out.terms = self.terms.iter().filter(|(m, _)| m.parity() == p).map(|(m, c)| (m.clone(), *c)).collect();
        out
    }

    /// Parity of a homogeneous polynomial; `None` if mixed. Zero counts as even.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next().unwrap_or(0);
        it.all(|p| p == first).then_some(first)
    }

    pub fn add(&self, other: &PolyObservable) -> PolyObservable {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> PolyObservable {
        let mut out = PolyObservable::zero(self.pairs, self.max_degree);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &PolyObservable) -> PolyObservable {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Graded-commutative product; errors if the result exceeds the degree bound.
    pub fn mul(&self, other: &PolyObservable) -> Result<PolyObservable, BvError> {
        let mut out = PolyObservable::zero(self.pairs, self.max_degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.xi & m2.xi != 0 {
                    continue;
                }
                // moving each ξ of m2 past the larger ξ's of m1
                let swaps: u32 = (0..MAX_PAIRS)
                    .filter(|&j| m2.xi >> j & 1 == 1)
                    .map(|j| if j + 1 >= 64 { 0 } else { (m1.xi >> (j + 1)).count_ones() })
                    .sum();
                let x = m1.x.iter().zip(&m2.x).map(|(a, b)| a + b).collect();
                out.add_term(Monomial { x, xi: m1.xi | m2.xi }, c1 * c2 * sign(swaps % 2 == 1));
            }
        }
        out.check_degree()?;
        Ok(out)
    }

    pub fn d_x(&self, i: usize) -> PolyObservable {
        let mut out = PolyObservable::zero(self.pairs, self.max_degree);
        for (m, c) in &self.terms {
            if m.x[i] > 0 {
                let mut m2 = m.clone();
                m2.x[i] -= 1;
                out.add_term(m2, c * f64::from(m.x[i]));
            }
        }
        out
    }

    /// Left derivative in `ξ_i`.
    pub fn d_xi(&self, i: usize) -> PolyObservable {
        let mut out = PolyObservable::zero(self.pairs, self.max_degree);
        for (m, c) in &self.terms {
            if m.xi >> i & 1 == 1 {
                let before = (m.xi & ((1u64 << i) - 1)).count_ones();
                let mut m2 = m.clone();
                m2.xi &= !(1u64 << i);
                out.add_term(m2, c * sign(before % 2 == 1));
            }
        }
        out
    }

    pub fn bv_laplacian(&self) -> Result<PolyObservable, BvError> {
        self.check_degree()?;
        let mut out = PolyObservable::zero(self.pairs, self.max_degree);
        for i in 0..self.pairs {
            out = out.add(&self.d_xi(i).d_x(i));
        }
        Ok(out)
    }

    /// `{f, g}`, extended by linearity over the parity components of `f`.
    pub fn bracket(&self, g: &PolyObservable) -> Result<PolyObservable, BvError> {
        let mut out = PolyObservable::zero(self.pairs, self.max_degree);
        for p in [0u8, 1] {
            let f = self.part(p);
            if f.is_zero() {
                continue;
            }
            for i in 0..self.pairs {
                out = out.add(&f.d_x(i).mul(&g.d_xi(i))?);
                out = out.add(&f.d_xi(i).mul(&g.d_x(i))?.scale(Complex64::new(sign(p == 1), 0.0)));
            }
        }
        out.check_degree()?;
        Ok(out)
    }
}

/// Random polynomial with Gaussian coefficients on random monomials of degree ≤ `degree`,
/// restricted to parity `parity` when given.
pub fn random_poly<R: Rng + ?Sized>(
    pairs: usize,
    max_degree: usize,
    degree: usize,
    parity: Option<u8>,
    terms: usize,
    rng: &mut R,
) -> PolyObservable {
    let mut p = PolyObservable::zero(pairs, max_degree);
    let mut added = 0;
    while added < terms {
        let target = rng.random_range(0..=degree);
        let mut m = Monomial::one(pairs);
        for _ in 0..target {
            let i = rng.random_range(0..pairs);
            if rng.random_bool(0.5) {
                m.x[i] += 1;
            } else {
                m.xi |= 1 << i;
            }
        }
        if parity.is_some_and(|q| m.parity() != q) {
            continue;
        }
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        p.add_term(m, Complex64::new(re, im));
        added += 1;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn defining_cases() {
        let x = PolyObservable::x(1, 4, 0);
        let xi = PolyObservable::xi(1, 4, 0);
        let lap = x.mul(&xi).unwrap().bv_laplacian().unwrap();
        assert_eq!(lap, PolyObservable::constant(1, 4, one()));
        assert!(x.mul(&x).unwrap().bv_laplacian().unwrap().is_zero());
        assert!(xi.mul(&xi).unwrap().is_zero());
    }

    #[test]
    fn odd_variables_anticommute() {
        let a = PolyObservable::xi(2, 4, 0);
        let b = PolyObservable::xi(2, 4, 1);
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert_eq!(ab.add(&ba), PolyObservable::zero(2, 4));
        assert!(!ab.is_zero());
    }

    #[test]
    fn degree_bound_is_enforced() {
        let x = PolyObservable::x(1, 2, 0);
        let x2 = x.mul(&x).unwrap();
        assert_eq!(x2.mul(&x).unwrap_err(), BvError::DegreeOverflow { degree: 3, max: 2 });
        let mut big = PolyObservable::zero(1, 2);
        big.add_term(Monomial { x: vec![3], xi: 0 }, one());
        assert!(big.bv_laplacian().is_err());
    }

    #[test]
    fn laplacian_squares_to_zero_on_monomials() {
        let n = 3;
        let mut count = 0;
        for mask in 0..(1u64 << n) {
            for a in 0..=2u8 {
                for b in 0..=2u8 {
                    let m = Monomial { x: vec![a, b, 0], xi: mask };
                    if m.degree() > DEFAULT_MAX_DEGREE {
                        continue;
                    }
                    let mut p = PolyObservable::zero(n, DEFAULT_MAX_DEGREE);
                    p.add_term(m, one());
                    assert!(p.bv_laplacian().unwrap().bv_laplacian().unwrap().is_zero());
                    count += 1;
                }
            }
        }
        assert!(count > 20);
    }

    #[test]
    fn bv_algebra_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let pf = rng.random_range(0..2u8);
            let f = random_poly(3, 4, 2, Some(pf), 3, &mut rng);
            let g = random_poly(3, 4, 2, None, 3, &mut rng);
            let s = Complex64::new(sign(pf == 1), 0.0);
            let lhs = f.mul(&g).unwrap().bv_laplacian().unwrap();
            let rhs = f
                .bv_laplacian()
                .unwrap()
                .mul(&g)
                .unwrap()
                .add(&f.mul(&g.bv_laplacian().unwrap()).unwrap().scale(s))
                .add(&f.bracket(&g).unwrap().scale(s));
            assert!(lhs.sub(&rhs).max_coefficient() < 1e-12);
            let lhs = f.bracket(&g).unwrap().bv_laplacian().unwrap();
            let rhs = f
                .bv_laplacian()
                .unwrap()
                .bracket(&g)
                .unwrap()
                .add(&f.bracket(&g.bv_laplacian().unwrap()).unwrap().scale(-s));
            assert!(lhs.sub(&rhs).max_coefficient() < 1e-12);
        }
    }
}

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{OrbitError, OrbitRecord, ToralAutomorphism};

type Mat2 = [[BigInt; 2]; 2];

fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_pow(a: [[i64; 2]; 2], j: u32) -> Mat2 {
    let mut base: Mat2 = a.map(|row| row.map(BigInt::from));
    let mut acc: Mat2 = [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
    let mut e = j;
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        base = mat_mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Number of fixed points of `A^j` on the torus, `|det(A^j − I)|`, in exact arithmetic.
pub fn count_fixed_points(a: [[i64; 2]; 2], j: u32) -> Result<BigUint, OrbitError> {
    ToralAutomorphism::new(a)?;
    if j == 0 {
        return Err(OrbitError::InvalidPeriod);
    }
    let p = mat_pow(a, j);
    let det = &p[0][0] * &p[1][1] - &p[0][1] * &p[1][0];
    let trace = &p[0][0] + &p[1][1];
    let value = det - trace + BigInt::one();
    Ok(value.abs().to_biguint().expect("absolute value is non-negative"))
}

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Primitive orbit counts `N(j)` for `j = 1..=j_max`, from `Σ_{d|j} d·N(d) = |det(A^j − I)|`.
pub fn primitive_counts(a: [[i64; 2]; 2], j_max: u32) -> Result<Vec<u128>, OrbitError> {
    let fixed: Vec<BigInt> =
        (1..=j_max).map(|j| count_fixed_points(a, j).map(BigInt::from)).collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let mut acc = BigInt::zero();
        for d in (1..=j).filter(|d| j % d == 0) {
            acc += BigInt::from(mobius(j / d)) * &fixed[d as usize - 1];
        }
        let (q, r) = (&acc / BigInt::from(j), &acc % BigInt::from(j));
        debug_assert!(r.is_zero() && !q.is_negative());
        out.push(q.to_u128().ok_or(OrbitError::Overflow { period: j })?);
    }
    Ok(out)
}

/// One record per period with at least one primitive orbit, ordered by period.
pub fn enumerate_primitive_orbits(map: &ToralAutomorphism, j_max: u32) -> Result<Vec<OrbitRecord>, OrbitError> {
    let (mu, nu) = map.eigenvalues();
    let counts = primitive_counts(map.a, j_max)?;
    Ok(counts
        .iter()
        .zip(1..)
        .filter(|(&n, _)| n > 0)
        .map(|(&count, j): (&u128, u32)| OrbitRecord {
            period: j,
            length: f64::from(j) * map.roof,
            count,
            primitive: true,
            poincare_eigs: (mu.powi(j as i32), nu.powi(j as i32)),
            winding: i64::from(j),
            holonomy: None,
        })
        .collect())
}

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::GradedError;
use crate::linalg::{rank, CMat};

/// Finite-dimensional `Z`-graded vector space. The parity of a degree-`k`
/// element is `(k + shift) mod 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVectorSpace {
    pub dims: BTreeMap<i32, usize>,
    pub shift: i32,
}

impl GradedVectorSpace {
    pub fn new(dims: BTreeMap<i32, usize>, shift: i32) -> Self {
        GradedVectorSpace { dims, shift }
    }

    pub fn from_dims(dims: &[usize]) -> Self {
        let dims = dims.iter().enumerate().map(|(k, &d)| (k as i32, d)).collect();
        GradedVectorSpace { dims, shift: 0 }
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn parity(&self, degree: i32) -> u8 {
        (degree + self.shift).rem_euclid(2) as u8
    }

    /// Same underlying space with every parity flipped `by` times.
    pub fn shifted(&self, by: i32) -> Self {
        GradedVectorSpace { dims: self.dims.clone(), shift: self.shift + by }
    }

    /// Alternating sum of dimensions by parity.
    pub fn super_dimension(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&k, &d)| if self.parity(k) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// A degree-`degree_shift` linear map between graded spaces, stored block by block:
/// `blocks[k]` maps degree `k` of the source to degree `k + degree_shift` of the target.
#[derive(Debug, Clone)]
pub struct GradedOperator {
    pub blocks: BTreeMap<i32, CMat>,
    pub source: GradedVectorSpace,
    pub target: GradedVectorSpace,
    pub degree_shift: i32,
}

impl GradedOperator {
    pub fn new(
        blocks: BTreeMap<i32, CMat>,
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        degree_shift: i32,
    ) -> Result<Self, GradedError> {
        let degrees: Vec<i32> = source.dims.keys().chain(blocks.keys()).copied().collect();
        for k in degrees {
            let rows = target.dim(k + degree_shift);
            let cols = source.dim(k);
            match blocks.get(&k) {
                Some(b) if b.shape() != (rows, cols) => {
                    return Err(GradedError::ShapeMismatch {
                        degree: k,
                        expected: (rows, cols),
                        found: b.shape(),
                    })
                }
                None if rows * cols != 0 => {
                    return Err(GradedError::ShapeMismatch {
                        degree: k,
                        expected: (rows, cols),
                        found: (0, 0),
                    })
                }
                _ => {}
            }
        }
        Ok(GradedOperator { blocks, source, target, degree_shift })
    }

    /// Degree-preserving endomorphism from square blocks.
    pub fn diagonal(blocks: BTreeMap<i32, CMat>, shift: i32) -> Result<Self, GradedError> {
        let dims = blocks.iter().map(|(&k, b)| (k, b.ncols())).collect();
        let space = GradedVectorSpace::new(dims, shift);
        GradedOperator::new(blocks, space.clone(), space, 0)
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let blocks = space.dims.iter().map(|(&k, &d)| (k, CMat::identity(d, d))).collect();
        GradedOperator { blocks, source: space.clone(), target: space.clone(), degree_shift: 0 }
    }

    pub fn block(&self, degree: i32) -> CMat {
        self.blocks.get(&degree).cloned().unwrap_or_else(|| {
            CMat::zeros(self.target.dim(degree + self.degree_shift), self.source.dim(degree))
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedOperator) -> Result<GradedOperator, GradedError> {
        if other.target != self.source {
            return Err(GradedError::IncompatibleComposition);
        }
        let mut blocks = BTreeMap::new();
        for &k in other.source.dims.keys() {
            blocks.insert(k, self.block(k + other.degree_shift) * other.block(k));
        }
        GradedOperator::new(
            blocks,
            other.source.clone(),
            self.target.clone(),
            self.degree_shift + other.degree_shift,
        )
    }

    /// Same blocks, parities of both spaces flipped `by` times.
    pub fn shifted(&self, by: i32) -> GradedOperator {
        GradedOperator {
            blocks: self.blocks.clone(),
            source: self.source.shifted(by),
            target: self.target.shifted(by),
            degree_shift: self.degree_shift,
        }
    }
}

/// Superdeterminant `Π_k det(block_k)^{(-1)^{(k + shift) mod 2}}` of a degree-preserving
/// operator. Parities are taken modulo 2.
pub fn sdet(op: &GradedOperator) -> Result<Complex64, GradedError> {
    if op.degree_shift != 0 {
        return Err(GradedError::NotDegreePreserving(op.degree_shift));
    }
    let mut value = Complex64::new(1.0, 0.0);
    for (&k, &d) in op.source.dims.iter() {
        let b = op.block(k);
        if b.nrows() != b.ncols() {
            return Err(GradedError::ShapeMismatch {
                degree: k,
                expected: (d, d),
                found: b.shape(),
            });
        }
        if d == 0 {
            continue;
        }
        if rank(&b) < d {
            return Err(GradedError::SingularBlock(k));
        }
        let det = b.determinant();
        if op.source.parity(k) == 0 {
            value *= det;
        } else {
            value /= det;
        }
    }
    Ok(value)
}

//! Exact integer vectors and their canonical directions.
//!
//! Two nonzero integer vectors are collinear exactly when they reduce to the
//! same [`Direction`]: divide by the gcd of the absolute values, then flip the
//! sign so that the first nonzero coordinate is positive.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{MintsError, Result};

/// Vector of exact signed integers, one coordinate per weighing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(pub Vec<i128>);

impl IntVector {
    pub fn zeros(k: usize) -> Self {
        IntVector(vec![0; k])
    }

    pub fn coords(&self) -> &[i128] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn checked_add(&self, other: &IntVector) -> Result<IntVector> {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                a.checked_add(*b)
                    .ok_or_else(|| MintsError::overflow("vector sum"))
            })
            .collect::<Result<Vec<_>>>()
            .map(IntVector)
    }

    pub fn checked_scale(&self, t: i128) -> Result<IntVector> {
        self.0
            .iter()
            .map(|a| {
                a.checked_mul(t)
                    .ok_or_else(|| MintsError::overflow("vector scaling"))
            })
            .collect::<Result<Vec<_>>>()
            .map(IntVector)
    }
}

impl From<Vec<i128>> for IntVector {
    fn from(v: Vec<i128>) -> Self {
        IntVector(v)
    }
}

/// Primitive, sign-canonical integer vector: the collinearity class of a
/// nonzero vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(Vec<i128>);

impl Direction {
    pub fn coords(&self) -> &[i128] {
        &self.0
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Reduces a nonzero vector to its canonical direction.
pub fn canonical_direction(v: &IntVector) -> Result<Direction> {
    let g = v.0.iter().fold(0u128, |g, &x| g.gcd(&x.unsigned_abs()));
    if g == 0 {
        return Err(MintsError::ZeroVector);
    }
    let negative = v.0.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
    let coords =
        v.0.iter()
            .map(|&x| {
                // |x| / g fits in i128 unless x = i128::MIN and g = 1.
                let q = i128::try_from(x.unsigned_abs() / g)
                    .map_err(|_| MintsError::overflow("direction reduction"))?;
                let positive = (x >= 0) != negative;
                Ok(if positive { q } else { -q })
            })
            .collect::<Result<Vec<_>>>()?;
    Ok(Direction(coords))
}

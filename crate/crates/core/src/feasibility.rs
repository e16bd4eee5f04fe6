//! Feasibility of a scheme: every non-empty set of fake mints must produce a
//! reading whose direction differs from every other set's.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::direction::{canonical_direction, Direction, IntVector};
use crate::error::{MintsError, Result};
use crate::scheme::{Scheme, SubsetMask};

/// Outcome of a feasibility check. When infeasible, `witness` holds two
/// distinct subsets that the weighings cannot tell apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(SubsetMask, SubsetMask)>,
}

impl FeasibilityReport {
    pub fn feasible() -> Self {
        FeasibilityReport {
            feasible: true,
            witness: None,
        }
    }

    /// Infeasible report; the pair is stored with the smaller mask first.
    pub fn collision(a: SubsetMask, b: SubsetMask) -> Self {
        FeasibilityReport {
            feasible: false,
            witness: Some((a.min(b), a.max(b))),
        }
    }
}

/// Componentwise sum of the weighing vectors of the mints in `mask`.
pub fn subset_sum(scheme: &Scheme, mask: SubsetMask) -> Result<IntVector> {
    if !mask.fits(scheme.n_mints()) {
        return Err(MintsError::InvalidScheme(format!(
            "mask {mask} refers to mints beyond {}",
            scheme.n_mints()
        )));
    }
    scheme
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|&(r, _)| mask.contains(r))
                .try_fold(0i128, |acc, (_, &x)| acc.checked_add(i128::from(x)))
                .ok_or_else(|| MintsError::overflow("subset sum"))
        })
        .collect::<Result<Vec<_>>>()
        .map(IntVector)
}

/// All `2^n` subset sums, indexed by mask. Built incrementally: the sum for a
/// mask is the sum for the mask without its lowest mint plus that mint's column.
pub(crate) fn all_subset_sums(scheme: &Scheme) -> Result<Vec<IntVector>> {
    scheme.check_enumerable()?;
    let n = scheme.n_mints();
    let k = scheme.n_rows();
    let columns: Vec<IntVector> = scheme
        .columns()
        .map(|c| IntVector(c.into_iter().map(i128::from).collect()))
        .collect();
    let mut sums = Vec::with_capacity(1 << n);
    sums.push(IntVector::zeros(k));
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        let s = sums[mask & (mask - 1)].checked_add(&columns[low])?;
        sums.push(s);
    }
    Ok(sums)
}

/// Checks that the canonical directions of all non-empty subset sums are
/// pairwise distinct. On failure the witness is the colliding pair
/// `(m1, m2)`, `m1 < m2`, that is smallest in lexicographic order.
pub fn verify_scheme(scheme: &Scheme) -> Result<FeasibilityReport> {
    let sums = all_subset_sums(scheme)?;
    // direction -> (smallest mask, second smallest mask)
    let mut classes: FxHashMap<Direction, (u64, Option<u64>)> = FxHashMap::default();
    classes.reserve(sums.len());
    for (mask, s) in sums.iter().enumerate().skip(1) {
        let d = canonical_direction(s)?;
        classes
            .entry(d)
            .and_modify(|e| {
                if e.1.is_none() {
                    e.1 = Some(mask as u64);
                }
            })
            .or_insert((mask as u64, None));
    }
    let witness = classes
        .values()
        .filter_map(|&(a, b)| b.map(|b| (a, b)))
        .min();
    Ok(match witness {
        None => FeasibilityReport::feasible(),
        Some((a, b)) => FeasibilityReport::collision(SubsetMask(a), SubsetMask(b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> Scheme {
        Scheme::two_weighings(vec![0, 1, 2], vec![1, 1, 0]).unwrap()
    }

    fn mask(m: &[usize]) -> SubsetMask {
        SubsetMask::from_mints(m).unwrap()
    }

    #[test]
    fn subset_sum_examples() {
        let s = worked();
        assert_eq!(subset_sum(&s, mask(&[2, 3])).unwrap().0, vec![3, 1]);
        assert_eq!(subset_sum(&s, SubsetMask::EMPTY).unwrap().0, vec![0, 0]);
        assert_eq!(subset_sum(&s, mask(&[1])).unwrap().0, vec![0, 1]);
        assert!(subset_sum(&s, mask(&[4])).is_err());
    }

    #[test]
    fn worked_scheme_is_feasible() {
        assert_eq!(
            verify_scheme(&worked()).unwrap(),
            FeasibilityReport::feasible()
        );
    }

    #[test]
    fn unit_vectors_and_diagonal_collide() {
        let s = Scheme::from_columns(&[[1u64, 0], [0, 1], [1, 1]]).unwrap();
        let report = verify_scheme(&s).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.witness, Some((mask(&[1, 2]), mask(&[3]))));
    }

    #[test]
    fn listed_cap_two_vectors_collide() {
        // (0,1) + (2,1) = (2,2) lies on the direction of (1,1).
        let s = Scheme::from_columns(&[[0u64, 1], [1, 1], [2, 1]]).unwrap();
        let report = verify_scheme(&s).unwrap();
        assert_eq!(report.witness, Some((mask(&[2]), mask(&[1, 3]))));
    }

    #[test]
    fn witness_is_lexicographically_smallest_pair() {
        // {2} ~ {3} (masks 2, 4) is met first in mask order, but {1} ~ {2,4}
        // (masks 1, 10) is the smaller pair.
        let s = Scheme::from_columns(&[[1u64, 1], [1, 0], [2, 0], [0, 1]]).unwrap();
        let report = verify_scheme(&s).unwrap();
        assert_eq!(report.witness, Some((SubsetMask(1), SubsetMask(10))));
    }

    #[test]
    fn single_row_schemes() {
        // One weighing: every non-empty sum is positive, so all share a direction.
        let s = Scheme::new(vec![vec![1, 2]]).unwrap();
        assert!(!verify_scheme(&s).unwrap().feasible);
        let s = Scheme::new(vec![vec![5]]).unwrap();
        assert!(verify_scheme(&s).unwrap().feasible);
    }
}

//! Constructive upper bounds and the trivial lower bound on the coins needed.

use crate::error::{MintsError, Result};
use crate::scheme::{Scheme, ENTRY_MAX};

/// Largest `n` accepted by [`bounds`] for the factorial sum.
pub const FACTORIAL_N_MAX: usize = 20;

fn factorial(r: usize) -> Option<u64> {
    (1..=r as u64).try_fold(1u64, |acc, x| acc.checked_mul(x))
}

/// `P_r = r!`, `Q_r = 1`. Always feasible: a subset sum is `(Σ_{r∈K} r!, |K|)`
/// and distinct subsets give distinct ratios.
///
/// Entries must stay within [`ENTRY_MAX`], which limits `n` to 9.
pub fn factorial_scheme(n: usize) -> Result<Scheme> {
    if n == 0 {
        return Err(MintsError::Config("need at least one mint".into()));
    }
    let p = (1..=n)
        .map(|r| {
            factorial(r).filter(|&f| f <= ENTRY_MAX).ok_or_else(|| {
                MintsError::overflow(format!("{r}! exceeds the entry limit {ENTRY_MAX}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Scheme::two_weighings(p, vec![1; n])
}

/// Sum of `r!` for `r = 1..=n`: the TotalMax cost of [`factorial_scheme`].
pub fn factorial_cost(n: usize) -> Result<u64> {
    if n > FACTORIAL_N_MAX {
        return Err(MintsError::overflow(format!("factorial sum for n = {n}")));
    }
    (1..=n)
        .try_fold(0u64, |acc, r| factorial(r).and_then(|f| acc.checked_add(f)))
        .ok_or_else(|| MintsError::overflow(format!("factorial sum for n = {n}")))
}

/// Lower and upper bounds on the optimal TotalMax cost for `n` mints.
///
/// The lower bound is `n` (one coin per mint). The upper bound is the factorial
/// construction, improved to `c·n` when a feasible scheme with every entry at
/// most `c` is known for `m ≥ n` mints: dropping `m - n` of its mints keeps it
/// feasible and leaves at most `c` coins per mint.
pub fn bounds(n: usize, capacity_witness: Option<(u64, usize)>) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(MintsError::Config("need at least one mint".into()));
    }
    let mut upper = factorial_cost(n).ok();
    if let Some((c, m)) = capacity_witness {
        if c == 0 {
            return Err(MintsError::Config("capacity must be positive".into()));
        }
        if m < n {
            return Err(MintsError::Config(format!(
                "capacity witness covers {m} mints, fewer than {n}"
            )));
        }
        let cn = c
            .checked_mul(n as u64)
            .ok_or_else(|| MintsError::overflow("capacity bound"))?;
        upper = Some(upper.map_or(cn, |u| u.min(cn)));
    }
    let upper = upper.ok_or_else(|| MintsError::overflow(format!("factorial sum for n = {n}")))?;
    Ok((n as u64, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{cost, CostKind};
    use crate::feasibility::verify_scheme;

    #[test]
    fn factorial_examples() {
        let s = factorial_scheme(3).unwrap();
        assert_eq!(s.row(0), &[1, 2, 6]);
        assert_eq!(s.row(1), &[1, 1, 1]);
        let s = factorial_scheme(1).unwrap();
        assert_eq!(s.rows(), &[vec![1], vec![1]]);
        let s = factorial_scheme(5).unwrap();
        assert!(verify_scheme(&s).unwrap().feasible);
        assert_eq!(cost(&s, CostKind::TotalMax), 153);
    }

    #[test]
    fn factorial_limits() {
        assert!(factorial_scheme(9).is_ok());
        assert!(matches!(factorial_scheme(10), Err(MintsError::Overflow(_))));
        assert!(factorial_scheme(0).is_err());
        assert_eq!(factorial_cost(20).unwrap(), 2_561_327_494_111_820_313);
        assert!(factorial_cost(21).is_err());
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(bounds(3, None).unwrap(), (3, 9));
        assert_eq!(bounds(3, Some((2, 3))).unwrap(), (3, 6));
        assert_eq!(bounds(1, None).unwrap(), (1, 1));
        // The capacity bound keeps large n usable past the factorial range.
        assert_eq!(bounds(30, Some((100, 40))).unwrap(), (30, 3000));
        assert!(bounds(30, None).is_err());
        assert!(bounds(4, Some((2, 3))).is_err());
    }
}

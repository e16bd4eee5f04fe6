//! Slow reference implementations used to cross-check the fast paths.
//!
//! Nothing here calls into the feasibility, direction, cost, or search code:
//! subset sums, cross products, and costs are recomputed from the raw scheme.

use crate::cost::CostKind;
use crate::error::{MintsError, Result};
use crate::feasibility::FeasibilityReport;
use crate::scheme::{Scheme, SubsetMask};

/// Largest number of mints the all-pairs checks accept.
pub const ORACLE_MAX_MINTS: usize = 14;

fn sum_of(scheme: &Scheme, mask: u64) -> Result<Vec<i128>> {
    let mut out = Vec::with_capacity(scheme.n_rows());
    for row in scheme.rows() {
        let mut total = 0i128;
        for (r, &x) in row.iter().enumerate() {
            if mask >> r & 1 == 1 {
                total = total
                    .checked_add(x as i128)
                    .ok_or_else(|| MintsError::overflow("oracle subset sum"))?;
            }
        }
        out.push(total);
    }
    Ok(out)
}

fn check_size(scheme: &Scheme) -> Result<()> {
    if scheme.n_mints() > ORACLE_MAX_MINTS {
        return Err(MintsError::InvalidScheme(format!(
            "oracle handles at most {ORACLE_MAX_MINTS} mints"
        )));
    }
    Ok(())
}

/// Two-weighing feasibility by brute force: every pair of distinct non-empty
/// subsets must have a nonzero 2×2 cross product. Returns the first zero pair
/// in `(mask1, mask2)` order.
pub fn naive_verify(scheme: &Scheme) -> Result<FeasibilityReport> {
    if scheme.n_rows() != 2 {
        return Err(MintsError::InvalidScheme(
            "naive_verify needs exactly two weighings".into(),
        ));
    }
    check_size(scheme)?;
    let total = 1u64 << scheme.n_mints();
    let sums = (0..total)
        .map(|m| sum_of(scheme, m))
        .collect::<Result<Vec<_>>>()?;
    for m1 in 1..total {
        for m2 in m1 + 1..total {
            let (a, b) = (&sums[m1 as usize], &sums[m2 as usize]);
            let lhs = a[0].checked_mul(b[1]);
            let rhs = a[1].checked_mul(b[0]);
            let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
                return Err(MintsError::overflow("oracle cross product"));
            };
            if lhs == rhs {
                return Ok(FeasibilityReport::collision(SubsetMask(m1), SubsetMask(m2)));
            }
        }
    }
    Ok(FeasibilityReport::feasible())
}

/// Known-deviation feasibility by brute force: all `2^n` subset sums,
/// compared pairwise, must differ.
pub fn naive_injective(scheme: &Scheme) -> Result<FeasibilityReport> {
    check_size(scheme)?;
    let total = 1u64 << scheme.n_mints();
    let sums = (0..total)
        .map(|m| sum_of(scheme, m))
        .collect::<Result<Vec<_>>>()?;
    for m1 in 0..total {
        for m2 in m1 + 1..total {
            if sums[m1 as usize] == sums[m2 as usize] {
                return Ok(FeasibilityReport::collision(SubsetMask(m1), SubsetMask(m2)));
            }
        }
    }
    Ok(FeasibilityReport::feasible())
}

fn column_cost(kind: CostKind, col: &[u64]) -> u64 {
    match kind {
        CostKind::TotalMax | CostKind::MaxEntry => col.iter().copied().max().unwrap_or(0),
        CostKind::GrandSum => col.iter().sum(),
    }
}

fn combine(kind: CostKind, acc: u64, c: u64) -> u64 {
    match kind {
        CostKind::MaxEntry => acc.max(c),
        _ => acc + c,
    }
}

/// Every nonzero column with `k` entries in `0..=bound`, in lexicographic order.
fn all_columns(k: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut col = vec![0u64; k];
    loop {
        let mut j = k;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if col[j] < bound {
                col[j] += 1;
                break;
            }
            col[j] = 0;
        }
        out.push(col.clone());
    }
}

/// Multisets of `n` columns from `pool` whose combined cost is exactly
/// `target`; `accept` decides feasibility. Stops at the first accepted scheme.
fn first_at_cost(
    pool: &[Vec<u64>],
    n: usize,
    kind: CostKind,
    target: u64,
    accept: &dyn Fn(&Scheme) -> Result<bool>,
) -> Result<Option<Scheme>> {
    struct Enumeration<'a> {
        pool: &'a [Vec<u64>],
        n: usize,
        kind: CostKind,
        target: u64,
        accept: &'a dyn Fn(&Scheme) -> Result<bool>,
    }

    impl Enumeration<'_> {
        fn rec(&self, start: usize, acc: u64, chosen: &mut Vec<usize>) -> Result<Option<Scheme>> {
            if chosen.len() == self.n {
                if acc != self.target {
                    return Ok(None);
                }
                let cols: Vec<&Vec<u64>> = chosen.iter().map(|&i| &self.pool[i]).collect();
                let scheme = Scheme::from_columns(&cols)?;
                return Ok(if (self.accept)(&scheme)? {
                    Some(scheme)
                } else {
                    None
                });
            }
            let left = (self.n - chosen.len() - 1) as u64;
            for i in start..self.pool.len() {
                let next = combine(self.kind, acc, column_cost(self.kind, &self.pool[i]));
                // Every further column costs at least one.
                let floor = if self.kind == CostKind::MaxEntry {
                    next
                } else {
                    next + left
                };
                if floor > self.target {
                    continue;
                }
                chosen.push(i);
                let found = self.rec(i, next, chosen)?;
                chosen.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
            Ok(None)
        }
    }

    Enumeration {
        pool,
        n,
        kind,
        target,
        accept,
    }
    .rec(0, 0, &mut Vec::new())
}

fn exhaustive(
    n: usize,
    k: usize,
    kind: CostKind,
    ceiling: u64,
    accept: &dyn Fn(&Scheme) -> Result<bool>,
) -> Result<Option<(u64, Scheme)>> {
    if n == 0 || k == 0 {
        return Err(MintsError::Config(
            "need at least one mint and one weighing".into(),
        ));
    }
    for target in 1..=ceiling {
        let pool: Vec<Vec<u64>> = all_columns(k, target)
            .into_iter()
            .filter(|c| column_cost(kind, c) <= target)
            .collect();
        if let Some(s) = first_at_cost(&pool, n, kind, target, accept)? {
            return Ok(Some((target, s)));
        }
    }
    Ok(None)
}

/// Cheapest feasible two-weighing scheme with cost at most `cost_ceiling`,
/// found by enumerating column multisets one cost level at a time.
pub fn exhaustive_min_cost(
    n: usize,
    kind: CostKind,
    cost_ceiling: u64,
) -> Result<Option<(u64, Scheme)>> {
    exhaustive(n, 2, kind, cost_ceiling, &|s| Ok(naive_verify(s)?.feasible))
}

/// Cheapest injective scheme with `k` weighings and TotalMax cost at most
/// `cost_ceiling`.
pub fn exhaustive_known_eps(
    n: usize,
    k: usize,
    cost_ceiling: u64,
) -> Result<Option<(u64, Scheme)>> {
    exhaustive(n, k, CostKind::TotalMax, cost_ceiling, &|s| {
        Ok(naive_injective(s)?.feasible)
    })
}

/// Largest number of mints with a feasible scheme whose entries are all at
/// most `cap`, by checking every set of distinct columns. Feasible schemes
/// never repeat a column, so sets cover every candidate.
pub fn exhaustive_capacity(cap: u64) -> Result<(usize, Option<Scheme>)> {
    let pool = all_columns(2, cap);
    let mut best: (usize, Option<Scheme>) = (0, None);
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        pool: &[Vec<u64>],
        start: usize,
        chosen: &mut Vec<usize>,
        best: &mut (usize, Option<Scheme>),
    ) -> Result<()> {
        for i in start..pool.len() {
            chosen.push(i);
            let cols: Vec<&Vec<u64>> = chosen.iter().map(|&j| &pool[j]).collect();
            let scheme = Scheme::from_columns(&cols)?;
            // Sub-schemes of feasible schemes are feasible, so extend only these.
            if naive_verify(&scheme)?.feasible {
                if chosen.len() > best.0 {
                    *best = (chosen.len(), Some(scheme));
                }
                rec(pool, i + 1, chosen, best)?;
            }
            chosen.pop();
        }
        Ok(())
    }
    rec(&pool, 0, &mut chosen, &mut best)?;
    Ok(best)
}

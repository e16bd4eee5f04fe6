//! The variant in which the fake deviation is known.
//!
//! Knowing the deviation, each weighing reveals `Σ_r rows[j][r]·d_r` exactly,
//! so a scheme works iff the subset-sum map is injective over all `2^n`
//! subsets. Any number of weighings `k ≥ 1` is allowed; the cost is the
//! per-mint maximum over the weighings, summed over the mints.

use rustc_hash::FxHashMap;

use crate::cost::CostKind;
use crate::error::{MintsError, Result};
use crate::feasibility::{all_subset_sums, FeasibilityReport};
use crate::scheme::{Scheme, SubsetMask};
use crate::search::engine::Problem;
use crate::search::{
    execute, sorted_columns, validate_common, Budget, Checkpoint, CheckpointSettings,
    InjectiveState, ProblemKey, Run, SearchResult, MAX_ROWS,
};

/// Checks that distinct subsets (the empty one included) have distinct sums.
/// The witness is the lexicographically smallest colliding pair.
pub fn verify_injective(scheme: &Scheme) -> Result<FeasibilityReport> {
    let sums = all_subset_sums(scheme)?;
    let mut first: FxHashMap<&[i128], u64> = FxHashMap::default();
    let mut witness: Option<(u64, u64)> = None;
    for (mask, s) in sums.iter().enumerate() {
        let mask = mask as u64;
        match first.get(s.coords()) {
            Some(&a) => {
                // Masks arrive in increasing order, so `a` is the smallest of its
                // class and the first collision seen for it is its best pair.
                if witness.is_none_or(|w| (a, mask) < w) {
                    witness = Some((a, mask));
                }
            }
            None => {
                first.insert(s.coords(), mask);
            }
        }
    }
    Ok(match witness {
        None => FeasibilityReport::feasible(),
        Some((a, b)) => FeasibilityReport::collision(SubsetMask(a), SubsetMask(b)),
    })
}

#[derive(Clone, Debug)]
pub struct KnownEpsConfig {
    pub n_mints: usize,
    pub weighings: usize,
    pub budget: Budget,
    pub threads: Option<usize>,
    pub checkpoint: Option<CheckpointSettings>,
    pub resume: Option<Checkpoint>,
}

impl KnownEpsConfig {
    pub fn new(n_mints: usize, weighings: usize) -> Self {
        KnownEpsConfig {
            n_mints,
            weighings,
            budget: Budget::unlimited(),
            threads: None,
            checkpoint: None,
            resume: None,
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }
}

/// Powers of two in the first weighing: the cheapest single-weighing
/// injective scheme, used to seed the search.
pub fn binary_scheme(n: usize, weighings: usize) -> Result<Scheme> {
    if n == 0 || n > 20 || weighings == 0 {
        return Err(MintsError::Config(
            "binary scheme needs 1..=20 mints and a weighing".into(),
        ));
    }
    let mut rows = vec![vec![0u64; n]; weighings];
    for (r, x) in rows[0].iter_mut().enumerate() {
        *x = 1 << r;
    }
    Scheme::new(rows)
}

/// Minimum TotalMax cost over injective schemes with `k` weighings.
pub fn search_known_eps(config: &KnownEpsConfig) -> Result<SearchResult> {
    validate_common(config.n_mints, config.threads, &config.budget)?;
    let k = config.weighings;
    if k == 0 || k > MAX_ROWS {
        return Err(MintsError::Config(format!(
            "number of weighings must be between 1 and {MAX_ROWS}"
        )));
    }
    let n = config.n_mints;
    let seed = binary_scheme(n, k)?;
    let seed = (
        crate::cost::cost(&seed, CostKind::TotalMax),
        sorted_columns(&seed)?,
    );
    execute(
        Run {
            problem: Problem {
                n,
                k,
                kind: CostKind::TotalMax,
                cap: None,
                row_swap: false,
            },
            key: ProblemKey {
                variant: "known-eps".into(),
                mints: n,
                weighings: k,
                cost: CostKind::TotalMax,
                cap: None,
                initial_upper_bound: None,
            },
            budget: config.budget,
            threads: config.threads,
            seed: Some(seed),
            upper_bound: None,
            checkpoint: config.checkpoint.as_ref(),
            resume: config.resume.as_ref(),
        },
        InjectiveState::new(k),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::verify_scheme;
    use crate::search::SearchStatus;

    fn mask(m: &[usize]) -> SubsetMask {
        SubsetMask::from_mints(m).unwrap()
    }

    #[test]
    fn verify_examples() {
        let s = Scheme::new(vec![vec![1, 2, 4]]).unwrap();
        assert!(verify_injective(&s).unwrap().feasible);
        let s = Scheme::from_columns(&[[1u64, 0], [0, 1], [1, 1]]).unwrap();
        assert_eq!(
            verify_injective(&s).unwrap().witness,
            Some((mask(&[1, 2]), mask(&[3])))
        );
        let s = Scheme::from_columns(&[[1u64, 0], [0, 1], [2, 1]]).unwrap();
        assert!(verify_injective(&s).unwrap().feasible);
        // Injective but not distinguishable without knowing the deviation.
        assert!(!verify_scheme(&s).unwrap().feasible);
    }

    #[test]
    fn witness_is_smallest_pair() {
        // {1,2} = {3} = 3 (masks 3, 4) is the only collision.
        let s = Scheme::new(vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(
            verify_injective(&s).unwrap().witness,
            Some((SubsetMask(3), SubsetMask(4)))
        );
        let s = Scheme::new(vec![vec![2, 1, 1]]).unwrap();
        // {2} = {3} (masks 2, 4) and {1} = {2,3} (masks 1, 6).
        assert_eq!(
            verify_injective(&s).unwrap().witness,
            Some((SubsetMask(1), SubsetMask(6)))
        );
    }

    #[test]
    fn small_searches() {
        for (n, k, want) in [(1, 1, 1), (2, 2, 2), (3, 2, 4), (3, 1, 7)] {
            let r = search_known_eps(&KnownEpsConfig::new(n, k)).unwrap();
            assert_eq!(r.status, SearchStatus::Optimal);
            assert_eq!(r.best_cost, Some(want), "n={n} k={k}");
            assert!(
                verify_injective(r.best_scheme.as_ref().unwrap())
                    .unwrap()
                    .feasible
            );
        }
    }

    #[test]
    fn rejects_bad_config() {
        assert!(search_known_eps(&KnownEpsConfig::new(0, 2)).is_err());
        assert!(search_known_eps(&KnownEpsConfig::new(2, 0)).is_err());
        assert!(search_known_eps(&KnownEpsConfig::new(2, MAX_ROWS + 1)).is_err());
    }
}

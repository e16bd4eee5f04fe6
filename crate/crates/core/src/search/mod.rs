//! Minimum-cost scheme search and the capacity question.

mod checkpoint;
mod column;
pub(crate) mod engine;
mod state;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use checkpoint::{Checkpoint, IncumbentRecord, ProblemKey, CHECKPOINT_VERSION};
pub use column::{Column, MAX_ROWS};
pub(crate) use state::{Distinguisher, InjectiveState};
pub use state::{Extension, PartialState};

use crate::bounds::factorial_scheme;
use crate::cost::{cost, CostKind};
use crate::error::{MintsError, Result};
use crate::feasibility::verify_scheme;
use crate::scheme::{Scheme, ENTRY_MAX};
use engine::{EngineConfig, EngineStats, Problem, Scored, Snapshot};

/// Largest number of mints a search accepts.
pub const SEARCH_MAX_MINTS: usize = 20;

/// Default interval between periodic checkpoint writes.
pub const DEFAULT_CHECKPOINT_INTERVAL: Duration = Duration::from_secs(60);

/// Limits on a search. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(limit: u64) -> Self {
        Budget {
            node_limit: Some(limit),
            time_limit: None,
        }
    }

    pub fn time(limit: Duration) -> Self {
        Budget {
            node_limit: None,
            time_limit: Some(limit),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.node_limit == Some(0) {
            return Err(MintsError::Config("node limit must be positive".into()));
        }
        if self.time_limit == Some(Duration::ZERO) {
            return Err(MintsError::Config("time limit must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CheckpointSettings {
    pub path: PathBuf,
    pub interval: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n_mints: usize,
    pub cost_kind: CostKind,
    /// Every mint uses at most this many coins in any weighing.
    pub cap: Option<u64>,
    pub budget: Budget,
    /// Only schemes costing at most this much are considered.
    pub initial_upper_bound: Option<u64>,
    /// Worker threads; `Some(1)` runs on the calling thread.
    pub threads: Option<usize>,
    pub checkpoint: Option<CheckpointSettings>,
    pub resume: Option<Checkpoint>,
}

impl SearchConfig {
    pub fn new(n_mints: usize, cost_kind: CostKind) -> Self {
        SearchConfig {
            n_mints,
            cost_kind,
            cap: None,
            budget: Budget::unlimited(),
            initial_upper_bound: None,
            threads: None,
            checkpoint: None,
            resume: None,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn with_upper_bound(mut self, bound: u64) -> Self {
        self.initial_upper_bound = Some(bound);
        self
    }

    fn problem_key(&self) -> ProblemKey {
        ProblemKey {
            variant: "classic".into(),
            mints: self.n_mints,
            weighings: 2,
            cost: self.cost_kind,
            cap: self.cap,
            initial_upper_bound: self.initial_upper_bound,
        }
    }

    fn validate(&self) -> Result<()> {
        validate_common(self.n_mints, self.threads, &self.budget)?;
        if let Some(cap) = self.cap {
            if cap == 0 || cap > ENTRY_MAX {
                return Err(MintsError::Config(format!(
                    "cap must be between 1 and {ENTRY_MAX}"
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn validate_common(n: usize, threads: Option<usize>, budget: &Budget) -> Result<()> {
    if n == 0 || n > SEARCH_MAX_MINTS {
        return Err(MintsError::Config(format!(
            "number of mints must be between 1 and {SEARCH_MAX_MINTS}"
        )));
    }
    if threads == Some(0) {
        return Err(MintsError::Config("thread count must be positive".into()));
    }
    budget.validate()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    /// The search space was exhausted: `best_cost` is the true minimum.
    Optimal,
    /// A budget ran out; `best_cost`, if any, is only an upper bound.
    BestSoFar,
    /// Exhaustion proved that no scheme satisfies the constraints.
    Infeasible,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneCounts {
    pub bound: u64,
    pub conflict: u64,
    pub symmetry: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub pruned: PruneCounts,
}

impl SearchStats {
    pub(crate) fn from_engine(stats: &EngineStats) -> Self {
        SearchStats {
            nodes: stats.nodes,
            elapsed_ms: stats.elapsed.as_millis() as u64,
            pruned: PruneCounts {
                bound: stats.pruned_bound(),
                conflict: stats.pruned_conflict(),
                symmetry: stats.pruned_symmetry(),
            },
        }
    }

    fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.elapsed_ms += other.elapsed_ms;
        self.pruned.bound += other.pruned.bound;
        self.pruned.conflict += other.pruned.conflict;
        self.pruned.symmetry += other.pruned.symmetry;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub best_cost: Option<u64>,
    #[serde(rename = "scheme")]
    pub best_scheme: Option<Scheme>,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serialization cannot fail")
    }
}

/// Columns of a scheme in search order.
pub(crate) fn sorted_columns(scheme: &Scheme) -> Result<Vec<Column>> {
    let mut cols = scheme
        .columns()
        .map(|c| {
            Column::new(&c).ok_or_else(|| {
                MintsError::InvalidScheme(format!("at most {MAX_ROWS} weighings are supported"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    cols.sort_unstable();
    Ok(cols)
}

pub(crate) fn scheme_from_columns(cols: &[Column], k: usize) -> Scheme {
    let entries: Vec<Vec<u64>> = cols.iter().map(|c| c.entries(k)).collect();
    Scheme::from_columns(&entries).expect("search columns form a valid scheme")
}

/// Representative of a scheme's symmetry class: columns sorted by
/// `(max, entries)` and, for two weighings, the row order whose sorted
/// column sequence is larger. Same cost and feasibility as the input.
pub fn canonical_form(scheme: &Scheme) -> Result<Scheme> {
    let cols = sorted_columns(scheme)?;
    let k = scheme.n_rows();
    if k != 2 {
        return Ok(scheme_from_columns(&cols, k));
    }
    let mut swapped: Vec<Column> = cols.iter().map(Column::swapped).collect();
    swapped.sort_unstable();
    Ok(scheme_from_columns(cols.max(swapped).as_slice(), 2))
}

fn resume_parts(
    resume: Option<&Checkpoint>,
    key: &ProblemKey,
) -> Result<(Option<Scored>, Option<Vec<Column>>, u64)> {
    let Some(cp) = resume else {
        return Ok((None, None, 0));
    };
    if &cp.problem != key {
        return Err(MintsError::Checkpoint(format!(
            "checkpoint is for {:?}, not {:?}",
            cp.problem, key
        )));
    }
    let seed = match &cp.incumbent {
        None => None,
        Some(inc) => {
            if cost(&inc.scheme, key.cost) != inc.cost
                || inc.scheme.n_mints() != key.mints
                || inc.scheme.n_rows() != key.weighings
            {
                return Err(MintsError::Checkpoint(
                    "incumbent does not match its cost".into(),
                ));
            }
            Some((inc.cost, sorted_columns(&inc.scheme)?))
        }
    };
    let roots = cp
        .frontier
        .iter()
        .map(|c| {
            if c.len() != key.weighings {
                return Err(MintsError::Checkpoint(
                    "frontier column has the wrong length".into(),
                ));
            }
            Column::new(c).ok_or_else(|| MintsError::Checkpoint("bad frontier column".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((seed, Some(roots), cp.nodes))
}

fn better(a: Option<Scored>, b: Option<Scored>) -> Option<Scored> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

pub(crate) struct Run<'a> {
    pub problem: Problem,
    pub key: ProblemKey,
    pub budget: Budget,
    pub threads: Option<usize>,
    pub seed: Option<Scored>,
    pub upper_bound: Option<u64>,
    pub checkpoint: Option<&'a CheckpointSettings>,
    pub resume: Option<&'a Checkpoint>,
}

/// Drives the engine and packages its outcome, writing checkpoints when asked.
pub(crate) fn execute<S: Distinguisher>(run: Run<'_>, proto: S) -> Result<SearchResult> {
    let (resumed_seed, roots, prior_nodes) = resume_parts(run.resume, &run.key)?;
    let seed = better(run.seed, resumed_seed);
    let k = run.problem.k;
    let key = run.key.clone();
    let save_error = std::sync::Mutex::new(None);
    let write = |snap: Snapshot| {
        if let Some(settings) = run.checkpoint {
            let cp = Checkpoint {
                version: CHECKPOINT_VERSION,
                problem: key.clone(),
                incumbent: snap.best.map(|(cost, cols)| IncumbentRecord {
                    cost,
                    scheme: scheme_from_columns(&cols, k),
                }),
                frontier: snap.frontier.iter().map(|c| c.entries(k)).collect(),
                nodes: snap.nodes,
            };
            if let Err(e) = cp.save(&settings.path) {
                *save_error.lock().unwrap() = Some(e);
            }
        }
    };
    let outcome = engine::run(
        &run.problem,
        proto,
        EngineConfig {
            node_limit: run.budget.node_limit,
            time_limit: run.budget.time_limit,
            threads: run.threads,
            seed,
            upper_bound: run.upper_bound,
            roots,
            prior_nodes,
            sink: run
                .checkpoint
                .map(|s| (&write as engine::Sink<'_>, s.interval)),
        },
    );
    if !outcome.stopped && run.checkpoint.is_some() {
        write(Snapshot {
            best: outcome.best.clone(),
            frontier: Vec::new(),
            nodes: outcome.stats.nodes,
        });
    }
    if let Some(e) = save_error.into_inner().unwrap() {
        return Err(e);
    }
    let status = match (&outcome.best, outcome.stopped) {
        (_, true) => SearchStatus::BestSoFar,
        (Some(_), false) => SearchStatus::Optimal,
        (None, false) => SearchStatus::Infeasible,
    };
    let (best_cost, best_scheme) = match outcome.best {
        Some((c, cols)) => (Some(c), Some(scheme_from_columns(&cols, k))),
        None => (None, None),
    };
    Ok(SearchResult {
        status,
        best_cost,
        best_scheme,
        stats: SearchStats::from_engine(&outcome.stats),
    })
}

/// Exact minimum-cost search over two-weighing schemes for `n_mints` mints.
///
/// The factorial construction seeds the incumbent when it fits the cap and
/// the entry limit. Among optimal schemes the one reported is the smallest
/// in canonical order, independent of the number of threads.
pub fn search_optimal(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let n = config.n_mints;
    let seed = match factorial_scheme(n) {
        Ok(s)
            if config
                .cap
                .is_none_or(|cap| cost(&s, CostKind::MaxEntry) <= cap) =>
        {
            let s = canonical_form(&s)?;
            Some((cost(&s, config.cost_kind), sorted_columns(&s)?))
        }
        _ => None,
    };
    let result = execute(
        Run {
            problem: Problem {
                n,
                k: 2,
                kind: config.cost_kind,
                cap: config.cap.map(|c| c as u32),
                row_swap: true,
            },
            key: config.problem_key(),
            budget: config.budget,
            threads: config.threads,
            seed,
            upper_bound: config.initial_upper_bound,
            checkpoint: config.checkpoint.as_ref(),
            resume: config.resume.as_ref(),
        },
        PartialState::new(),
    )?;
    debug_assert!(result
        .best_scheme
        .as_ref()
        .is_none_or(|s| verify_scheme(s).is_ok_and(|r| r.feasible)));
    Ok(result)
}

/// Largest number of mints testable with at most `cap` coins per weighing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub cap: u64,
    pub max_mints: usize,
    /// `true` when a search at `max_mints + 1` was exhausted without success.
    pub proven: bool,
    pub witness: Option<Scheme>,
    pub stats: SearchStats,
}

/// Finds the largest `n` admitting a feasible scheme with all entries at
/// most `cap`, by searching `n = 1, 2, …` until a search proves infeasibility.
/// The budget is shared across all the searches.
pub fn capacity_max_mints(
    cap: u64,
    budget: Budget,
    threads: Option<usize>,
) -> Result<CapacityResult> {
    if cap == 0 || cap > ENTRY_MAX {
        return Err(MintsError::Config(format!(
            "cap must be between 1 and {ENTRY_MAX}"
        )));
    }
    budget.validate()?;
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let mut best: Option<Scheme> = None;
    let mut n = 1;
    loop {
        let remaining = Budget {
            node_limit: match budget.node_limit {
                Some(l) if l <= stats.nodes => break,
                Some(l) => Some(l - stats.nodes),
                None => None,
            },
            time_limit: match budget.time_limit {
                Some(t) if t <= start.elapsed() => break,
                Some(t) => Some(t - start.elapsed()),
                None => None,
            },
        };
        if n > SEARCH_MAX_MINTS {
            break;
        }
        let config = SearchConfig {
            budget: remaining,
            threads,
            ..SearchConfig::new(n, CostKind::MaxEntry).with_cap(cap)
        };
        let result = search_optimal(&config)?;
        stats.absorb(&result.stats);
        match result.status {
            SearchStatus::Infeasible => {
                return Ok(CapacityResult {
                    cap,
                    max_mints: n - 1,
                    proven: true,
                    witness: best,
                    stats,
                });
            }
            SearchStatus::Optimal => best = result.best_scheme,
            SearchStatus::BestSoFar => {
                if result.best_scheme.is_some() {
                    best = result.best_scheme;
                }
                break;
            }
        }
        n += 1;
    }
    Ok(CapacityResult {
        cap,
        max_mints: best.as_ref().map_or(0, Scheme::n_mints),
        proven: false,
        witness: best,
        stats,
    })
}

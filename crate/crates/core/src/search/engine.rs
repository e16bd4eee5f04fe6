//! Depth-first branch-and-bound over sorted column sequences.
//!
//! Mints receive columns in strictly increasing search order, so each scheme
//! is visited once per mint permutation class. The incumbent is shared between
//! workers; a node is kept when its lower bound is below the incumbent cost, or
//! equal to it with a prefix that is not lexicographically after the
//! incumbent's. Every worker therefore converges on the same
//! lexicographically smallest optimum regardless of scheduling.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::cost::CostKind;
use crate::scheme::ENTRY_MAX;
use crate::search::column::Column;
use crate::search::state::Distinguisher;

const PRUNE_BOUND: usize = 0;
const PRUNE_CONFLICT: usize = 1;
const PRUNE_SYMMETRY: usize = 2;

/// Expansions between wall-clock checks.
const CLOCK_STRIDE: u64 = 1 << 14;
/// Expansions between flushes of a worker's node count.
const FLUSH_STRIDE: u64 = 1 << 12;
/// Tree levels whose children are distributed across the thread pool.
#[cfg(feature = "parallel")]
const PAR_DEPTH: usize = 2;

/// A cost together with the sorted columns achieving it.
pub(crate) type Scored = (u64, Vec<Column>);

pub(crate) struct Problem {
    pub n: usize,
    pub k: usize,
    pub kind: CostKind,
    pub cap: Option<u32>,
    /// Break the symmetry between the first two weighings.
    pub row_swap: bool,
}

pub(crate) struct Snapshot {
    pub best: Option<Scored>,
    pub frontier: Vec<Column>,
    pub nodes: u64,
}

pub(crate) type Sink<'a> = &'a (dyn Fn(Snapshot) + Sync);

pub(crate) struct EngineConfig<'a> {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub threads: Option<usize>,
    /// Known scheme used as the starting incumbent (columns in search order).
    pub seed: Option<Scored>,
    /// Only schemes with cost at most this are considered.
    pub upper_bound: Option<u64>,
    /// Restricts the first column to these values.
    pub roots: Option<Vec<Column>>,
    pub prior_nodes: u64,
    pub sink: Option<(Sink<'a>, Duration)>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct EngineStats {
    pub nodes: u64,
    pub pruned: [u64; 3],
    pub elapsed: Duration,
}

impl EngineStats {
    pub fn pruned_bound(&self) -> u64 {
        self.pruned[PRUNE_BOUND]
    }
    pub fn pruned_conflict(&self) -> u64 {
        self.pruned[PRUNE_CONFLICT]
    }
    pub fn pruned_symmetry(&self) -> u64 {
        self.pruned[PRUNE_SYMMETRY]
    }
}

pub(crate) struct Outcome {
    /// The search stopped on a budget before exhausting the tree.
    pub stopped: bool,
    pub best: Option<Scored>,
    pub stats: EngineStats,
}

#[derive(Clone, Debug)]
struct Best {
    limit: u64,
    cols: Option<Vec<Column>>,
}

struct Shared<'a> {
    p: &'a Problem,
    best: Mutex<Best>,
    limit: AtomicU64,
    version: AtomicU64,
    nodes: AtomicU64,
    node_limit: u64,
    deadline: Option<Instant>,
    stop: AtomicBool,
    pruned: [AtomicU64; 3],
    roots: Mutex<Vec<(Column, bool)>>,
    sink: Option<(Sink<'a>, Duration)>,
    last_write: Mutex<Instant>,
}

struct Cursor {
    cand: Column,
    r: u64,
    last_max: u32,
    group_checked: bool,
    done: bool,
}

struct Worker {
    unflushed: u64,
    since_clock: u64,
    pruned: [u64; 3],
    cache_version: u64,
    cache: Option<Best>,
}

impl Worker {
    fn new() -> Self {
        Worker {
            unflushed: 0,
            since_clock: 0,
            pruned: [0; 3],
            cache_version: u64::MAX,
            cache: None,
        }
    }
}

/// `true` when `cols` is the canonical member of its row-swap pair: its
/// sorted sequence is not smaller than that of the swapped columns.
pub(crate) fn swap_canonical(cols: &[Column]) -> bool {
    let mut swapped: Vec<Column> = cols.iter().map(Column::swapped).collect();
    swapped.sort_unstable();
    cols >= swapped.as_slice()
}

pub(crate) fn run<S: Distinguisher>(p: &Problem, proto: S, cfg: EngineConfig<'_>) -> Outcome {
    let start = Instant::now();
    let mut best = Best {
        limit: cfg.upper_bound.unwrap_or(u64::MAX),
        cols: None,
    };
    if let Some((cost, cols)) = cfg.seed {
        if cost <= best.limit {
            best = Best {
                limit: cost,
                cols: Some(cols),
            };
        }
    }
    let shared = Shared {
        p,
        limit: AtomicU64::new(best.limit),
        best: Mutex::new(best),
        version: AtomicU64::new(0),
        nodes: AtomicU64::new(cfg.prior_nodes),
        node_limit: cfg
            .node_limit
            .map_or(u64::MAX, |l| l.saturating_add(cfg.prior_nodes)),
        deadline: cfg.time_limit.map(|t| start + t),
        stop: AtomicBool::new(false),
        pruned: Default::default(),
        roots: Mutex::new(Vec::new()),
        sink: cfg.sink,
        last_write: Mutex::new(start),
    };

    let mut w = Worker::new();
    let mut roots = shared.candidates(&mut w, &[], 0);
    if let Some(allowed) = &cfg.roots {
        roots.retain(|c| allowed.contains(c));
    }
    shared.flush(&mut w);
    *shared.roots.lock().unwrap() = roots.iter().map(|&c| (c, false)).collect();

    let parallel = cfg!(feature = "parallel") && cfg.threads != Some(1) && p.n > 1;
    if parallel {
        #[cfg(feature = "parallel")]
        {
            match cfg.threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .expect("failed to build thread pool")
                    .install(|| shared.par_branches(&proto, &[], 0, &roots)),
                None => shared.par_branches(&proto, &[], 0, &roots),
            }
        }
    } else {
        let mut w = Worker::new();
        for cand in &roots {
            if shared.stopped() {
                break;
            }
            shared.branch(&mut w, &proto, &[], 0, cand, false);
        }
        shared.flush(&mut w);
    }

    let stopped = shared.stopped();
    if stopped {
        shared.write_snapshot();
    }
    let best = shared.best.into_inner().unwrap();
    Outcome {
        stopped,
        best: best.cols.map(|c| (best.limit, c)),
        stats: EngineStats {
            nodes: shared.nodes.load(Ordering::Relaxed),
            pruned: shared.pruned.map(|a| a.into_inner()),
            elapsed: start.elapsed(),
        },
    }
}

impl Shared<'_> {
    fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    fn flush(&self, w: &mut Worker) {
        self.nodes
            .fetch_add(std::mem::take(&mut w.unflushed), Ordering::Relaxed);
        for (shared, local) in self.pruned.iter().zip(w.pruned.iter_mut()) {
            shared.fetch_add(std::mem::take(local), Ordering::Relaxed);
        }
    }

    /// Counts one expansion; returns `false` once a budget is exhausted.
    fn tick(&self, w: &mut Worker) -> bool {
        if self.nodes.load(Ordering::Relaxed) + w.unflushed >= self.node_limit {
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        w.unflushed += 1;
        w.since_clock += 1;
        if w.unflushed >= FLUSH_STRIDE {
            self.flush(w);
        }
        if w.since_clock >= CLOCK_STRIDE {
            w.since_clock = 0;
            let now = Instant::now();
            if self.deadline.is_some_and(|d| now >= d) {
                self.stop.store(true, Ordering::Relaxed);
                return false;
            }
            if let Some((_, interval)) = self.sink {
                let due = self
                    .last_write
                    .try_lock()
                    .map(|mut last| {
                        let due = now.duration_since(*last) >= interval;
                        if due {
                            *last = now;
                        }
                        due
                    })
                    .unwrap_or(false);
                if due {
                    self.flush(w);
                    self.write_snapshot();
                }
            }
        }
        true
    }

    fn in_range(&self, c: &Column) -> bool {
        let m = c.max_entry();
        u64::from(m) <= ENTRY_MAX && self.p.cap.is_none_or(|cap| m <= cap)
    }

    /// Lower bound on the final cost of any completion that uses `c` next,
    /// followed by `r - 1` more columns (each at least as large as `c`).
    /// Non-decreasing along search order.
    fn lb_mono(&self, acc: u64, c: &Column, r: u64) -> u64 {
        match self.p.kind {
            CostKind::TotalMax | CostKind::GrandSum => acc + r * u64::from(c.max_entry()),
            CostKind::MaxEntry => u64::from(c.max_entry()),
        }
    }

    fn lb_exact(&self, acc: u64, c: &Column, r: u64) -> u64 {
        match self.p.kind {
            CostKind::GrandSum => acc + c.sum() + (r - 1) * u64::from(c.max_entry()),
            _ => self.lb_mono(acc, c, r),
        }
    }

    fn add_cost(&self, acc: u64, c: &Column) -> u64 {
        match self.p.kind {
            CostKind::TotalMax => acc + u64::from(c.max_entry()),
            CostKind::GrandSum => acc + c.sum(),
            CostKind::MaxEntry => acc.max(u64::from(c.max_entry())),
        }
    }

    /// Whether a node with lower bound `lb` and prefix `prefix ++ [c]` can
    /// still yield a scheme that beats the incumbent.
    fn admits(&self, w: &mut Worker, lb: u64, prefix: &[Column], c: &Column) -> bool {
        let limit = self.limit.load(Ordering::Acquire);
        if lb < limit {
            return true;
        }
        if lb > limit {
            return false;
        }
        let version = self.version.load(Ordering::Acquire);
        if version != w.cache_version || w.cache.is_none() {
            let best = self.best.lock().unwrap();
            w.cache = Some(best.clone());
            w.cache_version = self.version.load(Ordering::Acquire);
        }
        let best = w.cache.as_ref().expect("cache filled above");
        if lb != best.limit {
            return lb < best.limit;
        }
        match &best.cols {
            None => true,
            Some(inc) => {
                let len = prefix.len();
                match prefix.cmp(&inc[..len]) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => *c <= inc[len],
                }
            }
        }
    }

    fn offer(&self, cost: u64, cols: &[Column]) {
        let mut best = self.best.lock().unwrap();
        let better = cost < best.limit
            || (cost == best.limit && best.cols.as_deref().is_none_or(|b| cols < b));
        if better {
            best.limit = cost;
            best.cols = Some(cols.to_vec());
            self.version.fetch_add(1, Ordering::AcqRel);
            self.limit.store(cost, Ordering::Release);
        }
    }

    /// Admissible columns for the next mint after `prefix`, in search order.
    fn candidates(&self, w: &mut Worker, prefix: &[Column], acc: u64) -> Vec<Column> {
        let mut cur = self.cursor(prefix);
        let mut out = Vec::new();
        while let Some(c) = self.next_candidate(&mut cur, w, prefix, acc) {
            out.push(c);
        }
        out
    }

    fn cursor(&self, prefix: &[Column]) -> Cursor {
        let last = prefix.last();
        Cursor {
            cand: last.map_or(Column::first(self.p.k), |c| c.successor(self.p.k)),
            r: (self.p.n - prefix.len()) as u64,
            last_max: last.map_or(0, Column::max_entry),
            group_checked: last.is_none() || !self.p.row_swap,
            done: false,
        }
    }

    /// Next column that may follow `prefix`, after the range, symmetry, and
    /// bound cut-offs.
    fn next_candidate(
        &self,
        cur: &mut Cursor,
        w: &mut Worker,
        prefix: &[Column],
        acc: u64,
    ) -> Option<Column> {
        while !cur.done && !self.stopped() {
            let cand = cur.cand;
            cur.cand = cand.successor(self.p.k);
            if !self.in_range(&cand) {
                break;
            }
            if !cur.group_checked && cand.max_entry() > cur.last_max {
                // Every column of smaller max is now fixed.
                cur.group_checked = true;
                if !swap_canonical(prefix) {
                    w.pruned[PRUNE_SYMMETRY] += 1;
                    break;
                }
            }
            if !self.admits(w, self.lb_mono(acc, &cand, cur.r), prefix, &cand) {
                w.pruned[PRUNE_BOUND] += 1;
                break;
            }
            if self.p.kind == CostKind::GrandSum
                && !self.admits(w, self.lb_exact(acc, &cand, cur.r), prefix, &cand)
            {
                w.pruned[PRUNE_BOUND] += 1;
                continue;
            }
            return Some(cand);
        }
        cur.done = true;
        None
    }

    /// Expands the children of `chosen` depth first on the current thread.
    fn dfs<S: Distinguisher>(
        &self,
        w: &mut Worker,
        st: &mut S,
        chosen: &mut Vec<Column>,
        acc: u64,
    ) {
        let n = self.p.n;
        let mut cur = self.cursor(chosen);
        while let Some(cand) = self.next_candidate(&mut cur, w, chosen, acc) {
            if !self.tick(w) {
                return;
            }
            if st.push(&cand) {
                chosen.push(cand);
                let acc = self.add_cost(acc, &cand);
                if chosen.len() == n {
                    self.leaf(w, chosen, acc);
                } else {
                    self.dfs(w, st, chosen, acc);
                }
                chosen.pop();
                st.pop();
            } else {
                w.pruned[PRUNE_CONFLICT] += 1;
            }
        }
    }

    fn leaf(&self, w: &mut Worker, cols: &[Column], cost: u64) {
        if self.p.row_swap && !swap_canonical(cols) {
            w.pruned[PRUNE_SYMMETRY] += 1;
            return;
        }
        self.offer(cost, cols);
    }

    /// Explores the subtree rooted at `prefix ++ [cand]`.
    fn branch<S: Distinguisher>(
        &self,
        w: &mut Worker,
        proto: &S,
        prefix: &[Column],
        acc: u64,
        cand: &Column,
        _parallel: bool,
    ) {
        let p = self.p;
        let r = (p.n - prefix.len()) as u64;
        // The incumbent may have improved since the candidate list was built.
        if !self.admits(w, self.lb_exact(acc, cand, r), prefix, cand) {
            w.pruned[PRUNE_BOUND] += 1;
            self.mark_root(prefix, cand);
            return;
        }
        if !self.tick(w) {
            return;
        }
        let mut st = proto.clone();
        if st.push(cand) {
            let mut chosen = prefix.to_vec();
            chosen.push(*cand);
            let acc = self.add_cost(acc, cand);
            if chosen.len() == p.n {
                self.leaf(w, &chosen, acc);
            } else {
                #[cfg(feature = "parallel")]
                if _parallel && chosen.len() < PAR_DEPTH {
                    let children = self.candidates(w, &chosen, acc);
                    self.flush(w);
                    self.par_branches(&st, &chosen, acc, &children);
                    self.mark_root(prefix, cand);
                    return;
                }
                self.dfs(w, &mut st, &mut chosen, acc);
            }
        } else {
            w.pruned[PRUNE_CONFLICT] += 1;
        }
        self.mark_root(prefix, cand);
    }

    #[cfg(feature = "parallel")]
    fn par_branches<S: Distinguisher>(
        &self,
        st: &S,
        prefix: &[Column],
        acc: u64,
        cands: &[Column],
    ) {
        use rayon::prelude::*;
        cands.par_iter().for_each(|cand| {
            if self.stopped() {
                return;
            }
            let mut w = Worker::new();
            self.branch(&mut w, st, prefix, acc, cand, true);
            self.flush(&mut w);
        });
    }

    /// Records that the first-level branch `cand` has been fully explored.
    fn mark_root(&self, prefix: &[Column], cand: &Column) {
        if !prefix.is_empty() || self.stopped() {
            return;
        }
        let mut roots = self.roots.lock().unwrap();
        if let Ok(i) = roots.binary_search_by(|(c, _)| c.cmp(cand)) {
            roots[i].1 = true;
        }
    }

    fn write_snapshot(&self) {
        let Some((sink, _)) = self.sink else {
            return;
        };
        let best = self.best.lock().unwrap().clone();
        let n = self.p.n as u64;
        let frontier = self
            .roots
            .lock()
            .unwrap()
            .iter()
            .filter(|(_, done)| !done)
            .map(|(c, _)| *c)
            .filter(|c| {
                let lb = self.lb_exact(0, c, n);
                lb < best.limit
                    || (lb == best.limit && best.cols.as_ref().is_none_or(|inc| *c <= inc[0]))
            })
            .collect();
        sink(Snapshot {
            best: best.cols.map(|c| (best.limit, c)),
            frontier,
            nodes: self.nodes.load(Ordering::Relaxed),
        });
    }
}

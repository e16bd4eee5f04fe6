//! Incremental feasibility state for a prefix of chosen mint vectors.
//!
//! Adding a vector `v` to a prefix whose non-empty subset sums are `S` adds the
//! sums `v` and `s + v` for every `s ∈ S`. The prefix stays feasible iff none
//! of the new sums shares a direction with an old sum or with another new one.

use rustc_hash::FxHashSet;

use crate::error::{MintsError, Result};
use crate::scheme::{Scheme, ENTRY_MAX, MAX_ENUMERATED_MINTS};
use crate::search::column::{Column, MAX_ROWS};

/// Push/pop interface shared by the collinearity and equality criteria.
pub(crate) trait Distinguisher: Clone + Send + Sync {
    /// Adds a column; returns `false` (leaving the state unchanged) on a conflict.
    fn push(&mut self, col: &Column) -> bool;
    /// Removes the most recently pushed column.
    fn pop(&mut self);
}

#[inline]
fn gcd(mut a: u32, mut b: u32) -> u32 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Packed primitive direction of a nonzero, non-negative pair.
#[inline]
fn direction_key(a: u32, b: u32) -> u64 {
    let g = gcd(a, b);
    (u64::from(a / g) << 32) | u64::from(b / g)
}

/// Prefix state for two-weighing schemes: the chosen vectors, their non-empty
/// subset sums, and the set of directions those sums occupy.
#[derive(Clone, Debug, Default)]
pub struct PartialState {
    columns: Vec<[u32; 2]>,
    sums: Vec<(u32, u32)>,
    keys: Vec<u64>,
    directions: FxHashSet<u64>,
    cost: u64,
}

/// Result of [`PartialState::extend`].
#[derive(Clone, Debug)]
pub enum Extension {
    Extended(PartialState),
    /// Two subset sums of the extended prefix would be collinear.
    Conflict,
}

impl PartialState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replays `scheme`'s columns from an empty state.
    pub fn from_scheme(scheme: &Scheme) -> Result<Extension> {
        if scheme.n_rows() != 2 {
            return Err(MintsError::InvalidScheme(
                "two weighing rows are required".into(),
            ));
        }
        let mut state = PartialState::new();
        for col in scheme.columns() {
            match state.extend([col[0], col[1]])? {
                Extension::Extended(next) => state = next,
                Extension::Conflict => return Ok(Extension::Conflict),
            }
        }
        Ok(Extension::Extended(state))
    }

    /// Returns the state with `v` appended, or `Conflict` if the prefix
    /// would stop being feasible.
    pub fn extend(&self, v: [u64; 2]) -> Result<Extension> {
        if v == [0, 0] {
            return Err(MintsError::InvalidScheme(
                "mint vector must be nonzero".into(),
            ));
        }
        if v.iter().any(|&x| x > ENTRY_MAX) {
            return Err(MintsError::InvalidScheme(format!(
                "mint vector entries must not exceed {ENTRY_MAX}"
            )));
        }
        if self.columns.len() >= MAX_ENUMERATED_MINTS {
            return Err(MintsError::overflow(format!(
                "more than {MAX_ENUMERATED_MINTS} mints in a prefix"
            )));
        }
        let mut next = self.clone();
        // Entries and mint count are bounded so that every sum fits in u32.
        let ok = next.push_pair(v[0] as u32, v[1] as u32);
        Ok(if ok {
            Extension::Extended(next)
        } else {
            Extension::Conflict
        })
    }

    pub fn columns(&self) -> Vec<[u64; 2]> {
        self.columns
            .iter()
            .map(|c| [u64::from(c[0]), u64::from(c[1])])
            .collect()
    }

    /// Number of distinct directions, `2^len − 1` for a feasible prefix.
    pub fn direction_count(&self) -> usize {
        self.directions.len()
    }

    /// Primitive directions of all non-empty subset sums, sorted.
    pub fn directions(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = self
            .directions
            .iter()
            .map(|&key| (key >> 32, key & 0xffff_ffff))
            .collect();
        out.sort_unstable();
        out
    }

    /// Accumulated TotalMax cost of the chosen vectors.
    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    fn push_pair(&mut self, p: u32, q: u32) -> bool {
        let base = self.sums.len();
        let key = direction_key(p, q);
        if !self.directions.insert(key) {
            return false;
        }
        self.sums.push((p, q));
        self.keys.push(key);
        for i in 0..base {
            let (a, b) = self.sums[i];
            let (a, b) = (a + p, b + q);
            let key = direction_key(a, b);
            if !self.directions.insert(key) {
                for k in self.keys.drain(base..) {
                    self.directions.remove(&k);
                }
                self.sums.truncate(base);
                return false;
            }
            self.sums.push((a, b));
            self.keys.push(key);
        }
        self.columns.push([p, q]);
        self.cost += u64::from(p.max(q));
        true
    }
}

impl Distinguisher for PartialState {
    #[inline]
    fn push(&mut self, col: &Column) -> bool {
        self.push_pair(col.get(0), col.get(1))
    }

    fn pop(&mut self) {
        if let Some([p, q]) = self.columns.pop() {
            let keep = (self.sums.len() - 1) / 2;
            for k in self.keys.drain(keep..) {
                self.directions.remove(&k);
            }
            self.sums.truncate(keep);
            self.cost -= u64::from(p.max(q));
        }
    }
}

/// Prefix state for the known-deviation variant: all `2^len` subset sums
/// (the empty one included) must be pairwise different.
#[derive(Clone, Debug)]
pub(crate) struct InjectiveState {
    k: usize,
    sums: Vec<[u32; MAX_ROWS]>,
    seen: FxHashSet<[u32; MAX_ROWS]>,
}

impl InjectiveState {
    pub(crate) fn new(k: usize) -> Self {
        let zero = [0u32; MAX_ROWS];
        let mut seen = FxHashSet::default();
        seen.insert(zero);
        InjectiveState {
            k,
            sums: vec![zero],
            seen,
        }
    }
}

impl Distinguisher for InjectiveState {
    fn push(&mut self, col: &Column) -> bool {
        let base = self.sums.len();
        for i in 0..base {
            let mut s = self.sums[i];
            for (j, x) in s.iter_mut().enumerate().take(self.k) {
                *x += col.get(j);
            }
            // Translates of distinct sums are distinct, so only old sums can collide.
            if self.seen.contains(&s) {
                for s in self.sums.drain(base..) {
                    self.seen.remove(&s);
                }
                return false;
            }
            self.sums.push(s);
        }
        for s in &self.sums[base..] {
            self.seen.insert(*s);
        }
        true
    }

    fn pop(&mut self) {
        let keep = self.sums.len() / 2;
        for s in self.sums.drain(keep..) {
            self.seen.remove(&s);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(cols: &[[u64; 2]]) -> PartialState {
        match PartialState::from_scheme(&Scheme::from_columns(cols).unwrap()).unwrap() {
            Extension::Extended(s) => s,
            Extension::Conflict => panic!("prefix {cols:?} conflicts"),
        }
    }

    #[test]
    fn gcd_matches_euclid() {
        for a in 0..60u32 {
            for b in 0..60u32 {
                assert_eq!(gcd(a, b), num_integer::gcd(a, b), "{a} {b}");
            }
        }
    }

    #[test]
    fn extend_worked_scheme() {
        let s = state(&[[0, 1], [1, 1]]);
        assert_eq!(s.direction_count(), 3);
        match s.extend([2, 0]).unwrap() {
            Extension::Extended(next) => {
                assert_eq!(next.direction_count(), 7);
                assert_eq!(next.cost(), 4);
            }
            Extension::Conflict => panic!("worked scheme must extend"),
        }
    }

    #[test]
    fn extend_conflict() {
        let s = state(&[[1, 0], [0, 1]]);
        assert!(matches!(s.extend([1, 1]).unwrap(), Extension::Conflict));
        // The failed extension leaves the original untouched.
        assert_eq!(s.direction_count(), 3);
    }

    #[test]
    fn extend_from_empty() {
        let s = PartialState::new();
        match s.extend([3, 5]).unwrap() {
            Extension::Extended(next) => {
                assert_eq!(next.direction_count(), 1);
                assert_eq!(next.directions(), vec![(3, 5)]);
            }
            Extension::Conflict => panic!(),
        }
        assert!(s.extend([0, 0]).is_err());
        assert!(s.extend([ENTRY_MAX + 1, 0]).is_err());
    }

    #[test]
    fn push_pop_restores_state() {
        let mut s = state(&[[0, 1], [1, 1]]);
        let before = s.directions();
        let col = Column::new(&[2, 0]).unwrap();
        assert!(Distinguisher::push(&mut s, &col));
        Distinguisher::pop(&mut s);
        assert_eq!(s.directions(), before);
        assert_eq!(s.cost(), 2);
        let col = Column::new(&[2, 2]).unwrap();
        assert!(!Distinguisher::push(&mut s, &col));
        assert_eq!(s.directions(), before);
    }

    #[test]
    fn injective_push_pop() {
        let mut s = InjectiveState::new(2);
        for c in [[1u64, 0], [0, 1]] {
            assert!(s.push(&Column::new(&c).unwrap()));
        }
        assert!(!s.push(&Column::new(&[1, 1]).unwrap()));
        assert!(s.push(&Column::new(&[2, 1]).unwrap()));
        assert_eq!(s.sums.len(), 8);
        s.pop();
        assert_eq!(s.sums.len(), 4);
        assert_eq!(s.seen.len(), 4);
    }
}

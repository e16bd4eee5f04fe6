//! Weighing schemes and fake-set masks.
//!
//! A scheme is a `k × n` matrix of coin counts: row `j` holds the number of
//! coins each mint contributes to weighing `j`. The classic puzzle uses two
//! rows (`P` and `Q`). Columns are the per-mint weighing vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{MintsError, Result};

/// Largest coin count allowed in any single entry of a scheme.
pub const ENTRY_MAX: u64 = 1_000_000;

/// Largest number of mints for which all `2^n` subsets are enumerated.
pub const MAX_ENUMERATED_MINTS: usize = 24;

/// Coin counts per weighing (rows) and per mint (columns).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SchemeJson", into = "SchemeJson")]
pub struct Scheme {
    rows: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct SchemeJson {
    mints: usize,
    weighings: Vec<Vec<u64>>,
}

impl TryFrom<SchemeJson> for Scheme {
    type Error = MintsError;

    fn try_from(raw: SchemeJson) -> Result<Self> {
        let scheme = Scheme::new(raw.weighings)?;
        if scheme.n_mints() != raw.mints {
            return Err(MintsError::InvalidScheme(format!(
                "\"mints\" is {} but rows have {} entries",
                raw.mints,
                scheme.n_mints()
            )));
        }
        Ok(scheme)
    }
}

impl From<Scheme> for SchemeJson {
    fn from(s: Scheme) -> Self {
        SchemeJson {
            mints: s.n_mints(),
            weighings: s.rows,
        }
    }
}

impl Scheme {
    /// Builds a scheme from its weighing rows, checking every invariant:
    /// at least one row and one mint, equal row lengths, entries at most
    /// [`ENTRY_MAX`], and no mint left out of every weighing.
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(MintsError::InvalidScheme(
                "at least one weighing row is required".into(),
            ));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(MintsError::InvalidScheme(
                "at least one mint is required".into(),
            ));
        }
        if let Some(j) = rows.iter().position(|row| row.len() != n) {
            return Err(MintsError::InvalidScheme(format!(
                "row {} has {} entries, expected {}",
                j,
                rows[j].len(),
                n
            )));
        }
        for (j, row) in rows.iter().enumerate() {
            if let Some(r) = row.iter().position(|&x| x > ENTRY_MAX) {
                return Err(MintsError::InvalidScheme(format!(
                    "entry {} of row {} exceeds the maximum {}",
                    row[r], j, ENTRY_MAX
                )));
            }
        }
        if let Some(r) = (0..n).find(|&r| rows.iter().all(|row| row[r] == 0)) {
            return Err(MintsError::InvalidScheme(format!(
                "mint {} is not used in any weighing",
                r + 1
            )));
        }
        Ok(Scheme { rows })
    }

    /// Classic two-weighing scheme from the `P` and `Q` rows.
    pub fn two_weighings(p: Vec<u64>, q: Vec<u64>) -> Result<Self> {
        Scheme::new(vec![p, q])
    }

    /// Builds a scheme from per-mint columns, each with `k` entries.
    pub fn from_columns<C: AsRef<[u64]>>(columns: &[C]) -> Result<Self> {
        let k = columns
            .first()
            .map(|c| c.as_ref().len())
            .ok_or_else(|| MintsError::InvalidScheme("at least one mint is required".into()))?;
        if k == 0 {
            return Err(MintsError::InvalidScheme(
                "at least one weighing row is required".into(),
            ));
        }
        let mut rows = vec![Vec::with_capacity(columns.len()); k];
        for (r, col) in columns.iter().enumerate() {
            let col = col.as_ref();
            if col.len() != k {
                return Err(MintsError::InvalidScheme(format!(
                    "column {} has {} entries, expected {}",
                    r + 1,
                    col.len(),
                    k
                )));
            }
            for (row, &x) in rows.iter_mut().zip(col) {
                row.push(x);
            }
        }
        Scheme::new(rows)
    }

    pub fn n_mints(&self) -> usize {
        self.rows[0].len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> &[u64] {
        &self.rows[j]
    }

    /// Weighing vector of mint `r` (0-based).
    pub fn column(&self, r: usize) -> Vec<u64> {
        self.rows.iter().map(|row| row[r]).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.n_mints()).map(move |r| self.column(r))
    }

    /// Mask with every mint set.
    pub fn full_mask(&self) -> SubsetMask {
        SubsetMask::full(self.n_mints())
    }

    /// Reorders the mints: column `r` of the result is column `perm[r]` of `self`.
    pub fn permute_mints(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_mints();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(MintsError::InvalidScheme(
                "not a permutation of the mints".into(),
            ));
        }
        Ok(Scheme {
            rows: self
                .rows
                .iter()
                .map(|row| perm.iter().map(|&p| row[p]).collect())
                .collect(),
        })
    }

    /// Scheme with mint `r` (0-based) removed.
    pub fn without_mint(&self, r: usize) -> Result<Self> {
        if r >= self.n_mints() {
            return Err(MintsError::InvalidScheme(format!("no mint {}", r + 1)));
        }
        Scheme::new(
            self.rows
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != r)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect(),
        )
    }

    /// Scheme with weighing rows `a` and `b` exchanged.
    pub fn swap_rows(&self, a: usize, b: usize) -> Self {
        let mut rows = self.rows.clone();
        rows.swap(a, b);
        Scheme { rows }
    }

    /// Scheme with every entry of row `j` multiplied by `factor`.
    pub fn scale_row(&self, j: usize, factor: u64) -> Result<Self> {
        if factor == 0 {
            return Err(MintsError::InvalidScheme(
                "row scale factor must be positive".into(),
            ));
        }
        let mut rows = self.rows.clone();
        for x in &mut rows[j] {
            *x = x
                .checked_mul(factor)
                .ok_or_else(|| MintsError::overflow("row scaling"))?;
        }
        Scheme::new(rows)
    }

    /// Scheme with an extra weighing row of zeros appended.
    pub fn with_zero_row(&self) -> Self {
        let mut rows = self.rows.clone();
        rows.push(vec![0; self.n_mints()]);
        Scheme { rows }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scheme serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| MintsError::Parse(e.to_string()))
    }

    pub(crate) fn check_enumerable(&self) -> Result<()> {
        if self.n_mints() > MAX_ENUMERATED_MINTS {
            return Err(MintsError::InvalidScheme(format!(
                "{} mints exceeds the enumeration limit of {}",
                self.n_mints(),
                MAX_ENUMERATED_MINTS
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, row) in self.rows.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "(")?;
            for (r, x) in row.iter().enumerate() {
                if r > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Set of mints, bit `r` set iff mint `r + 1` produces fake coins.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            SubsetMask(u64::MAX)
        } else {
            SubsetMask((1u64 << n) - 1)
        }
    }

    /// Mask from 1-based mint numbers.
    pub fn from_mints(mints: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &m in mints {
            if m == 0 || m > 64 {
                return Err(MintsError::Parse(format!(
                    "mint number {m} is out of range"
                )));
            }
            bits |= 1 << (m - 1);
        }
        Ok(SubsetMask(bits))
    }

    /// 1-based mint numbers in increasing order.
    pub fn mints(self) -> Vec<usize> {
        (0..64)
            .filter(|&r| self.contains(r))
            .map(|r| r + 1)
            .collect()
    }

    /// Whether mint `r` (0-based) is in the set.
    pub fn contains(self, r: usize) -> bool {
        r < 64 && self.0 >> r & 1 == 1
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Whether every set bit refers to one of the first `n` mints.
    pub fn fits(self, n: usize) -> bool {
        self.0 & !SubsetMask::full(n).0 == 0
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.mints().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

//! Weighing vectors in search order.
//!
//! Columns are enumerated by `(max entry, coordinates lexicographically)`.
//! Assigning mints in strictly increasing order of this key removes the
//! mint-permutation symmetry (equal columns are never feasible).

use std::cmp::Ordering;

/// Most weighings a search column can hold.
pub const MAX_ROWS: usize = 8;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Column {
    max: u32,
    coords: [u32; MAX_ROWS],
}

impl Ord for Column {
    fn cmp(&self, other: &Self) -> Ordering {
        self.max
            .cmp(&other.max)
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for Column {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Column {
    /// Column from its entries; `None` if there are too many rows or an
    /// entry does not fit.
    pub fn new(entries: &[u64]) -> Option<Self> {
        if entries.len() > MAX_ROWS {
            return None;
        }
        let mut coords = [0u32; MAX_ROWS];
        for (c, &x) in coords.iter_mut().zip(entries) {
            *c = u32::try_from(x).ok()?;
        }
        let max = coords.iter().copied().max().unwrap_or(0);
        Some(Column { max, coords })
    }

    /// The smallest nonzero column with `k` rows.
    pub fn first(k: usize) -> Self {
        let mut coords = [0u32; MAX_ROWS];
        coords[k - 1] = 1;
        Column { max: 1, coords }
    }

    pub fn max_entry(&self) -> u32 {
        self.max
    }

    pub fn sum(&self) -> u64 {
        self.coords.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn get(&self, j: usize) -> u32 {
        self.coords[j]
    }

    pub fn entries(&self, k: usize) -> Vec<u64> {
        self.coords[..k].iter().map(|&x| u64::from(x)).collect()
    }

    /// Column with the first two rows exchanged.
    pub fn swapped(&self) -> Self {
        let mut coords = self.coords;
        coords.swap(0, 1);
        Column {
            max: self.max,
            coords,
        }
    }

    /// Next column in search order.
    pub fn successor(&self, k: usize) -> Self {
        let m = self.max;
        let mut c = self.coords;
        if k == 2 {
            let (p, q) = (c[0], c[1]);
            let next = if p < m {
                if p + 1 < m {
                    (p + 1, m)
                } else {
                    (m, 0)
                }
            } else if q < m {
                (m, q + 1)
            } else {
                (0, m + 1)
            };
            c[0] = next.0;
            c[1] = next.1;
            return Column {
                max: next.0.max(next.1),
                coords: c,
            };
        }
        // Odometer over [0, m]^k with the last coordinate fastest.
        let mut i = k;
        loop {
            if i == 0 {
                return Column::first_of_group(k, m + 1);
            }
            i -= 1;
            if c[i] < m {
                c[i] += 1;
                break;
            }
            c[i] = 0;
        }
        if c[..k].iter().all(|&x| x < m) {
            // Smallest vector with this prefix whose max is exactly m.
            c[k - 1] = m;
        }
        Column { max: m, coords: c }
    }

    fn first_of_group(k: usize, m: u32) -> Self {
        let mut coords = [0u32; MAX_ROWS];
        coords[k - 1] = m;
        Column { max: m, coords }
    }
}

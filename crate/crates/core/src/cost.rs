use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::MintsError;
use crate::scheme::Scheme;

/// Objective minimized by the search.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostKind {
    /// Coins requested: per mint, the largest count over the weighings, summed.
    TotalMax,
    /// Every coin placed on the scale, over all weighings.
    GrandSum,
    /// Largest single count anywhere in the scheme.
    MaxEntry,
}

impl CostKind {
    pub const ALL: [CostKind; 3] = [CostKind::TotalMax, CostKind::GrandSum, CostKind::MaxEntry];

    pub fn name(self) -> &'static str {
        match self {
            CostKind::TotalMax => "total-max",
            CostKind::GrandSum => "grand-sum",
            CostKind::MaxEntry => "max-entry",
        }
    }
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostKind {
    type Err = MintsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "total-max" => Ok(CostKind::TotalMax),
            "grand-sum" => Ok(CostKind::GrandSum),
            "max-entry" => Ok(CostKind::MaxEntry),
            other => Err(MintsError::Parse(format!("unknown cost kind {other:?}"))),
        }
    }
}

pub fn cost(scheme: &Scheme, kind: CostKind) -> u64 {
    let n = scheme.n_mints();
    let rows = scheme.rows();
    match kind {
        CostKind::TotalMax => (0..n)
            .map(|r| rows.iter().map(|row| row[r]).max().unwrap_or(0))
            .sum(),
        CostKind::GrandSum => rows.iter().flatten().sum(),
        CostKind::MaxEntry => rows.iter().flatten().copied().max().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_scheme_costs() {
        let s = Scheme::two_weighings(vec![0, 1, 2], vec![1, 1, 0]).unwrap();
        assert_eq!(cost(&s, CostKind::TotalMax), 4);
        assert_eq!(cost(&s, CostKind::GrandSum), 5);
        assert_eq!(cost(&s, CostKind::MaxEntry), 2);
    }

    #[test]
    fn parse_names() {
        for kind in CostKind::ALL {
            assert_eq!(kind.name().parse::<CostKind>().unwrap(), kind);
        }
        assert!("total".parse::<CostKind>().is_err());
    }
}

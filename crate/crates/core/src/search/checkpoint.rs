//! Resumable snapshots of a long search.
//!
//! A checkpoint records the problem it belongs to, the best scheme found so
//! far, and the first-level branches (values of the first column) that have
//! not yet been fully explored.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cost::CostKind;
use crate::error::{MintsError, Result};
use crate::scheme::Scheme;

pub const CHECKPOINT_VERSION: u32 = 1;

/// Identifies the search a checkpoint belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemKey {
    /// `"classic"` or `"known-eps"`.
    pub variant: String,
    pub mints: usize,
    pub weighings: usize,
    pub cost: CostKind,
    pub cap: Option<u64>,
    pub initial_upper_bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncumbentRecord {
    pub cost: u64,
    pub scheme: Scheme,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub problem: ProblemKey,
    pub incumbent: Option<IncumbentRecord>,
    /// First columns whose subtrees are still unexplored.
    pub frontier: Vec<Vec<u64>>,
    /// Expansions performed so far across all runs.
    pub nodes: u64,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| MintsError::Checkpoint(format!("{}: {e}", path.display())))?;
        let cp: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| MintsError::Checkpoint(format!("{}: {e}", path.display())))?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(MintsError::Checkpoint(format!(
                "unsupported checkpoint version {}",
                cp.version
            )));
        }
        Ok(cp)
    }

    /// Writes through a temporary file so a crash never leaves a torn checkpoint.
    pub fn save(&self, path: &Path) -> Result<()> {
        let text =
            serde_json::to_string_pretty(self).expect("checkpoint serialization cannot fail");
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text)
            .and_then(|_| fs::rename(&tmp, path))
            .map_err(|e| MintsError::Checkpoint(format!("{}: {e}", path.display())))
    }

    /// Whether nothing is left to explore.
    pub fn is_complete(&self) -> bool {
        self.frontier.is_empty()
    }
}

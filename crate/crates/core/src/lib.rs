//! Exact tools for ApSimon's Mints: each of `n` mints makes either genuine or
//! fake coins, fake coins deviate from the known genuine weight by an unknown
//! nonzero fraction, and two exact weighings must reveal the set of fake mints.
//!
//! * [`feasibility`] checks a weighing scheme: it works iff no two non-empty
//!   sets of mints give collinear subset sums.
//! * [`search`] finds minimum-cost schemes under three cost functions, with an
//!   optional per-mint cap, and answers the capacity question.
//! * [`decoder`] simulates weighings with exact rationals and recovers the fake set.
//! * [`known_eps`] handles the variant where the deviation is known and any
//!   number of weighings is allowed.
//! * [`oracle`] holds slow, independent reference implementations for tests.

pub mod bounds;
pub mod cost;
pub mod decoder;
pub mod direction;
pub mod error;
pub mod feasibility;
pub mod known_eps;
pub mod oracle;
pub mod scheme;
pub mod search;

pub use bounds::{bounds, factorial_cost, factorial_scheme, FACTORIAL_N_MAX};
pub use cost::{cost, CostKind};
pub use decoder::{decode, ratio_table, simulate_weighings, DecodeOutcome, RatioTable, Rational};
pub use direction::{canonical_direction, Direction, IntVector};
pub use error::{MintsError, Result};
pub use feasibility::{subset_sum, verify_scheme, FeasibilityReport};
pub use known_eps::{search_known_eps, verify_injective, KnownEpsConfig};
pub use scheme::{Scheme, SubsetMask, ENTRY_MAX, MAX_ENUMERATED_MINTS};
pub use search::{
    canonical_form, capacity_max_mints, search_optimal, Budget, CapacityResult, Checkpoint,
    CheckpointSettings, SearchConfig, SearchResult, SearchStats, SearchStatus,
};

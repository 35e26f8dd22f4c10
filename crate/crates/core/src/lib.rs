//! Probabilistic k-dominant skyline maintenance over uncertain data streams.
//!
//! Every item in a count-based sliding window carries the probability of
//! being a k-dominant skyline member: its own occurrence probability times
//! `(1 - P(u'))` for every window item `u'` that k-dominates it. Two engines
//! keep those probabilities current as items arrive and expire:
//!
//! * [`NaiveEngine`] rescans the whole window on every event and doubles as
//!   the correctness oracle.
//! * [`MiEngine`] keeps two threshold-sorted index tables (middle indexing)
//!   and stops each scan as soon as the remaining entries provably cannot
//!   take part in a k-dominance relation.
//!
//! [`harness`] drives either engine over generated or file-backed streams for
//! verification and benchmarking.

pub mod dominance;
pub mod engine;
mod error;
pub mod harness;
pub mod index;
mod item;
pub mod ledger;
pub mod streamgen;
pub mod window;

#[cfg(test)]
mod test_support;

pub use dominance::{dominance_counts, dominates, k_dominant_skyline, k_dominates, DominanceCount};
pub use engine::{Engine, EngineConfig, EngineKind, EngineStats, MiEngine, NaiveEngine};
pub use error::{Error, Result};
pub use index::{can_prune, normalize, IndexTables, NormalizationBounds, SortedProfile};
pub use item::{ItemId, UncertainItem};
pub use ledger::SkylineLedgerEntry;
pub use window::{SlidingWindow, WindowSnapshot};

//! Middle indexing: normalized sorted profiles, their two thresholds, and
//! the two threshold-ordered tables used to cut dominance scans short.

mod normalize;
mod profile;
mod tables;

pub use normalize::{normalize, NormalizationBounds};
pub use profile::{build_profile, can_prune, SortedProfile};
pub(crate) use profile::check_pivot as profile_check_pivot;
pub use tables::{IndexTables, Thresholds};

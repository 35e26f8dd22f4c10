//! Stream engines that keep every window item's k-dominant skyline
//! probability current.
//!
//! Both engines share the window and ledger; they differ only in how they
//! find the entries affected by an arrival or an eviction.

mod mi;
mod naive;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use mi::MiEngine;
pub use naive::NaiveEngine;

use crate::error::{Error, Result};
use crate::index::profile_check_pivot;
use crate::index::NormalizationBounds;
use crate::item::UncertainItem;
use crate::window::{SlidingWindow, WindowSnapshot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Mi,
    Naive,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Mi => "mi",
            EngineKind::Naive => "naive",
        })
    }
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "mi" => Ok(EngineKind::Mi),
            "naive" => Ok(EngineKind::Naive),
            _ => Err(format!("unknown engine `{s}` (expected `mi` or `naive`)")),
        }
    }
}

/// Deliberate defects for exercising the verification harness.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// The MI engine skips removing an evicted item's factors.
    SkipEvictionUpdate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub dims: usize,
    pub k: usize,
    pub capacity: usize,
    /// Sorted-profile position the `mi_min` threshold is read from.
    pub pivot: usize,
    pub bounds: NormalizationBounds,
    /// Rebuild all probabilities from scratch every this many events.
    pub recompute_interval: Option<u64>,
    /// Cross-check pruning decisions and index/window agreement on every
    /// event. Costs a full scan per pass.
    pub audit: bool,
    #[doc(hidden)]
    pub fault: Option<Fault>,
}

impl EngineConfig {
    pub fn new(dims: usize, k: usize, capacity: usize, bounds: NormalizationBounds) -> Result<Self> {
        let config = EngineConfig {
            dims,
            k,
            capacity,
            pivot: Self::default_pivot(k),
            bounds,
            recompute_interval: None,
            audit: false,
            fault: None,
        };
        config.validate()?;
        Ok(config)
    }

    /// Middle of the admissible pivot range `0..k`.
    pub fn default_pivot(k: usize) -> usize {
        k.saturating_sub(1) / 2
    }

    pub fn with_pivot(mut self, pivot: usize) -> Result<Self> {
        self.pivot = pivot;
        self.validate()?;
        Ok(self)
    }

    pub fn with_audit(mut self, audit: bool) -> Self {
        self.audit = audit;
        self
    }

    pub fn with_recompute_interval(mut self, every: Option<u64>) -> Self {
        self.recompute_interval = every.filter(|&n| n > 0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        profile_check_pivot(self.pivot, self.k, self.dims)?;
        if self.capacity == 0 {
            return Err(Error::ZeroCapacity);
        }
        if self.bounds.dims() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                found: self.bounds.dims(),
            });
        }
        Ok(())
    }
}

/// Work counters accumulated over an engine's lifetime.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EngineStats {
    pub events: u64,
    pub evictions: u64,
    /// Exact k-dominance predicate evaluations.
    pub dominance_tests: u64,
    /// Entries skipped by a threshold cut-off instead of being tested.
    pub pruned: u64,
    pub recomputes: u64,
}

pub trait Engine {
    fn config(&self) -> &EngineConfig;

    fn window(&self) -> &SlidingWindow;

    fn stats(&self) -> EngineStats;

    /// Processes one arrival and returns the evicted item, if any.
    fn ingest(&mut self, item: UncertainItem) -> Result<Option<UncertainItem>>;

    fn snapshot(&self) -> WindowSnapshot {
        self.window().snapshot()
    }

    /// [`ingest`](Engine::ingest) followed by [`snapshot`](Engine::snapshot).
    fn push(&mut self, item: UncertainItem) -> Result<WindowSnapshot> {
        self.ingest(item)?;
        Ok(self.snapshot())
    }
}

pub fn build(kind: EngineKind, config: EngineConfig) -> Result<Box<dyn Engine + Send>> {
    Ok(match kind {
        EngineKind::Mi => Box::new(MiEngine::new(config)?),
        EngineKind::Naive => Box::new(NaiveEngine::new(config)?),
    })
}

/// Shape and bounds checks shared by both engines. Returns the normalized
/// attributes.
fn admit(config: &EngineConfig, window: &SlidingWindow, item: &UncertainItem) -> Result<Vec<f64>> {
    if item.dims() != config.dims {
        return Err(Error::DimensionMismatch {
            expected: config.dims,
            found: item.dims(),
        });
    }
    window.check_next_id(item.id)?;
    crate::index::normalize(item.attrs(), &config.bounds)
}

fn maybe_recompute(config: &EngineConfig, window: &mut SlidingWindow, stats: &mut EngineStats) -> Result<()> {
    if let Some(every) = config.recompute_interval {
        if stats.events.is_multiple_of(every) {
            window.recompute(config.k)?;
            stats.recomputes += 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;

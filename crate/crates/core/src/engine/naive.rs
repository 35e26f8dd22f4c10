use super::{admit, maybe_recompute, Engine, EngineConfig, EngineStats};
use crate::dominance::k_dominates_attrs;
use crate::error::Result;
use crate::item::UncertainItem;
use crate::ledger::SkylineLedgerEntry;
use crate::window::{SlidingWindow, WindowEntries, WindowHooks};

/// Full-scan engine: every arrival and eviction is tested against every
/// other window entry. Serves as baseline and as the reference for [`MiEngine`](super::MiEngine).
pub struct NaiveEngine {
    config: EngineConfig,
    window: SlidingWindow,
    scan: FullScan,
}

struct FullScan {
    k: usize,
    stats: EngineStats,
}

impl NaiveEngine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        config.validate()?;
        Ok(NaiveEngine {
            window: SlidingWindow::new(config.capacity)?,
            scan: FullScan {
                k: config.k,
                stats: EngineStats::default(),
            },
            config,
        })
    }
}

impl WindowHooks for FullScan {
    fn on_evict(&mut self, remaining: &mut WindowEntries, evicted: &SkylineLedgerEntry) -> Result<()> {
        let old = evicted.item();
        for entry in remaining.iter_mut() {
            self.stats.dominance_tests += 1;
            if k_dominates_attrs(old.attrs(), entry.item().attrs(), self.k) {
                entry.remove_dominator(old.prob())?;
            }
        }
        Ok(())
    }

    fn on_insert(&mut self, remaining: &mut WindowEntries, incoming: &mut SkylineLedgerEntry) -> Result<()> {
        let new = incoming.item().clone();
        for entry in remaining.iter_mut() {
            self.stats.dominance_tests += 1;
            if k_dominates_attrs(new.attrs(), entry.item().attrs(), self.k) {
                entry.add_dominator(new.prob())?;
            }
        }
        for entry in remaining.iter() {
            self.stats.dominance_tests += 1;
            if k_dominates_attrs(entry.item().attrs(), new.attrs(), self.k) {
                incoming.add_dominator(entry.item().prob())?;
            }
        }
        Ok(())
    }
}

impl Engine for NaiveEngine {
    fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn window(&self) -> &SlidingWindow {
        &self.window
    }

    fn stats(&self) -> EngineStats {
        self.scan.stats
    }

    fn ingest(&mut self, item: UncertainItem) -> Result<Option<UncertainItem>> {
        admit(&self.config, &self.window, &item)?;
        let evicted = self.window.push(SkylineLedgerEntry::new(item), &mut self.scan)?;
        let stats = &mut self.scan.stats;
        stats.events += 1;
        stats.evictions += evicted.is_some() as u64;
        maybe_recompute(&self.config, &mut self.window, stats)?;
        Ok(evicted)
    }
}

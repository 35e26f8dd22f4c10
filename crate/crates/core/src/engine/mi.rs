use super::{admit, maybe_recompute, Engine, EngineConfig, EngineStats, Fault};
use crate::dominance::k_dominates_attrs;
use crate::error::{Error, Result};
use crate::index::{build_profile, IndexTables, Thresholds};
use crate::item::{ItemId, UncertainItem};
use crate::ledger::SkylineLedgerEntry;
use crate::window::{SlidingWindow, WindowEntries, WindowHooks};

/// Middle-indexing engine.
///
/// Each item is indexed by two thresholds taken from its sorted normalized
/// profile. `x` cannot k-dominate `e` whenever `mi_min(x) > mi_max(e)`, so:
///
/// * eviction and insertion passes walk the table in descending `mi_max` and
///   stop at the first entry with `mi_max < mi_min(x)`;
/// * scoring a new item walks the table in ascending `mi_min` and stops at
///   the first entry with `mi_min > mi_max(new)`.
///
/// Entries that survive the cut-off still get the exact predicate, evaluated
/// on raw attributes.
pub struct MiEngine {
    config: EngineConfig,
    window: SlidingWindow,
    index: MiIndex,
}

struct MiIndex {
    k: usize,
    audit: bool,
    fault: Option<Fault>,
    /// Payload is a slot in `arena`, so scans test dominance on contiguous
    /// attribute rows without looking the entry up in the window.
    tables: IndexTables<Slot>,
    arena: Arena,
    stats: EngineStats,
}

/// Row index into the MI engine's attribute arena.
#[derive(Clone, Copy, Debug)]
pub struct Slot(u32);

/// Flat row storage for the indexed items' raw attributes and probabilities.
#[derive(Default)]
struct Arena {
    dims: usize,
    attrs: Vec<f64>,
    probs: Vec<f64>,
    free: Vec<u32>,
}

impl Arena {
    fn new(dims: usize, capacity: usize) -> Self {
        Arena {
            dims,
            attrs: Vec::with_capacity(dims * (capacity + 1)),
            probs: Vec::with_capacity(capacity + 1),
            free: Vec::new(),
        }
    }

    #[inline]
    fn row(&self, slot: Slot) -> &[f64] {
        let at = slot.0 as usize * self.dims;
        &self.attrs[at..at + self.dims]
    }

    #[inline]
    fn prob(&self, slot: Slot) -> f64 {
        self.probs[slot.0 as usize]
    }

    fn alloc(&mut self, item: &UncertainItem) -> Slot {
        match self.free.pop() {
            Some(s) => {
                let at = s as usize * self.dims;
                self.attrs[at..at + self.dims].copy_from_slice(item.attrs());
                self.probs[s as usize] = item.prob();
                Slot(s)
            }
            None => {
                self.attrs.extend_from_slice(item.attrs());
                self.probs.push(item.prob());
                Slot(self.probs.len() as u32 - 1)
            }
        }
    }

    fn release(&mut self, slot: Slot) {
        self.free.push(slot.0);
    }
}

/// Hooks for one push, carrying the incoming item's thresholds.
struct MiPass<'a> {
    index: &'a mut MiIndex,
    incoming: Thresholds,
}

impl MiEngine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        config.validate()?;
        Ok(MiEngine {
            window: SlidingWindow::new(config.capacity)?,
            index: MiIndex {
                k: config.k,
                audit: config.audit,
                fault: config.fault,
                tables: IndexTables::default(),
                arena: Arena::new(config.dims, config.capacity),
                stats: EngineStats::default(),
            },
            config,
        })
    }

    pub fn tables(&self) -> &IndexTables<Slot> {
        &self.index.tables
    }

    fn check_membership(&self) -> Result<()> {
        let tables = &self.index.tables;
        let window = self.window.entries();
        if tables.len() != window.len() || window.iter().any(|e| !tables.contains(e.item().id)) {
            let mut indexed: Vec<ItemId> = tables.ids().collect();
            indexed.sort();
            return Err(Error::Inconsistency(format!(
                "index holds {indexed:?} but window holds {:?}",
                window.iter().map(|e| e.item().id).collect::<Vec<_>>()
            )));
        }
        Ok(())
    }
}

fn entry_mut(entries: &mut WindowEntries, id: ItemId) -> Result<&mut SkylineLedgerEntry> {
    entries
        .get_mut(id)
        .ok_or_else(|| Error::Inconsistency(format!("{id} is indexed but not in the window")))
}

impl MiIndex {
    /// Walks entries in descending `mi_max` and applies `x`'s factor (added
    /// or removed) to each entry `x` k-dominates, stopping once
    /// `mi_max < x_min`.
    fn dominated_pass(
        &mut self,
        entries: &mut WindowEntries,
        x: &UncertainItem,
        x_min: f64,
        apply: impl Fn(&mut SkylineLedgerEntry, f64) -> Result<()>,
    ) -> Result<()> {
        let total = self.tables.len();
        let mut visited = 0;
        for (mi_max, id, &slot) in self.tables.scan_by_max() {
            if x_min > mi_max {
                break;
            }
            visited += 1;
            if k_dominates_attrs(x.attrs(), self.arena.row(slot), self.k) {
                apply(entry_mut(entries, id)?, x.prob())?;
            }
        }
        self.stats.dominance_tests += visited as u64;
        self.stats.pruned += (total - visited) as u64;
        if self.audit && visited < total {
            self.audit_skipped(x, x_min, visited)?;
        }
        Ok(())
    }

    /// Every entry past the cut-off must satisfy the prune premise and must
    /// in fact not be k-dominated by `x`.
    fn audit_skipped(&self, x: &UncertainItem, x_min: f64, from: usize) -> Result<()> {
        for (mi_max, id, &slot) in self.tables.scan_by_max().skip(from) {
            if !(mi_max < x_min) || k_dominates_attrs(x.attrs(), self.arena.row(slot), self.k) {
                return Err(Error::Inconsistency(format!(
                    "cut-off skipped {id} (mi_max {mi_max}) for {} (mi_min {x_min})",
                    x.id
                )));
            }
        }
        Ok(())
    }
}

impl WindowHooks for MiPass<'_> {
    fn on_evict(&mut self, remaining: &mut WindowEntries, evicted: &SkylineLedgerEntry) -> Result<()> {
        let old = evicted.item();
        // Drop the evicted item from the index first so it never meets itself.
        let (old_t, slot) = self.index.tables.remove(old.id)?;
        self.index.arena.release(slot);
        if self.index.fault == Some(Fault::SkipEvictionUpdate) {
            return Ok(());
        }
        self.index
            .dominated_pass(remaining, old, old_t.mi_min, |e, p| e.remove_dominator(p))
    }

    fn on_insert(&mut self, remaining: &mut WindowEntries, incoming: &mut SkylineLedgerEntry) -> Result<()> {
        let new = incoming.item().clone();
        let new_t = self.incoming;
        let index = &mut *self.index;
        index.dominated_pass(remaining, &new, new_t.mi_min, |e, p| e.add_dominator(p))?;

        // Score the new item against entries in ascending mi_min.
        let total = index.tables.len();
        let mut visited = 0;
        for (mi_min, _, &slot) in index.tables.scan_by_min() {
            if new_t.mi_max < mi_min {
                break;
            }
            visited += 1;
            if k_dominates_attrs(index.arena.row(slot), new.attrs(), index.k) {
                incoming.add_dominator(index.arena.prob(slot))?;
            }
        }
        index.stats.dominance_tests += visited as u64;
        index.stats.pruned += (total - visited) as u64;
        if index.audit {
            for (mi_min, id, &slot) in index.tables.scan_by_min().skip(visited) {
                if !(new_t.mi_max < mi_min) || k_dominates_attrs(index.arena.row(slot), new.attrs(), index.k) {
                    return Err(Error::Inconsistency(format!(
                        "cut-off skipped {id} (mi_min {mi_min}) while scoring {} (mi_max {})",
                        new.id, new_t.mi_max
                    )));
                }
            }
        }

        let slot = index.arena.alloc(&new);
        index.tables.insert_with(new.id, new_t, slot)
    }
}

impl Engine for MiEngine {
    fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn window(&self) -> &SlidingWindow {
        &self.window
    }

    fn stats(&self) -> EngineStats {
        self.index.stats
    }

    fn ingest(&mut self, item: UncertainItem) -> Result<Option<UncertainItem>> {
        let normalized = admit(&self.config, &self.window, &item)?;
        let profile = build_profile(&normalized, self.config.k, self.config.pivot)?;
        let mut pass = MiPass {
            index: &mut self.index,
            incoming: Thresholds {
                mi_min: profile.mi_min,
                mi_max: profile.mi_max,
            },
        };
        let evicted = self.window.push(SkylineLedgerEntry::new(item), &mut pass)?;
        let stats = &mut self.index.stats;
        stats.events += 1;
        stats.evictions += evicted.is_some() as u64;
        maybe_recompute(&self.config, &mut self.window, stats)?;
        if self.config.audit {
            self.check_membership()?;
        }
        Ok(evicted)
    }
}

//! Count-based FIFO sliding window of ledger entries.
//!
//! The window owns the entries; engines supply [`WindowHooks`] that are
//! invoked in a fixed order on every push: eviction of the oldest entry (when
//! full) is handled completely before the new entry is scored and inserted.

use std::collections::VecDeque;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dominance::k_dominates_attrs;
use crate::error::{Error, Result};
use crate::item::{ItemId, UncertainItem};
use crate::ledger::SkylineLedgerEntry;

/// Window contents in arrival order (strictly increasing ids).
#[derive(Clone, Debug, Default)]
pub struct WindowEntries(VecDeque<SkylineLedgerEntry>);

impl WindowEntries {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &SkylineLedgerEntry> {
        self.0.iter()
    }

    pub fn iter_mut(&mut self) -> impl ExactSizeIterator<Item = &mut SkylineLedgerEntry> {
        self.0.iter_mut()
    }

    pub fn get(&self, id: ItemId) -> Option<&SkylineLedgerEntry> {
        self.position(id).map(|i| &self.0[i])
    }

    pub fn get_mut(&mut self, id: ItemId) -> Option<&mut SkylineLedgerEntry> {
        self.position(id).map(move |i| &mut self.0[i])
    }

    fn position(&self, id: ItemId) -> Option<usize> {
        let front = self.0.front()?.item().id;
        // Ids from generators and files are dense, so the offset usually lands
        // directly on the entry.
        let guess = id.0.checked_sub(front.0)? as usize;
        if self.0.get(guess).is_some_and(|e| e.item().id == id) {
            return Some(guess);
        }
        self.0.binary_search_by_key(&id, |e| e.item().id).ok()
    }
}

/// Engine callbacks run by [`SlidingWindow::push`].
pub trait WindowHooks {
    /// Called after the oldest entry has left the window, with the entries
    /// that remain. Must undo every factor the evicted item contributed.
    fn on_evict(&mut self, remaining: &mut WindowEntries, evicted: &SkylineLedgerEntry) -> Result<()>;

    /// Called before `incoming` joins the window. Must apply the new item's
    /// factor to every entry it k-dominates and score `incoming` itself.
    fn on_insert(&mut self, remaining: &mut WindowEntries, incoming: &mut SkylineLedgerEntry) -> Result<()>;
}

/// Hooks that maintain membership only, leaving probabilities untouched.
pub struct FifoOnly;

impl WindowHooks for FifoOnly {
    fn on_evict(&mut self, _: &mut WindowEntries, _: &SkylineLedgerEntry) -> Result<()> {
        Ok(())
    }

    fn on_insert(&mut self, _: &mut WindowEntries, _: &mut SkylineLedgerEntry) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SlidingWindow {
    capacity: usize,
    entries: WindowEntries,
    last_id: Option<ItemId>,
}

impl SlidingWindow {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::ZeroCapacity);
        }
        Ok(SlidingWindow {
            capacity,
            entries: WindowEntries(VecDeque::with_capacity(capacity)),
            last_id: None,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() == self.capacity
    }

    pub fn entries(&self) -> &WindowEntries {
        &self.entries
    }

    /// Checks that `id` may be pushed next without touching the window.
    pub fn check_next_id(&self, id: ItemId) -> Result<()> {
        match self.last_id {
            Some(last) if id <= last => Err(Error::NonMonotoneId { last, got: id }),
            _ => Ok(()),
        }
    }

    /// Appends `entry`, evicting the oldest entry first if the window is full.
    /// Returns the evicted item.
    pub fn push(
        &mut self,
        mut entry: SkylineLedgerEntry,
        hooks: &mut impl WindowHooks,
    ) -> Result<Option<UncertainItem>> {
        self.check_next_id(entry.item().id)?;
        let evicted = if self.is_full() {
            let old = self.entries.0.pop_front().expect("full window is non-empty");
            hooks.on_evict(&mut self.entries, &old)?;
            Some(old)
        } else {
            None
        };
        hooks.on_insert(&mut self.entries, &mut entry)?;
        self.last_id = Some(entry.item().id);
        self.entries.0.push_back(entry);
        Ok(evicted.map(|e| e.item().clone()))
    }

    /// Rebuilds every entry's dominator factors from scratch against the
    /// current window contents. Quadratic; meant for periodic re-anchoring.
    pub fn recompute(&mut self, k: usize) -> Result<()> {
        let items: Vec<UncertainItem> = self.entries.iter().map(|e| e.item().clone()).collect();
        for entry in self.entries.iter_mut() {
            entry.reset();
            for other in &items {
                if other.id != entry.item().id && k_dominates_attrs(other.attrs(), entry.item().attrs(), k) {
                    entry.add_dominator(other.prob())?;
                }
            }
        }
        Ok(())
    }

    pub fn snapshot(&self) -> WindowSnapshot {
        WindowSnapshot {
            rows: self
                .entries
                .iter()
                .map(|e| SnapshotRow {
                    item: e.item().clone(),
                    probability: e.probability(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotRow {
    pub item: UncertainItem,
    pub probability: f64,
}

/// Window membership and current skyline probabilities, in arrival order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WindowSnapshot {
    rows: Vec<SnapshotRow>,
}

/// First point where two snapshots disagree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SnapshotMismatch {
    Membership { left: Vec<ItemId>, right: Vec<ItemId> },
    Probability { id: ItemId, left: f64, right: f64 },
}

impl WindowSnapshot {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SnapshotRow] {
        &self.rows
    }

    pub fn ids(&self) -> Vec<ItemId> {
        self.rows.iter().map(|r| r.item.id).collect()
    }

    pub fn probability(&self, id: ItemId) -> Option<f64> {
        self.rows
            .binary_search_by_key(&id, |r| r.item.id)
            .ok()
            .map(|i| self.rows[i].probability)
    }

    /// Compares membership exactly and probabilities within `tolerance`.
    pub fn compare(&self, other: &WindowSnapshot, tolerance: f64) -> Option<SnapshotMismatch> {
        if self.rows.len() != other.rows.len()
            || self.rows.iter().zip(&other.rows).any(|(a, b)| a.item.id != b.item.id)
        {
            return Some(SnapshotMismatch::Membership {
                left: self.ids(),
                right: other.ids(),
            });
        }
        self.rows
            .iter()
            .zip(&other.rows)
            .find(|(a, b)| !((a.probability - b.probability).abs() <= tolerance))
            .map(|(a, b)| SnapshotMismatch::Probability {
                id: a.item.id,
                left: a.probability,
                right: b.probability,
            })
    }

    pub fn max_abs_diff(&self, other: &WindowSnapshot) -> Option<f64> {
        if self.ids() != other.ids() {
            return None;
        }
        Some(
            self.rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| (a.probability - b.probability).abs())
                .fold(0.0, f64::max),
        )
    }

    /// SHA-256 over ids and the exact probability bits. Equal digests mean
    /// bit-identical snapshots; engines that agree only within tolerance
    /// produce different digests.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for row in &self.rows {
            hasher.update(row.item.id.0.to_le_bytes());
            hasher.update(row.probability.to_bits().to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

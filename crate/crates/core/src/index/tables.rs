use std::cmp::Reverse;
use std::collections::HashMap;

use ordered_float::OrderedFloat;

use crate::error::{Error, Result};
use crate::item::ItemId;

/// The `(mi_min, mi_max)` pair an item was indexed under.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub mi_min: f64,
    pub mi_max: f64,
}

type Key = OrderedFloat<f64>;

/// A sorted run of `(key, payload)` rows.
///
/// Position is found by binary search; rows are kept contiguous so that the
/// scans, which dominate the cost, are plain slice walks.
#[derive(Clone, Debug)]
struct SortedTable<K, P> {
    rows: Vec<(K, P)>,
}

impl<K: Ord, P> SortedTable<K, P> {
    fn new() -> Self {
        SortedTable { rows: Vec::new() }
    }

    fn insert(&mut self, key: K, payload: P) -> bool {
        match self.rows.binary_search_by(|(k, _)| k.cmp(&key)) {
            Ok(_) => false,
            Err(at) => {
                self.rows.insert(at, (key, payload));
                true
            }
        }
    }

    fn remove(&mut self, key: &K) -> Option<P> {
        let at = self.rows.binary_search_by(|(k, _)| k.cmp(key)).ok()?;
        Some(self.rows.remove(at).1)
    }

    fn iter(&self) -> std::slice::Iter<'_, (K, P)> {
        self.rows.iter()
    }
}

/// Two ordered views over the window's thresholds.
///
/// `by_max` iterates by descending `mi_max`, `by_min` by ascending `mi_min`;
/// both break ties by ascending id. Keys include the id, so iteration is
/// deterministic.
///
/// Each entry carries a payload `P` (cloned into both tables) so that scans
/// can inspect an item without a second lookup.
#[derive(Clone, Debug)]
pub struct IndexTables<P = ()> {
    by_max: SortedTable<(Reverse<Key>, ItemId), P>,
    by_min: SortedTable<(Key, ItemId), P>,
    thresholds: HashMap<ItemId, Thresholds>,
}

impl<P> Default for IndexTables<P> {
    fn default() -> Self {
        IndexTables {
            by_max: SortedTable::new(),
            by_min: SortedTable::new(),
            thresholds: HashMap::new(),
        }
    }
}

impl IndexTables<()> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: ItemId, t: Thresholds) -> Result<()> {
        self.insert_with(id, t, ())
    }
}

impl<P: Clone> IndexTables<P> {
    pub fn insert_with(&mut self, id: ItemId, t: Thresholds, payload: P) -> Result<()> {
        if self.thresholds.insert(id, t).is_some() {
            return Err(Error::Inconsistency(format!("{id} is already indexed")));
        }
        let fresh_max = self.by_max.insert((Reverse(OrderedFloat(t.mi_max)), id), payload.clone());
        let fresh_min = self.by_min.insert((OrderedFloat(t.mi_min), id), payload);
        if !(fresh_max && fresh_min) {
            return Err(Error::Inconsistency(format!("{id} already present in an index table")));
        }
        Ok(())
    }
}

impl<P> IndexTables<P> {
    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn contains(&self, id: ItemId) -> bool {
        self.thresholds.contains_key(&id)
    }

    pub fn thresholds(&self, id: ItemId) -> Option<Thresholds> {
        self.thresholds.get(&id).copied()
    }

    /// Removes `id` from both tables, returning its thresholds and payload.
    pub fn remove(&mut self, id: ItemId) -> Result<(Thresholds, P)> {
        let t = self
            .thresholds
            .remove(&id)
            .ok_or_else(|| Error::Inconsistency(format!("{id} is not indexed")))?;
        let removed_max = self.by_max.remove(&(Reverse(OrderedFloat(t.mi_max)), id));
        let removed_min = self.by_min.remove(&(OrderedFloat(t.mi_min), id));
        match (removed_max, removed_min) {
            (Some(payload), Some(_)) => Ok((t, payload)),
            _ => Err(Error::Inconsistency(format!("{id} missing from an index table"))),
        }
    }

    /// `(mi_max, id)` in descending `mi_max` order.
    pub fn iter_by_max(&self) -> impl ExactSizeIterator<Item = (f64, ItemId)> + '_ {
        self.by_max.iter().map(|&((Reverse(v), id), _)| (v.0, id))
    }

    /// `(mi_min, id)` in ascending `mi_min` order.
    pub fn iter_by_min(&self) -> impl ExactSizeIterator<Item = (f64, ItemId)> + '_ {
        self.by_min.iter().map(|&((v, id), _)| (v.0, id))
    }

    /// `(mi_max, id, payload)` in descending `mi_max` order.
    pub fn scan_by_max(&self) -> impl ExactSizeIterator<Item = (f64, ItemId, &P)> + '_ {
        self.by_max.iter().map(|((Reverse(v), id), p)| (v.0, *id, p))
    }

    /// `(mi_min, id, payload)` in ascending `mi_min` order.
    pub fn scan_by_min(&self) -> impl ExactSizeIterator<Item = (f64, ItemId, &P)> + '_ {
        self.by_min.iter().map(|((v, id), p)| (v.0, *id, p))
    }

    pub fn ids(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.thresholds.keys().copied()
    }
}

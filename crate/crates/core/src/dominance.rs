//! Dominance and k-dominance between uncertain items.
//!
//! All attributes are smaller-is-better. `a` k-dominates `b` when `a` is no
//! worse than `b` in at least `k` dimensions and strictly better in at least
//! one. Any strictly better dimension is also a no-worse dimension, so the
//! two counts below decide the relation without enumerating dimension
//! subsets.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::item::{ItemId, UncertainItem};

/// Per-pair comparison counts: dimensions where `a <= b` and where `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DominanceCount {
    pub le_count: usize,
    pub lt_count: usize,
}

impl DominanceCount {
    pub fn k_dominates(self, k: usize) -> bool {
        self.le_count >= k && self.lt_count >= 1
    }
}

pub fn dominance_counts(a: &UncertainItem, b: &UncertainItem) -> Result<DominanceCount> {
    check_dims(a, b)?;
    Ok(counts(a.attrs(), b.attrs()))
}

/// Full (d-)dominance.
pub fn dominates(a: &UncertainItem, b: &UncertainItem) -> Result<bool> {
    let c = dominance_counts(a, b)?;
    Ok(c.le_count == a.dims() && c.lt_count >= 1)
}

pub fn k_dominates(a: &UncertainItem, b: &UncertainItem, k: usize) -> Result<bool> {
    check_dims(a, b)?;
    check_k(k, a.dims())?;
    Ok(k_dominates_attrs(a.attrs(), b.attrs(), k))
}

/// Brute-force k-dominant skyline: ids of items no other item k-dominates.
///
/// Quadratic in the number of items. Used for verification only.
pub fn k_dominant_skyline(items: &[UncertainItem], k: usize) -> Result<BTreeSet<ItemId>> {
    let Some(first) = items.first() else {
        return Ok(BTreeSet::new());
    };
    check_k(k, first.dims())?;
    for item in items {
        check_dims(first, item)?;
    }
    Ok(items
        .iter()
        .enumerate()
        .filter(|&(i, u)| {
            !items
                .iter()
                .enumerate()
                .any(|(j, v)| i != j && k_dominates_attrs(v.attrs(), u.attrs(), k))
        })
        .map(|(_, u)| u.id)
        .collect())
}

pub(crate) fn check_k(k: usize, dims: usize) -> Result<()> {
    if k == 0 || k > dims {
        return Err(Error::KOutOfRange { k, dims });
    }
    Ok(())
}

fn check_dims(a: &UncertainItem, b: &UncertainItem) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch {
            expected: a.dims(),
            found: b.dims(),
        });
    }
    Ok(())
}

#[inline]
fn counts(a: &[f64], b: &[f64]) -> DominanceCount {
    let mut le_count = 0;
    let mut lt_count = 0;
    for (x, y) in a.iter().zip(b) {
        le_count += (x <= y) as usize;
        lt_count += (x < y) as usize;
    }
    DominanceCount { le_count, lt_count }
}

/// Unchecked hot-path predicate; callers guarantee equal lengths and a valid k.
#[inline]
pub(crate) fn k_dominates_attrs(a: &[f64], b: &[f64], k: usize) -> bool {
    debug_assert_eq!(a.len(), b.len());
    counts(a, b).k_dominates(k)
}

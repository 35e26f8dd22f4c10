use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Arrival sequence number of a stream item.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ItemId(pub u64);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.0)
    }
}

/// One stream tuple: `d` smaller-is-better attributes and an occurrence
/// probability in `(0, 1]`.
///
/// Attributes sit behind an `Arc` so snapshots can hand out items without
/// copying the attribute vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertainItem {
    pub id: ItemId,
    attrs: Arc<[f64]>,
    prob: f64,
}

impl UncertainItem {
    pub fn new(id: ItemId, attrs: impl Into<Arc<[f64]>>, prob: f64) -> Result<Self> {
        if !(prob > 0.0 && prob <= 1.0) {
            return Err(Error::InvalidProbability(prob));
        }
        let attrs = attrs.into();
        if let Some(bad) = attrs.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec(format!("non-finite attribute {bad} in {id}")));
        }
        Ok(UncertainItem { id, attrs, prob })
    }

    pub fn attrs(&self) -> &[f64] {
        &self.attrs
    }

    pub fn prob(&self) -> f64 {
        self.prob
    }

    pub fn dims(&self) -> usize {
        self.attrs.len()
    }
}

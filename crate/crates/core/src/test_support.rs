//! Shared fixtures for unit tests.

use crate::item::{ItemId, UncertainItem};

pub fn item(id: u64, attrs: &[f64], prob: f64) -> UncertainItem {
    UncertainItem::new(ItemId(id), attrs.to_vec(), prob).unwrap()
}

/// The five-item, four-attribute example data set.
pub fn sample_set() -> Vec<UncertainItem> {
    vec![
        item(1, &[10.0, 3.0, 4.0, 6.0], 0.2),
        item(2, &[9.0, 8.0, 5.0, 9.0], 0.4),
        item(3, &[2.0, 10.0, 4.0, 4.0], 0.5),
        item(4, &[5.0, 2.0, 3.0, 8.0], 0.1),
        item(5, &[7.0, 6.0, 4.0, 6.0], 0.8),
    ]
}

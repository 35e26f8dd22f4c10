use serde::Serialize;

use crate::error::{Error, Result};
use crate::item::UncertainItem;

/// Declared per-dimension value range used to map attributes onto `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizationBounds {
    ranges: Vec<(f64, f64)>,
}

impl NormalizationBounds {
    pub fn new(ranges: Vec<(f64, f64)>) -> Result<Self> {
        for (dim, &(min, max)) in ranges.iter().enumerate() {
            if !(min.is_finite() && max.is_finite() && min < max) {
                return Err(Error::InvalidBounds { dim, min, max });
            }
        }
        Ok(NormalizationBounds { ranges })
    }

    /// The same range for every one of `dims` dimensions.
    pub fn uniform(dims: usize, min: f64, max: f64) -> Result<Self> {
        Self::new(vec![(min, max); dims])
    }

    /// Tightest bounds covering `items`. Constant dimensions are widened by
    /// 0.5 on each side so every range stays non-empty.
    pub fn covering(items: &[UncertainItem]) -> Result<Self> {
        let Some(first) = items.first() else {
            return Err(Error::InvalidSpec("cannot derive bounds from an empty stream".into()));
        };
        let mut ranges: Vec<(f64, f64)> = first.attrs().iter().map(|&v| (v, v)).collect();
        for item in items {
            if item.dims() != ranges.len() {
                return Err(Error::DimensionMismatch {
                    expected: ranges.len(),
                    found: item.dims(),
                });
            }
            for (r, &v) in ranges.iter_mut().zip(item.attrs()) {
                r.0 = r.0.min(v);
                r.1 = r.1.max(v);
            }
        }
        for r in &mut ranges {
            if r.0 == r.1 {
                *r = (r.0 - 0.5, r.1 + 0.5);
            }
        }
        Self::new(ranges)
    }

    pub fn dims(&self) -> usize {
        self.ranges.len()
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }
}

/// Maps each attribute affinely onto `[0, 1]` using its dimension's bounds.
pub fn normalize(attrs: &[f64], bounds: &NormalizationBounds) -> Result<Vec<f64>> {
    if attrs.len() != bounds.dims() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dims(),
            found: attrs.len(),
        });
    }
    attrs
        .iter()
        .zip(&bounds.ranges)
        .enumerate()
        .map(|(dim, (&value, &(min, max)))| {
            if !(min..=max).contains(&value) {
                return Err(Error::OutOfBounds { dim, value, min, max });
            }
            // min <= value <= max keeps the quotient inside [0, 1].
            Ok(((value - min) / (max - min)).clamp(0.0, 1.0))
        })
        .collect()
}

//! Per-item skyline probability state.
//!
//! `P_sky(u) = P(u) * prod(1 - P(u'))` over the current k-dominators `u'`.
//! Dominators arrive and expire, so the product must support exact removal.
//! Factors with `P(u') = 1` are zero and cannot be divided back out; they are
//! counted instead of multiplied. The remaining factors are accumulated as a
//! sum of `ln(1 - P(u'))`, which turns removal into a subtraction.

use crate::error::{Error, Result};
use crate::item::UncertainItem;

#[derive(Clone, Debug)]
pub struct SkylineLedgerEntry {
    item: UncertainItem,
    zero_factor_count: u32,
    nonzero_factor_count: u32,
    nonzero_log_product: f64,
}

impl SkylineLedgerEntry {
    /// Entry with no dominators: probability equals `P(u)`.
    pub fn new(item: UncertainItem) -> Self {
        SkylineLedgerEntry {
            item,
            zero_factor_count: 0,
            nonzero_factor_count: 0,
            nonzero_log_product: 0.0,
        }
    }

    pub fn item(&self) -> &UncertainItem {
        &self.item
    }

    pub fn zero_factor_count(&self) -> u32 {
        self.zero_factor_count
    }

    pub fn nonzero_log_product(&self) -> f64 {
        self.nonzero_log_product
    }

    /// Number of current k-dominators, of either kind.
    pub fn dominator_count(&self) -> u32 {
        self.zero_factor_count + self.nonzero_factor_count
    }

    /// The current k-dominant skyline probability, always in `[0, P(u)]`.
    pub fn probability(&self) -> f64 {
        if self.zero_factor_count > 0 {
            0.0
        } else {
            self.item.prob() * self.nonzero_log_product.exp()
        }
    }

    /// Multiplies in the factor `1 - dominator_prob`.
    pub fn add_dominator(&mut self, dominator_prob: f64) -> Result<()> {
        check_prob(dominator_prob)?;
        if dominator_prob == 1.0 {
            self.zero_factor_count += 1;
        } else {
            self.nonzero_factor_count += 1;
            self.nonzero_log_product = (self.nonzero_log_product + (-dominator_prob).ln_1p()).min(0.0);
        }
        Ok(())
    }

    /// Divides out a factor previously added with [`add_dominator`](Self::add_dominator).
    pub fn remove_dominator(&mut self, dominator_prob: f64) -> Result<()> {
        check_prob(dominator_prob)?;
        if dominator_prob == 1.0 {
            self.zero_factor_count = self.zero_factor_count.checked_sub(1).ok_or_else(|| {
                Error::Inconsistency(format!("{}: removed a certain dominator that was never added", self.item.id))
            })?;
        } else {
            self.nonzero_factor_count = self.nonzero_factor_count.checked_sub(1).ok_or_else(|| {
                Error::Inconsistency(format!("{}: removed a dominator that was never added", self.item.id))
            })?;
            if self.nonzero_factor_count == 0 {
                // Empty product: drop any accumulated rounding residue.
                self.nonzero_log_product = 0.0;
            } else {
                self.nonzero_log_product = (self.nonzero_log_product - (-dominator_prob).ln_1p()).min(0.0);
            }
        }
        Ok(())
    }

    /// Clears all dominator factors.
    pub fn reset(&mut self) {
        self.zero_factor_count = 0;
        self.nonzero_factor_count = 0;
        self.nonzero_log_product = 0.0;
    }
}

fn check_prob(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

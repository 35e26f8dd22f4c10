use crate::dominance::check_k;
use crate::error::{Error, Result};

/// An item's normalized attributes sorted ascending, plus the two thresholds
/// read from it: `mi_min` at the pivot position and `mi_max` at
/// `pivot + (d - k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SortedProfile {
    values: Vec<f64>,
    k: usize,
    pivot: usize,
    pub mi_min: f64,
    pub mi_max: f64,
}

impl SortedProfile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }
}

/// Checks `0 <= pivot <= k - 1` and `1 <= k <= dims`.
pub(crate) fn check_pivot(pivot: usize, k: usize, dims: usize) -> Result<()> {
    check_k(k, dims)?;
    if pivot >= k {
        return Err(Error::PivotOutOfRange { pivot, k, max: k - 1 });
    }
    Ok(())
}

pub fn build_profile(normalized: &[f64], k: usize, pivot: usize) -> Result<SortedProfile> {
    let d = normalized.len();
    check_pivot(pivot, k, d)?;
    let mut values = normalized.to_vec();
    // stable: equal values keep their dimension order
    values.sort_by(f64::total_cmp);
    Ok(SortedProfile {
        mi_min: values[pivot],
        mi_max: values[pivot + d - k],
        values,
        k,
        pivot,
    })
}

/// True when `q` provably cannot k-dominate `p`.
///
/// If `p.mi_max < q.mi_min`, `p` has at most `k - 1 - pivot` coordinates above
/// `p.mi_max` and `q` has at most `pivot` coordinates below `q.mi_min`. Every
/// dimension where `q <= p` needs one of the two, so `q` is no worse than `p`
/// in at most `k - 1` dimensions. A false result says nothing.
pub fn can_prune(p: &SortedProfile, q: &SortedProfile) -> Result<bool> {
    if p.k != q.k || p.pivot != q.pivot || p.values.len() != q.values.len() {
        return Err(Error::Inconsistency(format!(
            "profiles built with different settings: (d={}, k={}, pivot={}) vs (d={}, k={}, pivot={})",
            p.values.len(),
            p.k,
            p.pivot,
            q.values.len(),
            q.k,
            q.pivot
        )));
    }
    Ok(p.mi_max < q.mi_min)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn thresholds_follow_pivot() {
        let p = build_profile(&[0.0, 0.5, 1.0], 2, 0).unwrap();
        assert_eq!((p.mi_min, p.mi_max), (0.0, 0.5));
        let p = build_profile(&[0.55, 0.0, 0.33], 2, 1).unwrap();
        assert_eq!(p.values(), &[0.0, 0.33, 0.55]);
        assert_eq!((p.mi_min, p.mi_max), (0.33, 0.55));
        let p = build_profile(&[0.9, 0.1, 0.4, 0.7], 4, 2).unwrap();
        assert_eq!(p.mi_min, p.mi_max);
        assert_eq!(p.mi_min, 0.7);
    }

    #[test]
    fn pivot_range_is_enforced() {
        assert!(matches!(build_profile(&[0.1, 0.2, 0.3], 2, 2), Err(Error::PivotOutOfRange { .. })));
        assert!(matches!(build_profile(&[0.1, 0.2, 0.3], 4, 0), Err(Error::KOutOfRange { .. })));
        assert!(build_profile(&[0.1, 0.2, 0.3], 3, 2).is_ok());
    }

    #[test]
    fn prune_examples() {
        // u3 (0, 0.33, 0.55) against u1 (0, 1, 1), d = 3, k = 2, pivot 1
        let p = build_profile(&[0.0, 0.33, 0.55], 2, 1).unwrap();
        let q = build_profile(&[0.0, 1.0, 1.0], 2, 1).unwrap();
        assert!(can_prune(&p, &q).unwrap());
        assert!(!can_prune(&q, &p).unwrap());

        // equal thresholds: strict inequality fails
        let p = build_profile(&[0.1, 0.4, 0.5], 2, 0).unwrap();
        let q = build_profile(&[0.4, 0.8, 0.9], 2, 0).unwrap();
        assert_eq!(p.mi_max, q.mi_min);
        assert!(!can_prune(&p, &q).unwrap());

        let p = build_profile(&[0.1, 0.9, 0.95], 2, 0).unwrap();
        let q = build_profile(&[0.3, 0.4, 0.5], 2, 0).unwrap();
        assert_eq!((p.mi_max, q.mi_min), (0.9, 0.3));
        assert!(!can_prune(&p, &q).unwrap());
    }

    #[test]
    fn mismatched_settings_are_a_fault() {
        let p = build_profile(&[0.1, 0.4, 0.5], 2, 0).unwrap();
        let q = build_profile(&[0.1, 0.4, 0.5], 2, 1).unwrap();
        assert!(matches!(can_prune(&p, &q), Err(Error::Inconsistency(_))));
    }

    proptest! {
        #[test]
        fn sorted_permutation(values in proptest::collection::vec(0.0f64..=1.0, 1..13), k_frac in 0.0f64..1.0) {
            let d = values.len();
            let k = 1 + ((d - 1) as f64 * k_frac) as usize;
            let p = build_profile(&values, k, k - 1).unwrap();
            prop_assert!(p.values().windows(2).all(|w| w[0] <= w[1]));
            let mut a = values.clone();
            a.sort_by(f64::total_cmp);
            prop_assert_eq!(p.values(), &a[..]);
            prop_assert!(p.mi_min <= p.mi_max);
        }
    }
}

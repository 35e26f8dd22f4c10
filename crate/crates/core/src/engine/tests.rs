use proptest::prelude::*;

use super::*;
use crate::dominance::k_dominates;
use crate::item::ItemId;
use crate::test_support::{item, sample_set};

/// Direct product over the window: P(u) * prod(1 - P(u')) for k-dominators u'.
fn brute_force(window: &[UncertainItem], k: usize) -> Vec<f64> {
    window
        .iter()
        .map(|u| {
            window
                .iter()
                .filter(|v| v.id != u.id && k_dominates(v, u, k).unwrap())
                .fold(u.prob(), |acc, v| acc * (1.0 - v.prob()))
        })
        .collect()
}

fn table_config(k: usize, capacity: usize) -> EngineConfig {
    EngineConfig::new(4, k, capacity, NormalizationBounds::uniform(4, 0.0, 10.0).unwrap())
        .unwrap()
        .with_audit(true)
}

fn engines(config: &EngineConfig) -> [Box<dyn Engine + Send>; 2] {
    [
        build(EngineKind::Naive, config.clone()).unwrap(),
        build(EngineKind::Mi, config.clone()).unwrap(),
    ]
}

#[test]
fn sample_set_final_probabilities() {
    // brute force over the five-item set at k = 3: u2 <- {u1, u3, u4, u5}, u3 and u4 undominated
    let expected_u2: f64 = 0.4 * (1.0 - 0.2) * (1.0 - 0.5) * (1.0 - 0.1) * (1.0 - 0.8);
    assert!((expected_u2 - 0.0288).abs() < 1e-15);
    for mut engine in engines(&table_config(3, 5)) {
        let mut snap = WindowSnapshot::default();
        for it in sample_set() {
            snap = engine.push(it).unwrap();
        }
        assert!((snap.probability(ItemId(2)).unwrap() - expected_u2).abs() < 1e-12);
        assert_eq!(snap.probability(ItemId(3)), Some(0.5));
        assert_eq!(snap.probability(ItemId(4)), Some(0.1));
        let oracle = brute_force(&sample_set(), 3);
        for (row, want) in snap.rows().iter().zip(oracle) {
            assert!((row.probability - want).abs() < 1e-12);
        }
    }
}

#[test]
fn first_item_keeps_its_probability() {
    for mut engine in engines(&table_config(2, 3)) {
        let snap = engine.push(item(1, &[3.0, 3.0, 3.0, 3.0], 0.37)).unwrap();
        assert_eq!(snap.probability(ItemId(1)), Some(0.37));
    }
}

#[test]
fn sample_set_window_of_three_tracks_evictions() {
    for k in 1..=4 {
        let [mut naive, mut mi] = engines(&table_config(k, 3));
        let items = sample_set();
        for (i, it) in items.iter().enumerate() {
            let a = naive.push(it.clone()).unwrap();
            let b = mi.push(it.clone()).unwrap();
            assert_eq!(a.compare(&b, 1e-12), None);
            let lo = (i + 1).saturating_sub(3);
            let oracle = brute_force(&items[lo..=i], k);
            for (row, want) in a.rows().iter().zip(oracle) {
                assert!((row.probability - want).abs() < 1e-12, "k={k} event {i}");
            }
        }
    }
}

#[test]
fn rejects_malformed_items() {
    for mut engine in engines(&table_config(2, 3)) {
        assert!(matches!(engine.ingest(item(1, &[1.0, 2.0], 0.5)), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            engine.ingest(item(1, &[1.0, 2.0, 3.0, 11.0], 0.5)),
            Err(Error::OutOfBounds { dim: 3, .. })
        ));
        engine.ingest(item(4, &[1.0, 2.0, 3.0, 4.0], 0.5)).unwrap();
        assert!(matches!(engine.ingest(item(4, &[1.0, 2.0, 3.0, 4.0], 0.5)), Err(Error::NonMonotoneId { .. })));
        assert_eq!(engine.window().len(), 1);
    }
}

#[test]
fn config_validation() {
    let b = NormalizationBounds::uniform(4, 0.0, 1.0).unwrap();
    assert!(matches!(EngineConfig::new(4, 0, 3, b.clone()), Err(Error::KOutOfRange { .. })));
    assert!(matches!(EngineConfig::new(4, 5, 3, b.clone()), Err(Error::KOutOfRange { .. })));
    assert!(matches!(EngineConfig::new(4, 2, 0, b.clone()), Err(Error::ZeroCapacity)));
    assert!(matches!(EngineConfig::new(3, 2, 3, b.clone()), Err(Error::DimensionMismatch { .. })));
    let c = EngineConfig::new(4, 3, 3, b).unwrap();
    assert_eq!(c.pivot, 1);
    assert!(matches!(c.clone().with_pivot(3), Err(Error::PivotOutOfRange { .. })));
    assert_eq!(c.with_pivot(2).unwrap().pivot, 2);
    assert_eq!(EngineConfig::default_pivot(11), 5);
    assert_eq!(EngineConfig::default_pivot(1), 0);
}

#[test]
fn new_item_above_every_threshold_changes_nothing() {
    // Stored items live in [0, 0.3]; the new item sits at 0.9+ everywhere, so
    // its mi_min exceeds every stored mi_max.
    let config = EngineConfig::new(3, 2, 10, NormalizationBounds::uniform(3, 0.0, 1.0).unwrap())
        .unwrap()
        .with_audit(true);
    let mut mi = MiEngine::new(config).unwrap();
    let stored = [[0.1, 0.3, 0.2], [0.0, 0.2, 0.25], [0.3, 0.1, 0.05]];
    for (i, a) in stored.iter().enumerate() {
        mi.ingest(item(i as u64 + 1, a, 0.5)).unwrap();
    }
    let before = mi.snapshot();
    let tests_before = mi.stats().dominance_tests;
    mi.ingest(item(10, &[0.9, 0.95, 1.0], 0.7)).unwrap();
    let after = mi.snapshot();
    for row in before.rows() {
        assert_eq!(after.probability(row.item.id), Some(row.probability));
    }
    // the insertion pass breaks at once; only scoring the new item tests entries
    assert!(mi.stats().dominance_tests - tests_before <= 3);
}

#[test]
fn new_item_below_every_threshold_is_scored_without_tests() {
    let config = EngineConfig::new(3, 2, 10, NormalizationBounds::uniform(3, 0.0, 1.0).unwrap())
        .unwrap()
        .with_audit(true);
    let mut mi = MiEngine::new(config).unwrap();
    for (i, a) in [[0.8, 0.9, 0.85], [0.7, 0.95, 1.0]].iter().enumerate() {
        mi.ingest(item(i as u64 + 1, a, 0.5)).unwrap();
    }
    let stats = mi.stats();
    mi.ingest(item(3, &[0.0, 0.1, 0.2], 0.4)).unwrap();
    assert_eq!(mi.snapshot().probability(ItemId(3)), Some(0.4));
    // insertion pass tests both entries, scoring pass none
    assert_eq!(mi.stats().dominance_tests - stats.dominance_tests, 2);
    assert_eq!(mi.stats().pruned - stats.pruned, 2);
}

#[test]
fn all_zero_item_dominates_everything_it_beats_somewhere() {
    let bounds = NormalizationBounds::uniform(4, 0.0, 1.0).unwrap();
    for k in 1..=4 {
        let config = EngineConfig::new(4, k, 10, bounds.clone()).unwrap().with_audit(true);
        let mut mi = MiEngine::new(config).unwrap();
        let stored: [[f64; 4]; 4] = [[0.0, 0.0, 0.0, 0.0], [0.0, 0.5, 0.0, 0.0], [0.3, 0.4, 0.5, 0.6], [1.0, 1.0, 1.0, 1.0]];
        for (i, a) in stored.iter().enumerate() {
            mi.ingest(item(i as u64 + 1, a, 0.5)).unwrap();
        }
        let before = mi.snapshot();
        mi.ingest(item(9, &[0.0; 4], 0.25)).unwrap();
        let after = mi.snapshot();
        for row in before.rows() {
            let strictly_worse_somewhere = row.item.attrs().iter().any(|&v| v > 0.0);
            let want = if strictly_worse_somewhere { row.probability * 0.75 } else { row.probability };
            assert!((after.probability(row.item.id).unwrap() - want).abs() < 1e-12);
        }
    }
}

#[test]
fn single_dominator_scoring() {
    let config = EngineConfig::new(2, 2, 4, NormalizationBounds::uniform(2, 0.0, 1.0).unwrap()).unwrap();
    let mut mi = MiEngine::new(config).unwrap();
    mi.ingest(item(1, &[0.1, 0.2], 0.5)).unwrap();
    let snap = mi.push(item(2, &[0.3, 0.4], 0.4)).unwrap();
    assert!((snap.probability(ItemId(2)).unwrap() - 0.2).abs() < 1e-15);
}

#[test]
fn mi_index_follows_the_window() {
    let config = table_config(2, 3);
    let mut mi = MiEngine::new(config).unwrap();
    for it in sample_set() {
        mi.ingest(it).unwrap();
        let mut ids: Vec<_> = mi.tables().ids().collect();
        ids.sort();
        assert_eq!(ids, mi.snapshot().ids());
    }
}

#[test]
fn skipped_eviction_update_diverges_after_first_eviction() {
    let mut config = table_config(2, 3);
    config.fault = Some(Fault::SkipEvictionUpdate);
    let [mut naive, mut mi] = engines(&config);
    let mut first_bad = None;
    for (i, it) in sample_set().into_iter().enumerate() {
        let a = naive.push(it.clone()).unwrap();
        let b = mi.push(it).unwrap();
        if first_bad.is_none() && a.compare(&b, 1e-9).is_some() {
            first_bad = Some(i);
        }
    }
    // u1 2-dominates u3, so evicting u1 at the fourth arrival must be undone.
    assert_eq!(first_bad, Some(3));
}

#[test]
fn certain_items_zero_and_release() {
    let config = EngineConfig::new(2, 2, 2, NormalizationBounds::uniform(2, 0.0, 1.0).unwrap())
        .unwrap()
        .with_audit(true);
    for mut engine in engines(&config) {
        engine.push(item(1, &[0.1, 0.1], 1.0)).unwrap();
        let snap = engine.push(item(2, &[0.5, 0.5], 0.6)).unwrap();
        assert_eq!(snap.probability(ItemId(2)), Some(0.0));
        let snap = engine.push(item(3, &[0.9, 0.9], 0.3)).unwrap();
        assert_eq!(snap.probability(ItemId(2)), Some(0.6));
        assert!((snap.probability(ItemId(3)).unwrap() - 0.3 * 0.4).abs() < 1e-15);
    }
}

#[test]
fn recompute_interval_keeps_results() {
    let config = table_config(2, 3).with_recompute_interval(Some(2));
    let plain = table_config(2, 3);
    for kind in [EngineKind::Naive, EngineKind::Mi] {
        let mut a = build(kind, config.clone()).unwrap();
        let mut b = build(kind, plain.clone()).unwrap();
        for it in sample_set() {
            let (sa, sb) = (a.push(it.clone()).unwrap(), b.push(it).unwrap());
            assert_eq!(sa.compare(&sb, 1e-12), None);
        }
        assert_eq!(a.stats().recomputes, 2);
        assert_eq!(b.stats().recomputes, 0);
    }
}

#[derive(Clone, Debug)]
struct Case {
    d: usize,
    k: usize,
    pivot: usize,
    capacity: usize,
    rows: Vec<(Vec<f64>, f64)>,
}

fn case() -> impl Strategy<Value = Case> {
    (1usize..=6, 1usize..=12)
        .prop_flat_map(|(d, capacity)| (Just(d), 1..=d, Just(capacity)))
        .prop_flat_map(|(d, k, capacity)| {
            let row = (
                // coarse grid to force ties and repeated vectors
                proptest::collection::vec((0u8..=4).prop_map(|v| f64::from(v) / 4.0), d),
                prop_oneof![1 => Just(1.0), 6 => 0.01f64..1.0],
            );
            (Just(d), Just(k), 0..k, Just(capacity), proptest::collection::vec(row, 1..50))
        })
        .prop_map(|(d, k, pivot, capacity, rows)| Case { d, k, pivot, capacity, rows })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn engines_agree_with_each_other_and_with_brute_force(c in case()) {
        let config = EngineConfig::new(c.d, c.k, c.capacity, NormalizationBounds::uniform(c.d, 0.0, 1.0).unwrap())
            .unwrap()
            .with_pivot(c.pivot)
            .unwrap()
            .with_audit(true);
        let [mut naive, mut mi] = engines(&config);
        let items: Vec<UncertainItem> = c.rows.iter().enumerate()
            .map(|(i, (a, p))| item(i as u64 + 1, a, *p))
            .collect();
        for (i, it) in items.iter().enumerate() {
            let tests = (naive.stats().dominance_tests, mi.stats().dominance_tests);
            let a = naive.push(it.clone()).unwrap();
            let b = mi.push(it.clone()).unwrap();
            prop_assert_eq!(a.compare(&b, 1e-9), None);
            prop_assert!(mi.stats().dominance_tests - tests.1 <= naive.stats().dominance_tests - tests.0);

            let lo = (i + 1).saturating_sub(c.capacity);
            let oracle = brute_force(&items[lo..=i], c.k);
            for (row, want) in b.rows().iter().zip(&oracle) {
                prop_assert!((row.probability - want).abs() < 1e-9);
                prop_assert!(row.probability >= 0.0 && row.probability <= row.item.prob());
            }
            prop_assert!(b.len() <= c.capacity);
        }
    }

    #[test]
    fn pivot_choice_does_not_change_results(c in case()) {
        let bounds = NormalizationBounds::uniform(c.d, 0.0, 1.0).unwrap();
        let finals: Vec<WindowSnapshot> = (0..c.k)
            .map(|pivot| {
                let config = EngineConfig::new(c.d, c.k, c.capacity, bounds.clone()).unwrap().with_pivot(pivot).unwrap();
                let mut mi = MiEngine::new(config).unwrap();
                for (i, (a, p)) in c.rows.iter().enumerate() {
                    mi.ingest(item(i as u64 + 1, a, *p)).unwrap();
                }
                mi.snapshot()
            })
            .collect();
        for s in &finals[1..] {
            prop_assert_eq!(finals[0].compare(s, 1e-9), None);
        }
    }
}

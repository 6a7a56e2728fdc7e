use approx::assert_abs_diff_eq;
use memcortex::decay::{decay_pass, emotional_stability, retrievability, review_boost, CopyKind, CopySet, DecayConfig};
use memcortex::memory::{LayerKind, LayerStore, MemoryItem, SECS_PER_DAY, SECS_PER_HOUR};
use proptest::prelude::*;

// e^-x without f64::exp: halve x until small, sum the Taylor series, square back up.
fn exp_neg(x: f64) -> f64 {
    let mut halvings = 0;
    let mut y = x;
    while y > 0.5 {
        y /= 2.0;
        halvings += 1;
    }
    let (mut term, mut sum) = (1.0, 1.0);
    for n in 1..40 {
        term *= -y / n as f64;
        sum += term;
    }
    for _ in 0..halvings {
        sum *= sum;
    }
    sum
}

#[test]
fn ebbinghaus_matches_series_oracle() {
    for hours in [1.0, 6.0, 24.0, 72.0, 168.0] {
        let t = hours / 24.0;
        assert_abs_diff_eq!(retrievability(1.0, t), exp_neg(t), epsilon = 1e-12);
    }
    assert_eq!(retrievability(3.0, 0.0), 1.0);
}

#[test]
fn emotional_ramp_is_linear_and_capped() {
    assert_eq!(emotional_stability(2.0, 0.0, 3.0), 2.0);
    assert_abs_diff_eq!(emotional_stability(2.0, 0.5, 3.0), 4.0, epsilon = 1e-12);
    assert_abs_diff_eq!(emotional_stability(2.0, -1.0, 3.0), 6.0, epsilon = 1e-12);
    assert_abs_diff_eq!(emotional_stability(2.0, 4.0, 3.0), 6.0, epsilon = 1e-12);
}

#[test]
fn review_boost_multiplies_and_rejects_nonpositive() {
    assert_abs_diff_eq!(review_boost(2.0, 1.3).unwrap(), 2.6, epsilon = 1e-12);
    assert!(review_boost(0.0, 1.3).is_err());
}

#[test]
fn copy_dominance_follows_fast_medium_deep() {
    let set = CopySet::new(1.0, 0.0);
    let at = |secs: f64| set.strength(secs).1;
    assert!(matches!(at(SECS_PER_HOUR), CopyKind::Fast | CopyKind::Medium));
    assert_eq!(at(SECS_PER_DAY), CopyKind::Medium);
    assert_eq!(at(7.0 * SECS_PER_DAY), CopyKind::Deep);
    assert_eq!(at(30.0 * SECS_PER_DAY), CopyKind::Deep);
    let (composite, _) = set.strength(30.0 * SECS_PER_DAY);
    assert!(composite >= 0.8);
}

#[test]
fn copy_values_at_known_points() {
    let set = CopySet::new(1.0, 0.0);
    let [fast, medium, deep] = set.copies(7.0 * SECS_PER_DAY);
    assert_abs_diff_eq!(fast, exp_neg(42.0), epsilon = 1e-25);
    assert_abs_diff_eq!(medium, 0.8 * exp_neg(0.5), epsilon = 1e-12);
    assert_abs_diff_eq!(deep, std::f64::consts::LN_2, epsilon = 1e-12);
    let [_, _, clamped] = set.copies(30.0 * SECS_PER_DAY);
    assert_eq!(clamped, 1.0);
    let unclamped = CopySet { clamp_deep: false, ..set };
    assert!(unclamped.copies(30.0 * SECS_PER_DAY)[2] > 1.6);
}

#[test]
fn decay_pass_removes_weak_items_only() {
    let mut store = LayerStore::new(2);
    let weak = store.insert(MemoryItem::new("old fact", LayerKind::Semantic, vec![1.0, 0.0]), 0.0).unwrap();
    let sturdy = store
        .insert(MemoryItem::new("sturdy fact", LayerKind::Semantic, vec![0.0, 1.0]).with_stability(30.0), 0.0)
        .unwrap();
    let core = store.insert(MemoryItem::new("i am me", LayerKind::Core, vec![1.0, 1.0]), 0.0).unwrap();
    let cfg = DecayConfig::default();
    let gone = decay_pass(&mut store, 5.0 * SECS_PER_DAY, 1.0, &cfg, None);
    assert_eq!(gone, vec![weak]);
    assert!(store.is_live(sturdy));
    assert!(store.is_live(core));
}

proptest! {
    #[test]
    fn retrievability_is_monotone(s in 0.01f64..100.0, t in 0.0f64..50.0, dt in 0.001f64..5.0, ds in 0.001f64..5.0) {
        prop_assert!(retrievability(s, t + dt) < retrievability(s, t) || retrievability(s, t) == 0.0);
        prop_assert!(retrievability(s + ds, t + dt) > retrievability(s, t + dt) || retrievability(s, t + dt) == 0.0);
    }

    #[test]
    fn composite_bounds_each_copy(t in 0.0f64..(90.0 * 86_400.0)) {
        let set = CopySet::new(1.0, 0.0);
        let (composite, _) = set.strength(t);
        for c in set.copies(t) {
            prop_assert!(composite >= c);
        }
        prop_assert!((0.0..=1.0).contains(&composite));
    }

    #[test]
    fn deep_copy_grows_until_clamp(t in 0.0f64..(60.0 * 86_400.0), dt in 1.0f64..86_400.0) {
        let set = CopySet::new(1.0, 0.0);
        prop_assert!(set.copies(t + dt)[2] >= set.copies(t)[2]);
    }

    #[test]
    fn copies_never_lose_to_ebbinghaus_after_six_hours(hours in 6.0f64..(24.0 * 60.0)) {
        let (composite, _) = CopySet::new(1.0, 0.0).strength(hours * SECS_PER_HOUR);
        prop_assert!(composite >= retrievability(1.0, hours / 24.0));
    }
}

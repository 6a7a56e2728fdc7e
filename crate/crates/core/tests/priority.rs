use approx::assert_abs_diff_eq;
use memcortex::memory::SECS_PER_DAY;
use memcortex::neuro::ModulationOutputs;
use memcortex::priority::{
    gate_threshold, gate_update, lock_score, priority, BiasKind, BiasLedger, LockInput, OutcomeKind, PriorityInput, PriorityWeights,
};
use proptest::prelude::*;

fn input(s: f64, v: f64, r: f64, g: f64) -> PriorityInput {
    PriorityInput { saliency: s, valence: v, reward: r, goal: g }
}

fn flat(level: f64) -> ModulationOutputs {
    ModulationOutputs { learning_rate: level, exploration_bias: level, consolidation_patience: level, attention_ratio: level }
}

#[test]
fn weighted_sum_and_fast_path() {
    assert_abs_diff_eq!(priority(&input(1.0, 0.0, 0.0, 0.0), None), 0.2, epsilon = 1e-12);
    assert_abs_diff_eq!(priority(&input(0.5, 0.4, 0.5, 0.5), None), 0.1 + 0.1 + 0.125 + 0.15, epsilon = 1e-12);
    assert_eq!(priority(&input(0.0, -0.61, 0.0, 0.0), None), 0.5);
    assert_abs_diff_eq!(priority(&input(0.0, 0.6, 0.0, 0.0), None), 0.15, epsilon = 1e-12);
}

#[test]
fn neutral_modulation_keeps_weights() {
    let w = PriorityWeights::default();
    let m = w.modulated(&flat(0.5));
    assert_abs_diff_eq!(m.saliency, w.saliency, epsilon = 1e-12);
    assert_abs_diff_eq!(m.goal, w.goal, epsilon = 1e-12);
    let skew = w.modulated(&ModulationOutputs { exploration_bias: 1.0, ..flat(0.5) });
    assert_abs_diff_eq!(skew.saliency + skew.emotion + skew.reward + skew.goal, 1.0, epsilon = 1e-12);
    assert!(skew.saliency > w.saliency);
}

#[test]
fn lock_by_hand() {
    let l = lock_score(&LockInput { access_count: 10, confidence: 0.5, age_days: 365.0, is_core: true });
    assert_abs_diff_eq!(l.lock, 0.3 + 0.15 + 0.2 + 0.2, epsilon = 1e-12);
    assert_abs_diff_eq!(l.rigidity, 1.0 + 0.1 * 366f64.log2(), epsilon = 1e-12);
    assert_abs_diff_eq!(gate_threshold(&l), 0.5 + 0.3 * l.lock * l.rigidity, epsilon = 1e-12);
    assert!(!gate_update(0.5, &l));
}

#[test]
fn confirmation_bias_statistic() {
    let mut ledger = BiasLedger::default();
    for i in 0..8 {
        ledger.record(OutcomeKind::EvidenceAccept, true, i as f64);
    }
    ledger.record(OutcomeKind::EvidenceAccept, false, 8.0);
    let alerts = ledger.record(OutcomeKind::EvidenceReject, false, 9.0);
    assert_abs_diff_eq!(ledger.confirmation_bias(), 7.0 / 10.0, epsilon = 1e-12);
    assert_eq!(alerts.len(), 1);
    assert_eq!(alerts[0].kind, BiasKind::Confirmation);
    ledger.prune(31.0 * SECS_PER_DAY);
    assert!(ledger.is_empty());
}

#[test]
fn recency_and_efficiency() {
    let mut ledger = BiasLedger::default();
    assert_eq!(ledger.retrieval_efficiency(), 1.0);
    ledger.record(OutcomeKind::RecencyPick, true, 0.0);
    ledger.record(OutcomeKind::RecencyPick, false, 0.0);
    ledger.record(OutcomeKind::RetrievalHit, true, 0.0);
    ledger.record(OutcomeKind::RetrievalMiss, true, 0.0);
    assert_eq!(ledger.recency_bias(), 0.0);
    assert_eq!(ledger.retrieval_efficiency(), 0.5);
    ledger.observe_pe(0.9, 100.0);
    assert!(ledger.novelty_open(699.0));
    assert!(!ledger.novelty_open(700.0));
}

proptest! {
    #[test]
    fn priority_monotone(
        base in (0.0f64..1.0, -1.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0),
        bump in 0.0f64..0.5,
        which in 0usize..4,
        level in prop::option::of(0.0f64..1.0),
    ) {
        let (s, v, r, g) = base;
        let lo = input(s, v, r, g);
        let mut hi = lo;
        match which {
            0 => hi.saliency = (s + bump).min(1.0),
            1 => hi.valence = (v.abs() + bump).min(1.0) * if v < 0.0 { -1.0 } else { 1.0 },
            2 => hi.reward = (r + bump).min(1.0),
            _ => hi.goal = (g + bump).min(1.0),
        }
        let m = level.map(flat);
        prop_assert!(priority(&hi, m.as_ref()) >= priority(&lo, m.as_ref()));
        if v.abs() > 0.6 {
            prop_assert!(priority(&lo, m.as_ref()) >= 0.5);
        }
    }

    #[test]
    fn lock_bounds(count in 0u32..100_000, conf in -1.0f64..2.0, age in -10.0f64..5000.0, core in any::<bool>()) {
        let x = LockInput { access_count: count, confidence: conf, age_days: age, is_core: core };
        let l = lock_score(&x);
        prop_assert!(l.lock <= 1.0 + 1e-12);
        prop_assert!(gate_threshold(&l) >= 0.5);
        if !core {
            let core_lock = lock_score(&LockInput { is_core: true, ..x }).lock;
            prop_assert!(core_lock > l.lock);
        }
    }
}

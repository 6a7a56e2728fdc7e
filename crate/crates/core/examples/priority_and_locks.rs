//! Importance scores, update locks and the bias ledger.

use memcortex::memory::SECS_PER_DAY;
use memcortex::priority::{gate_threshold, lock_score, priority, BiasLedger, LockInput, OutcomeKind, PriorityInput};

fn main() {
    let inputs = [
        ("routine note", PriorityInput { saliency: 0.2, valence: 0.0, reward: 0.1, goal: 0.2 }),
        ("deadline", PriorityInput { saliency: 0.6, valence: 0.3, reward: 0.4, goal: 0.9 }),
        ("outage scare", PriorityInput { saliency: 0.3, valence: -0.8, reward: 0.0, goal: 0.1 }),
    ];
    for (label, x) in &inputs {
        println!("{label:>12}: priority {:.3}", priority(x, None));
    }

    for (label, lock) in [
        ("fresh", LockInput { access_count: 0, confidence: 0.3, age_days: 0.0, is_core: false }),
        ("well used", LockInput { access_count: 40, confidence: 0.9, age_days: 200.0, is_core: false }),
        ("core", LockInput { access_count: 40, confidence: 1.0, age_days: 400.0, is_core: true }),
    ] {
        let l = lock_score(&lock);
        println!("{label:>10}: lock {:.3} rigidity {:.3}, updates need PE >= {:.3}", l.lock, l.rigidity, gate_threshold(&l));
    }

    let mut ledger = BiasLedger::default();
    for i in 0..40 {
        let now = i as f64 * 0.1 * SECS_PER_DAY;
        ledger.record(OutcomeKind::EvidenceAccept, true, now);
        if i % 10 == 0 {
            ledger.record(OutcomeKind::EvidenceReject, true, now);
        }
    }
    println!("confirmation bias {:.3}", ledger.confirmation_bias());
    for alert in ledger.alerts() {
        println!("alert: {alert:?}");
    }
}

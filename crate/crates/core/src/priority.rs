//! Importance scoring, update locking and bias bookkeeping.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::memory::SECS_PER_DAY;
use crate::neuro::ModulationOutputs;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorityInput {
    pub saliency: f64,
    pub valence: f64,
    pub reward: f64,
    pub goal: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorityWeights {
    pub saliency: f64,
    pub emotion: f64,
    pub reward: f64,
    pub goal: f64,
    /// |valence| above this takes the fast path.
    pub fast_path_valence: f64,
    pub fast_path_floor: f64,
}

impl Default for PriorityWeights {
    fn default() -> Self {
        Self { saliency: 0.20, emotion: 0.25, reward: 0.25, goal: 0.30, fast_path_valence: 0.6, fast_path_floor: 0.5 }
    }
}

impl PriorityWeights {
    /// Each weight scaled by (0.5 + level) of its channel, then renormalised.
    pub fn modulated(&self, m: &ModulationOutputs) -> Self {
        let raw = [
            self.saliency * (0.5 + m.exploration_bias),
            self.emotion * (0.5 + m.learning_rate),
            self.reward * (0.5 + m.attention_ratio),
            self.goal * (0.5 + m.consolidation_patience),
        ];
        let total: f64 = raw.iter().sum();
        let base = self.saliency + self.emotion + self.reward + self.goal;
        let [s, e, r, g] = raw.map(|w| w * base / total);
        Self { saliency: s, emotion: e, reward: r, goal: g, ..*self }
    }

    pub fn score(&self, x: &PriorityInput, neuro: Option<&ModulationOutputs>) -> f64 {
        let w = neuro.map_or(*self, |m| self.modulated(m));
        let mut p = w.saliency * x.saliency + w.emotion * x.valence.abs() + w.reward * x.reward + w.goal * x.goal;
        if x.valence.abs() > self.fast_path_valence {
            p = p.max(self.fast_path_floor);
        }
        p.clamp(0.0, 1.0)
    }
}

pub fn priority(input: &PriorityInput, neuro: Option<&ModulationOutputs>) -> f64 {
    PriorityWeights::default().score(input, neuro)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LockInput {
    pub access_count: u32,
    pub confidence: f64,
    pub age_days: f64,
    pub is_core: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lock {
    pub lock: f64,
    pub rigidity: f64,
}

pub fn lock_score(x: &LockInput) -> Lock {
    let usage = 0.3 * (1.0 + x.access_count as f64).log2() / 11f64.log2();
    let lock = usage.min(0.3)
        + 0.3 * x.confidence.clamp(0.0, 1.0)
        + 0.2 * (x.age_days.max(0.0) / 365.0).min(1.0)
        + if x.is_core { 0.2 } else { 0.0 };
    Lock { lock, rigidity: 1.0 + 0.1 * (1.0 + x.age_days.max(0.0)).log2() }
}

pub fn gate_threshold(lock: &Lock) -> f64 {
    0.5 + 0.3 * lock.lock * lock.rigidity
}

pub fn gate_update(pe: f64, lock: &Lock) -> bool {
    pe >= gate_threshold(lock)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    EvidenceAccept,
    EvidenceReject,
    RetrievalHit,
    RetrievalMiss,
    RecencyPick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasKind {
    Confirmation,
    Recency,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasAlert {
    pub kind: BiasKind,
    pub statistic: f64,
    pub window_days: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Outcome {
    at: f64,
    kind: OutcomeKind,
    /// Evidence: supports the current belief. Recency pick: chose the newest option.
    positive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasLedger {
    pub window_days: f64,
    pub bias_threshold: f64,
    pub novelty_pe: f64,
    pub novelty_secs: f64,
    events: VecDeque<Outcome>,
    novelty_until: Option<f64>,
}

impl Default for BiasLedger {
    fn default() -> Self {
        Self {
            window_days: 30.0,
            bias_threshold: 0.15,
            novelty_pe: 0.7,
            novelty_secs: 600.0,
            events: VecDeque::new(),
            novelty_until: None,
        }
    }
}

impl BiasLedger {
    pub fn record(&mut self, kind: OutcomeKind, positive: bool, now: f64) -> Vec<BiasAlert> {
        self.events.push_back(Outcome { at: now, kind, positive });
        self.prune(now);
        self.alerts()
    }

    pub fn prune(&mut self, now: f64) {
        let horizon = now - self.window_days * SECS_PER_DAY;
        while self.events.front().is_some_and(|e| e.at < horizon) {
            self.events.pop_front();
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    fn count(&self, kind: OutcomeKind, positive: bool) -> f64 {
        self.events.iter().filter(|e| e.kind == kind && e.positive == positive).count() as f64
    }

    /// |accepted supporting - accepted opposing| / all evidence decisions.
    pub fn confirmation_bias(&self) -> f64 {
        let acc_pos = self.count(OutcomeKind::EvidenceAccept, true);
        let acc_neg = self.count(OutcomeKind::EvidenceAccept, false);
        let total = acc_pos + acc_neg + self.count(OutcomeKind::EvidenceReject, true) + self.count(OutcomeKind::EvidenceReject, false);
        if total == 0.0 {
            0.0
        } else {
            (acc_pos - acc_neg).abs() / total
        }
    }

    /// |newest picks - older picks| / all picks.
    pub fn recency_bias(&self) -> f64 {
        let newest = self.count(OutcomeKind::RecencyPick, true);
        let older = self.count(OutcomeKind::RecencyPick, false);
        if newest + older == 0.0 {
            0.0
        } else {
            (newest - older).abs() / (newest + older)
        }
    }

    /// Hit share among retrievals; 1 when nothing was retrieved yet.
    pub fn retrieval_efficiency(&self) -> f64 {
        let hits = self.count(OutcomeKind::RetrievalHit, true) + self.count(OutcomeKind::RetrievalHit, false);
        let misses = self.count(OutcomeKind::RetrievalMiss, true) + self.count(OutcomeKind::RetrievalMiss, false);
        if hits + misses == 0.0 {
            1.0
        } else {
            hits / (hits + misses)
        }
    }

    pub fn alerts(&self) -> Vec<BiasAlert> {
        [(BiasKind::Confirmation, self.confirmation_bias()), (BiasKind::Recency, self.recency_bias())]
            .into_iter()
            .filter(|(_, s)| *s > self.bias_threshold)
            .map(|(kind, statistic)| BiasAlert { kind, statistic, window_days: self.window_days })
            .collect()
    }

    /// Opens an encoding window after a strongly surprising event.
    pub fn observe_pe(&mut self, pe: f64, now: f64) {
        if pe > self.novelty_pe {
            self.novelty_until = Some(now + self.novelty_secs);
        }
    }

    pub fn novelty_open(&self, now: f64) -> bool {
        self.novelty_until.is_some_and(|until| now < until)
    }
}

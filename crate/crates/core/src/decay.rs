//! Forgetting curves: Ebbinghaus retrievability, arousal-scaled stability and
//! the three-copy divergent decay model.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::memory::{ItemId, LayerKind, LayerStore, SECS_PER_DAY, SECS_PER_HOUR};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayConfig {
    pub default_stability: f64,
    pub emotional_multiplier_cap: f64,
    pub review_growth: f64,
    pub forget_threshold: f64,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            default_stability: 1.0,
            emotional_multiplier_cap: 3.0,
            review_growth: 1.3,
            forget_threshold: 0.1,
        }
    }
}

/// e^(-elapsed/stability), both in days.
pub fn retrievability(stability: f64, elapsed: f64) -> f64 {
    (-elapsed / stability).exp()
}

/// Linear ramp from 1x at neutral valence to `cap`x at |v| = 1.
pub fn emotional_stability(base: f64, valence: f64, cap: f64) -> f64 {
    base * (1.0 + (cap - 1.0) * valence.abs().min(1.0))
}

pub fn review_boost(stability: f64, growth: f64) -> Result<f64> {
    ensure(stability > 0.0, "stability must be positive")?;
    Ok(stability * growth)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CopyKind {
    Fast,
    Medium,
    Deep,
}

/// Three traces of one memory. Time constants are in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CopySet {
    pub s0: f64,
    pub created_at: f64,
    pub tau_fast: f64,
    pub tau_medium: f64,
    pub tau_deep: f64,
    pub medium_scale: f64,
    /// Cap the logarithmic deep trace at `s0`.
    pub clamp_deep: bool,
}

impl Default for CopySet {
    fn default() -> Self {
        Self {
            s0: 1.0,
            created_at: 0.0,
            tau_fast: 4.0 * SECS_PER_HOUR,
            tau_medium: 14.0 * SECS_PER_DAY,
            tau_deep: 7.0 * SECS_PER_DAY,
            medium_scale: 0.8,
            clamp_deep: true,
        }
    }
}

impl CopySet {
    pub fn new(s0: f64, created_at: f64) -> Self {
        Self { s0, created_at, ..Self::default() }
    }

    /// (fast, medium, deep) strengths after `t` seconds.
    pub fn copies(&self, t: f64) -> [f64; 3] {
        let t = t.max(0.0);
        let fast = self.s0 * (-t / self.tau_fast).exp();
        let medium = self.medium_scale * self.s0 * (-t / self.tau_medium).exp();
        let mut deep = self.s0 * (t / self.tau_deep).ln_1p();
        if self.clamp_deep {
            deep = deep.min(self.s0);
        }
        [fast, medium, deep]
    }

    /// Composite strength (the strongest copy) and which copy supplies it.
    /// Ties go to the faster copy.
    pub fn strength(&self, t: f64) -> (f64, CopyKind) {
        let [fast, medium, deep] = self.copies(t);
        let mut best = (fast, CopyKind::Fast);
        if medium > best.0 {
            best = (medium, CopyKind::Medium);
        }
        if deep > best.0 {
            best = (deep, CopyKind::Deep);
        }
        best
    }

    pub fn strength_at(&self, now: f64) -> (f64, CopyKind) {
        self.strength(now - self.created_at)
    }
}

/// Strength of a non-core item: Ebbinghaus retrievability since last access,
/// lifted by its copy set when one is present.
pub fn effective_strength(stability: f64, elapsed_days: f64, base_rate: f64, copies: Option<(&CopySet, f64)>) -> f64 {
    let ebb = retrievability(stability, elapsed_days * base_rate);
    match copies {
        Some((set, now)) => ebb.max(set.strength_at(now).0),
        None => ebb,
    }
}

/// Removes every non-core item whose effective strength fell below the
/// forget threshold and returns their ids in ascending order.
pub fn decay_pass(
    store: &mut LayerStore,
    now: f64,
    base_rate: f64,
    cfg: &DecayConfig,
    copies: Option<&BTreeMap<ItemId, CopySet>>,
) -> Vec<ItemId> {
    let forgotten: Vec<ItemId> = store
        .iter_live()
        .filter(|item| item.layer() != LayerKind::Core && !item.is_core)
        .filter(|item| {
            let elapsed = (now - item.last_accessed) / SECS_PER_DAY;
            let set = copies.and_then(|m| m.get(&item.id())).map(|s| (s, now));
            effective_strength(item.stability, elapsed, base_rate, set) < cfg.forget_threshold
        })
        .map(|item| item.id())
        .collect();
    for id in &forgotten {
        store.remove(*id);
    }
    forgotten
}

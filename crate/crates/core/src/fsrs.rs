//! Spaced-repetition scheduling with a context prediction-error coupling.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::memory::{ItemId, SECS_PER_DAY};
use crate::text::cosine;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FsrsConfig {
    pub alpha_v: f64,
    pub pe_threshold: f64,
    pub max_extension: f64,
    pub min_shortening: f64,
    pub sigmoid_gain: f64,
    pub target_retention: f64,
    /// Negate the adaptation term so that surprising contexts shorten intervals.
    pub prose_sign: bool,
}

impl Default for FsrsConfig {
    fn default() -> Self {
        Self {
            alpha_v: 0.6,
            pe_threshold: 0.5,
            max_extension: 2.0,
            min_shortening: 0.3,
            sigmoid_gain: 6.0,
            target_retention: 0.9,
            prose_sign: false,
        }
    }
}

/// 1 - cos(prev, now), in [0, 2].
pub fn prediction_error(c_prev: &[f64], c_now: &[f64]) -> Result<f64> {
    Ok(1.0 - cosine(c_prev, c_now)?)
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl FsrsConfig {
    pub fn reencode_factor(&self, pe: f64) -> f64 {
        logistic((pe - self.pe_threshold) * self.sigmoid_gain)
    }

    /// Multiplier applied to the base interval, clamped to the configured band.
    pub fn interval_factor(&self, pe: f64) -> f64 {
        let mut swing = 2.0 * self.reencode_factor(pe) - 1.0;
        if self.prose_sign {
            swing = -swing;
        }
        (1.0 + self.alpha_v * swing).clamp(self.min_shortening, self.max_extension)
    }

    pub fn next_interval(&self, base_interval: f64, pe: f64) -> Result<f64> {
        ensure(base_interval > 0.0, "base interval must be positive")?;
        Ok(base_interval * self.interval_factor(pe))
    }

    pub fn base_interval(&self, stability: f64) -> Result<f64> {
        base_fsrs_interval(stability, self.target_retention)
    }
}

/// Days until retrievability falls to `target_r`: -S·ln(target_r).
pub fn base_fsrs_interval(stability: f64, target_r: f64) -> Result<f64> {
    ensure(target_r > 0.0 && target_r < 1.0, "target retention must lie in (0, 1)")?;
    ensure(stability > 0.0, "stability must be positive")?;
    Ok(-stability * target_r.ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewCard {
    pub item_id: ItemId,
    pub stability: f64,
    pub last_context: Vec<f64>,
    pub last_review: f64,
    pub next_due: f64,
    pub review_count: u32,
}

/// Cards keyed by item, popped in (due time, id) order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DueQueue {
    cards: BTreeMap<ItemId, ReviewCard>,
}

impl DueQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn schedule(&mut self, item_id: ItemId, stability: f64, context: Vec<f64>, now: f64, cfg: &FsrsConfig) -> Result<f64> {
        let due = now + cfg.base_interval(stability)? * SECS_PER_DAY;
        self.cards.insert(
            item_id,
            ReviewCard { item_id, stability, last_context: context, last_review: now, next_due: due, review_count: 0 },
        );
        Ok(due)
    }

    pub fn card(&self, id: ItemId) -> Option<&ReviewCard> {
        self.cards.get(&id)
    }

    pub fn remove(&mut self, id: ItemId) -> Option<ReviewCard> {
        self.cards.remove(&id)
    }

    pub fn len(&self) -> usize {
        self.cards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    pub fn due(&self, now: f64) -> Vec<ItemId> {
        let mut due: Vec<(f64, ItemId)> =
            self.cards.values().filter(|c| c.next_due <= now).map(|c| (c.next_due, c.item_id)).collect();
        due.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        due.into_iter().map(|(_, id)| id).collect()
    }

    /// Records a review in context `c_now` and returns the next interval in days.
    pub fn review(&mut self, id: ItemId, new_stability: f64, c_now: &[f64], now: f64, cfg: &FsrsConfig) -> Result<f64> {
        let card = self
            .cards
            .get_mut(&id)
            .ok_or(crate::error::MemError::UnknownItem(id))?;
        let pe = prediction_error(&card.last_context, c_now)?;
        let interval = cfg.next_interval(cfg.base_interval(new_stability)?, pe)?;
        card.stability = new_stability;
        card.last_context = c_now.to_vec();
        card.last_review = now;
        card.next_due = now + interval * SECS_PER_DAY;
        card.review_count += 1;
        Ok(interval)
    }
}

//! Prediction-error gated updating of recalled memories, with an undo log.

use serde::{Deserialize, Serialize};

use crate::error::{MemError, Result};
use crate::memory::{ItemId, LayerKind, LayerStore, MemoryItem};
use crate::text::jaccard;

pub const CONTRADICTION_BONUS: f64 = 0.2;
pub const MAX_RAW_PE: f64 = 1.2;
const BOUNDARIES: [f64; 3] = [0.1, 0.3, 0.7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReconMode {
    Confirmed,
    SelectiveEdit,
    Integration,
    NewEpisode,
}

/// Jaccard distance of the token sets plus a bonus when the incoming text
/// contradicts the stored one.
pub fn raw_pe(existing: &str, incoming: &str, contradicts: bool) -> Result<f64> {
    if existing.trim().is_empty() || incoming.trim().is_empty() {
        return Err(MemError::EmptyContent);
    }
    let bonus = if contradicts { CONTRADICTION_BONUS } else { 0.0 };
    Ok((1.0 - jaccard(existing, incoming) + bonus).clamp(0.0, MAX_RAW_PE))
}

/// Arousal (NE) amplifies surprise, serotonin damps it.
pub fn effective_pe(pe_raw: f64, ne_level: f64, serotonin_level: f64) -> f64 {
    (pe_raw * (1.0 + 0.3 * ne_level - 0.2 * serotonin_level)).max(0.0)
}

/// Extra prediction error needed before a memory of this kind changes.
pub fn resistance(layer: LayerKind, is_core: bool) -> f64 {
    if is_core || layer == LayerKind::Core {
        0.2
    } else if layer == LayerKind::Procedural {
        0.1
    } else {
        0.0
    }
}

pub fn classify_mode(pe_eff: f64, resistance: f64) -> ReconMode {
    let [a, b, c] = BOUNDARIES.map(|x| x + resistance);
    if pe_eff < a {
        ReconMode::Confirmed
    } else if pe_eff < b {
        ReconMode::SelectiveEdit
    } else if pe_eff < c {
        ReconMode::Integration
    } else {
        ReconMode::NewEpisode
    }
}

/// Position-wise merge: incoming tokens win wherever both texts have one.
pub fn merge_tokens(existing: &str, incoming: &str) -> String {
    let old: Vec<&str> = existing.split_whitespace().collect();
    let new: Vec<&str> = incoming.split_whitespace().collect();
    (0..old.len().max(new.len()))
        .map(|i| new.get(i).or_else(|| old.get(i)).copied().unwrap_or_default())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Applied,
    Blocked,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconEvent {
    pub memory_id: ItemId,
    pub pe_raw: f64,
    pub pe_eff: f64,
    pub mode: ReconMode,
    pub outcome: Outcome,
    pub snapshot: MemoryItem,
    pub created: Option<ItemId>,
    pub timestamp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconConfig {
    /// Seconds after a retrieval during which the memory can be rewritten.
    pub lability_window: f64,
    pub confirm_growth: f64,
}

impl Default for ReconConfig {
    fn default() -> Self {
        Self { lability_window: 600.0, confirm_growth: 1.3 }
    }
}

/// What the caller proposes to write back into a recalled memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Incoming<'a> {
    pub content: &'a str,
    pub contradicts: bool,
    pub ne_level: f64,
    pub serotonin_level: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Reconsolidator {
    pub cfg: ReconConfig,
    log: Vec<ReconEvent>,
}

impl Reconsolidator {
    pub fn new(cfg: ReconConfig) -> Self {
        Self { cfg, log: Vec::new() }
    }

    pub fn log(&self) -> &[ReconEvent] {
        &self.log
    }

    /// Classifies and applies an update. `gate` sees the effective PE and may
    /// veto any change other than a plain confirmation.
    pub fn apply_update(
        &mut self,
        store: &mut LayerStore,
        id: ItemId,
        incoming: Incoming<'_>,
        gate: impl FnOnce(f64) -> bool,
        now: f64,
    ) -> Result<ReconEvent> {
        let item = store.get(id).ok_or(MemError::UnknownItem(id))?;
        if now - item.last_accessed > self.cfg.lability_window {
            return Err(MemError::NotLabile(id));
        }
        let snapshot = item.clone();
        let pe_raw = raw_pe(&item.content, incoming.content, incoming.contradicts)?;
        let pe_eff = effective_pe(pe_raw, incoming.ne_level, incoming.serotonin_level);
        let mode = classify_mode(pe_eff, resistance(item.layer(), item.is_core));
        let mut event = ReconEvent {
            memory_id: id,
            pe_raw,
            pe_eff,
            mode,
            outcome: Outcome::Applied,
            snapshot,
            created: None,
            timestamp: now,
        };
        if mode != ReconMode::Confirmed && !gate(pe_eff) {
            event.outcome = Outcome::Blocked;
            self.log.push(event.clone());
            return Ok(event);
        }
        match mode {
            ReconMode::Confirmed => {
                let item = store.get_mut(id).ok_or(MemError::UnknownItem(id))?;
                item.stability *= self.cfg.confirm_growth;
            }
            ReconMode::SelectiveEdit => {
                let item = store.get_mut(id).ok_or(MemError::UnknownItem(id))?;
                item.content = merge_tokens(&item.content, incoming.content);
            }
            ReconMode::Integration => {
                let item = store.get_mut(id).ok_or(MemError::UnknownItem(id))?;
                item.content = format!("{} {}", item.content, incoming.content);
            }
            ReconMode::NewEpisode => {
                let mut fresh = MemoryItem::new(incoming.content, LayerKind::Episodic, event.snapshot.embedding.clone());
                fresh.related_ids.insert(id);
                fresh.provenance = Some(id);
                let new_id = store.insert(fresh, now)?;
                if let Some(item) = store.get_mut(id) {
                    item.related_ids.insert(new_id);
                }
                event.created = Some(new_id);
            }
        }
        self.log.push(event.clone());
        Ok(event)
    }

    /// Restores the memory to its pre-update snapshot and drops anything the
    /// update created.
    pub fn rollback(&self, store: &mut LayerStore, event: &ReconEvent) -> Result<()> {
        if let Some(created) = event.created {
            store.remove(created);
        }
        let item = store.get_mut(event.memory_id).ok_or(MemError::UnknownItem(event.memory_id))?;
        *item = event.snapshot.clone();
        Ok(())
    }

    /// One JSON object per line.
    pub fn log_jsonl(&self) -> String {
        self.log
            .iter()
            .filter_map(|e| serde_json::to_string(e).ok())
            .map(|line| line + "\n")
            .collect()
    }
}

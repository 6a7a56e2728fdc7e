//! The memory coordinator: routing, recall, consolidation and the lifecycle
//! passes (decay, review, replay) that the ablation registry switches on and off.

pub mod bm25;
pub mod classify;
pub mod registry;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::decay::{effective_strength, emotional_stability, CopySet, DecayConfig};
use crate::error::{MemError, Result};
use crate::fsrs::{prediction_error, DueQueue, FsrsConfig};
use crate::kg::{importance_boost, KgConfig, SynapticGraph};
use crate::memory::{ItemId, LayerKind, LayerStore, MemoryItem, SimClock, SECS_PER_DAY};
use crate::neuro::{ModulationOutputs, NeuroConfig, NeuroState};
use crate::priority::{gate_update, lock_score, BiasLedger, LockInput, PriorityInput, PriorityWeights};
use crate::recon::{Incoming, ReconConfig, ReconEvent, Reconsolidator};
use crate::rng::Mulberry32;
use crate::sleep::{consolidation_boost, sleep_cycle, Episode, Plasticity, ReplayCandidate, SleepConfig, SleepReport};
use crate::text::{cosine, jaccard};

pub use bm25::Bm25Index;
pub use classify::{classify_query, QueryType};
pub use registry::{Algorithm, Flags};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentKind {
    Fact,
    Episode,
    Skill,
    Identity,
    Note,
}

impl ContentKind {
    pub fn home_layer(self) -> LayerKind {
        match self {
            ContentKind::Fact => LayerKind::Semantic,
            ContentKind::Episode => LayerKind::Episodic,
            ContentKind::Skill => LayerKind::Procedural,
            ContentKind::Identity => LayerKind::Core,
            ContentKind::Note => LayerKind::ShortTerm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionWeights {
    pub temporal_episodic: f64,
    pub factual_semantic: f64,
    pub procedural_procedural: f64,
}

impl Default for FusionWeights {
    fn default() -> Self {
        Self { temporal_episodic: 2.0, factual_semantic: 1.8, procedural_procedural: 1.8 }
    }
}

impl FusionWeights {
    pub fn weight(&self, query: QueryType, layer: LayerKind) -> f64 {
        match (query, layer) {
            (QueryType::Temporal, LayerKind::Episodic) => self.temporal_episodic,
            (QueryType::Factual, LayerKind::Semantic) => self.factual_semantic,
            (QueryType::Procedural, LayerKind::Procedural) => self.procedural_procedural,
            _ => 1.0,
        }
    }
}

/// Knobs of the lifecycle passes. Gains are multiplied by the neuromodulator
/// plasticity gain when that engine is on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifecycleConfig {
    /// Ceiling on consolidation growth of stability.
    pub growth_cap: f64,
    /// Share of the ceiling's headroom available without neuromodulation.
    pub unmodulated_headroom: f64,
    /// Incident edge weight at which the copy-set floor reaches full strength.
    pub anchor_weight: f64,
    /// Stability gain of a potentiating replay at full forgetting.
    pub replay_kappa: f64,
    /// Plasticity gain at baseline learning rate.
    pub neuro_gain: f64,
    /// LTD softening at baseline serotonin.
    pub neuro_patience: f64,
    /// Amplitude of review coactivations (times η and tag).
    pub review_amplitude: f64,
    /// Amplitude of retrieval coactivations.
    pub recall_amplitude: f64,
    /// LTP step multiplier before neuromodulation.
    pub ltp_scale: f64,
    /// LTD step multiplier before serotonin patience.
    pub ltd_scale: f64,
    /// Drop fresh, depressed, never-retrieved items that enter the night without associations.
    pub prune_orphans: bool,
    /// Days since last access that still count as a rewarded episode.
    pub reward_window_days: f64,
    /// Growth lost when an edit rewrites a memory.
    pub edit_loss: f64,
    /// Initial weight of edges created at store time.
    pub initial_edge_weight: f64,
    pub review_cutoff: f64,
    pub consolidation_access: u32,
    /// ShortTerm items older than this move to Episodic on consolidate.
    pub session_secs: f64,
}

impl Default for LifecycleConfig {
    fn default() -> Self {
        Self {
            growth_cap: 10.07,
            unmodulated_headroom: 0.04,
            anchor_weight: 2.479,
            replay_kappa: 0.8137,
            neuro_gain: 0.5364,
            neuro_patience: 0.2481,
            review_amplitude: 0.8435,
            recall_amplitude: 0.4844,
            ltp_scale: 0.0406,
            ltd_scale: 0.3306,
            prune_orphans: true,
            reward_window_days: 3.0,
            edit_loss: 0.274,
            initial_edge_weight: 1.0,
            review_cutoff: 0.5,
            consolidation_access: 3,
            session_secs: SECS_PER_DAY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub dim: usize,
    /// Multiplier on elapsed days in every decay computation.
    pub decay_rate: f64,
    pub flags: Flags,
    pub decay: DecayConfig,
    pub kg: KgConfig,
    pub fsrs: FsrsConfig,
    pub sleep: SleepConfig,
    pub neuro: NeuroConfig,
    pub recon: ReconConfig,
    pub priority: PriorityWeights,
    pub fusion: FusionWeights,
    pub lifecycle: LifecycleConfig,
    pub per_layer_k: usize,
    pub dedup_jaccard: f64,
}

impl EngineConfig {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            decay_rate: 1.0,
            flags: Flags::full(),
            decay: DecayConfig::default(),
            kg: KgConfig::default(),
            fsrs: FsrsConfig::default(),
            sleep: SleepConfig::default(),
            neuro: NeuroConfig::default(),
            recon: ReconConfig::default(),
            priority: PriorityWeights::default(),
            fusion: FusionWeights::default(),
            lifecycle: LifecycleConfig::default(),
            per_layer_k: 8,
            dedup_jaccard: 0.9,
        }
    }

    pub fn with_flags(mut self, flags: Flags) -> Self {
        self.flags = flags;
        self
    }
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self::new(32)
    }
}

/// Engine configuration with the given switches turned off.
pub fn ablation_registry<S: AsRef<str>>(disabled: &[S], dim: usize) -> Result<EngineConfig> {
    Ok(EngineConfig::new(dim).with_flags(Flags::parse(disabled)?))
}

/// Everything needed to store one memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Draft {
    pub content: String,
    pub kind: ContentKind,
    pub embedding: Vec<f64>,
    pub valence: f64,
    pub importance: PriorityInput,
}

impl Draft {
    pub fn new(content: impl Into<String>, kind: ContentKind, embedding: Vec<f64>) -> Self {
        Self {
            content: content.into(),
            kind,
            embedding,
            valence: 0.0,
            importance: PriorityInput { saliency: 0.5, valence: 0.0, reward: 0.5, goal: 0.5 },
        }
    }

    pub fn valence(mut self, v: f64) -> Self {
        self.valence = v;
        self.importance.valence = v;
        self
    }
}

/// Decay state kept beside each stored item.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    /// Integrated rate·dt/stability; strength is exp(-load).
    pub load: f64,
    /// Consolidation multiplier on the item's base stability.
    pub growth: f64,
    pub importance: PriorityInput,
    pub copies: Option<CopySet>,
}

impl Trace {
    pub fn ebbinghaus(&self) -> f64 {
        (-self.load).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub text: String,
    pub embedding: Vec<f64>,
    pub kind: QueryType,
    pub k: usize,
}

impl Query {
    pub fn new(text: impl Into<String>, embedding: Vec<f64>) -> Self {
        let text = text.into();
        let kind = classify_query(&text);
        Self { text, embedding, kind, k: 5 }
    }

    pub fn top(mut self, k: usize) -> Self {
        self.k = k;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hit {
    pub id: ItemId,
    pub layer: LayerKind,
    pub score: f64,
}

/// Means over live, non-core items.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub live: usize,
    pub growth: f64,
    pub anchorage: f64,
    pub ebbinghaus: f64,
    pub strength: f64,
    /// Share of live items held up by the copy-set floor alone.
    pub floor_held: f64,
    pub edges: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MoveReport {
    /// (episodic source, semantic twin)
    pub abstracted: Vec<(ItemId, ItemId)>,
    /// (short-term record, episodic record)
    pub promoted: Vec<(ItemId, ItemId)>,
}

impl MoveReport {
    pub fn is_empty(&self) -> bool {
        self.abstracted.is_empty() && self.promoted.is_empty()
    }
}

/// Update offered to a just-recalled memory during a lifecycle run.
#[derive(Debug, Clone, PartialEq)]
pub struct Revision {
    pub content: String,
    pub contradicts: bool,
}

pub const STATE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineState {
    pub version: u32,
    pub config: EngineConfig,
    pub clock: SimClock,
    pub store: LayerStore,
    pub kg: SynapticGraph,
    pub traces: BTreeMap<ItemId, Trace>,
    pub due: DueQueue,
    pub neuro: NeuroState,
    pub abstracted: BTreeSet<ItemId>,
}

#[derive(Debug, Clone)]
pub struct MemoryCoordinator {
    cfg: EngineConfig,
    clock: SimClock,
    store: LayerStore,
    kg: SynapticGraph,
    bm25: Bm25Index,
    traces: BTreeMap<ItemId, Trace>,
    due: DueQueue,
    neuro: NeuroState,
    recon: Reconsolidator,
    ledger: BiasLedger,
    abstracted: BTreeSet<ItemId>,
    last_recall: Vec<ItemId>,
}

impl MemoryCoordinator {
    pub fn new(cfg: EngineConfig) -> Self {
        Self {
            clock: SimClock::new(),
            store: LayerStore::new(cfg.dim),
            kg: SynapticGraph::new(cfg.kg),
            bm25: Bm25Index::default(),
            traces: BTreeMap::new(),
            due: DueQueue::new(),
            neuro: NeuroState::new(cfg.neuro),
            recon: Reconsolidator::new(cfg.recon),
            ledger: BiasLedger::default(),
            abstracted: BTreeSet::new(),
            last_recall: Vec::new(),
            cfg,
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn on(&self, alg: Algorithm) -> bool {
        self.cfg.flags.on(alg)
    }

    pub fn now(&self) -> f64 {
        self.clock.now()
    }

    pub fn advance(&mut self, secs: f64) -> Result<()> {
        self.clock.advance(secs)?;
        if self.on(Algorithm::Neuromodulator) && secs > 0.0 {
            self.neuro.tick(secs)?;
        }
        Ok(())
    }

    pub fn store_ref(&self) -> &LayerStore {
        &self.store
    }

    pub fn kg(&self) -> &SynapticGraph {
        &self.kg
    }

    pub fn bm25(&self) -> &Bm25Index {
        &self.bm25
    }

    pub fn neuro(&self) -> &NeuroState {
        &self.neuro
    }

    pub fn neuro_mut(&mut self) -> &mut NeuroState {
        &mut self.neuro
    }

    pub fn ledger(&self) -> &BiasLedger {
        &self.ledger
    }

    pub fn due_queue(&self) -> &DueQueue {
        &self.due
    }

    pub fn reconsolidator(&self) -> &Reconsolidator {
        &self.recon
    }

    pub fn census(&self) -> Census {
        let mut c = Census { edges: self.kg.edge_count(), ..Census::default() };
        for (id, t) in &self.traces {
            let Some(strength) = self.strength(*id) else { continue };
            if self.store.get(*id).is_some_and(|i| i.is_core) {
                continue;
            }
            let ebb = t.ebbinghaus();
            c.live += 1;
            c.growth += t.growth;
            c.anchorage += self.anchorage(*id);
            c.ebbinghaus += ebb;
            c.strength += strength;
            c.floor_held += (ebb < self.cfg.decay.forget_threshold) as usize as f64;
        }
        if c.live > 0 {
            let n = c.live as f64;
            c.growth /= n;
            c.anchorage /= n;
            c.ebbinghaus /= n;
            c.strength /= n;
            c.floor_held /= n;
        }
        c
    }

    pub fn trace(&self, id: ItemId) -> Option<&Trace> {
        self.traces.get(&id)
    }

    pub fn item(&self, id: ItemId) -> Option<&MemoryItem> {
        self.store.get(id)
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    fn modulation(&self) -> Option<ModulationOutputs> {
        self.on(Algorithm::Neuromodulator).then(|| self.neuro.outputs())
    }

    /// Plasticity multiplier: 1 without neuromodulation, 1 + gain·2·NE with it.
    pub fn plasticity_gain(&self) -> f64 {
        match self.modulation() {
            Some(m) => 1.0 + self.cfg.lifecycle.neuro_gain * 2.0 * m.learning_rate,
            None => 1.0,
        }
    }

    /// Fraction of LTD withheld: 0 without neuromodulation.
    pub fn patience(&self) -> f64 {
        match self.modulation() {
            Some(m) => (self.cfg.lifecycle.neuro_patience * 2.0 * m.consolidation_patience).clamp(0.0, 1.0),
            None => 0.0,
        }
    }

    pub fn growth_ceiling(&self) -> f64 {
        let cap = self.cfg.lifecycle.growth_cap;
        if self.on(Algorithm::Neuromodulator) {
            cap
        } else {
            1.0 + (cap - 1.0) * self.cfg.lifecycle.unmodulated_headroom
        }
    }

    pub fn priority_of(&self, id: ItemId) -> f64 {
        match self.traces.get(&id) {
            Some(t) if self.on(Algorithm::PriorityMap) => self.cfg.priority.score(&t.importance, self.modulation().as_ref()),
            Some(_) => self.cfg.lifecycle.review_cutoff,
            None => 0.0,
        }
    }

    pub fn store(&mut self, draft: Draft) -> Result<ItemId> {
        if draft.content.trim().is_empty() {
            return Err(MemError::EmptyContent);
        }
        let layer = self.cfg.flags.route(draft.kind.home_layer());
        let base = emotional_stability(self.cfg.decay.default_stability, draft.valence, self.cfg.decay.emotional_multiplier_cap);
        let mut item = MemoryItem::new(draft.content, layer, draft.embedding).with_valence(draft.valence).with_stability(base);
        item.is_core = draft.kind == ContentKind::Identity;
        let now = self.clock.now();
        let id = self.store.insert(item, now)?;
        self.register(id, draft.importance, now)?;
        let w0 = self.cfg.lifecycle.initial_edge_weight;
        let coactive: Vec<ItemId> = self.last_recall.iter().copied().filter(|&o| o != id && self.store.is_live(o)).collect();
        for other in coactive {
            self.kg.connect(id, other, w0)?;
        }
        Ok(id)
    }

    fn register(&mut self, id: ItemId, importance: PriorityInput, now: f64) -> Result<()> {
        let item = self.store.get(id).ok_or(MemError::UnknownItem(id))?;
        self.bm25.add(id, &item.content);
        self.kg.add_node(id);
        let copies = self.on(Algorithm::TripleCopy).then(|| CopySet::new(1.0, now));
        self.traces.insert(id, Trace { load: 0.0, growth: 1.0, importance, copies });
        if self.on(Algorithm::VmpfcFsrs) && self.priority_of(id) >= self.cfg.lifecycle.review_cutoff {
            let (stability, context) = (item.stability / self.cfg.decay_rate.max(f64::MIN_POSITIVE), item.embedding.clone());
            self.due.schedule(id, stability, context, now, &self.cfg.fsrs)?;
        }
        Ok(())
    }

    /// Links two stored items directly (used by generators that know the topology).
    pub fn link(&mut self, a: ItemId, b: ItemId, w: f64) -> Result<()> {
        self.kg.connect(a, b, w).map(|_| ())
    }

    pub fn effective_stability(&self, id: ItemId) -> Option<f64> {
        let item = self.store.get(id)?;
        let growth = self.traces.get(&id).map_or(1.0, |t| t.growth);
        Some(item.stability * growth)
    }

    /// How firmly an item is anchored in the graph, in [0, 1].
    pub fn anchorage(&self, id: ItemId) -> f64 {
        let total: f64 = self.kg.incident(id).map(|e| e.w).sum();
        (total / self.cfg.lifecycle.anchor_weight).min(1.0)
    }

    /// Copy-set floor scaled by graph anchorage, or 0 when TripleCopy is off.
    fn copy_floor(&self, id: ItemId, trace: &Trace) -> f64 {
        match trace.copies {
            Some(set) if self.on(Algorithm::TripleCopy) => set.strength_at(self.clock.now()).0 * self.anchorage(id),
            _ => 0.0,
        }
    }

    pub fn strength(&self, id: ItemId) -> Option<f64> {
        let item = self.store.get(id)?;
        if item.is_core || item.layer() == LayerKind::Core {
            return Some(1.0);
        }
        let trace = self.traces.get(&id)?;
        Some(trace.ebbinghaus().max(self.copy_floor(id, trace)))
    }

    pub fn retrievability_at(&self, stability: f64, elapsed_days: f64) -> f64 {
        effective_strength(stability, elapsed_days, 1.0, None)
    }

    pub fn access(&mut self, id: ItemId) {
        let now = self.clock.now();
        if let Some(item) = self.store.get_mut(id) {
            item.last_accessed = now;
            item.access_count += 1;
        }
    }

    pub fn recall(&mut self, query: &Query) -> Result<Vec<Hit>> {
        if query.embedding.len() != self.cfg.dim {
            return Err(MemError::DimensionMismatch { expected: self.cfg.dim, got: query.embedding.len() });
        }
        let mut fused: BTreeMap<ItemId, Hit> = BTreeMap::new();
        for layer in LayerKind::ALL {
            if !self.cfg.flags.layer_on(layer) {
                continue;
            }
            let mut scored: Vec<(f64, ItemId)> = self
                .store
                .scan(layer, |_| true)
                .into_iter()
                .filter_map(|item| cosine(&query.embedding, &item.embedding).ok().map(|s| (s, item.id())))
                .collect();
            scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            scored.truncate(self.cfg.per_layer_k);
            let w = self.cfg.fusion.weight(query.kind, layer);
            for (sim, id) in scored {
                let score = w * sim;
                let entry = fused.entry(id).or_insert(Hit { id, layer, score });
                if score > entry.score {
                    *entry = Hit { id, layer, score };
                }
            }
        }
        let two_factor = self.on(Algorithm::TwoFactor);
        let mut hits: Vec<Hit> = fused
            .into_values()
            .map(|mut hit| {
                if two_factor {
                    let factor = self
                        .kg
                        .incident(hit.id)
                        .map(|e| importance_boost(1.0, e, self.cfg.kg.boost_alpha))
                        .fold(1.0, f64::max);
                    hit.score *= factor;
                }
                hit.score *= self.strength(hit.id).unwrap_or(0.0);
                hit
            })
            .collect();
        hits.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.id.cmp(&b.id)));
        let mut kept: Vec<Hit> = Vec::new();
        for hit in hits {
            let content = &self.store.get(hit.id).map(|i| i.content.as_str()).unwrap_or_default();
            let duplicate = kept.iter().any(|k| {
                let other = self.store.get(k.id).map(|i| i.content.as_str()).unwrap_or_default();
                jaccard(content, other) > self.cfg.dedup_jaccard
            });
            if !duplicate {
                kept.push(hit);
            }
            if kept.len() == query.k {
                break;
            }
        }
        self.last_recall = kept.iter().map(|h| h.id).collect();
        Ok(kept)
    }

    /// Starts a new operation window: the next stores see no co-active items.
    pub fn end_episode(&mut self) {
        self.last_recall.clear();
    }

    pub fn bm25_search(&self, text: &str, k: usize) -> Vec<(ItemId, f64)> {
        self.bm25.search(text, k)
    }

    /// Episodic items used often enough get a semantic twin; short-term items
    /// older than a session move to the episodic layer.
    pub fn consolidate(&mut self) -> Result<MoveReport> {
        let mut report = MoveReport::default();
        let threshold = self.cfg.lifecycle.consolidation_access;
        let ready: Vec<ItemId> = self
            .store
            .scan(LayerKind::Episodic, |i| i.access_count >= threshold)
            .into_iter()
            .map(MemoryItem::id)
            .filter(|id| !self.abstracted.contains(id))
            .collect();
        let now = self.clock.now();
        for id in ready {
            let source = self.store.get(id).ok_or(MemError::UnknownItem(id))?.clone();
            let mut twin = MemoryItem::new(source.content.clone(), self.cfg.flags.route(LayerKind::Semantic), source.embedding.clone())
                .with_valence(source.emotional_valence)
                .with_stability(source.stability);
            twin.provenance = Some(id);
            twin.related_ids.insert(id);
            let twin_id = self.store.insert(twin, now)?;
            let importance = self.traces.get(&id).map(|t| t.importance).unwrap_or(PriorityInput {
                saliency: 0.5,
                valence: source.emotional_valence,
                reward: 0.5,
                goal: 0.5,
            });
            self.register(twin_id, importance, now)?;
            self.kg.connect(id, twin_id, self.cfg.lifecycle.initial_edge_weight)?;
            if let Some(item) = self.store.get_mut(id) {
                item.related_ids.insert(twin_id);
            }
            self.abstracted.insert(id);
            report.abstracted.push((id, twin_id));
        }
        let session = self.cfg.lifecycle.session_secs;
        let stale: Vec<ItemId> = self
            .store
            .scan(LayerKind::ShortTerm, |i| now - i.created_at >= session)
            .into_iter()
            .map(MemoryItem::id)
            .collect();
        for id in stale {
            let target = self.cfg.flags.route(LayerKind::Episodic);
            if target == LayerKind::ShortTerm {
                continue;
            }
            let new_id = self.store.move_to(id, target)?;
            self.rekey(id, new_id);
            report.promoted.push((id, new_id));
        }
        Ok(report)
    }

    fn rekey(&mut self, old: ItemId, new: ItemId) {
        if let Some(t) = self.traces.remove(&old) {
            self.traces.insert(new, t);
        }
        let nbrs: Vec<(ItemId, crate::kg::SynapticEdge)> =
            self.kg.incident(old).map(|e| (e.other(old), *e)).collect();
        self.kg.remove_node(old);
        self.kg.add_node(new);
        for (n, e) in nbrs {
            if let Ok(edge) = self.kg.connect(new, n, e.w) {
                edge.sigma2 = e.sigma2;
                edge.k = e.k;
            }
        }
        self.bm25.remove(old);
        if let Some(item) = self.store.get(new) {
            self.bm25.add(new, &item.content);
        }
        if let Some(card) = self.due.remove(old) {
            let _ = self.due.schedule(new, card.stability, card.last_context, card.last_review, &self.cfg.fsrs);
        }
    }

    fn forget(&mut self, id: ItemId) {
        self.store.remove(id);
        self.kg.remove_node(id);
        self.bm25.remove(id);
        self.due.remove(id);
        self.traces.remove(&id);
    }

    /// Ages every non-core item and every edge by `dt_days` at the configured rate.
    pub fn age(&mut self, dt_days: f64) {
        let rate = self.cfg.decay_rate;
        for (id, t) in self.traces.iter_mut() {
            let Some(item) = self.store.get(*id) else { continue };
            if item.is_core || item.layer() == LayerKind::Core {
                continue;
            }
            t.load += rate * dt_days / (item.stability * t.growth);
        }
        if self.on(Algorithm::TwoFactor) {
            self.kg.decay_edges(rate, dt_days);
        } else {
            let keep = (-rate * dt_days).exp();
            let pairs: Vec<(ItemId, ItemId)> = self.kg.edges().map(|e| (e.src, e.dst)).collect();
            for (a, b) in pairs {
                if let Some(e) = self.kg.edge_mut(a, b) {
                    e.w *= keep;
                }
            }
            self.kg.prune();
        }
    }

    /// Removes every item whose strength fell below the forget threshold.
    pub fn forget_weak(&mut self) -> Vec<ItemId> {
        let threshold = self.cfg.decay.forget_threshold;
        let doomed: Vec<ItemId> =
            self.traces.keys().copied().filter(|id| self.strength(*id).is_some_and(|s| s < threshold)).collect();
        for id in &doomed {
            self.forget(*id);
        }
        doomed
    }

    /// `age` followed by `forget_weak`.
    pub fn decay_step(&mut self, dt_days: f64) -> Vec<ItemId> {
        self.age(dt_days);
        self.forget_weak()
    }

    /// Runs up to `budget` due reviews, most important first when the
    /// priority map is on, and returns the reviewed ids.
    pub fn review_pass(&mut self, budget: usize, contexts: &mut dyn FnMut(ItemId, &[f64]) -> Vec<f64>) -> Result<Vec<ItemId>> {
        if !self.on(Algorithm::VmpfcFsrs) {
            return Ok(Vec::new());
        }
        let now = self.clock.now();
        let mut due = self.due.due(now);
        if self.on(Algorithm::PriorityMap) {
            let mut keyed: Vec<(f64, ItemId)> = due.iter().map(|&id| (self.priority_of(id), id)).collect();
            keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            due = keyed.into_iter().map(|(_, id)| id).collect();
        }
        due.truncate(budget);
        let cap = self.growth_ceiling();
        let gain = self.plasticity_gain();
        let amplitude = (self.cfg.lifecycle.review_amplitude * gain).min(1.0);
        for &id in &due {
            let Some(item) = self.store.get(id) else { continue };
            let (base, embedding) = (item.stability, item.embedding.clone());
            let growth = {
                let t = self.traces.get_mut(&id).ok_or(MemError::UnknownItem(id))?;
                t.growth = (t.growth * self.cfg.decay.review_growth).min(cap);
                t.growth
            };
            let context = contexts(id, &embedding);
            let days = base * growth / self.cfg.decay_rate.max(f64::MIN_POSITIVE);
            self.due.review(id, days, &context, now, &self.cfg.fsrs)?;
            self.access(id);
            if self.on(Algorithm::TwoFactor) {
                let nbrs: Vec<ItemId> = self.kg.neighbors(id).collect();
                for n in nbrs {
                    self.kg.coactivate(id, n, 1.0, amplitude)?;
                }
            }
        }
        Ok(due)
    }

    /// Retrieval practice: each hit is touched and coactivated with its neighbours.
    pub fn reinforce(&mut self, hits: &[ItemId]) -> Result<()> {
        let amplitude = (self.cfg.lifecycle.recall_amplitude * self.plasticity_gain()).min(1.0);
        for &id in hits {
            if !self.store.is_live(id) {
                continue;
            }
            self.access(id);
            if self.on(Algorithm::TwoFactor) {
                let nbrs: Vec<ItemId> = self.kg.neighbors(id).collect();
                for n in nbrs {
                    self.kg.coactivate(id, n, 1.0, amplitude)?;
                }
            }
            if self.on(Algorithm::MetacogMonitor) {
                self.ledger.record(crate::priority::OutcomeKind::RetrievalHit, true, self.clock.now());
            }
        }
        Ok(())
    }

    /// Offers a revision to a memory recalled within the lability window.
    /// Without reconsolidation the revision is ignored.
    pub fn revise(&mut self, id: ItemId, revision: &Revision) -> Result<Option<ReconEvent>> {
        if !self.on(Algorithm::Reconsolidation) || !self.store.is_live(id) {
            return Ok(None);
        }
        let now = self.clock.now();
        let levels = self.modulation().unwrap_or(ModulationOutputs {
            learning_rate: 0.0,
            exploration_bias: 0.0,
            consolidation_patience: 0.0,
            attention_ratio: 0.0,
        });
        let item = self.store.get(id).ok_or(MemError::UnknownItem(id))?;
        let lock = lock_score(&LockInput {
            access_count: item.access_count,
            confidence: item.confidence,
            age_days: (now - item.created_at) / SECS_PER_DAY,
            is_core: item.is_core,
        });
        let protect = self.on(Algorithm::StabilityProtector);
        let incoming = Incoming {
            content: &revision.content,
            contradicts: revision.contradicts,
            ne_level: levels.learning_rate,
            serotonin_level: levels.consolidation_patience,
        };
        let event = self.recon.apply_update(&mut self.store, id, incoming, |pe| !protect || gate_update(pe, &lock), now)?;
        if event.outcome == crate::recon::Outcome::Applied {
            match event.mode {
                crate::recon::ReconMode::Confirmed => {}
                crate::recon::ReconMode::NewEpisode => {
                    if let Some(created) = event.created {
                        let importance = self.traces.get(&id).map(|t| t.importance).unwrap_or(PriorityInput {
                            saliency: 0.5,
                            valence: 0.0,
                            reward: 0.5,
                            goal: 0.5,
                        });
                        self.register(created, importance, now)?;
                    }
                }
                _ => {
                    if let Some(t) = self.traces.get_mut(&id) {
                        t.growth = (t.growth * (1.0 - self.cfg.lifecycle.edit_loss)).max(1.0);
                    }
                    if let Some(item) = self.store.get(id) {
                        self.bm25.add(id, &item.content);
                    }
                }
            }
        }
        Ok(Some(event))
    }

    /// Nightly replay over every live, non-core item. With vmPFC-FSRS on, each
    /// episode's surprise is the prediction error between its stored embedding
    /// and the context `contexts` reports for it.
    pub fn sleep(&mut self, contexts: &mut dyn FnMut(ItemId, &[f64]) -> Vec<f64>, rng: &mut Mulberry32) -> SleepReport {
        if !self.on(Algorithm::Sleep) {
            return SleepReport::default();
        }
        let now = self.clock.now();
        let window = self.cfg.lifecycle.reward_window_days * SECS_PER_DAY;
        let fsrs = self.on(Algorithm::VmpfcFsrs);
        let episodes: Vec<Episode> = self
            .store
            .iter_live()
            .filter(|i| !i.is_core)
            .map(|i| {
                let id = i.id();
                let reward = if i.access_count > 0 && now - i.last_accessed <= window { 1.0 } else { 0.0 };
                let td = if fsrs { prediction_error(&i.embedding, &contexts(id, &i.embedding)).unwrap_or(0.0).min(1.0) } else { 0.0 };
                let related = self.kg.incident(id).filter(|e| e.w > 0.0).count();
                Episode { candidate: ReplayCandidate::real(id, td, reward, related), embedding: i.embedding.clone() }
            })
            .collect();
        let gain = self.plasticity_gain();
        let plasticity = Plasticity {
            ltp_scale: self.cfg.lifecycle.ltp_scale * gain,
            ltd_scale: self.cfg.lifecycle.ltd_scale * (1.0 - self.patience()),
        };
        let report = sleep_cycle(&episodes, &mut self.kg, &self.cfg.sleep, plasticity, rng);
        let cap = self.growth_ceiling();
        let kappa = self.cfg.lifecycle.replay_kappa * gain;
        for id in &report.potentiated {
            if let Some(t) = self.traces.get_mut(id) {
                let r = t.ebbinghaus();
                t.growth = consolidation_boost(t.growth, r, kappa).min(cap);
            }
        }
        if self.cfg.lifecycle.prune_orphans {
            // Stored since the last night, isolated going into this one,
            // never recalled and not replayed.
            let isolated: BTreeSet<ItemId> =
                episodes.iter().filter(|e| e.candidate.related_count == 0).map(|e| e.candidate.episode_id).collect();
            let orphans: Vec<ItemId> = report
                .depressed
                .iter()
                .copied()
                .filter(|id| {
                    isolated.contains(id)
                        && self.store.get(*id).is_some_and(|i| i.access_count == 0 && now - i.created_at <= window)
                })
                .collect();
            for id in orphans {
                self.forget(id);
            }
        }
        report
    }

    pub fn export_state(&self) -> EngineState {
        EngineState {
            version: STATE_VERSION,
            config: self.cfg.clone(),
            clock: self.clock,
            store: self.store.clone(),
            kg: self.kg.clone(),
            traces: self.traces.clone(),
            due: self.due.clone(),
            neuro: self.neuro.clone(),
            abstracted: self.abstracted.clone(),
        }
    }

    pub fn import_state(state: EngineState) -> Result<Self> {
        if state.version != STATE_VERSION {
            return Err(MemError::InvalidArgument(format!("unsupported state version {}", state.version)));
        }
        let mut engine = Self::new(state.config);
        engine.clock = state.clock;
        engine.store = state.store;
        engine.kg = state.kg;
        engine.traces = state.traces;
        engine.due = state.due;
        engine.neuro = state.neuro;
        engine.abstracted = state.abstracted;
        for item in engine.store.iter_live() {
            engine.bm25.add(item.id(), &item.content);
        }
        Ok(engine)
    }

    pub fn export_json(&self) -> String {
        serde_json::to_string(&self.export_state()).expect("engine state serialises")
    }

    pub fn import_json(json: &str) -> Result<Self> {
        let state: EngineState = serde_json::from_str(json).map_err(|e| MemError::InvalidArgument(e.to_string()))?;
        Self::import_state(state)
    }
}

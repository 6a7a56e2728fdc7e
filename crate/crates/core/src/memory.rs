//! Memory items, the seven layers and the simulated clock.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, MemError, Result};

pub const SECS_PER_HOUR: f64 = 3600.0;
pub const SECS_PER_DAY: f64 = 86_400.0;
pub const WORKING_CAPACITY: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemId(pub u32);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerKind {
    Working,
    ShortTerm,
    Episodic,
    Semantic,
    Procedural,
    Core,
    CrossContext,
}

impl LayerKind {
    pub const ALL: [LayerKind; 7] = [
        LayerKind::Working,
        LayerKind::ShortTerm,
        LayerKind::Episodic,
        LayerKind::Semantic,
        LayerKind::Procedural,
        LayerKind::Core,
        LayerKind::CrossContext,
    ];

    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            LayerKind::Working => "working",
            LayerKind::ShortTerm => "short_term",
            LayerKind::Episodic => "episodic",
            LayerKind::Semantic => "semantic",
            LayerKind::Procedural => "procedural",
            LayerKind::Core => "core",
            LayerKind::CrossContext => "cross_context",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.name() == name)
    }
}

impl fmt::Display for LayerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Simulated time in seconds. Only moves forward through `advance`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SimClock {
    now: f64,
}

impl SimClock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn now_days(&self) -> f64 {
        self.now / SECS_PER_DAY
    }

    pub fn advance(&mut self, dt_secs: f64) -> Result<()> {
        ensure(dt_secs.is_finite() && dt_secs >= 0.0, "clock cannot move backwards")?;
        self.now += dt_secs;
        Ok(())
    }

    pub fn advance_days(&mut self, days: f64) -> Result<()> {
        self.advance(days * SECS_PER_DAY)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryItem {
    id: ItemId,
    layer: LayerKind,
    pub content: String,
    pub embedding: Vec<f64>,
    pub created_at: f64,
    pub last_accessed: f64,
    pub access_count: u32,
    /// Days; R(t) = exp(-t / stability).
    pub stability: f64,
    pub emotional_valence: f64,
    pub confidence: f64,
    pub is_core: bool,
    pub related_ids: BTreeSet<ItemId>,
    /// Record this one was moved or abstracted from.
    pub provenance: Option<ItemId>,
}

impl MemoryItem {
    pub fn new(content: impl Into<String>, layer: LayerKind, embedding: Vec<f64>) -> Self {
        Self {
            id: ItemId(u32::MAX),
            layer,
            content: content.into(),
            embedding,
            created_at: 0.0,
            last_accessed: 0.0,
            access_count: 0,
            stability: 1.0,
            emotional_valence: 0.0,
            confidence: 0.5,
            is_core: layer == LayerKind::Core,
            related_ids: BTreeSet::new(),
            provenance: None,
        }
    }

    pub fn with_valence(mut self, valence: f64) -> Self {
        self.emotional_valence = valence;
        self
    }

    pub fn with_stability(mut self, days: f64) -> Self {
        self.stability = days;
        self
    }

    pub fn id(&self) -> ItemId {
        self.id
    }

    pub fn layer(&self) -> LayerKind {
        self.layer
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if self.content.trim().is_empty() {
            return Err(MemError::EmptyContent);
        }
        if self.embedding.len() != dim {
            return Err(MemError::DimensionMismatch { expected: dim, got: self.embedding.len() });
        }
        ensure(self.stability > 0.0 && self.stability.is_finite(), "stability must be positive")?;
        ensure((-1.0..=1.0).contains(&self.emotional_valence), "valence must lie in [-1, 1]")?;
        ensure((0.0..=1.0).contains(&self.confidence), "confidence must lie in [0, 1]")
    }
}

/// All layers in one arena. Ids are dense and never reused; removed records
/// stay addressable for provenance but leave every layer listing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStore {
    dim: usize,
    records: Vec<MemoryItem>,
    live: Vec<bool>,
    layers: Vec<VecDeque<ItemId>>,
}

impl LayerStore {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            records: Vec::new(),
            live: Vec::new(),
            layers: vec![VecDeque::new(); LayerKind::ALL.len()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, mut item: MemoryItem, now: f64) -> Result<ItemId> {
        item.validate(self.dim)?;
        let id = ItemId(self.records.len() as u32);
        item.id = id;
        item.created_at = now;
        item.last_accessed = now;
        let layer = item.layer;
        self.records.push(item);
        self.live.push(true);
        self.layers[layer.slot()].push_back(id);
        if layer == LayerKind::Working && self.layers[layer.slot()].len() > WORKING_CAPACITY {
            let oldest = self.layers[layer.slot()][0];
            self.move_to(oldest, LayerKind::ShortTerm)?;
        }
        Ok(id)
    }

    /// Moves an item by retiring its record and inserting a copy in `to`.
    pub fn move_to(&mut self, id: ItemId, to: LayerKind) -> Result<ItemId> {
        let mut copy = self.get(id).ok_or(MemError::UnknownItem(id))?.clone();
        let created = copy.created_at;
        let accessed = copy.last_accessed;
        self.remove(id);
        copy.layer = to;
        copy.provenance = Some(id);
        let new_id = self.insert(copy, created)?;
        self.records[new_id.index()].last_accessed = accessed;
        Ok(new_id)
    }

    pub fn remove(&mut self, id: ItemId) -> bool {
        match self.live.get(id.index()) {
            Some(true) => {
                self.live[id.index()] = false;
                let layer = self.records[id.index()].layer;
                self.layers[layer.slot()].retain(|&x| x != id);
                true
            }
            _ => false,
        }
    }

    pub fn is_live(&self, id: ItemId) -> bool {
        self.live.get(id.index()).copied().unwrap_or(false)
    }

    pub fn get(&self, id: ItemId) -> Option<&MemoryItem> {
        self.is_live(id).then(|| &self.records[id.index()])
    }

    pub fn get_mut(&mut self, id: ItemId) -> Option<&mut MemoryItem> {
        if self.is_live(id) {
            Some(&mut self.records[id.index()])
        } else {
            None
        }
    }

    /// Any record ever stored, live or retired.
    pub fn record(&self, id: ItemId) -> Option<&MemoryItem> {
        self.records.get(id.index())
    }

    pub fn scan(&self, layer: LayerKind, pred: impl Fn(&MemoryItem) -> bool) -> Vec<&MemoryItem> {
        let mut ids: Vec<ItemId> = self.layers[layer.slot()].iter().copied().collect();
        ids.sort_unstable();
        ids.into_iter()
            .map(|id| &self.records[id.index()])
            .filter(|item| pred(item))
            .collect()
    }

    pub fn layer_ids(&self, layer: LayerKind) -> Vec<ItemId> {
        let mut ids: Vec<ItemId> = self.layers[layer.slot()].iter().copied().collect();
        ids.sort_unstable();
        ids
    }

    pub fn layer_len(&self, layer: LayerKind) -> usize {
        self.layers[layer.slot()].len()
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(VecDeque::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter_live(&self) -> impl Iterator<Item = &MemoryItem> {
        self.records.iter().zip(&self.live).filter(|(_, &l)| l).map(|(r, _)| r)
    }

    pub fn live_ids(&self) -> Vec<ItemId> {
        self.iter_live().map(MemoryItem::id).collect()
    }
}

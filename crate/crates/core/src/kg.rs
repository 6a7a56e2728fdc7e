//! Knowledge graph whose edges carry a weight and a consolidation variance.
//!
//! Importance is the inverse variance, so edges that keep getting used
//! become both harder to change and slower to fade.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::memory::ItemId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KgConfig {
    pub eta: f64,
    pub beta: f64,
    pub lambda_ewc: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub prune_eps: f64,
    pub sigma2_min: f64,
    pub boost_alpha: f64,
}

impl Default for KgConfig {
    fn default() -> Self {
        Self {
            eta: 0.1,
            beta: 0.15,
            lambda_ewc: 0.5,
            w_min: 0.0,
            w_max: 5.0,
            prune_eps: 0.05,
            sigma2_min: 0.01,
            boost_alpha: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynapticEdge {
    pub src: ItemId,
    pub dst: ItemId,
    pub w: f64,
    pub sigma2: f64,
    pub k: u32,
}

impl SynapticEdge {
    pub fn new(a: ItemId, b: ItemId, w: f64) -> Self {
        let (src, dst) = canonical(a, b);
        Self { src, dst, w, sigma2: 1.0, k: 0 }
    }

    pub fn importance(&self) -> f64 {
        1.0 / self.sigma2
    }

    pub fn other(&self, id: ItemId) -> ItemId {
        if self.src == id {
            self.dst
        } else {
            self.src
        }
    }

    /// Hebbian weight step gated by a tag score, then one maturation step.
    pub fn coactivate(&mut self, cfg: &KgConfig, tag_score: f64, amplitude: f64) -> Result<()> {
        ensure((0.0..=1.0).contains(&tag_score), "tag score must lie in [0, 1]")?;
        ensure((0.0..=1.0).contains(&amplitude), "amplitude must lie in [0, 1]")?;
        self.w = (self.w + cfg.eta * tag_score * amplitude).clamp(cfg.w_min, cfg.w_max);
        let novelty = 1.0 / (1.0 + 0.1 * self.k as f64);
        self.sigma2 = (self.sigma2 * (1.0 - cfg.beta * novelty)).max(cfg.sigma2_min);
        self.k += 1;
        Ok(())
    }

    pub fn decay_rate(&self, base_rate: f64) -> f64 {
        base_rate / (1.0 + 0.1 * self.importance())
    }
}

pub fn canonical(a: ItemId, b: ItemId) -> (ItemId, ItemId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Score multiplier contributed by an edge: 1 + α·w·I^0.1.
pub fn importance_boost(raw_score: f64, edge: &SynapticEdge, alpha: f64) -> f64 {
    raw_score * (1.0 + alpha * edge.w * edge.importance().powf(0.1))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SynapticGraph {
    pub cfg: KgConfig,
    #[serde(with = "edge_list")]
    edges: BTreeMap<(ItemId, ItemId), SynapticEdge>,
    adjacency: BTreeMap<ItemId, BTreeSet<ItemId>>,
}

/// JSON objects need string keys, so edges travel as a list of records.
mod edge_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Record {
        a: ItemId,
        b: ItemId,
        edge: SynapticEdge,
    }

    pub fn serialize<S: Serializer>(edges: &BTreeMap<(ItemId, ItemId), SynapticEdge>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(edges.iter().map(|(&(a, b), &edge)| Record { a, b, edge }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<(ItemId, ItemId), SynapticEdge>, D::Error> {
        let records = Vec::<Record>::deserialize(d)?;
        Ok(records.into_iter().map(|r| ((r.a, r.b), r.edge)).collect())
    }
}

impl SynapticGraph {
    pub fn new(cfg: KgConfig) -> Self {
        Self { cfg, edges: BTreeMap::new(), adjacency: BTreeMap::new() }
    }

    pub fn add_node(&mut self, id: ItemId) {
        self.adjacency.entry(id).or_default();
    }

    /// Inserts an edge, or returns the existing one untouched.
    pub fn connect(&mut self, a: ItemId, b: ItemId, w: f64) -> Result<&mut SynapticEdge> {
        ensure(a != b, "self-loops are not allowed")?;
        let key = canonical(a, b);
        let w = w.clamp(self.cfg.w_min, self.cfg.w_max);
        self.adjacency.entry(a).or_default().insert(b);
        self.adjacency.entry(b).or_default().insert(a);
        Ok(self.edges.entry(key).or_insert_with(|| SynapticEdge::new(a, b, w)))
    }

    pub fn edge(&self, a: ItemId, b: ItemId) -> Option<&SynapticEdge> {
        self.edges.get(&canonical(a, b))
    }

    pub fn edge_mut(&mut self, a: ItemId, b: ItemId) -> Option<&mut SynapticEdge> {
        self.edges.get_mut(&canonical(a, b))
    }

    pub fn coactivate(&mut self, a: ItemId, b: ItemId, tag_score: f64, amplitude: f64) -> Result<SynapticEdge> {
        let cfg = self.cfg;
        let edge = self
            .edges
            .get_mut(&canonical(a, b))
            .ok_or_else(|| crate::error::MemError::InvalidArgument(format!("no edge {a}-{b}")))?;
        edge.coactivate(&cfg, tag_score, amplitude)?;
        Ok(*edge)
    }

    /// (λ/2)·Σ I·Δw² over the proposed changes.
    pub fn ewc_penalty(&self, deltas: &[(ItemId, ItemId, f64)]) -> Result<f64> {
        let mut total = 0.0;
        for &(a, b, dw) in deltas {
            let edge = self
                .edge(a, b)
                .ok_or_else(|| crate::error::MemError::InvalidArgument(format!("no edge {a}-{b}")))?;
            total += edge.importance() * dw * dw;
        }
        Ok(0.5 * self.cfg.lambda_ewc * total)
    }

    /// Exponential fade at the importance-discounted rate, then pruning.
    pub fn decay_edges(&mut self, base_rate: f64, dt_days: f64) -> usize {
        for edge in self.edges.values_mut() {
            edge.w *= (-edge.decay_rate(base_rate) * dt_days).exp();
        }
        self.prune()
    }

    /// Shifts an edge weight, clipped to the configured bounds.
    pub fn nudge(&mut self, a: ItemId, b: ItemId, delta: f64) {
        let (lo, hi) = (self.cfg.w_min, self.cfg.w_max);
        if let Some(edge) = self.edge_mut(a, b) {
            edge.w = (edge.w + delta).clamp(lo, hi);
        }
    }

    pub fn prune(&mut self) -> usize {
        self.prune_below(self.cfg.prune_eps)
    }

    pub fn prune_below(&mut self, eps: f64) -> usize {
        let doomed: Vec<(ItemId, ItemId)> =
            self.edges.iter().filter(|(_, e)| e.w < eps).map(|(k, _)| *k).collect();
        for (a, b) in &doomed {
            self.edges.remove(&(*a, *b));
            if let Some(n) = self.adjacency.get_mut(a) {
                n.remove(b);
            }
            if let Some(n) = self.adjacency.get_mut(b) {
                n.remove(a);
            }
        }
        doomed.len()
    }

    pub fn remove_node(&mut self, id: ItemId) {
        if let Some(nbrs) = self.adjacency.remove(&id) {
            for n in nbrs {
                self.edges.remove(&canonical(id, n));
                if let Some(set) = self.adjacency.get_mut(&n) {
                    set.remove(&id);
                }
            }
        }
    }

    pub fn neighbors(&self, id: ItemId) -> impl Iterator<Item = ItemId> + '_ {
        self.adjacency.get(&id).into_iter().flatten().copied()
    }

    pub fn degree(&self, id: ItemId) -> usize {
        self.adjacency.get(&id).map_or(0, BTreeSet::len)
    }

    pub fn incident(&self, id: ItemId) -> impl Iterator<Item = &SynapticEdge> + '_ {
        self.neighbors(id).filter_map(move |n| self.edge(id, n))
    }

    /// Mean incident weight, 0 for an isolated node.
    pub fn support(&self, id: ItemId) -> f64 {
        let (sum, n) = self.incident(id).fold((0.0, 0usize), |(s, n), e| (s + e.w, n + 1));
        if n == 0 {
            0.0
        } else {
            sum / n as f64
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = &SynapticEdge> {
        self.edges.values()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }
}

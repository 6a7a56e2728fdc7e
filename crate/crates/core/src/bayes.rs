//! Fact confidences updated by Bayes' rule and spread over typed relations.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, MemError, Result};

pub const CONFIDENCE_EPS: f64 = 1e-6;
const LIKELIHOOD_SLOPE: f64 = 0.4;
const EVIDENCE_PROB: f64 = 0.5;

/// likelihood·prior / evidence, kept strictly inside (0, 1).
pub fn bayes_update(prior: f64, likelihood: f64, evidence_prob: f64) -> Result<f64> {
    if evidence_prob <= 0.0 {
        return Err(MemError::InvalidArgument("evidence probability must be positive".into()));
    }
    ensure((0.0..=1.0).contains(&prior) && (0.0..=1.0).contains(&likelihood), "probabilities must lie in [0, 1]")?;
    Ok((likelihood * prior / evidence_prob).clamp(CONFIDENCE_EPS, 1.0 - CONFIDENCE_EPS))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Supports,
    Contradicts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FactId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub src: FactId,
    pub dst: FactId,
    pub kind: RelationKind,
    pub strength: f64,
}

impl Relation {
    /// P(e | f) implied by a neighbour holding `neighbor_conf`.
    pub fn likelihood(&self, neighbor_conf: f64) -> f64 {
        let shift = LIKELIHOOD_SLOPE * self.strength * neighbor_conf;
        match self.kind {
            RelationKind::Supports => 0.5 + shift,
            RelationKind::Contradicts => 0.5 - shift,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactNode {
    pub id: FactId,
    pub confidence: f64,
    pub ci95: (f64, f64),
    pub observations: u32,
}

impl FactNode {
    pub fn new(id: FactId, confidence: f64) -> Self {
        Self { id, confidence, ci95: (0.0, 1.0), observations: 0 }
    }
}

/// ±1.96·sqrt(p(1-p)/n), clipped to [0, 1]; the whole unit interval before any evidence.
pub fn wald_interval(p: f64, n: u32) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let half = 1.96 * (p * (1.0 - p) / n as f64).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BeliefGraph {
    facts: Vec<FactNode>,
    relations: Vec<Relation>,
}

impl BeliefGraph {
    pub fn new(confidences: &[f64]) -> Result<Self> {
        let facts = confidences
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                ensure(c > 0.0 && c < 1.0, "confidence must lie in (0, 1)")?;
                Ok(FactNode::new(FactId(i as u32), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { facts, relations: Vec::new() })
    }

    pub fn relate(&mut self, src: FactId, dst: FactId, kind: RelationKind, strength: f64) -> Result<()> {
        ensure(src != dst, "a fact cannot relate to itself")?;
        ensure(strength > 0.0 && strength <= 1.0, "strength must lie in (0, 1]")?;
        let n = self.facts.len() as u32;
        ensure(src.0 < n && dst.0 < n, "relation endpoint out of range")?;
        self.relations.push(Relation { src, dst, kind, strength });
        Ok(())
    }

    pub fn facts(&self) -> &[FactNode] {
        &self.facts
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn confidences(&self) -> Vec<f64> {
        self.facts.iter().map(|f| f.confidence).collect()
    }

    /// Synchronous sweeps: every update in a sweep reads the previous sweep's
    /// confidences. Relations act in both directions. A fact's evidence ratios
    /// are multiplied before the single clamp, so relation order never matters.
    pub fn propagate(&mut self, iterations: usize) -> Result<()> {
        for _ in 0..iterations {
            let prev = self.confidences();
            let mut ratio = vec![1.0; self.facts.len()];
            let mut seen = vec![0u32; self.facts.len()];
            for rel in &self.relations {
                for (me, other) in [(rel.src, rel.dst), (rel.dst, rel.src)] {
                    let i = me.0 as usize;
                    ratio[i] *= rel.likelihood(prev[other.0 as usize]) / EVIDENCE_PROB;
                    seen[i] += 1;
                }
            }
            for (i, (fact, n)) in self.facts.iter_mut().zip(seen).enumerate() {
                let conf = if n == 0 { prev[i] } else { (prev[i] * ratio[i]).clamp(CONFIDENCE_EPS, 1.0 - CONFIDENCE_EPS) };
                fact.confidence = conf;
                fact.observations += n;
                fact.ci95 = wald_interval(conf, fact.observations);
            }
        }
        Ok(())
    }
}

/// Share of (true, false) pairs where the true fact is more confident; ties count half.
pub fn pairwise_auc(confidences: &[f64], truth: &[bool]) -> Result<f64> {
    ensure(confidences.len() == truth.len(), "labels and confidences differ in length")?;
    let (mut wins, mut pairs) = (0.0, 0usize);
    for (ct, _) in confidences.iter().zip(truth).filter(|(_, &t)| t) {
        for (cf, _) in confidences.iter().zip(truth).filter(|(_, &t)| !t) {
            pairs += 1;
            wins += match ct.total_cmp(cf) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Equal => 0.5,
                std::cmp::Ordering::Less => 0.0,
            };
        }
    }
    if pairs == 0 {
        return Err(MemError::Degenerate("need at least one true and one false label"));
    }
    Ok(wins / pairs as f64)
}

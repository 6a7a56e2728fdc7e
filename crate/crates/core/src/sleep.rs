//! Offline replay: simulate candidates, select by TAG score, scale the edges
//! of selected episodes up and the rest down, prune, and wire failed episodes
//! to their nearest successful neighbour.

use serde::{Deserialize, Serialize};

use crate::kg::SynapticGraph;
use crate::memory::ItemId;
use crate::rng::Mulberry32;
use crate::text::cosine;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SleepConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub theta_v: f64,
    pub ltp_step: f64,
    pub ltd_step: f64,
    pub prune_tau: f64,
    pub failure_below: f64,
    pub salient_from: f64,
    pub counterfactual_reward: (f64, f64),
    /// Initial weight of an association created by a counterfactual.
    pub association_weight: f64,
}

impl Default for SleepConfig {
    fn default() -> Self {
        Self {
            alpha: 0.4,
            beta: 0.35,
            gamma: 0.25,
            theta_v: 0.5,
            ltp_step: 0.10,
            ltd_step: 0.05,
            prune_tau: 0.05,
            failure_below: 0.5,
            salient_from: 0.8,
            counterfactual_reward: (0.7, 1.0),
            association_weight: 0.10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplayCandidate {
    pub episode_id: ItemId,
    pub td_error: f64,
    pub reward: f64,
    pub related_count: usize,
    pub is_counterfactual: bool,
}

impl ReplayCandidate {
    pub fn real(episode_id: ItemId, td_error: f64, reward: f64, related_count: usize) -> Self {
        Self { episode_id, td_error: td_error.abs(), reward: reward.clamp(0.0, 1.0), related_count, is_counterfactual: false }
    }
}

/// A real episode offered to the sleep cycle together with its embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub candidate: ReplayCandidate,
    pub embedding: Vec<f64>,
}

pub fn novelty(related_count: usize) -> f64 {
    (0.2 * related_count as f64).min(1.0)
}

impl SleepConfig {
    pub fn tag_score(&self, c: &ReplayCandidate) -> f64 {
        self.alpha * c.td_error.abs() + self.beta * c.reward + self.gamma * novelty(c.related_count)
    }
}

/// One counterfactual per failed episode with its reward resampled toward success.
pub fn counterfactual_candidates(failed: &[ReplayCandidate], cfg: &SleepConfig, rng: &mut Mulberry32) -> Vec<ReplayCandidate> {
    let (lo, hi) = cfg.counterfactual_reward;
    failed
        .iter()
        .filter(|c| c.reward < cfg.failure_below)
        .map(|c| ReplayCandidate { reward: rng.uniform(lo, hi), is_counterfactual: true, ..*c })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SleepReport {
    pub strengthened: usize,
    pub weakened: usize,
    pub pruned: usize,
    pub new_associations: usize,
    /// Real episodes that cleared the threshold, in replay order.
    pub potentiated: Vec<ItemId>,
    pub depressed: Vec<ItemId>,
}

/// Step scales let a neuromodulated caller stretch LTP and soften LTD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plasticity {
    pub ltp_scale: f64,
    pub ltd_scale: f64,
}

impl Default for Plasticity {
    fn default() -> Self {
        Self { ltp_scale: 1.0, ltd_scale: 1.0 }
    }
}

pub fn sleep_cycle(
    episodes: &[Episode],
    kg: &mut SynapticGraph,
    cfg: &SleepConfig,
    plasticity: Plasticity,
    rng: &mut Mulberry32,
) -> SleepReport {
    let mut report = SleepReport::default();
    if episodes.is_empty() {
        return report;
    }
    let real: Vec<ReplayCandidate> = episodes.iter().map(|e| e.candidate).collect();
    let counterfactuals = counterfactual_candidates(&real, cfg, rng);

    for cf in &counterfactuals {
        let Some(source) = episodes.iter().find(|e| e.candidate.episode_id == cf.episode_id) else {
            continue;
        };
        let nearest = episodes
            .iter()
            .filter(|e| e.candidate.reward >= cfg.salient_from && e.candidate.episode_id != cf.episode_id)
            .filter_map(|e| cosine(&source.embedding, &e.embedding).ok().map(|s| (s, e.candidate.episode_id)))
            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        if let Some((_, target)) = nearest {
            if kg.edge(cf.episode_id, target).is_none() && kg.connect(cf.episode_id, target, cfg.association_weight).is_ok() {
                report.new_associations += 1;
            }
        }
    }

    let mut pool: Vec<(f64, ReplayCandidate)> =
        real.iter().chain(&counterfactuals).map(|c| (cfg.tag_score(c), *c)).collect();
    pool.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.episode_id.cmp(&b.1.episode_id))
            .then(a.1.is_counterfactual.cmp(&b.1.is_counterfactual))
    });

    for (tag, cand) in &pool {
        let nbrs: Vec<ItemId> = kg.neighbors(cand.episode_id).collect();
        if *tag >= cfg.theta_v {
            report.strengthened += 1;
            for n in nbrs {
                kg.nudge(cand.episode_id, n, cfg.ltp_step * plasticity.ltp_scale);
            }
            if !cand.is_counterfactual {
                report.potentiated.push(cand.episode_id);
            }
        } else {
            report.weakened += 1;
            for n in nbrs {
                kg.nudge(cand.episode_id, n, -cfg.ltd_step * plasticity.ltd_scale);
            }
            if !cand.is_counterfactual {
                report.depressed.push(cand.episode_id);
            }
        }
    }
    report.pruned = kg.prune_below(cfg.prune_tau);
    report
}

/// Stability after a potentiating replay: items closer to forgetting gain more.
pub fn consolidation_boost(stability: f64, retrievability: f64, kappa: f64) -> f64 {
    stability * (1.0 + kappa * (1.0 - retrievability.clamp(0.0, 1.0)))
}

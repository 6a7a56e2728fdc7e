//! Stand-alone benchmarks: forgetting curves, sleep impact, the clustered
//! entity graph, belief propagation and the lifecycle micro-benchmarks.

use std::collections::BTreeSet;

use crate::bayes::{pairwise_auc, BeliefGraph, FactId, RelationKind};
use crate::coordinator::{Algorithm, ContentKind, Draft, EngineConfig, Flags, MemoryCoordinator, Query};
use crate::error::Result;
use crate::harness::canonical::Real;
use crate::harness::corpus::{drifted, gen_entities, gen_fact_corpus, word, EntityCorpus, FactCorpusConfig, ENTITY_SIGMA};
use crate::harness::metrics::{metrics, ndcg_graded};
use crate::harness::{metric_map, per_seed, stats, ExperimentSpec, ResultBlock, SeedMetrics, Series};
use crate::kg::{KgConfig, SynapticGraph};
use crate::memory::{ItemId, LayerKind, LayerStore, MemoryItem, SECS_PER_DAY};
use crate::neuro::{Channel, EventKind, NeuroState};
use crate::priority::{gate_update, lock_score, priority, BiasLedger, LockInput, OutcomeKind, PriorityInput};
use crate::recon::{Incoming, ReconConfig, ReconMode, Reconsolidator};
use crate::rng::Mulberry32;
use crate::text::cosine;

type Outcome = (Vec<ResultBlock>, Vec<Series>);

fn with_extra(base: &[String], extra: impl IntoIterator<Item = Algorithm>) -> Vec<String> {
    let mut names: Vec<String> = base.to_vec();
    names.extend(extra.into_iter().map(|a| a.name().to_string()));
    names.sort();
    names.dedup();
    names
}

// ---------------------------------------------------------------- retention

pub const RETENTION_CHECKPOINTS: [u32; 7] = [1, 6, 24, 72, 168, 336, 720];
const RETENTION_FACTS: usize = 1000;
const RETENTION_DIM: usize = 16;

fn retention_curve(engine_cfg: &EngineConfig, rate: f64, seed: u32) -> Result<Vec<f64>> {
    let mut cfg = engine_cfg.clone();
    cfg.decay_rate = rate;
    cfg.decay.forget_threshold = 0.0;
    let mut engine = MemoryCoordinator::new(cfg);
    let mut rng = Mulberry32::new(seed);
    let mut ids = Vec::with_capacity(RETENTION_FACTS);
    let mut prev: Option<ItemId> = None;
    for i in 0..RETENTION_FACTS {
        let emb = crate::harness::corpus::unit_gaussian(RETENTION_DIM, &mut rng);
        let id = engine.store(Draft::new(format!("{} {}", word(i), word(i + 7)), ContentKind::Fact, emb))?;
        if let Some(p) = prev.filter(|_| i % 5 != 0) {
            engine.link(p, id, 1.0)?;
        }
        prev = Some(id);
        ids.push(id);
    }
    let mut ctx_rng = rng.fork(2);
    let mut sleep_rng = rng.fork(3);
    let mut contexts = |_: ItemId, emb: &[f64]| {
        let pe = ctx_rng.uniform(0.0, 0.6);
        drifted(emb, pe, &mut ctx_rng)
    };
    let last = *RETENTION_CHECKPOINTS.last().unwrap_or(&0);
    let mut out = Vec::with_capacity(RETENTION_CHECKPOINTS.len());
    for hour in 1..=last {
        engine.advance(3600.0)?;
        engine.age(1.0 / 24.0);
        engine.review_pass(usize::MAX, &mut contexts)?;
        if hour % 24 == 0 {
            engine.sleep(&mut contexts, &mut sleep_rng);
        }
        if RETENTION_CHECKPOINTS.contains(&hour) {
            let s: Vec<f64> = ids.iter().map(|id| engine.strength(*id).unwrap_or(0.0)).collect();
            out.push(stats::mean(&s));
        }
    }
    Ok(out)
}

/// Mean strength of 1000 neutral facts at fixed checkpoints under four
/// strategies: plain exponential decay, no decay, FSRS reviews only, full engine.
pub fn retention(spec: &ExperimentSpec) -> Result<Outcome> {
    let base = &spec.disabled;
    let all_but_fsrs = Algorithm::ALL.into_iter().filter(|a| *a != Algorithm::VmpfcFsrs);
    let arms: [(&str, Vec<String>, f64); 4] = [
        ("ebbinghaus", with_extra(base, Algorithm::ALL), 1.0),
        ("no_decay", with_extra(base, Algorithm::ALL), 0.0),
        ("fsrs_only", with_extra(base, all_but_fsrs), 1.0),
        ("full", with_extra(base, []), 1.0),
    ];
    let mut blocks = Vec::new();
    let mut series = Vec::new();
    for (label, disabled, rate) in arms {
        let engine_cfg = EngineConfig::new(RETENTION_DIM).with_flags(Flags::parse(&disabled)?);
        let curves = per_seed(&spec.seeds, |seed| retention_curve(&engine_cfg, rate, seed))?;
        let per: Vec<SeedMetrics> = curves
            .iter()
            .map(|c| RETENTION_CHECKPOINTS.iter().zip(c).map(|(h, v)| (format!("r_{h:03}h"), Real(*v))).collect())
            .collect();
        let block = ResultBlock::from_seeds(label, disabled, per)?;
        series.push(Series {
            name: label.to_string(),
            time_hours: RETENTION_CHECKPOINTS.iter().map(|h| Real(*h as f64)).collect(),
            values: RETENTION_CHECKPOINTS.iter().map(|h| Real(block.mean(&format!("r_{h:03}h")))).collect(),
        });
        blocks.push(block);
    }
    Ok((blocks, series))
}

// ------------------------------------------------------------ sleep impact

const SLEEP_DAYS: u32 = 7;
const SLEEP_FACTS_PER_DAY: usize = 50;
const SLEEP_RATE: f64 = 0.15;
const SLEEP_CONTEXT_SHARE: f64 = 0.3;
const SLEEP_QUERIES_PER_DAY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
struct SleepArm {
    mean_stability: f64,
    tokens: f64,
    survivors: f64,
    strengthened: f64,
    weakened: f64,
    min_new_associations: f64,
}

fn sleep_arm(base: &[String], with_sleep: bool, seed: u32) -> Result<SleepArm> {
    let mut extra = vec![Algorithm::VmpfcFsrs, Algorithm::Reconsolidation];
    if !with_sleep {
        extra.push(Algorithm::Sleep);
    }
    let mut cfg = EngineConfig::new(32).with_flags(Flags::parse(&with_extra(base, extra))?);
    cfg.decay_rate = SLEEP_RATE;
    let mut engine = MemoryCoordinator::new(cfg);

    let mut rng = Mulberry32::new(seed);
    let n = SLEEP_FACTS_PER_DAY * SLEEP_DAYS as usize;
    let mut fc = FactCorpusConfig::new(n, 0);
    fc.emotional_fraction = 0.0;
    let corpus = gen_fact_corpus(fc, &mut rng)?;
    let mut day_rng = rng.fork(1);
    let mut ctx_rng = rng.fork(2);
    let mut sleep_rng = rng.fork(3);
    let mut contexts = |_: ItemId, emb: &[f64]| {
        let pe = ctx_rng.next_f64();
        drifted(emb, pe, &mut ctx_rng)
    };
    let topic_size = corpus.config.topic_size;
    let per_day_topics = SLEEP_FACTS_PER_DAY / topic_size;

    let (mut strengthened, mut weakened) = (0.0, 0.0);
    let mut min_new = f64::INFINITY;
    for day in 0..SLEEP_DAYS as usize {
        engine.advance(SECS_PER_DAY)?;
        engine.age(1.0);
        let topics = day * per_day_topics..(day + 1) * per_day_topics;
        for topic in topics.clone() {
            engine.end_episode();
            if day > 0 && day_rng.chance(SLEEP_CONTEXT_SHARE) {
                let (text, emb) = corpus.probe(topic, &mut day_rng);
                engine.recall(&Query::new(text, emb).top(topic_size))?;
            }
            for i in corpus.topic_members(topic) {
                let f = &corpus.facts[i];
                // Neutral by construction so the no-sleep arm keeps unit stability.
                let mut draft = Draft::new(f.content.clone(), ContentKind::Episode, f.embedding.clone());
                draft.importance = f.importance;
                engine.store(draft)?;
            }
        }
        engine.end_episode();
        let seen = (day + 1) * per_day_topics;
        for _ in 0..SLEEP_QUERIES_PER_DAY {
            let topic = day_rng.below(seen);
            let (text, emb) = corpus.probe(topic, &mut day_rng);
            let hits: Vec<ItemId> = engine.recall(&Query::new(text, emb).top(topic_size))?.iter().map(|h| h.id).collect();
            engine.reinforce(&hits)?;
        }
        engine.end_episode();
        if with_sleep {
            let report = engine.sleep(&mut contexts, &mut sleep_rng);
            strengthened += report.strengthened as f64;
            weakened += report.weakened as f64;
            min_new = min_new.min(report.new_associations as f64);
        }
        engine.forget_weak();
    }
    let live = engine.store_ref().live_ids();
    let stabilities: Vec<f64> = live.iter().filter_map(|id| engine.effective_stability(*id)).collect();
    let tokens: usize = engine.store_ref().iter_live().map(|i| crate::text::token_count(&i.content)).sum();
    Ok(SleepArm {
        mean_stability: stats::mean(&stabilities),
        tokens: tokens as f64,
        survivors: live.len() as f64,
        strengthened,
        weakened,
        min_new_associations: if with_sleep { min_new } else { 0.0 },
    })
}

/// A week of daily ingestion with and without nightly replay.
pub fn sleep_impact(spec: &ExperimentSpec) -> Result<Outcome> {
    let base = &spec.disabled;
    let pairs = per_seed(&spec.seeds, |seed| Ok((sleep_arm(base, false, seed)?, sleep_arm(base, true, seed)?)))?;
    let arm_metrics = |a: &SleepArm| {
        metric_map([
            ("mean_stability", a.mean_stability),
            ("storage_tokens", a.tokens),
            ("survivors", a.survivors),
            ("ltp_events", a.strengthened),
            ("ltd_events", a.weakened),
            ("min_new_associations", a.min_new_associations),
        ])
    };
    let baseline: Vec<SeedMetrics> = pairs.iter().map(|(b, _)| arm_metrics(b)).collect();
    let slept: Vec<SeedMetrics> = pairs
        .iter()
        .map(|(b, s)| {
            let mut m = arm_metrics(s);
            m.insert("stability_ratio".into(), Real(s.mean_stability / b.mean_stability));
            m.insert("token_reduction".into(), Real(1.0 - s.tokens / b.tokens));
            m
        })
        .collect();
    let no_sleep = ResultBlock::from_seeds("no_sleep", with_extra(base, [Algorithm::VmpfcFsrs, Algorithm::Reconsolidation, Algorithm::Sleep]), baseline)?;
    let mut sleep = ResultBlock::from_seeds("sleep", with_extra(base, [Algorithm::VmpfcFsrs, Algorithm::Reconsolidation]), slept)?;
    sleep.compare("mean_stability", &no_sleep);
    Ok((vec![no_sleep, sleep], Vec::new()))
}

// ------------------------------------------------------------- entity graph

pub const KG_ENTITIES: usize = 50;
pub const KG_CLUSTERS: usize = 5;
pub const KG_DIM: usize = 32;
pub const KG_EVENTS: usize = 200;
const KG_INTRA_SHARE: f64 = 0.8;
const KG_GROUP: usize = 4;
const KG_EDGE_RATE: f64 = 0.1;

fn node(i: usize) -> ItemId {
    ItemId(i as u32)
}

/// Every pair joined by an identical edge.
pub fn uniform_graph(n: usize) -> Result<SynapticGraph> {
    let mut kg = SynapticGraph::new(KgConfig::default());
    for a in 0..n {
        for b in a + 1..n {
            kg.connect(node(a), node(b), 1.0)?;
        }
    }
    Ok(kg)
}

/// Co-access sessions of `KG_GROUP` entities, mostly drawn from one cluster;
/// every pair in a session is coactivated once. Ends with one day of decay.
pub fn learned_graph(corpus: &EntityCorpus, rng: &mut Mulberry32) -> Result<SynapticGraph> {
    let n = corpus.cluster.len();
    let mut kg = SynapticGraph::new(KgConfig::default());
    for i in 0..n {
        kg.add_node(node(i));
    }
    for _ in 0..KG_EVENTS {
        let mut group: Vec<usize> = Vec::with_capacity(KG_GROUP);
        let intra = rng.chance(KG_INTRA_SHARE);
        let home = rng.below(KG_CLUSTERS);
        while group.len() < KG_GROUP {
            let pick = if intra {
                home + KG_CLUSTERS * rng.below(n / KG_CLUSTERS)
            } else {
                rng.below(n)
            };
            if !group.contains(&pick) {
                group.push(pick);
            }
        }
        for (x, &a) in group.iter().enumerate() {
            for &b in &group[x + 1..] {
                kg.connect(node(a), node(b), 0.0)?;
                kg.coactivate(node(a), node(b), 1.0, 1.0)?;
            }
        }
    }
    kg.decay_edges(KG_EDGE_RATE, 1.0);
    Ok(kg)
}

/// Ranks candidates by importance-weighted edge strength to the query
/// entity, falling back to cosine among equals.
pub fn graph_ranking(corpus: &EntityCorpus, kg: &SynapticGraph, q: usize) -> Result<Vec<usize>> {
    let mut scored = Vec::with_capacity(corpus.cluster.len());
    for j in 0..corpus.cluster.len() {
        if j == q {
            continue;
        }
        let edge = kg.edge(node(q), node(j)).map_or(0.0, |e| e.w * e.importance().powf(0.1));
        scored.push((edge, cosine(&corpus.embeddings[q], &corpus.embeddings[j])?, j));
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)).then(a.2.cmp(&b.2)));
    Ok(scored.into_iter().map(|(_, _, j)| j).collect())
}

pub fn graph_p_at_5(corpus: &EntityCorpus, kg: &SynapticGraph) -> Result<f64> {
    let n = corpus.cluster.len();
    let mut total = 0.0;
    for q in 0..n {
        total += metrics(&graph_ranking(corpus, kg, q)?, &corpus.mates(q), 5)?.precision;
    }
    Ok(total / n as f64)
}

/// Mean weight over all intra-cluster pairs divided by the mean over all
/// inter-cluster pairs; absent edges count as zero.
pub fn intra_inter_ratio(corpus: &EntityCorpus, kg: &SynapticGraph) -> f64 {
    let n = corpus.cluster.len();
    let (mut intra, mut intra_n, mut inter, mut inter_n) = (0.0, 0usize, 0.0, 0usize);
    for a in 0..n {
        for b in a + 1..n {
            let w = kg.edge(node(a), node(b)).map_or(0.0, |e| e.w);
            if corpus.cluster[a] == corpus.cluster[b] {
                intra += w;
                intra_n += 1;
            } else {
                inter += w;
                inter_n += 1;
            }
        }
    }
    let (mi, mo) = (intra / intra_n.max(1) as f64, inter / inter_n.max(1) as f64);
    if mo == 0.0 {
        f64::INFINITY
    } else {
        mi / mo
    }
}

/// Uniform-edge versus learned-edge retrieval over 50 clustered entities.
pub fn hebbian_kg(spec: &ExperimentSpec) -> Result<Outcome> {
    let rows = per_seed(&spec.seeds, |seed| {
        let mut rng = Mulberry32::new(seed);
        let corpus = gen_entities(KG_ENTITIES, KG_CLUSTERS, KG_DIM, ENTITY_SIGMA, &mut rng)?;
        let uniform = graph_p_at_5(&corpus, &uniform_graph(KG_ENTITIES)?)?;
        let learned = learned_graph(&corpus, &mut rng.fork(1))?;
        Ok((uniform, graph_p_at_5(&corpus, &learned)?, intra_inter_ratio(&corpus, &learned)))
    })?;
    let uniform = ResultBlock::from_seeds("uniform", Vec::new(), rows.iter().map(|r| metric_map([("p_at_5", r.0)])).collect())?;
    let mut weighted = ResultBlock::from_seeds(
        "weighted",
        Vec::new(),
        rows.iter().map(|r| metric_map([("p_at_5", r.1), ("intra_inter_ratio", r.2)])).collect(),
    )?;
    weighted.compare("p_at_5", &uniform);
    Ok((vec![uniform, weighted], Vec::new()))
}

// ------------------------------------------------------- belief propagation

pub const BAYES_FACTS: usize = 30;
pub const BAYES_TRUE: usize = 20;
pub const BAYES_RELATIONS: usize = 40;
pub const BAYES_SWEEPS: usize = 3;
const BAYES_SUPPORT_SHARE: f64 = 0.3;

/// Facts with noisy priors, truth labels, and relations where true facts
/// support each other and false facts contradict true ones.
pub fn belief_fixture(rng: &mut Mulberry32) -> Result<(BeliefGraph, Vec<bool>)> {
    let truth: Vec<bool> = (0..BAYES_FACTS).map(|i| i < BAYES_TRUE).collect();
    let priors: Vec<f64> =
        truth.iter().map(|&t| if t { rng.uniform(0.32, 0.72) } else { rng.uniform(0.30, 0.70) }).collect();
    let mut graph = BeliefGraph::new(&priors)?;
    let mut seen = BTreeSet::new();
    while seen.len() < BAYES_RELATIONS {
        let a = rng.below(BAYES_TRUE);
        let (b, kind) = if rng.chance(BAYES_SUPPORT_SHARE) {
            (rng.below(BAYES_TRUE), RelationKind::Supports)
        } else {
            (BAYES_TRUE + rng.below(BAYES_FACTS - BAYES_TRUE), RelationKind::Contradicts)
        };
        if a == b || !seen.insert((a.min(b), a.max(b))) {
            continue;
        }
        graph.relate(FactId(b as u32), FactId(a as u32), kind, rng.uniform(0.5, 1.0))?;
    }
    Ok((graph, truth))
}

fn mean_where(xs: &[f64], mask: &[bool], want: bool) -> f64 {
    let picked: Vec<f64> = xs.iter().zip(mask).filter(|(_, m)| **m == want).map(|(x, _)| *x).collect();
    stats::mean(&picked)
}

pub fn bayes_propagation(spec: &ExperimentSpec) -> Result<Outcome> {
    let per = per_seed(&spec.seeds, |seed| {
        let (mut graph, truth) = belief_fixture(&mut Mulberry32::new(seed))?;
        let before = graph.confidences();
        graph.propagate(BAYES_SWEEPS)?;
        let after = graph.confidences();
        let delta: Vec<f64> = after.iter().zip(&before).map(|(a, b)| a - b).collect();
        let (auc0, auc1) = (pairwise_auc(&before, &truth)?, pairwise_auc(&after, &truth)?);
        Ok(metric_map([
            ("auc_before", auc0),
            ("auc_after", auc1),
            ("auc_lift", auc1 - auc0),
            ("true_delta", mean_where(&delta, &truth, true)),
            ("false_delta", mean_where(&delta, &truth, false)),
        ]))
    })?;
    Ok((vec![ResultBlock::from_seeds("propagation", Vec::new(), per)?], Vec::new()))
}

// ------------------------------------------------- lifecycle micro-benchmarks

const NEURO_EVENTS: usize = 1000;
const NEURO_GAP_SECS: (f64, f64) = (600.0, 3000.0);

/// Relative drift of the mean channel level from baseline, and the
/// correlation between dopamine and serotonin, over a random event stream.
/// Levels are observed halfway between consecutive events.
pub fn neuro_stream(rng: &mut Mulberry32) -> Result<(f64, f64)> {
    let mut neuro = NeuroState::default();
    let baseline = neuro.cfg.baseline;
    let (mut da, mut ht, mut all) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..NEURO_EVENTS {
        let half = 0.5 * rng.uniform(NEURO_GAP_SECS.0, NEURO_GAP_SECS.1);
        neuro.tick(half)?;
        da.push(neuro.level(Channel::Dopamine));
        ht.push(neuro.level(Channel::Serotonin));
        all.extend(Channel::ALL.iter().map(|c| neuro.level(*c)));
        neuro.tick(half)?;
        neuro.fire(EventKind::ALL[rng.below(EventKind::ALL.len())]);
    }
    let drift = (stats::mean(&all) - baseline).abs() / baseline;
    Ok((drift, stats::pearson(&da, &ht)?))
}

const RECON_TRIALS: usize = 100;
const RECON_BASE_WORDS: usize = 10;

/// Words to replace in a 10-word memory so the Jaccard distance falls well
/// inside each mode's band.
fn planted_edit(mode: ReconMode, rng: &mut Mulberry32) -> usize {
    match mode {
        ReconMode::Confirmed => 0,
        ReconMode::SelectiveEdit => 1,
        ReconMode::Integration => 2 + rng.below(3),
        ReconMode::NewEpisode => 7 + rng.below(4),
    }
}

/// Share of planted revisions whose detected mode matches the plant.
pub fn recon_accuracy(rng: &mut Mulberry32) -> Result<f64> {
    const MODES: [ReconMode; 4] =
        [ReconMode::Confirmed, ReconMode::SelectiveEdit, ReconMode::Integration, ReconMode::NewEpisode];
    let mut store = LayerStore::new(4);
    let mut recon = Reconsolidator::new(ReconConfig::default());
    let mut correct = 0usize;
    for t in 0..RECON_TRIALS {
        let words: Vec<String> = (0..RECON_BASE_WORDS).map(|k| word(1000 * t + k)).collect();
        let id = store.insert(MemoryItem::new(words.join(" "), LayerKind::Semantic, vec![1.0, 0.0, 0.0, 0.0]), 0.0)?;
        let planted = MODES[rng.below(MODES.len())];
        let k = planted_edit(planted, rng);
        let mut slots: Vec<usize> = (0..RECON_BASE_WORDS).collect();
        rng.shuffle(&mut slots);
        let mut edited = words.clone();
        for &s in slots.iter().take(k) {
            edited[s] = word(500_000 + 1000 * t + s);
        }
        let content = edited.join(" ");
        let incoming = Incoming { content: &content, contradicts: false, ne_level: 0.5, serotonin_level: 0.5 };
        let event = recon.apply_update(&mut store, id, incoming, |_| true, 0.0)?;
        correct += (event.mode == planted) as usize;
    }
    Ok(correct as f64 / RECON_TRIALS as f64)
}

const PRIORITY_ITEMS: usize = 50;
const PRIORITY_NOISE: f64 = 0.05;

/// Graded NDCG@10 of the priority ranking (from noisy observations) and of
/// newest-first order, with true priorities as gains.
pub fn priority_ndcg(rng: &mut Mulberry32) -> Result<(f64, f64)> {
    let truth: Vec<PriorityInput> = (0..PRIORITY_ITEMS)
        .map(|_| PriorityInput {
            saliency: rng.next_f64(),
            valence: rng.uniform(-1.0, 1.0),
            reward: rng.next_f64(),
            goal: rng.next_f64(),
        })
        .collect();
    let gains: Vec<f64> = truth.iter().map(|x| priority(x, None)).collect();
    let mut noise = |x: f64, lo: f64| (x + PRIORITY_NOISE * rng.normal()).clamp(lo, 1.0);
    let observed: Vec<f64> = truth
        .iter()
        .map(|x| {
            let seen = PriorityInput {
                saliency: noise(x.saliency, 0.0),
                valence: noise(x.valence, -1.0),
                reward: noise(x.reward, 0.0),
                goal: noise(x.goal, 0.0),
            };
            priority(&seen, None)
        })
        .collect();
    let mut by_priority: Vec<usize> = (0..PRIORITY_ITEMS).collect();
    by_priority.sort_by(|&a, &b| observed[b].total_cmp(&observed[a]).then(a.cmp(&b)));
    let chronological: Vec<usize> = (0..PRIORITY_ITEMS).rev().collect();
    let ranked = |order: &[usize]| order.iter().map(|&i| gains[i]).collect::<Vec<_>>();
    Ok((ndcg_graded(&ranked(&by_priority), &gains, 10)?, ndcg_graded(&ranked(&chronological), &gains, 10)?))
}

const PROTECTOR_TRIALS: usize = 1000;

/// Share of high-surprise updates (PE in [0.7, 1]) that the lock gate refuses.
pub fn protector_block_rate(rng: &mut Mulberry32) -> f64 {
    let mut blocked = 0usize;
    for _ in 0..PROTECTOR_TRIALS {
        let lock = lock_score(&LockInput {
            access_count: rng.below(11) as u32,
            confidence: rng.next_f64(),
            age_days: rng.uniform(0.0, 90.0),
            is_core: rng.chance(0.1),
        });
        let pe = rng.uniform(0.7, 1.0);
        blocked += !gate_update(pe, &lock) as usize;
    }
    blocked as f64 / PROTECTOR_TRIALS as f64
}

const BIAS_SCENARIOS: usize = 50;
const BIAS_EVENTS: usize = 100;
const BIAS_BASE_ACCEPT: f64 = 0.6;
const BIAS_PLANT: (f64, f64) = (0.25, 0.45);

/// Precision and recall of confirmation-bias alerts over scenarios where
/// half the agents accept supporting evidence more readily.
pub fn bias_detection(rng: &mut Mulberry32) -> (f64, f64) {
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for _ in 0..BIAS_SCENARIOS {
        let biased = rng.chance(0.5);
        let b = if biased { rng.uniform(BIAS_PLANT.0, BIAS_PLANT.1) } else { 0.0 };
        let mut ledger = BiasLedger::default();
        let mut alerted = false;
        for e in 0..BIAS_EVENTS {
            let now = e as f64 * 0.25 * SECS_PER_DAY;
            let supports = rng.chance(0.5);
            let p = if supports { BIAS_BASE_ACCEPT + b } else { BIAS_BASE_ACCEPT - b };
            let kind = if rng.chance(p) { OutcomeKind::EvidenceAccept } else { OutcomeKind::EvidenceReject };
            let alerts = ledger.record(kind, supports, now);
            alerted = e + 1 == BIAS_EVENTS && !alerts.is_empty();
        }
        match (biased, alerted) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fneg += 1,
            (false, false) => {}
        }
    }
    let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    (ratio(tp, tp + fp), ratio(tp, tp + fneg))
}

pub fn pma(spec: &ExperimentSpec) -> Result<Outcome> {
    let per = per_seed(&spec.seeds, |seed| {
        let mut rng = Mulberry32::new(seed);
        let (drift, corr) = neuro_stream(&mut rng.fork(1))?;
        let accuracy = recon_accuracy(&mut rng.fork(2))?;
        let (ndcg_p, ndcg_c) = priority_ndcg(&mut rng.fork(3))?;
        let block_rate = protector_block_rate(&mut rng.fork(4));
        let (precision, recall) = bias_detection(&mut rng.fork(5));
        Ok(metric_map([
            ("neuro_drift", drift),
            ("da_5ht_corr", corr),
            ("recon_accuracy", accuracy),
            ("priority_ndcg10", ndcg_p),
            ("chrono_ndcg10", ndcg_c),
            ("protector_block_rate", block_rate),
            ("bias_precision", precision),
            ("bias_recall", recall),
        ]))
    })?;
    Ok((vec![ResultBlock::from_seeds("pma", Vec::new(), per)?], Vec::new()))
}

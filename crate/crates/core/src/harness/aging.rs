//! The daily aging loop: ingest a fact corpus, then for each simulated day
//! decay, answer topic questions, review due cards, offer revisions and sleep.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coordinator::{Algorithm, Census, ContentKind, Draft, EngineConfig, MemoryCoordinator, Query, Revision};
use crate::error::Result;
use crate::harness::corpus::{drifted, gen_fact_corpus, rewrite, FactCorpus, FactCorpusConfig};
use crate::harness::metrics::metrics;
use crate::harness::spectral::{graph_fiedler, largest_component};
use crate::memory::{ItemId, SECS_PER_DAY};
use crate::rng::Mulberry32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgingConfig {
    pub facts: usize,
    pub queries: usize,
    pub days: u32,
    pub rate: f64,
    pub emotional_fraction: f64,
    /// Spread of facts around their topic centre and of queries around their source fact.
    pub fact_sigma: f64,
    pub query_sigma: f64,
    pub topic_size: usize,
    /// Daily chance that a topic of average popularity is asked about.
    pub query_rate: f64,
    /// Reviews per day as a fraction of the corpus.
    pub review_budget: f64,
    /// Weight of the prior associations between topic-mates.
    pub link_weight: f64,
    pub confirm_prob: f64,
    pub edit_prob: f64,
    /// Share of words an edit replaces, drawn uniformly from this range.
    pub edit_fraction: (f64, f64),
    /// Days (besides the last) at which P@5 is measured.
    pub eval_days: Vec<u32>,
    /// Night at which the Fiedler value is probed before and after replay.
    pub fiedler_night: Option<u32>,
}

impl AgingConfig {
    pub fn new(facts: usize, queries: usize, days: u32, rate: f64) -> Self {
        Self {
            facts,
            queries,
            days,
            rate,
            emotional_fraction: 0.2,
            fact_sigma: 0.4,
            query_sigma: 0.4,
            topic_size: 5,
            query_rate: 0.2684,
            review_budget: 0.07,
            link_weight: 0.3674,
            confirm_prob: 0.2613,
            edit_prob: 0.0897,
            edit_fraction: (0.2, 0.45),
            eval_days: Vec::new(),
            fiedler_night: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DayStat {
    pub day: u32,
    pub retention: f64,
    pub emotional: f64,
    pub neutral: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgingOutcome {
    pub retention: f64,
    pub p_at_5: f64,
    pub q: f64,
    pub trajectory: Vec<DayStat>,
    pub p5_at: Vec<(u32, f64)>,
    pub fiedler: Option<(f64, f64)>,
    pub census: Census,
}

/// Mean P@5 of the corpus queries against the engine's current state.
pub fn evaluate_p5(engine: &mut MemoryCoordinator, corpus: &FactCorpus, fact_of: &BTreeMap<ItemId, usize>) -> Result<f64> {
    let mut total = 0.0;
    for q in &corpus.queries {
        let hits = engine.recall(&Query::new(q.text.clone(), q.embedding.clone()).top(5))?;
        let ranked: Vec<usize> = hits.iter().map(|h| fact_of.get(&h.id).copied().unwrap_or(usize::MAX)).collect();
        total += metrics(&ranked, &q.gold, 5)?.precision;
    }
    Ok(if corpus.queries.is_empty() { 0.0 } else { total / corpus.queries.len() as f64 })
}

fn survival(engine: &MemoryCoordinator, ids: &[ItemId], corpus: &FactCorpus, day: u32) -> DayStat {
    let (mut alive, mut emo, mut emo_n, mut neu, mut neu_n) = (0usize, 0usize, 0usize, 0usize, 0usize);
    for (i, id) in ids.iter().enumerate() {
        let live = engine.store_ref().is_live(*id);
        alive += live as usize;
        if corpus.facts[i].is_emotional() {
            emo_n += 1;
            emo += live as usize;
        } else {
            neu_n += 1;
            neu += live as usize;
        }
    }
    let frac = |a: usize, n: usize| if n == 0 { 0.0 } else { a as f64 / n as f64 };
    DayStat { day, retention: frac(alive, ids.len()), emotional: frac(emo, emo_n), neutral: frac(neu, neu_n) }
}

pub fn ingest(engine: &mut MemoryCoordinator, corpus: &FactCorpus, link_weight: f64) -> Result<Vec<ItemId>> {
    let mut ids = Vec::with_capacity(corpus.facts.len());
    for fact in &corpus.facts {
        let mut draft = Draft::new(fact.content.clone(), ContentKind::Fact, fact.embedding.clone()).valence(fact.valence);
        draft.importance = fact.importance;
        ids.push(engine.store(draft)?);
    }
    for topic in 0..corpus.topics() {
        let members: Vec<usize> = corpus.topic_members(topic).collect();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                engine.link(ids[i], ids[j], link_weight)?;
            }
        }
    }
    Ok(ids)
}

pub fn run_aging(cfg: &AgingConfig, engine_cfg: EngineConfig, seed: u32) -> Result<AgingOutcome> {
    let mut corpus_rng = Mulberry32::new(seed);
    let mut fc = FactCorpusConfig::new(cfg.facts, cfg.queries);
    fc.emotional_fraction = cfg.emotional_fraction;
    fc.fact_sigma = cfg.fact_sigma;
    fc.query_sigma = cfg.query_sigma;
    fc.topic_size = cfg.topic_size;
    fc.dim = engine_cfg.dim;
    let corpus = gen_fact_corpus(fc, &mut corpus_rng)?;
    let popularity: Vec<f64> = (0..corpus.topics()).map(|_| corpus_rng.uniform(0.5, 1.5)).collect();

    let mut day_rng = corpus_rng.fork(1);
    let mut ctx_rng = corpus_rng.fork(2);
    let mut sleep_rng = corpus_rng.fork(3);

    let mut engine_cfg = engine_cfg;
    engine_cfg.decay_rate = cfg.rate;
    let mut engine = MemoryCoordinator::new(engine_cfg);
    let ids = ingest(&mut engine, &corpus, cfg.link_weight)?;
    let fact_of: BTreeMap<ItemId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let budget = ((cfg.review_budget * cfg.facts as f64).round() as usize).max(1);
    let recon_on = engine.on(Algorithm::Reconsolidation);
    let topic_size = corpus.config.topic_size;
    let eval_days: BTreeSet<u32> = cfg.eval_days.iter().copied().collect();

    let mut trajectory = Vec::with_capacity(cfg.days as usize);
    let mut p5_at = Vec::new();
    let mut fiedler = None;
    let mut contexts = |_: ItemId, emb: &[f64]| {
        let pe = ctx_rng.next_f64();
        drifted(emb, pe, &mut ctx_rng)
    };

    for day in 1..=cfg.days {
        engine.advance(SECS_PER_DAY)?;
        engine.age(1.0);

        for (topic, pop) in popularity.iter().enumerate() {
            if !day_rng.chance(cfg.query_rate * pop) {
                continue;
            }
            let (text, emb) = corpus.probe(topic, &mut day_rng);
            let hits: Vec<ItemId> = engine.recall(&Query::new(text, emb).top(topic_size))?.iter().map(|h| h.id).collect();
            engine.reinforce(&hits)?;
            if !recon_on {
                continue;
            }
            for id in hits {
                let u = day_rng.next_f64();
                let Some(item) = engine.item(id) else { continue };
                let content = if u < cfg.confirm_prob {
                    item.content.clone()
                } else if u < cfg.confirm_prob + cfg.edit_prob {
                    let f = day_rng.uniform(cfg.edit_fraction.0, cfg.edit_fraction.1);
                    rewrite(&item.content, f, &mut day_rng)
                } else {
                    continue;
                };
                engine.revise(id, &Revision { content, contradicts: false })?;
            }
        }

        engine.review_pass(budget, &mut contexts)?;

        if cfg.fiedler_night == Some(day) {
            let before = engine.kg().clone();
            engine.sleep(&mut contexts, &mut sleep_rng);
            let nodes = largest_component(engine.kg());
            if nodes.len() >= 2 {
                fiedler = Some((graph_fiedler(&before, &nodes)?, graph_fiedler(engine.kg(), &nodes)?));
            }
        } else {
            engine.sleep(&mut contexts, &mut sleep_rng);
        }
        engine.forget_weak();

        trajectory.push(survival(&engine, &ids, &corpus, day));
        if eval_days.contains(&day) && day != cfg.days {
            p5_at.push((day, evaluate_p5(&mut engine, &corpus, &fact_of)?));
        }
    }

    let p_at_5 = evaluate_p5(&mut engine, &corpus, &fact_of)?;
    p5_at.push((cfg.days, p_at_5));
    let retention = trajectory.last().map_or(1.0, |d| d.retention);
    Ok(AgingOutcome { retention, p_at_5, q: retention * p_at_5, trajectory, p5_at, fiedler, census: engine.census() })
}

//! Seeded synthetic corpora: clustered entities, topic-structured facts with
//! planted gold sets, and drifted contexts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{MemError, Result};
use crate::priority::PriorityInput;
use crate::rng::Mulberry32;
use crate::text::{dot, normalize};

/// Within-cluster noise for the 50-entity benchmark, calibrated so that
/// cosine ranking with uniform edges lands at P@5 = 0.200.
pub const ENTITY_SIGMA: f64 = 7.6;

const CONSONANTS: &[u8] = b"bcdfghklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

/// The i-th word of an unbounded synthetic vocabulary ("ba", "be", ... "babe", ...).
pub fn word(mut i: usize) -> String {
    let base = CONSONANTS.len() * VOWELS.len();
    let mut out = String::new();
    loop {
        let syl = i % base;
        out.push(CONSONANTS[syl / VOWELS.len()] as char);
        out.push(VOWELS[syl % VOWELS.len()] as char);
        i /= base;
        if i == 0 {
            break;
        }
        i -= 1;
    }
    out
}

pub fn unit_gaussian(dim: usize, rng: &mut Mulberry32) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
    normalize(&mut v);
    v
}

/// `center + sigma * noise` with noise of expected norm 1, renormalised.
pub fn jitter(center: &[f64], sigma: f64, rng: &mut Mulberry32) -> Vec<f64> {
    let scale = sigma / (center.len() as f64).sqrt();
    let mut v: Vec<f64> = center.iter().map(|c| c + scale * rng.normal()).collect();
    normalize(&mut v);
    v
}

/// A unit vector whose cosine with `anchor` is exactly `1 - pe`.
pub fn drifted(anchor: &[f64], pe: f64, rng: &mut Mulberry32) -> Vec<f64> {
    let mut a = anchor.to_vec();
    normalize(&mut a);
    let mut u: Vec<f64> = (0..a.len()).map(|_| rng.normal()).collect();
    let along = dot(&u, &a);
    for (ui, ai) in u.iter_mut().zip(&a) {
        *ui -= along * ai;
    }
    normalize(&mut u);
    let c = (1.0 - pe).clamp(-1.0, 1.0);
    let s = (1.0 - c * c).sqrt();
    a.iter().zip(&u).map(|(ai, ui)| c * ai + s * ui).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntityCorpus {
    pub embeddings: Vec<Vec<f64>>,
    pub cluster: Vec<usize>,
}

impl EntityCorpus {
    /// Cluster-mates of entity `i`, excluding itself.
    pub fn mates(&self, i: usize) -> BTreeSet<usize> {
        (0..self.cluster.len()).filter(|&j| j != i && self.cluster[j] == self.cluster[i]).collect()
    }
}

/// `n` entities assigned round-robin to `clusters` Gaussian clusters on the unit sphere.
pub fn gen_entities(n: usize, clusters: usize, dim: usize, sigma: f64, rng: &mut Mulberry32) -> Result<EntityCorpus> {
    if n == 0 || clusters == 0 || dim == 0 {
        return Err(MemError::InvalidArgument("entity corpus needs n, clusters and dim > 0".into()));
    }
    let centers: Vec<Vec<f64>> = (0..clusters).map(|_| unit_gaussian(dim, rng)).collect();
    let cluster: Vec<usize> = (0..n).map(|i| i % clusters).collect();
    let embeddings = cluster.iter().map(|&c| jitter(&centers[c], sigma, rng)).collect();
    Ok(EntityCorpus { embeddings, cluster })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactCorpusConfig {
    pub n: usize,
    pub queries: usize,
    pub dim: usize,
    pub topic_size: usize,
    pub emotional_fraction: f64,
    pub fact_sigma: f64,
    pub query_sigma: f64,
    pub words_per_fact: usize,
}

impl FactCorpusConfig {
    pub fn new(n: usize, queries: usize) -> Self {
        Self {
            n,
            queries,
            dim: 32,
            topic_size: 5,
            emotional_fraction: 0.2,
            fact_sigma: 0.5,
            query_sigma: 0.5,
            words_per_fact: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fact {
    pub content: String,
    pub embedding: Vec<f64>,
    pub topic: usize,
    pub valence: f64,
    pub importance: PriorityInput,
}

impl Fact {
    pub fn is_emotional(&self) -> bool {
        self.valence.abs() > 0.6
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldQuery {
    pub text: String,
    pub embedding: Vec<f64>,
    pub source: usize,
    pub gold: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactCorpus {
    pub config: FactCorpusConfig,
    pub centers: Vec<Vec<f64>>,
    pub facts: Vec<Fact>,
    pub queries: Vec<GoldQuery>,
}

impl FactCorpus {
    pub fn topics(&self) -> usize {
        self.centers.len()
    }

    pub fn topic_members(&self, topic: usize) -> impl Iterator<Item = usize> + '_ {
        self.facts.iter().enumerate().filter(move |(_, f)| f.topic == topic).map(|(i, _)| i)
    }

    /// A fresh question about `topic`.
    pub fn probe(&self, topic: usize, rng: &mut Mulberry32) -> (String, Vec<f64>) {
        let anchor = self.topic_members(topic).next().map_or_else(String::new, |i| {
            self.facts[i].content.split_whitespace().take(2).collect::<Vec<_>>().join(" ")
        });
        (format!("what is {anchor}"), jitter(&self.centers[topic], self.config.query_sigma, rng))
    }
}

/// Facts grouped into topics of `topic_size`; each query's gold set is its
/// source fact plus that fact's topic-mates.
pub fn gen_fact_corpus(cfg: FactCorpusConfig, rng: &mut Mulberry32) -> Result<FactCorpus> {
    if cfg.n == 0 || cfg.dim == 0 || cfg.topic_size == 0 {
        return Err(MemError::InvalidArgument("fact corpus needs n, dim and topic_size > 0".into()));
    }
    let topics = cfg.n.div_ceil(cfg.topic_size);
    let centers: Vec<Vec<f64>> = (0..topics).map(|_| unit_gaussian(cfg.dim, rng)).collect();
    let mut facts = Vec::with_capacity(cfg.n);
    for i in 0..cfg.n {
        let topic = i / cfg.topic_size;
        let embedding = jitter(&centers[topic], cfg.fact_sigma, rng);
        let emotional = rng.chance(cfg.emotional_fraction);
        let magnitude = if emotional { rng.uniform(0.6, 1.0) } else { rng.uniform(0.0, 0.3) };
        let valence = if rng.chance(0.5) { magnitude } else { -magnitude };
        let importance = PriorityInput {
            saliency: rng.uniform(0.55, 1.0),
            valence,
            reward: rng.uniform(0.55, 1.0),
            goal: rng.uniform(0.55, 1.0),
        };
        // Two topic words shared by topic-mates, then fact-specific words.
        let mut words = vec![word(2 * topic), word(2 * topic + 1)];
        words.extend((2..cfg.words_per_fact).map(|_| word(2 * topics + rng.below(4000))));
        facts.push(Fact { content: words.join(" "), embedding, topic, valence, importance });
    }
    let queries = (0..cfg.queries)
        .map(|_| {
            let source = rng.below(cfg.n);
            let fact = &facts[source];
            let gold: BTreeSet<usize> = (0..cfg.n).filter(|&j| facts[j].topic == fact.topic).collect();
            let text = format!("what is {}", fact.content.split_whitespace().take(3).collect::<Vec<_>>().join(" "));
            GoldQuery { text, embedding: jitter(&fact.embedding, cfg.query_sigma, rng), source, gold }
        })
        .collect();
    Ok(FactCorpus { config: cfg, centers, facts, queries })
}

/// Replaces a `fraction` of the words in `content` with fresh vocabulary.
pub fn rewrite(content: &str, fraction: f64, rng: &mut Mulberry32) -> String {
    let mut words: Vec<String> = content.split_whitespace().map(str::to_string).collect();
    let k = ((words.len() as f64) * fraction).round() as usize;
    let mut slots: Vec<usize> = (0..words.len()).collect();
    rng.shuffle(&mut slots);
    for &s in slots.iter().take(k) {
        words[s] = word(100_000 + rng.below(100_000));
    }
    words.join(" ")
}

//! Seeded experiment harness: corpora, metrics, statistics and the drivers
//! behind every reported table.

pub mod aging;
pub mod bench;
pub mod canonical;
pub mod corpus;
pub mod metrics;
pub mod spectral;
pub mod stats;
pub mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MemError, Result};
pub use crate::rng::Mulberry32 as SeededRng;
use canonical::Real;

pub const REFERENCE_SEEDS: [u32; 10] = [42, 123, 456, 789, 1024, 2048, 3072, 4096, 5120, 6144];
pub const BOOTSTRAP_SEED: u32 = 20260421;
pub const BOOTSTRAP_RESAMPLES: usize = 1000;
pub const THREADS_ENV: &str = "MEMCORTEX_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Retention,
    Sleep,
    HebbianKg,
    Bayes,
    Ablation,
    Cascade,
    LongHorizon,
    Pma,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Retention,
        ExperimentKind::Sleep,
        ExperimentKind::HebbianKg,
        ExperimentKind::Bayes,
        ExperimentKind::Ablation,
        ExperimentKind::Cascade,
        ExperimentKind::LongHorizon,
        ExperimentKind::Pma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Retention => "retention",
            ExperimentKind::Sleep => "sleep",
            ExperimentKind::HebbianKg => "hebbian_kg",
            ExperimentKind::Bayes => "bayes",
            ExperimentKind::Ablation => "ablation",
            ExperimentKind::Cascade => "cascade",
            ExperimentKind::LongHorizon => "long_horizon",
            ExperimentKind::Pma => "pma",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = MemError;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == wanted)
            .ok_or_else(|| MemError::InvalidArgument(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Moderate,
    Challenging,
    Stress,
    Cascade,
    LongHorizon,
}

/// Corpus size, query count, horizon and daily decay rate of one condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionParams {
    pub facts: usize,
    pub queries: usize,
    pub days: u32,
    pub rate: f64,
}

impl Condition {
    pub const ALL: [Condition; 5] =
        [Condition::Moderate, Condition::Challenging, Condition::Stress, Condition::Cascade, Condition::LongHorizon];

    pub fn name(self) -> &'static str {
        match self {
            Condition::Moderate => "moderate",
            Condition::Challenging => "challenging",
            Condition::Stress => "stress",
            Condition::Cascade => "cascade",
            Condition::LongHorizon => "long_horizon",
        }
    }

    pub fn params(self) -> ConditionParams {
        let (facts, queries, days, rate) = match self {
            Condition::Moderate => (300, 100, 45, 0.15),
            Condition::Challenging => (400, 100, 50, 0.20),
            Condition::Stress => (500, 100, 60, 0.25),
            Condition::Cascade => (300, 100, 60, 0.30),
            Condition::LongHorizon => (100, 50, 60, 0.15),
        };
        ConditionParams { facts, queries, days, rate }
    }
}

impl FromStr for Condition {
    type Err = MemError;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|c| c.name() == wanted)
            .ok_or_else(|| MemError::InvalidArgument(format!("unknown condition '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub condition: Option<Condition>,
    pub seeds: Vec<u32>,
    /// Flags disabled in every block on top of the block's own ablation.
    pub disabled: Vec<String>,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind) -> Self {
        Self { kind, condition: None, seeds: REFERENCE_SEEDS.to_vec(), disabled: Vec::new() }
    }

    pub fn seeds(mut self, seeds: &[u32]) -> Self {
        self.seeds = seeds.to_vec();
        self
    }

    pub fn condition(mut self, c: Condition) -> Self {
        self.condition = Some(c);
        self
    }

    pub fn disable<S: AsRef<str>>(mut self, flags: &[S]) -> Self {
        self.disabled = flags.iter().map(|f| f.as_ref().to_string()).collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(MemError::InvalidArgument("at least one seed is required".into()));
        }
        crate::coordinator::Flags::parse(&self.disabled)?;
        Ok(())
    }

    /// The condition this run uses, defaulting per experiment kind.
    pub fn resolved_condition(&self) -> Condition {
        self.condition.unwrap_or(match self.kind {
            ExperimentKind::Cascade => Condition::Cascade,
            ExperimentKind::LongHorizon => Condition::LongHorizon,
            _ => Condition::Moderate,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: Real,
    pub sd: Real,
    pub ci95: [Real; 2],
}

impl Aggregate {
    pub fn of(samples: &[f64]) -> Result<Self> {
        let finite = samples.iter().all(|x| x.is_finite());
        let mean = stats::mean(samples);
        let (lo, hi) = if finite {
            stats::bootstrap_ci(samples, BOOTSTRAP_RESAMPLES, &mut SeededRng::new(BOOTSTRAP_SEED))?
        } else {
            (mean, mean)
        };
        Ok(Self { mean: Real(mean), sd: Real(stats::sd(samples)), ci95: [Real(lo), Real(hi)] })
    }
}

pub type SeedMetrics = BTreeMap<String, Real>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultBlock {
    pub label: String,
    pub disabled: Vec<String>,
    pub modeled: bool,
    pub per_seed: Vec<SeedMetrics>,
    pub aggregate: BTreeMap<String, Aggregate>,
    pub stats: BTreeMap<String, Real>,
}

impl ResultBlock {
    pub fn from_seeds(label: &str, disabled: Vec<String>, per_seed: Vec<SeedMetrics>) -> Result<Self> {
        let mut aggregate = BTreeMap::new();
        if let Some(first) = per_seed.first() {
            for key in first.keys() {
                let xs: Vec<f64> = per_seed.iter().map(|m| m.get(key).map_or(f64::NAN, |r| r.0)).collect();
                aggregate.insert(key.clone(), Aggregate::of(&xs)?);
            }
        }
        Ok(Self { label: label.to_string(), disabled, modeled: true, per_seed, aggregate, stats: BTreeMap::new() })
    }

    /// Placeholder for a switch whose behaviour is a documented no-op.
    pub fn not_modeled(label: &str, disabled: Vec<String>) -> Self {
        Self {
            label: label.to_string(),
            disabled,
            modeled: false,
            per_seed: Vec::new(),
            aggregate: BTreeMap::new(),
            stats: BTreeMap::new(),
        }
    }

    pub fn metric(&self, key: &str) -> Vec<f64> {
        self.per_seed.iter().map(|m| m.get(key).map_or(f64::NAN, |r| r.0)).collect()
    }

    pub fn mean(&self, key: &str) -> f64 {
        self.aggregate.get(key).map_or(f64::NAN, |a| a.mean.0)
    }

    pub fn stat(&self, key: &str) -> f64 {
        self.stats.get(key).map_or(f64::NAN, |r| r.0)
    }

    /// Paired comparison of `key` against a reference block: relative change
    /// of the means, Wilcoxon p and Cohen's d.
    pub fn compare(&mut self, key: &str, reference: &ResultBlock) {
        let (mine, theirs) = (self.metric(key), reference.metric(key));
        let (m, r) = (stats::mean(&mine), stats::mean(&theirs));
        let delta = if r == 0.0 { 0.0 } else { (m - r) / r };
        self.stats.insert(format!("delta_{key}"), Real(delta));
        let p = stats::wilcoxon_signed_rank(&mine, &theirs).unwrap_or(f64::NAN);
        self.stats.insert("wilcoxon_p".into(), Real(p));
        let d = stats::cohens_d(&mine, &theirs).unwrap_or(f64::NAN);
        self.stats.insert("cohens_d".into(), Real(d));
    }
}

/// A plottable (time, value) series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub time_hours: Vec<Real>,
    pub values: Vec<Real>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub kind: ExperimentKind,
    pub condition: Condition,
    pub params: ConditionParams,
    pub seeds: Vec<u32>,
    pub disabled: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub config: RunConfig,
    pub blocks: Vec<ResultBlock>,
    pub series: Vec<Series>,
}

impl ExperimentResult {
    pub fn block(&self, label: &str) -> Option<&ResultBlock> {
        self.blocks.iter().find(|b| b.label == label)
    }

    pub fn to_canonical_json(&self) -> Result<String> {
        canonical::to_canonical(self)
    }
}

/// Worker count from `MEMCORTEX_THREADS`, or rayon's default.
pub fn worker_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|n: &usize| *n > 0)
}

/// Runs `f` for every seed on the worker pool; results keep seed order.
pub fn per_seed<T, F>(seeds: &[u32], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u32) -> Result<T> + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_threads() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| MemError::InvalidArgument(e.to_string()))?;
    pool.install(|| seeds.par_iter().map(|&s| f(s)).collect())
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let condition = spec.resolved_condition();
    let blocks_and_series = match spec.kind {
        ExperimentKind::Retention => bench::retention(spec)?,
        ExperimentKind::Sleep => bench::sleep_impact(spec)?,
        ExperimentKind::HebbianKg => bench::hebbian_kg(spec)?,
        ExperimentKind::Bayes => bench::bayes_propagation(spec)?,
        ExperimentKind::Pma => bench::pma(spec)?,
        ExperimentKind::Ablation => suites::ablation(spec, condition)?,
        ExperimentKind::Cascade => suites::cascade(spec, condition)?,
        ExperimentKind::LongHorizon => suites::long_horizon(spec, condition)?,
    };
    let (blocks, series) = blocks_and_series;
    Ok(ExperimentResult {
        experiment: spec.kind.name().to_string(),
        config: RunConfig {
            kind: spec.kind,
            condition,
            params: condition.params(),
            seeds: spec.seeds.clone(),
            disabled: spec.disabled.clone(),
        },
        blocks,
        series,
    })
}

pub(crate) fn metric_map<const N: usize>(pairs: [(&str, f64); N]) -> SeedMetrics {
    pairs.into_iter().map(|(k, v)| (k.to_string(), Real(v))).collect()
}

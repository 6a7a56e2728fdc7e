//! Aging-loop suites: ablation gradient, integration cascade and long-horizon archetypes.

use crate::coordinator::{Algorithm, EngineConfig, Flags};
use crate::error::Result;
use crate::harness::aging::{run_aging, AgingConfig, AgingOutcome};
use crate::harness::canonical::Real;
use crate::harness::{metric_map, per_seed, stats, Condition, ExperimentSpec, ResultBlock, Series};

pub const EMBED_DIM: usize = 32;

fn flag_names(base: &[String], extra: &[Algorithm]) -> Vec<String> {
    let mut names: Vec<String> = base.to_vec();
    names.extend(extra.iter().map(|a| a.name().to_string()));
    names.sort();
    names.dedup();
    names
}

fn engine_for(disabled: &[String]) -> Result<EngineConfig> {
    Ok(EngineConfig::new(EMBED_DIM).with_flags(Flags::parse(disabled)?))
}

pub fn aging_config(condition: Condition) -> AgingConfig {
    let p = condition.params();
    let mut cfg = AgingConfig::new(p.facts, p.queries, p.days, p.rate);
    if condition == Condition::LongHorizon {
        cfg.emotional_fraction = 0.0;
    }
    cfg
}

fn run_block(
    label: &str,
    disabled: Vec<String>,
    cfg: &AgingConfig,
    seeds: &[u32],
    tune: impl Fn(&mut EngineConfig) + Sync + Send,
) -> Result<(ResultBlock, Vec<AgingOutcome>)> {
    let mut engine = engine_for(&disabled)?;
    tune(&mut engine);
    let outcomes = per_seed(seeds, |seed| run_aging(cfg, engine.clone(), seed))?;
    let per = outcomes
        .iter()
        .map(|o| metric_map([("retention", o.retention), ("p_at_5", o.p_at_5), ("q", o.q)]))
        .collect();
    Ok((ResultBlock::from_seeds(label, disabled, per)?, outcomes))
}

fn no_tuning(_: &mut EngineConfig) {}

/// One block per removed algorithm, plus full, foundational-only and bare.
pub fn ablation(spec: &ExperimentSpec, condition: Condition) -> Result<(Vec<ResultBlock>, Vec<Series>)> {
    let cfg = aging_config(condition);
    let base = &spec.disabled;
    let (full, _) = run_block("full", flag_names(base, &[]), &cfg, &spec.seeds, no_tuning)?;
    let mut blocks = vec![full.clone()];
    for alg in Algorithm::ALL {
        let label = format!("-{}", alg.name());
        let disabled = flag_names(base, &[alg]);
        if !alg.is_modeled() {
            blocks.push(ResultBlock::not_modeled(&label, disabled));
            continue;
        }
        let (mut block, _) = run_block(&label, disabled, &cfg, &spec.seeds, no_tuning)?;
        block.compare("q", &full);
        blocks.push(block);
    }
    for (label, extra) in [("foundational_only", Algorithm::LIFECYCLE.to_vec()), ("bare", Algorithm::ALL.to_vec())] {
        let (mut block, _) = run_block(label, flag_names(base, &extra), &cfg, &spec.seeds, no_tuning)?;
        block.compare("q", &full);
        blocks.push(block);
    }
    Ok((blocks, Vec::new()))
}

fn daily_series(name: String, outcomes: &[AgingOutcome], pick: impl Fn(&crate::harness::aging::DayStat) -> f64) -> Series {
    let days = outcomes.first().map_or(0, |o| o.trajectory.len());
    let time_hours = (1..=days).map(|d| Real(24.0 * d as f64)).collect();
    let values = (0..days)
        .map(|i| Real(stats::mean(&outcomes.iter().map(|o| pick(&o.trajectory[i])).collect::<Vec<_>>())))
        .collect();
    Series { name, time_hours, values }
}

/// Full, foundational-only and bare engines aged at a steep rate; records
/// survival trajectories, the emotional-neutral gap and the Fiedler value
/// around the first night.
pub fn cascade(spec: &ExperimentSpec, condition: Condition) -> Result<(Vec<ResultBlock>, Vec<Series>)> {
    let mut cfg = aging_config(condition);
    cfg.fiedler_night = Some(1);
    let base = &spec.disabled;
    let mut blocks = Vec::new();
    let mut series = Vec::new();
    let arms: [(&str, Vec<Algorithm>); 3] =
        [("full", vec![]), ("foundational_only", Algorithm::LIFECYCLE.to_vec()), ("bare", Algorithm::ALL.to_vec())];
    for (label, extra) in arms {
        let disabled = flag_names(base, &extra);
        let engine = engine_for(&disabled)?;
        let outcomes = per_seed(&spec.seeds, |seed| run_aging(&cfg, engine.clone(), seed))?;
        let per = outcomes
            .iter()
            .map(|o| {
                let at = |day: usize| o.trajectory.get(day - 1).map_or(f64::NAN, |d| d.retention);
                let gaps: Vec<f64> = o.trajectory.iter().map(|d| d.emotional - d.neutral).collect();
                let (f_before, f_after) = o.fiedler.unwrap_or((f64::NAN, f64::NAN));
                metric_map([
                    ("retention", o.retention),
                    ("p_at_5", o.p_at_5),
                    ("q", o.q),
                    ("retention_day30", at(30)),
                    ("gap_first", gaps.first().copied().unwrap_or(f64::NAN)),
                    ("gap_last", gaps.last().copied().unwrap_or(f64::NAN)),
                    ("fiedler_before", f_before),
                    ("fiedler_after", f_after),
                ])
            })
            .collect();
        let mut block = ResultBlock::from_seeds(label, disabled, per)?;
        series.push(daily_series(format!("{label}:retention"), &outcomes, |d| d.retention));
        series.push(daily_series(format!("{label}:emotional_gap"), &outcomes, |d| d.emotional - d.neutral));
        if let Some(full) = blocks.first() {
            block.compare("retention", full);
        }
        blocks.push(block);
    }
    let full_mean = blocks[0].mean("retention");
    let bare_mean = blocks[2].mean("retention");
    let ratio = if bare_mean == 0.0 { f64::INFINITY } else { full_mean / bare_mean };
    blocks[0].stats.insert("full_over_bare".into(), Real(ratio));
    Ok((blocks, series))
}

pub const LONG_HORIZON_DAYS: [u32; 6] = [1, 7, 14, 30, 45, 60];

/// Simple-Memory (bare engine), Static-RAG (no decay) and the full engine
/// under a shared decay rate, with P@5 tracked over time.
pub fn long_horizon(spec: &ExperimentSpec, condition: Condition) -> Result<(Vec<ResultBlock>, Vec<Series>)> {
    let mut cfg = aging_config(condition);
    cfg.eval_days = LONG_HORIZON_DAYS.iter().copied().filter(|d| *d <= cfg.days).collect();
    let base = &spec.disabled;
    let mut blocks = Vec::new();
    let mut series = Vec::new();
    let arms: [(&str, Vec<Algorithm>, bool); 3] = [
        ("simple_memory", Algorithm::ALL.to_vec(), false),
        ("static_rag", Algorithm::ALL.to_vec(), true),
        ("full", vec![], false),
    ];
    for (label, extra, frozen) in arms {
        let disabled = flag_names(base, &extra);
        let mut engine = engine_for(&disabled)?;
        if frozen {
            engine.decay.forget_threshold = 0.0;
        }
        let mut arm_cfg = cfg.clone();
        if frozen {
            arm_cfg.rate = 0.0;
        }
        let outcomes = per_seed(&spec.seeds, |seed| run_aging(&arm_cfg, engine.clone(), seed))?;
        let per = outcomes
            .iter()
            .map(|o| {
                let mut m = metric_map([("retention", o.retention), ("p_at_5", o.p_at_5), ("q", o.q)]);
                for (day, p) in &o.p5_at {
                    m.insert(format!("p5_day{day:02}"), Real(*p));
                }
                m
            })
            .collect();
        let block = ResultBlock::from_seeds(label, disabled, per)?;
        let days: Vec<u32> = outcomes.first().map_or_else(Vec::new, |o| o.p5_at.iter().map(|(d, _)| *d).collect());
        series.push(Series {
            name: format!("{label}:p_at_5"),
            time_hours: days.iter().map(|d| Real(24.0 * *d as f64)).collect(),
            values: days.iter().map(|d| Real(block.mean(&format!("p5_day{d:02}")))).collect(),
        });
        blocks.push(block);
    }
    Ok((blocks, series))
}

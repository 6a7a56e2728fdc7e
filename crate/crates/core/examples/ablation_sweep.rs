//! Runs an experiment from the harness and prints per-block summaries.
//! Pass an experiment name (default `hebbian_kg`) and optionally a seed count.

use memcortex::harness::{run_experiment, ExperimentKind, ExperimentSpec, REFERENCE_SEEDS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "hebbian_kg".into());
    let kind = ExperimentKind::ALL.into_iter().find(|k| k.name() == name).ok_or(format!("unknown experiment {name}"))?;
    let seeds: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(REFERENCE_SEEDS.len());
    let result = run_experiment(&ExperimentSpec::new(kind).seeds(&REFERENCE_SEEDS[..seeds.clamp(1, REFERENCE_SEEDS.len())]))?;
    for block in &result.blocks {
        let metrics: Vec<String> = block.aggregate.iter().map(|(k, a)| format!("{k}={:.4}", a.mean.0)).collect();
        let stats: Vec<String> = block.stats.iter().map(|(k, v)| format!("{k}={:.4}", v.0)).collect();
        println!("{:<22} {} {}", block.label, metrics.join(" "), stats.join(" "));
    }
    Ok(())
}

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use memcortex::decay::{retrievability, CopyKind, CopySet};
use memcortex::harness::stats::{bootstrap_ci, wilcoxon_signed_rank};
use memcortex::harness::{run_experiment, Condition, ExperimentKind, ExperimentResult, ExperimentSpec, ResultBlock};
use memcortex::memory::{SECS_PER_DAY, SECS_PER_HOUR};
use memcortex::rng::Mulberry32;

struct Verdict {
    checks: Vec<(String, bool)>,
}

impl Verdict {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(w, _)| w.as_str()).collect()
    }
}

type Criterion = fn(&mut Verdict);

fn run(kind: ExperimentKind, condition: Option<Condition>) -> ExperimentResult {
    let mut spec = ExperimentSpec::new(kind);
    if let Some(c) = condition {
        spec = spec.condition(c);
    }
    run_experiment(&spec).unwrap_or_else(|e| panic!("{} failed: {e}", kind.name()))
}

fn block<'a>(r: &'a ExperimentResult, label: &str) -> &'a ResultBlock {
    r.block(label).unwrap_or_else(|| panic!("{} has no block {label}", r.experiment))
}

fn ebbinghaus_exactness(v: &mut Verdict) {
    let expected = [(1.0, 0.9592), (6.0, 0.7788), (24.0, 0.3679), (72.0, 0.0498), (168.0, 0.0009)];
    for (hours, want) in expected {
        let got = retrievability(1.0, hours / 24.0);
        v.check(format!("R({hours}h)={got:.6} vs {want}"), (got - want).abs() <= 1e-4);
    }
    let r = run(ExperimentKind::Retention, None);
    let curve = block(&r, "ebbinghaus");
    for (hours, want) in expected {
        let got = curve.mean(&format!("r_{:03}h", hours as u32));
        v.check(format!("harness R({hours}h)={got:.6}"), (got - want).abs() <= 1e-4);
    }
}

fn triple_copy_shape(v: &mut Verdict) {
    let set = CopySet::new(1.0, 0.0);
    let at = |secs: f64| set.strength(secs);
    let (_, h1) = at(SECS_PER_HOUR);
    let (_, d1) = at(SECS_PER_DAY);
    let (_, d7) = at(7.0 * SECS_PER_DAY);
    let (composite, d30) = at(30.0 * SECS_PER_DAY);
    v.check(format!("1h dominant {h1:?}"), matches!(h1, CopyKind::Fast | CopyKind::Medium));
    v.check(format!("1d dominant {d1:?}"), d1 == CopyKind::Medium);
    v.check(format!("7d dominant {d7:?}"), matches!(d7, CopyKind::Medium | CopyKind::Deep));
    v.check(format!("30d dominant {d30:?}"), d30 == CopyKind::Deep);
    v.check(format!("composite(30d)={composite:.3} >= 0.8"), (0.8..=1.0).contains(&composite));
}

fn two_factor_kg(v: &mut Verdict) {
    let r = run(ExperimentKind::HebbianKg, None);
    let uniform = block(&r, "uniform").mean("p_at_5");
    let weighted = block(&r, "weighted");
    let p5 = weighted.mean("p_at_5");
    let ratio = weighted.mean("intra_inter_ratio");
    let p = weighted.stat("wilcoxon_p");
    v.check(format!("uniform P@5={uniform:.4} in 0.200±0.01"), (uniform - 0.2).abs() <= 0.01);
    v.check(format!("weighted P@5={p5:.4} >= 0.85"), p5 >= 0.85);
    v.check(format!("intra/inter={ratio:.2} >= 10"), ratio >= 10.0);
    v.check(format!("wilcoxon p={p:.3e} <= 5.1e-3"), p <= 5.1e-3);
}

fn bayesian_propagation(v: &mut Verdict) {
    let r = run(ExperimentKind::Bayes, None);
    let b = block(&r, "propagation");
    let (lift, t, f) = (b.mean("auc_lift"), b.mean("true_delta"), b.mean("false_delta"));
    v.check(format!("AUC lift={lift:.3} >= 0.15"), lift >= 0.15);
    v.check(format!("true Δconf={t:+.3} > 0"), t > 0.0);
    v.check(format!("false Δconf={f:+.3} < 0"), f < 0.0);
    v.check("|false Δ| > |true Δ|", f.abs() > t.abs());
}

fn sleep_impact(v: &mut Verdict) {
    let r = run(ExperimentKind::Sleep, None);
    let base = block(&r, "no_sleep").mean("mean_stability");
    let s = block(&r, "sleep");
    let ratio = s.mean("mean_stability") / base;
    let reduction = s.mean("token_reduction");
    let (ltd, ltp) = (s.mean("ltd_events"), s.mean("ltp_events"));
    let fresh = s.mean("min_new_associations");
    v.check(format!("stability ratio={ratio:.3} >= 1.25"), ratio >= 1.25);
    v.check(format!("no-sleep stability={base:.3} = 1.00"), (base - 1.0).abs() < 1e-9);
    v.check(format!("token reduction={reduction:.3} >= 0.40"), reduction >= 0.40);
    v.check(format!("LTD {ltd:.1} > LTP {ltp:.1}"), ltd > ltp);
    v.check(format!("new associations per cycle={fresh:.1} > 0"), fresh > 0.0);
}

const GRADIENT: [&str; 5] = ["triple_copy", "vmpfc_fsrs", "two_factor", "sleep", "neuromodulator"];

fn ablation_gradient(v: &mut Verdict) {
    let moderate = run(ExperimentKind::Ablation, Some(Condition::Moderate));
    for b in moderate.blocks.iter().filter(|b| b.label.starts_with('-') && !b.aggregate.is_empty()) {
        let dq = b.stat("delta_q");
        if b.label == "-sleep" {
            v.check(format!("moderate -sleep ΔQ={:+.1}% <= -25%", 100.0 * dq), dq <= -0.25);
        } else {
            v.check(format!("moderate {} |ΔQ|={:.1}% <= 5%", b.label, 100.0 * dq.abs()), dq.abs() <= 0.05);
        }
    }
    let bare = block(&moderate, "bare").stat("delta_q");
    v.check(format!("moderate bare ΔQ={:+.1}% <= -95%", 100.0 * bare), bare <= -0.95);

    let stress = run(ExperimentKind::Ablation, Some(Condition::Stress));
    for name in GRADIENT {
        let dq = block(&stress, &format!("-{name}")).stat("delta_q");
        v.check(format!("stress -{name} ΔQ={:+.1}% <= -50%", 100.0 * dq), dq <= -0.50);
    }
    for name in ["stability_protector", "reconsolidation"] {
        let dq = block(&stress, &format!("-{name}")).stat("delta_q");
        v.check(format!("stress -{name} ΔQ={:+.1}% in [-15%, 0)", 100.0 * dq), (-0.15..0.0).contains(&dq));
    }
}

/// Retention at or below this counts as having hit the floor.
const RETENTION_FLOOR: f64 = 0.05;

fn integration_cascade(v: &mut Verdict) {
    let r = run(ExperimentKind::Cascade, None);
    let full = block(&r, "full");
    let (full_r, bare_r) = (full.mean("retention"), block(&r, "bare").mean("retention"));
    let ratio = full_r / bare_r;
    v.check(format!("full/bare retention={full_r:.3}/{bare_r:.3}={ratio:.1} >= 10"), ratio >= 10.0);
    let fnd = block(&r, "foundational_only").mean("retention_day30");
    v.check(format!("foundational-only day-30 retention={fnd:.3} <= {RETENTION_FLOOR}"), fnd <= RETENTION_FLOOR);
    let gap = r.series.iter().find(|s| s.name == "full:emotional_gap").expect("full gap series");
    let drops = gap.values.windows(2).filter(|w| w[1].0 < w[0].0).count();
    v.check(format!("emotional gap {:.3}->{:.3}, {drops} drops", gap.values[0].0, gap.values.last().map_or(0.0, |x| x.0)), drops == 0);
    let (before, after) = (full.mean("fiedler_before"), full.mean("fiedler_after"));
    v.check(format!("Fiedler {before:.4} -> {after:.4} after sleep"), after > before);
}

fn long_horizon(v: &mut Verdict) {
    let r = run(ExperimentKind::LongHorizon, None);
    let simple = block(&r, "simple_memory").mean("p5_day30");
    v.check(format!("Simple-Memory P@5(day 30)={simple:.3} = 0"), simple == 0.0);
    let full = block(&r, "full");
    let (d1, d60) = (full.mean("p5_day01"), full.mean("p5_day60"));
    v.check(format!("full P@5 day60={d60:.4} >= 0.95 x day1={d1:.4}"), d60 >= 0.95 * d1);
    let rag = block(&r, "static_rag");
    let days = ["p5_day01", "p5_day07", "p5_day14", "p5_day30", "p5_day45", "p5_day60"];
    let vals: Vec<f64> = days.iter().map(|d| rag.mean(d)).collect();
    let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
    v.check(format!("Static-RAG P@5 spread={spread:.2e}"), spread == 0.0);
}

fn pma(v: &mut Verdict) {
    let r = run(ExperimentKind::Pma, None);
    let b = block(&r, "pma");
    let m = |k: &str| b.mean(k);
    v.check(format!("tonic drift={:.3} <= 0.07", m("neuro_drift")), m("neuro_drift") <= 0.07);
    v.check(format!("DA-5HT corr={:.3} < 0", m("da_5ht_corr")), m("da_5ht_corr") < 0.0);
    v.check(format!("recon accuracy={:.3} >= 0.95", m("recon_accuracy")), m("recon_accuracy") >= 0.95);
    v.check(format!("priority NDCG@10={:.3} >= 0.95", m("priority_ndcg10")), m("priority_ndcg10") >= 0.95);
    v.check(format!("chronological NDCG@10={:.3} <= 0.75", m("chrono_ndcg10")), m("chrono_ndcg10") <= 0.75);
    v.check(format!("protector block rate={:.3} < 0.30", m("protector_block_rate")), m("protector_block_rate") < 0.30);
    v.check(format!("bias precision={:.3} >= 0.8", m("bias_precision")), m("bias_precision") >= 0.8);
    v.check(format!("bias recall={:.3} >= 0.95", m("bias_recall")), m("bias_recall") >= 0.95);
}

fn bootstrap_coverage(trials: usize, n: usize) -> f64 {
    let mut rng = Mulberry32::new(20260421);
    let mut covered = 0;
    for _ in 0..trials {
        let xs: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let (lo, hi) = bootstrap_ci(&xs, 1000, &mut rng).expect("non-empty sample");
        covered += (lo <= 0.0 && 0.0 <= hi) as usize;
    }
    covered as f64 / trials as f64
}

fn determinism_and_statistics(v: &mut Verdict) {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    for kind in [ExperimentKind::HebbianKg, ExperimentKind::Pma] {
        let first = run(kind, None).to_canonical_json().expect("canonical");
        let second = run(kind, None).to_canonical_json().expect("canonical");
        v.check(format!("{} byte-exact across two runs", kind.name()), first == second);
        let file = golden.join(format!("{}-{}.json", kind.name(), ExperimentSpec::new(kind).resolved_condition().name()));
        let stored = std::fs::read_to_string(&file).unwrap_or_default();
        v.check(format!("{} byte-exact against {}", kind.name(), file.display()), stored == first);
    }
    let a: Vec<f64> = (1..=10).map(|i| 1.0 + i as f64).collect();
    let b = vec![0.0; 10];
    let p = wilcoxon_signed_rank(&a, &b).expect("ten pairs");
    v.check(format!("Wilcoxon p={p:.6e} = 2^-9"), (p - 2f64.powi(-9)).abs() < 1e-12);
    let coverage = bootstrap_coverage(1000, 30);
    v.check(format!("bootstrap coverage={coverage:.3} in [0.92, 0.97]"), (0.92..=0.97).contains(&coverage));
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("1 Ebbinghaus curve exactness", ebbinghaus_exactness),
        ("2 TripleCopy shape", triple_copy_shape),
        ("3 Two-Factor KG benchmark", two_factor_kg),
        ("4 Bayesian propagation", bayesian_propagation),
        ("5 Sleep impact", sleep_impact),
        ("6 Ablation gradient", ablation_gradient),
        ("7 Integration cascade", integration_cascade),
        ("8 Long-horizon archetypes", long_horizon),
        ("9 PMA micro-benchmarks", pma),
        ("10 Determinism and statistics", determinism_and_statistics),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, criterion) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let started = Instant::now();
        let mut verdict = Verdict::new();
        criterion(&mut verdict);
        let secs = started.elapsed().as_secs_f64();
        if verdict.passed() {
            println!("PASS  criterion {name} ({} checks, {secs:.1}s)", verdict.checks.len());
        } else {
            failed += 1;
            println!("FAIL  criterion {name} ({secs:.1}s): {}", verdict.failures().join("; "));
        }
        for (what, ok) in &verdict.checks {
            println!("        [{}] {what}", if *ok { "ok" } else { "x" });
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

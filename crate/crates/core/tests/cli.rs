use std::fs;
use std::path::PathBuf;
use std::process::Command;

use memcortex::cli::{main_with_args, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use memcortex::harness::ExperimentResult;

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("memcortex").chain(args.iter().copied()))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_memcortex"))
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["run", "--experiment", "astrology"]), EXIT_USAGE);
    assert_eq!(run(&["run", "--experiment", "bayes", "--disable", "warp_drive"]), EXIT_USAGE);
    assert_eq!(run(&["run", "--experiment", "bayes", "--condition", "balmy"]), EXIT_USAGE);
    assert_eq!(run(&["run", "--experiment", "bayes", "--seeds", "x"]), EXIT_USAGE);
    assert_eq!(run(&["launch"]), EXIT_USAGE);
    assert_eq!(run(&["plotdata"]), EXIT_USAGE);
    assert_eq!(run(&["--help"]), EXIT_OK);
}

#[test]
fn run_writes_result() {
    let dir = scratch("run");
    let out = dir.join("bayes.json");
    assert_eq!(run(&["run", "--experiment", "bayes", "--seeds", "42,123", "--out", out.to_str().unwrap()]), EXIT_OK);
    let result: ExperimentResult = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(result.config.seeds, vec![42, 123]);
    assert_eq!(result.blocks[0].per_seed.len(), 2);

    let csv = dir.join("bayes.csv");
    assert_eq!(run(&["run", "--experiment", "bayes", "--seeds", "42", "--format", "csv", "--out", csv.to_str().unwrap()]), EXIT_OK);
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("block,metric,mean,sd,ci_low,ci_high\n"));
}

#[test]
fn verify_detects_drift() {
    let dir = scratch("verify");
    let golden = dir.join("golden");
    fs::create_dir_all(&golden).unwrap();
    let g = golden.to_str().unwrap();
    assert_eq!(run(&["verify", "--golden", g]), EXIT_USAGE);
    assert_eq!(run(&["verify", "--golden", dir.join("absent").to_str().unwrap()]), EXIT_USAGE);

    let file = golden.join("hebbian_kg-moderate.json");
    assert_eq!(run(&["run", "--experiment", "hebbian_kg", "--seeds", "42,7", "--out", file.to_str().unwrap()]), EXIT_OK);
    assert_eq!(run(&["verify", "--golden", g]), EXIT_OK);
    assert_eq!(run(&["verify", "--golden", g, "--experiment", "bayes"]), EXIT_USAGE);

    let text = fs::read_to_string(&file).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let p5 = value["blocks"][1]["per_seed"][0]["p_at_5"].as_f64().unwrap();
    let needle = memcortex::harness::canonical::format_float(p5);
    let bumped = memcortex::harness::canonical::format_float(p5 + 1e-9);
    fs::write(&file, text.replacen(&needle, &bumped, 1)).unwrap();
    let output = bin().args(["verify", "--golden", g]).output().unwrap();
    assert_eq!(output.status.code(), Some(EXIT_FAILURE));
    let report = String::from_utf8_lossy(&output.stdout);
    assert!(report.contains("golden mismatch") && report.contains("blocks[1].") && report.contains("p_at_5"), "{report}");
}

#[test]
fn plotdata_reads_result_files() {
    let dir = scratch("plot");
    let result = dir.join("retention.json");
    assert_eq!(run(&["run", "--experiment", "retention", "--seeds", "42", "--out", result.to_str().unwrap()]), EXIT_OK);
    let csv = dir.join("series.csv");
    assert_eq!(run(&["plotdata", result.to_str().unwrap(), "--out", csv.to_str().unwrap()]), EXIT_OK);

    let parsed: ExperimentResult = serde_json::from_str(&fs::read_to_string(&result).unwrap()).unwrap();
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(parsed.series.len(), 4);
    assert_eq!(rows.len(), 4 * 7);
    let flat: Vec<(String, f64, f64)> = parsed
        .series
        .iter()
        .flat_map(|s| s.time_hours.iter().zip(&s.values).map(move |(t, v)| (s.name.clone(), t.0, v.0)))
        .collect();
    for (row, (name, t, v)) in rows.iter().zip(flat) {
        assert_eq!(row[0], name);
        assert_eq!(row[1].parse::<f64>().unwrap(), t);
        assert_eq!(row[2].parse::<f64>().unwrap(), v);
    }

    let bayes = dir.join("bayes.json");
    assert_eq!(run(&["run", "--experiment", "bayes", "--seeds", "42", "--out", bayes.to_str().unwrap()]), EXIT_OK);
    let empty = dir.join("empty.csv");
    assert_eq!(run(&["plotdata", bayes.to_str().unwrap(), "--out", empty.to_str().unwrap()]), EXIT_OK);
    assert_eq!(fs::read_to_string(empty).unwrap(), "series,time_hours,value\n");

    let junk = dir.join("junk.json");
    fs::write(&junk, "{\"experiment\": 3}").unwrap();
    assert_eq!(run(&["plotdata", junk.to_str().unwrap()]), EXIT_FAILURE);
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["run", "--experiment", "sleep", "--seeds", "42,123,456"];
    let capped = bin().args(args).env("MEMCORTEX_THREADS", "1").output().unwrap();
    let free = bin().args(args).env_remove("MEMCORTEX_THREADS").output().unwrap();
    assert!(capped.status.success() && free.status.success());
    assert!(!capped.stdout.is_empty());
    assert_eq!(capped.stdout, free.stdout);
}

//! Command-line front end: `run`, `verify` and `plotdata`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::MemError;
use crate::harness::canonical::{diff_paths, format_float};
use crate::harness::{run_experiment, Condition, ExperimentKind, ExperimentResult, ExperimentSpec, REFERENCE_SEEDS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "memcortex", version, about = "Seeded experiments for the memcortex memory engine")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment and write canonical results.
    Run(RunArgs),
    /// Re-run the experiments pinned in a golden directory and compare byte for byte.
    Verify(VerifyArgs),
    /// Emit the plottable series of a saved result file or of a fresh run.
    Plotdata(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub experiment: String,
    /// Comma-separated seeds; defaults to the ten standard seeds.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u32>,
    #[arg(long)]
    pub condition: Option<String>,
    /// Algorithms to switch off in every arm, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub disable: Vec<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Only check golden files of this experiment.
    #[arg(long)]
    pub experiment: Option<String>,
    /// Seeds overriding the ones recorded in each golden file.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u32>,
    #[arg(long)]
    pub condition: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub disable: Vec<String>,
    /// Where to write the rerun of the last checked file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory of canonical result files produced by `run`.
    #[arg(long)]
    pub golden: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Saved result JSON; when absent, `--experiment` is run instead.
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub experiment: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u32>,
    #[arg(long)]
    pub condition: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub disable: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] MemError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed result: {reason}")]
    Malformed { path: String, reason: String },
    #[error("{0} golden files drifted")]
    Drift(usize),
    #[error("golden mismatch in {file} at {}", .paths.join(", "))]
    Mismatch { file: String, paths: Vec<String> },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Engine(MemError::UnknownFlag(_)) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

fn usage(e: MemError) -> CliError {
    CliError::Usage(e.to_string())
}

/// Applies the optional overrides to `spec` and validates the result.
fn build_spec(
    mut spec: ExperimentSpec,
    seeds: &[u32],
    condition: Option<&str>,
    disable: &[String],
) -> Result<ExperimentSpec, CliError> {
    if !seeds.is_empty() {
        spec = spec.seeds(seeds);
    }
    if let Some(c) = condition {
        spec = spec.condition(c.parse::<Condition>().map_err(usage)?);
    }
    if !disable.is_empty() {
        spec = spec.disable(disable);
    }
    spec.validate().map_err(usage)?;
    Ok(spec)
}

fn parse_kind(name: &str) -> Result<ExperimentKind, CliError> {
    name.parse().map_err(usage)
}

impl RunArgs {
    pub fn spec(&self) -> Result<ExperimentSpec, CliError> {
        let spec = ExperimentSpec::new(parse_kind(&self.experiment)?);
        build_spec(spec, &self.seeds, self.condition.as_deref(), &self.disable)
    }
}

/// The experiment settings a golden result was produced with.
pub fn spec_of(result: &ExperimentResult) -> ExperimentSpec {
    ExperimentSpec::new(result.config.kind)
        .seeds(&result.config.seeds)
        .condition(result.config.condition)
        .disable(&result.config.disabled)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(io_err(dir))?;
            }
            fs::write(path, text).map_err(io_err(path))
        }
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>"))),
    }
}

fn csv_text(rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

/// One row per (block, metric): mean, sd and the bootstrap interval.
pub fn blocks_csv(result: &ExperimentResult) -> Result<String, CliError> {
    let header = ["block", "metric", "mean", "sd", "ci_low", "ci_high"].map(String::from).to_vec();
    let rows = result.blocks.iter().flat_map(|b| {
        b.aggregate.iter().map(move |(k, a)| {
            vec![
                b.label.clone(),
                k.clone(),
                format_float(a.mean.0),
                format_float(a.sd.0),
                format_float(a.ci95[0].0),
                format_float(a.ci95[1].0),
            ]
        })
    });
    csv_text(std::iter::once(header).chain(rows))
}

pub fn series_csv(result: &ExperimentResult) -> Result<String, CliError> {
    let header = ["series", "time_hours", "value"].map(String::from).to_vec();
    let rows = result.series.iter().flat_map(|s| {
        s.time_hours.iter().zip(&s.values).map(move |(t, v)| vec![s.name.clone(), format_float(t.0), format_float(v.0)])
    });
    csv_text(std::iter::once(header).chain(rows))
}

fn series_json(result: &ExperimentResult) -> Result<String, CliError> {
    Ok(crate::harness::canonical::to_canonical(&result.series)?)
}

/// File name `run` output should take inside a golden directory.
pub fn golden_path(dir: &Path, spec: &ExperimentSpec) -> PathBuf {
    dir.join(format!("{}-{}.json", spec.kind.name(), spec.resolved_condition().name()))
}

/// Golden result files in `dir`, sorted by name. A missing or empty
/// directory is a usage error.
pub fn golden_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Usage(format!("golden directory {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!("no golden files in {}", dir.display())));
    }
    Ok(files)
}

fn read_result(path: &Path) -> Result<ExperimentResult, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| CliError::Malformed { path: path.display().to_string(), reason: e.to_string() })
}

pub fn summary_line(result: &ExperimentResult) -> String {
    let lead = result.blocks.iter().find(|b| b.modeled);
    let headline = lead
        .and_then(|b| b.aggregate.iter().next().map(|(k, a)| format!(" {}.{k}={}", b.label, format_float(a.mean.0))))
        .unwrap_or_default();
    format!(
        "{} {}: {} blocks, {} series, {} seeds{headline}",
        result.experiment,
        result.config.condition.name(),
        result.blocks.len(),
        result.series.len(),
        result.config.seeds.len()
    )
}

/// Compares `actual` with the golden text byte for byte; on mismatch,
/// reports the JSON paths that differ.
pub fn check_golden(file: &Path, actual: &str) -> Result<(), CliError> {
    let expected = fs::read_to_string(file).map_err(io_err(file))?;
    if expected == actual {
        return Ok(());
    }
    let parse = |s: &str| serde_json::from_str::<serde_json::Value>(s).unwrap_or(serde_json::Value::Null);
    let mut paths = diff_paths(&parse(&expected), &parse(actual));
    if paths.is_empty() {
        paths.push("<formatting>".into());
    }
    Err(CliError::Mismatch { file: file.display().to_string(), paths })
}

fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let wanted = args.experiment.as_deref().map(parse_kind).transpose()?;
    let mut checked = 0;
    let mut failures = Vec::new();
    for file in golden_files(&args.golden)? {
        let golden = read_result(&file)?;
        if wanted.is_some_and(|k| k != golden.config.kind) {
            continue;
        }
        let spec = build_spec(spec_of(&golden), &args.seeds, args.condition.as_deref(), &args.disable)?;
        let actual = run_experiment(&spec)?.to_canonical_json()?;
        if let Some(out) = &args.out {
            emit(Some(out), &actual)?;
        }
        checked += 1;
        match check_golden(&file, &actual) {
            Ok(()) => println!("ok {}", file.display()),
            Err(e) => {
                println!("FAIL {e}");
                failures.push(e);
            }
        }
    }
    if checked == 0 {
        return Err(CliError::Usage(format!("no golden file in {} matches the requested experiment", args.golden.display())));
    }
    match failures.len() {
        0 => Ok(()),
        1 => Err(failures.remove(0)),
        n => Err(CliError::Drift(n)),
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let result = run_experiment(&args.spec()?)?;
            let text = match args.format {
                Format::Json => result.to_canonical_json()?,
                Format::Csv => blocks_csv(&result)?,
            };
            emit(args.out.as_deref(), &text)?;
            if args.out.is_some() {
                println!("{}", summary_line(&result));
            } else {
                eprintln!("{}", summary_line(&result));
            }
            Ok(())
        }
        Command::Plotdata(args) => {
            let result = match (&args.input, &args.experiment) {
                (Some(path), None) => read_result(path)?,
                (None, Some(name)) => {
                    let spec = build_spec(ExperimentSpec::new(parse_kind(name)?), &args.seeds, args.condition.as_deref(), &args.disable)?;
                    run_experiment(&spec)?
                }
                _ => return Err(CliError::Usage("plotdata takes either a result file or --experiment".into())),
            };
            let text = match args.format {
                Format::Json => series_json(&result)?,
                Format::Csv => series_csv(&result)?,
            };
            emit(args.out.as_deref(), &text)
        }
        Command::Verify(args) => verify(&args),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// The seeds used when `--seeds` is omitted.
pub fn default_seeds() -> &'static [u32] {
    &REFERENCE_SEEDS
}

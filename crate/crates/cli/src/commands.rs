use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use absa_eval::corpus::{
    convert_corpus, evaluate_corpus, join_entries, parse_config, read_corpus, write_corpus,
    CorpusError, EvalOptions, MetricSelection,
};
use absa_eval::diagnostics::{correlation, paired_difference_stats, Correlation, PairedDifference};
use absa_eval::model::{default_config, FtsConfig, TaskKind};
use absa_eval::simulation::{check_against_expected, run_simulation, ShiftRange};
use absa_eval::tagged::emit_prompt;
use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use crate::{Metric, SingleMetric};

pub const EXIT_MISSING_FILE: u8 = 2;
pub const EXIT_ID_MISMATCH: u8 = 3;
pub const EXIT_SCHEMA: u8 = 4;

/// Maps an error to the process exit status.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CorpusError>() {
            return match e {
                CorpusError::UnknownPredIds(_) | CorpusError::MissingPredIds(_) => EXIT_ID_MISMATCH,
                CorpusError::Schema { .. } | CorpusError::Json(_) => EXIT_SCHEMA,
                CorpusError::Io(e) if e.kind() == io::ErrorKind::NotFound => EXIT_MISSING_FILE,
                _ => 1,
            };
        }
        if let Some(e) = cause.downcast_ref::<io::Error>() {
            if e.kind() == io::ErrorKind::NotFound {
                return EXIT_MISSING_FILE;
            }
        }
    }
    1
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

fn load_config(path: Option<&Path>) -> Result<FtsConfig> {
    match path {
        None => Ok(default_config()),
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot open {}", path.display()))?;
            parse_config(&text).with_context(|| format!("invalid config {}", path.display()))
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub struct EvaluateArgs {
    pub gold: PathBuf,
    pub pred: PathBuf,
    pub task: TaskKind,
    pub config: Option<PathBuf>,
    pub metric: Metric,
    pub out: Option<PathBuf>,
    pub allow_missing_preds: bool,
    pub count_unmatched_cases: bool,
    pub per_entry: bool,
    pub single_thread: bool,
}

pub fn evaluate(args: EvaluateArgs) -> Result<ExitCode> {
    let config = load_config(args.config.as_deref())?;
    let gold =
        read_corpus(open(&args.gold)?).with_context(|| format!("in {}", args.gold.display()))?;
    let pred =
        read_corpus(open(&args.pred)?).with_context(|| format!("in {}", args.pred.display()))?;
    let entries = join_entries(&gold, &pred, args.task, args.allow_missing_preds)?;
    let options = EvalOptions {
        metric: match args.metric {
            Metric::FtsObp => MetricSelection::FtsObp,
            Metric::Exact => MetricSelection::Exact,
            Metric::Both => MetricSelection::Both,
        },
        single_threaded: args.single_thread,
        count_unmatched_cases: args.count_unmatched_cases,
        per_entry: args.per_entry,
    };
    let report = evaluate_corpus(&entries, args.task, &config, options)?;
    emit(args.out.as_deref(), &report.to_json()?)?;
    Ok(ExitCode::SUCCESS)
}

pub fn convert(input: &Path, targets: &[TaskKind], out_dir: &Path) -> Result<ExitCode> {
    let items = read_corpus(open(input)?).with_context(|| format!("in {}", input.display()))?;
    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow!("cannot derive a file stem from {}", input.display()))?;
    let targets = if targets.is_empty() {
        &TaskKind::ALL[..]
    } else {
        targets
    };
    fs::create_dir_all(out_dir)?;
    for task in targets {
        let converted =
            convert_corpus(&items, *task).with_context(|| format!("in {}", input.display()))?;
        let path = out_dir.join(format!("{stem}.{}.jsonl", task.name()));
        let mut out = BufWriter::new(
            File::create(&path).with_context(|| format!("cannot write {}", path.display()))?,
        );
        write_corpus(&mut out, &converted)?;
        out.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn simulate(
    config: Option<&Path>,
    out: Option<&Path>,
    check: bool,
    full_shift_range: bool,
) -> Result<ExitCode> {
    let config = load_config(config)?;
    let range = if full_shift_range {
        ShiftRange::Full
    } else {
        ShiftRange::Overlapping
    };
    let table = run_simulation(&config, range);
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    emit(out, std::str::from_utf8(&csv)?)?;
    if check {
        let mismatches = check_against_expected(&table);
        if !mismatches.is_empty() {
            for m in &mismatches {
                eprintln!("mismatch: {m}");
            }
            return Ok(ExitCode::FAILURE);
        }
        eprintln!(
            "simulation table matches the reference ({} cases)",
            table.case_count
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn metric_name(metric: SingleMetric) -> &'static str {
    match metric {
        SingleMetric::FtsObp => "fts-obp",
        SingleMetric::Exact => "exact",
    }
}

/// Macro F1 of one section of a report file.
fn read_macro_f1(path: &Path, metric: SingleMetric) -> Result<f64> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot open {}", path.display()))?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a report", path.display()))?;
    let name = metric_name(metric);
    doc["reports"]
        .as_array()
        .into_iter()
        .flatten()
        .find(|r| r["flavor"] == name)
        .and_then(|r| r["macro_scores"]["f1"].as_f64())
        .ok_or_else(|| anyhow!("{} has no {name} section", path.display()))
}

#[derive(Debug, Serialize)]
struct CorrelationReport {
    a_metric: &'static str,
    b_metric: &'static str,
    a_f1: Vec<f64>,
    b_f1: Vec<f64>,
    correlation: Correlation,
    paired_difference: PairedDifference,
}

pub fn correlate(
    a: &[PathBuf],
    b: &[PathBuf],
    a_metric: SingleMetric,
    b_metric: SingleMetric,
    out: Option<&Path>,
) -> Result<ExitCode> {
    if a.len() != b.len() {
        bail!("report lists differ in length ({} vs {})", a.len(), b.len());
    }
    let a_f1 = a
        .iter()
        .map(|p| read_macro_f1(p, a_metric))
        .collect::<Result<Vec<_>>>()?;
    let b_f1 = b
        .iter()
        .map(|p| read_macro_f1(p, b_metric))
        .collect::<Result<Vec<_>>>()?;
    let report = CorrelationReport {
        a_metric: metric_name(a_metric),
        b_metric: metric_name(b_metric),
        correlation: correlation(&a_f1, &b_f1)?,
        paired_difference: paired_difference_stats(&a_f1, &b_f1)?,
        a_f1,
        b_f1,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

pub fn prompt(task: TaskKind, shots: usize, out: Option<&Path>) -> Result<ExitCode> {
    emit(out, &emit_prompt(task, shots))?;
    Ok(ExitCode::SUCCESS)
}

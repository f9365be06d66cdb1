use std::path::PathBuf;
use std::process::ExitCode;

use absa_eval::model::TaskKind;
use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Evaluate aspect-based sentiment analysis outputs with flexible span
/// matching and optimal unit pairing.
#[derive(Debug, Parser)]
#[command(name = "absa-eval", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    FtsObp,
    Exact,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score predictions against gold annotations and write a JSON report.
    Evaluate {
        /// Gold corpus (JSON lines).
        gold: PathBuf,
        /// Prediction corpus (JSON lines, with "units" or "raw").
        pred: PathBuf,
        #[arg(long, value_parser = parse_task)]
        task: TaskKind,
        /// JSON config overriding the default scoring settings.
        #[arg(long, env = "ABSA_EVAL_CONFIG")]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "fts-obp")]
        metric: Metric,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Score gold entries without a prediction as empty predictions.
        #[arg(long)]
        allow_missing_preds: bool,
        /// Count unpaired units as rejected in the match-case table.
        #[arg(long)]
        count_unmatched_cases: bool,
        /// Include per-entry counts in the report.
        #[arg(long)]
        per_entry: bool,
        /// Evaluate entries on one thread.
        #[arg(long)]
        single_thread: bool,
    },
    /// Project a quadruplet gold corpus onto other tasks, writing
    /// `<stem>.<task>.jsonl` files.
    Convert {
        input: PathBuf,
        /// Target tasks; all five when omitted.
        #[arg(long, value_delimiter = ',', value_parser = parse_task)]
        targets: Vec<TaskKind>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run the boundary-variation simulation and write the acceptance table
    /// as CSV.
    Simulate {
        #[arg(long, env = "ABSA_EVAL_CONFIG")]
        config: Option<PathBuf>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with status 1 unless the table equals the reference table.
        #[arg(long)]
        check: bool,
        /// Generate every shift up to 10, including those without overlap.
        #[arg(long)]
        full_shift_range: bool,
    },
    /// Correlate macro F1 across two aligned lists of reports.
    Correlate {
        #[arg(long, num_args = 1.., required = true)]
        a: Vec<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        b: Vec<PathBuf>,
        /// Report section read from the `a` reports.
        #[arg(long, value_enum, default_value = "fts-obp")]
        a_metric: SingleMetric,
        /// Report section read from the `b` reports.
        #[arg(long, value_enum, default_value = "fts-obp")]
        b_metric: SingleMetric,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the instruction prompt for a task.
    Prompt {
        #[arg(value_parser = parse_task)]
        task: TaskKind,
        #[arg(long, default_value_t = 4, value_parser = parse_shots)]
        shots: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingleMetric {
    FtsObp,
    Exact,
}

fn parse_task(s: &str) -> Result<TaskKind, String> {
    s.parse().map_err(|e: absa_eval::ModelError| e.to_string())
}

fn parse_shots(s: &str) -> Result<usize, String> {
    match s {
        "0" => Ok(0),
        "4" => Ok(4),
        _ => Err("shots must be 0 or 4".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evaluate {
            gold,
            pred,
            task,
            config,
            metric,
            out,
            allow_missing_preds,
            count_unmatched_cases,
            per_entry,
            single_thread,
        } => commands::evaluate(commands::EvaluateArgs {
            gold,
            pred,
            task,
            config,
            metric,
            out,
            allow_missing_preds,
            count_unmatched_cases,
            per_entry,
            single_thread,
        }),
        Command::Convert {
            input,
            targets,
            out_dir,
        } => commands::convert(&input, &targets, &out_dir),
        Command::Simulate {
            config,
            out,
            check,
            full_shift_range,
        } => commands::simulate(config.as_deref(), out.as_deref(), check, full_shift_range),
        Command::Correlate {
            a,
            b,
            a_metric,
            b_metric,
            out,
        } => commands::correlate(&a, &b, a_metric, b_metric, out.as_deref()),
        Command::Prompt { task, shots, out } => commands::prompt(task, shots, out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}

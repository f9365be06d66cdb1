//! Evaluation of aspect-based sentiment analysis outputs.
//!
//! Predicted opinion units are compared to gold units with a flexible,
//! length-aware span similarity ([`textsim`]), paired one-to-one by an optimal
//! assignment ([`pairing`]) and turned into macro-averaged precision, recall
//! and F1 ([`scoring`]). An exact-match baseline, diagnostic tables, a
//! boundary-variation simulation and corpus I/O sit on top.

pub mod assignment;
pub mod corpus;
pub mod diagnostics;
pub mod error;
pub mod model;
pub mod pairing;
pub mod scoring;
pub mod simulation;
pub mod tagged;
pub mod textsim;

pub use corpus::{
    evaluate_corpus, evaluate_records, join_entries, parse_config, read_corpus, CorpusError,
    CorpusItem, CorpusRecord, EvalOptions, EvaluationReport, MetricSelection, UnitRecord,
};
pub use diagnostics::{correlation, paired_difference_stats, Correlation, PairedDifference};
pub use error::{EvalError, ModelError, StatsError};
pub use model::{
    default_config, AspectField, CategoryLabel, Component, DegeneratePolicy, EvalEntry, FtsConfig,
    OpinionUnit, SentimentLabel, TaskKind,
};
pub use pairing::{optimal_assignment, SimilarityMatrix};
pub use scoring::{evaluate_entry, exact_match_entry, ConfusionCounts, MetricFlavor, PrfScores};
pub use simulation::{run_simulation, ShiftRange, SimulationTable};
pub use tagged::{parse_output, serialize_units};
pub use textsim::{fts_score, FtsScore};

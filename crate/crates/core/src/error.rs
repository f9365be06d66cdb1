use thiserror::Error;

use crate::model::{Component, TaskKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("unknown task `{0}`")]
    UnknownTask(String),
    #[error("unknown sentiment label `{0}`")]
    UnknownSentiment(String),
    #[error("invalid category label `{0}`")]
    InvalidCategory(String),
    #[error("{0} is empty")]
    EmptyComponent(Component),
    #[error("{component} text `{text}` cannot be represented in the tagged format")]
    UnserializableText { component: Component, text: String },
    #[error("task {task} {} component {component}", if *.expected { "requires" } else { "does not allow" })]
    ComponentMismatch {
        task: TaskKind,
        component: Component,
        expected: bool,
    },
    #[error("entry `{0}` is marked as a parse failure but has predicted units")]
    ParseFailedWithUnits(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("entry `{id}`: {source}")]
    InvalidEntry { id: String, source: ModelError },
    #[error(transparent)]
    Config(#[from] ModelError),
    #[error("no entries to aggregate")]
    EmptyCorpus,
    #[error("entries mix tasks {0} and {1}")]
    MixedTasks(TaskKind, TaskKind),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("at least 2 observations are required, got {0}")]
    TooFewObservations(usize),
    #[error("a series has zero variance")]
    ZeroVariance,
}

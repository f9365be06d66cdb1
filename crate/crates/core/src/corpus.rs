//! Line-delimited JSON corpora, gold/prediction joining and the corpus-level
//! evaluation pipeline that produces a serializable report.
//!
//! Each line is one record:
//!
//! ```json
//! {"id": "17", "text": "...", "task": "asqe",
//!  "units": [{"aspect": null, "opinion": "loud", "category": "ambient", "sentiment": "negative"}]}
//! ```
//!
//! A prediction record may carry `"raw"` (unparsed model output in the tagged
//! format) instead of `"units"`. `"aspect": null` (or the string `"null"`)
//! marks an implicit aspect; an absent key means the task has no aspect.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::diagnostics::{diagnostics, Diagnostics};
use crate::error::{EvalError, ModelError};
use crate::model::{
    AspectField, CategoryLabel, Component, EvalEntry, FtsConfig, OpinionUnit, SentimentLabel,
    TaskKind,
};
use crate::scoring::{
    aggregate_macro, evaluate_entry, exact_match_counts, EntryCounts, EntryEvalResult,
    MacroMetrics, MetricFlavor, PrfScores,
};
use crate::tagged::{derive_subtask_gold, parse_output};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("prediction ids without gold counterpart: {}", .0.join(", "))]
    UnknownPredIds(Vec<String>),
    #[error("gold ids without prediction: {}", .0.join(", "))]
    MissingPredIds(Vec<String>),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn deserialize_present<'de, D, T>(d: D) -> Result<Option<Option<T>>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    Option::<T>::deserialize(d).map(Some)
}

fn serialize_aspect<S: Serializer>(v: &Option<Option<String>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(Some(text)) => s.serialize_str(text),
        _ => s.serialize_none(),
    }
}

/// A unit as written in corpus files.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitRecord {
    /// Absent: no aspect component. `null`: implicit aspect.
    #[serde(
        default,
        deserialize_with = "deserialize_present",
        serialize_with = "serialize_aspect",
        skip_serializing_if = "Option::is_none"
    )]
    pub aspect: Option<Option<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opinion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<String>,
}

impl UnitRecord {
    pub fn to_unit(&self, task: TaskKind) -> Result<OpinionUnit, ModelError> {
        let unit = OpinionUnit {
            aspect: match &self.aspect {
                None => None,
                Some(None) => Some(AspectField::Implicit),
                Some(Some(text)) => Some(AspectField::parse(text)?),
            },
            opinion: self.opinion.as_ref().map(|o| o.trim().to_string()),
            category: self
                .category
                .as_deref()
                .map(CategoryLabel::parse)
                .transpose()?,
            sentiment: self
                .sentiment
                .as_deref()
                .map(str::parse::<SentimentLabel>)
                .transpose()?,
        };
        unit.validate_for(task)?;
        Ok(unit)
    }

    pub fn from_unit(unit: &OpinionUnit) -> Self {
        Self {
            aspect: unit.aspect.as_ref().map(|a| match a {
                AspectField::Implicit => None,
                AspectField::Explicit(text) => Some(text.clone()),
            }),
            opinion: unit.opinion.clone(),
            category: unit.category.as_ref().map(CategoryLabel::to_string),
            sentiment: unit.sentiment.map(|s| s.to_string()),
        }
    }
}

/// One line of a corpus file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub task: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Vec<UnitRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<String>,
}

/// Predicted units of a record, before or after parsing.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordContent {
    Units(Vec<OpinionUnit>),
    Raw(String),
}

/// A validated record.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub line: usize,
    pub id: String,
    pub text: Option<String>,
    pub task: TaskKind,
    pub content: RecordContent,
}

impl CorpusItem {
    pub fn to_record(&self) -> CorpusRecord {
        let (units, raw) = match &self.content {
            RecordContent::Units(units) => (
                Some(units.iter().map(UnitRecord::from_unit).collect()),
                None,
            ),
            RecordContent::Raw(raw) => (None, Some(raw.clone())),
        };
        CorpusRecord {
            id: self.id.clone(),
            text: self.text.clone(),
            task: self.task.name().to_string(),
            units,
            raw,
        }
    }
}

fn schema(line: usize, message: impl ToString) -> CorpusError {
    CorpusError::Schema {
        line,
        message: message.to_string(),
    }
}

/// Validates one record; `line` is 1-based and used for error messages.
pub fn validate_record(record: CorpusRecord, line: usize) -> Result<CorpusItem, CorpusError> {
    let task: TaskKind = record.task.parse().map_err(|e| schema(line, e))?;
    let content = match (record.units, record.raw) {
        (Some(units), None) => RecordContent::Units(
            units
                .iter()
                .map(|u| u.to_unit(task))
                .collect::<Result<_, _>>()
                .map_err(|e| schema(line, e))?,
        ),
        (None, Some(raw)) => RecordContent::Raw(raw),
        (Some(_), Some(_)) => return Err(schema(line, "record has both \"units\" and \"raw\"")),
        (None, None) => return Err(schema(line, "record needs \"units\" or \"raw\"")),
    };
    Ok(CorpusItem {
        line,
        id: record.id,
        text: record.text,
        task,
        content,
    })
}

/// Reads and validates a corpus; blank lines are skipped. Ids must be unique
/// per task.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Vec<CorpusItem>, CorpusError> {
    let mut items = Vec::new();
    let mut seen: HashSet<(TaskKind, String)> = HashSet::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord = serde_json::from_str(&line).map_err(|e| schema(line_no, e))?;
        let item = validate_record(record, line_no)?;
        if !seen.insert((item.task, item.id.clone())) {
            return Err(schema(
                line_no,
                format!("duplicate id `{}` for task {}", item.id, item.task),
            ));
        }
        items.push(item);
    }
    Ok(items)
}

pub fn write_corpus<W: Write>(mut out: W, items: &[CorpusItem]) -> Result<(), CorpusError> {
    for item in items {
        serde_json::to_writer(&mut out, &item.to_record())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Projects every quadruplet record onto `target`. Input must be ASQE gold
/// with parsed units.
pub fn convert_corpus(
    items: &[CorpusItem],
    target: TaskKind,
) -> Result<Vec<CorpusItem>, CorpusError> {
    items
        .iter()
        .map(|item| {
            if item.task != TaskKind::Asqe {
                return Err(schema(
                    item.line,
                    format!("expected task asqe, found {}", item.task),
                ));
            }
            match &item.content {
                RecordContent::Units(units) => Ok(CorpusItem {
                    task: target,
                    content: RecordContent::Units(derive_subtask_gold(units, target)),
                    ..item.clone()
                }),
                RecordContent::Raw(_) => {
                    Err(schema(item.line, "gold records must carry \"units\""))
                }
            }
        })
        .collect()
}

/// Pairs gold and prediction records of `task` by id, in gold order.
///
/// Raw predictions are parsed here. With `allow_missing_preds`, golds without
/// a prediction become entries with no predicted units.
pub fn join_entries(
    gold: &[CorpusItem],
    pred: &[CorpusItem],
    task: TaskKind,
    allow_missing_preds: bool,
) -> Result<Vec<EvalEntry>, CorpusError> {
    let gold: Vec<&CorpusItem> = gold.iter().filter(|g| g.task == task).collect();
    let gold_ids: HashSet<&str> = gold.iter().map(|g| g.id.as_str()).collect();
    let preds: HashMap<&str, &CorpusItem> = pred
        .iter()
        .filter(|p| p.task == task)
        .map(|p| (p.id.as_str(), p))
        .collect();

    let mut unknown: Vec<String> = pred
        .iter()
        .filter(|p| p.task == task && !gold_ids.contains(p.id.as_str()))
        .map(|p| p.id.clone())
        .collect();
    if !unknown.is_empty() {
        unknown.sort();
        return Err(CorpusError::UnknownPredIds(unknown));
    }
    let missing: Vec<String> = gold
        .iter()
        .filter(|g| !preds.contains_key(g.id.as_str()))
        .map(|g| g.id.clone())
        .collect();
    if !missing.is_empty() && !allow_missing_preds {
        return Err(CorpusError::MissingPredIds(missing));
    }

    gold.into_iter()
        .map(|g| {
            let gold_units = match &g.content {
                RecordContent::Units(units) => units.clone(),
                RecordContent::Raw(_) => {
                    return Err(schema(g.line, "gold records must carry \"units\""))
                }
            };
            let text = g
                .text
                .clone()
                .ok_or_else(|| schema(g.line, "gold records must carry \"text\""))?;
            let (pred_units, failed) = match preds.get(g.id.as_str()).map(|p| &p.content) {
                None => (Vec::new(), false),
                Some(RecordContent::Units(units)) => (units.clone(), false),
                Some(RecordContent::Raw(raw)) => {
                    let parsed = parse_output(raw, task);
                    (parsed.units, parsed.failed)
                }
            };
            let mut entry = EvalEntry::new(g.id.clone(), text, task, gold_units, pred_units);
            entry.pred_parse_failed = failed;
            Ok(entry)
        })
        .collect()
}

/// Parses a JSON config document over the defaults and validates it.
pub fn parse_config(json: &str) -> Result<FtsConfig, CorpusError> {
    let config: FtsConfig = serde_json::from_str(json)?;
    config.validate().map_err(EvalError::from)?;
    Ok(config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricSelection {
    #[default]
    FtsObp,
    Exact,
    Both,
}

impl MetricSelection {
    pub fn flavors(self) -> &'static [MetricFlavor] {
        match self {
            MetricSelection::FtsObp => &[MetricFlavor::FtsObp],
            MetricSelection::Exact => &[MetricFlavor::Exact],
            MetricSelection::Both => &[MetricFlavor::FtsObp, MetricFlavor::Exact],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalOptions {
    pub metric: MetricSelection,
    /// Evaluate entries one at a time on the calling thread.
    pub single_threaded: bool,
    /// Count unpaired units as rejected `no-overlap` in the match-case table.
    pub count_unmatched_cases: bool,
    /// Include per-entry counts in the report.
    pub per_entry: bool,
}

fn six_places<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64((x * 1e6).round() / 1e6)
}

/// Precision/recall/F1 as written to reports (six decimals).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportScores {
    #[serde(serialize_with = "six_places")]
    pub precision: f64,
    #[serde(serialize_with = "six_places")]
    pub recall: f64,
    #[serde(serialize_with = "six_places")]
    pub f1: f64,
}

impl From<PrfScores> for ReportScores {
    fn from(s: PrfScores) -> Self {
        Self {
            precision: s.precision,
            recall: s.recall,
            f1: s.f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub gold_units: usize,
    pub pred_units: usize,
    pub pred_parse_failed: bool,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub scores: Option<ReportScores>,
}

/// Metrics of one flavor for a corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlavorReport {
    pub flavor: MetricFlavor,
    pub entry_count: usize,
    pub scored_entry_count: usize,
    pub parse_failures: usize,
    pub macro_scores: ReportScores,
    pub components: BTreeMap<Component, ReportScores>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<EntryReport>>,
}

impl FlavorReport {
    fn new(
        metrics: MacroMetrics,
        diagnostics: Option<Diagnostics>,
        entries: Option<Vec<EntryReport>>,
    ) -> Self {
        Self {
            flavor: metrics.flavor,
            entry_count: metrics.entry_count,
            scored_entry_count: metrics.scored_entry_count,
            parse_failures: metrics.parse_failures,
            macro_scores: metrics.unit.into(),
            components: metrics
                .components
                .into_iter()
                .map(|(c, s)| (c, s.into()))
                .collect(),
            diagnostics,
            entries,
        }
    }
}

/// The evaluation report document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub task: TaskKind,
    pub reports: Vec<FlavorReport>,
}

impl EvaluationReport {
    pub fn flavor(&self, flavor: MetricFlavor) -> Option<&FlavorReport> {
        self.reports.iter().find(|r| r.flavor == flavor)
    }

    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

fn entry_reports(counts: &[EntryCounts], config: &FtsConfig) -> Vec<EntryReport> {
    counts
        .iter()
        .map(|c| EntryReport {
            id: c.id.clone(),
            gold_units: c.gold_units,
            pred_units: c.pred_units,
            pred_parse_failed: c.pred_parse_failed,
            tp: c.unit.tp,
            fp: c.unit.fp,
            fn_: c.unit.fn_,
            scores: c
                .unit
                .scores(config.degenerate_entry_policy)
                .map(Into::into),
        })
        .collect()
}

/// Evaluates every entry with the flexible metric, in entry order.
pub fn evaluate_entries(
    entries: &[EvalEntry],
    config: &FtsConfig,
    single_threaded: bool,
) -> Result<Vec<EntryEvalResult>, EvalError> {
    if single_threaded {
        entries.iter().map(|e| evaluate_entry(e, config)).collect()
    } else {
        entries
            .par_iter()
            .map(|e| evaluate_entry(e, config))
            .collect()
    }
}

/// Scores joined entries of one task and assembles the report.
pub fn evaluate_corpus(
    entries: &[EvalEntry],
    task: TaskKind,
    config: &FtsConfig,
    options: EvalOptions,
) -> Result<EvaluationReport, EvalError> {
    config.validate_for_task(task)?;
    if let Some(other) = entries.iter().find(|e| e.task != task) {
        return Err(EvalError::MixedTasks(task, other.task));
    }
    let policy = config.degenerate_entry_policy;
    let mut reports = Vec::new();
    for flavor in options.metric.flavors() {
        let report = match flavor {
            MetricFlavor::FtsObp => {
                let results = evaluate_entries(entries, config, options.single_threaded)?;
                let counts: Vec<EntryCounts> = results.iter().map(|r| r.counts.clone()).collect();
                let metrics = aggregate_macro(task, *flavor, &counts, policy)?;
                FlavorReport::new(
                    metrics,
                    Some(diagnostics(&results, options.count_unmatched_cases)),
                    options.per_entry.then(|| entry_reports(&counts, config)),
                )
            }
            MetricFlavor::Exact => {
                let counts = entries
                    .iter()
                    .map(exact_match_counts)
                    .collect::<Result<Vec<_>, _>>()?;
                let metrics = aggregate_macro(task, *flavor, &counts, policy)?;
                FlavorReport::new(
                    metrics,
                    None,
                    options.per_entry.then(|| entry_reports(&counts, config)),
                )
            }
        };
        reports.push(report);
    }
    Ok(EvaluationReport { task, reports })
}

/// Validates in-memory records, joins them and evaluates: the whole
/// pipeline behind the `evaluate` command, without file access.
pub fn evaluate_records(
    gold: Vec<CorpusRecord>,
    pred: Vec<CorpusRecord>,
    task: TaskKind,
    config: &FtsConfig,
    options: EvalOptions,
    allow_missing_preds: bool,
) -> Result<EvaluationReport, CorpusError> {
    let validate = |records: Vec<CorpusRecord>| {
        records
            .into_iter()
            .enumerate()
            .map(|(i, r)| validate_record(r, i + 1))
            .collect::<Result<Vec<_>, _>>()
    };
    let (gold, pred) = (validate(gold)?, validate(pred)?);
    let entries = join_entries(&gold, &pred, task, allow_missing_preds)?;
    Ok(evaluate_corpus(&entries, task, config, options)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_config;
    use std::io::Cursor;

    const GOLD: &str = r#"{"id": "1", "text": "It's loud but the pie is the best.", "task": "asqe", "units": [{"aspect": null, "opinion": "loud", "category": "ambient", "sentiment": "negative"}, {"aspect": "pie", "opinion": "the best", "category": "food", "sentiment": "positive"}]}
{"id": "2", "text": "Nothing to say.", "task": "asqe", "units": []}
"#;

    #[test]
    fn reads_units_and_implicit_aspects() {
        let items = read_corpus(Cursor::new(GOLD)).unwrap();
        assert_eq!(items.len(), 2);
        let RecordContent::Units(units) = &items[0].content else {
            panic!()
        };
        assert_eq!(units[0].aspect, Some(AspectField::Implicit));
        assert_eq!(units[1].aspect, Some(AspectField::Explicit("pie".into())));
    }

    #[test]
    fn absent_aspect_differs_from_null() {
        let oe = r#"{"id": "1", "text": "t", "task": "oe", "units": [{"opinion": "good"}]}"#;
        read_corpus(Cursor::new(oe)).unwrap();
        let bad = r#"{"id": "1", "text": "t", "task": "oe", "units": [{"aspect": null, "opinion": "good"}]}"#;
        assert!(matches!(
            read_corpus(Cursor::new(bad)),
            Err(CorpusError::Schema { line: 1, .. })
        ));
    }

    #[test]
    fn schema_errors_carry_line_numbers() {
        let text = format!("{GOLD}\n{{\"id\": \"3\", \"task\": \"asqe\"}}\n");
        match read_corpus(Cursor::new(text)) {
            Err(CorpusError::Schema { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let both = r#"{"id": "1", "task": "oe", "units": [], "raw": "[]"}"#;
        assert!(read_corpus(Cursor::new(both)).is_err());
        let dup = format!("{GOLD}{}", GOLD.lines().next().unwrap());
        assert!(matches!(
            read_corpus(Cursor::new(dup)),
            Err(CorpusError::Schema { line: 3, .. })
        ));
    }

    #[test]
    fn joins_raw_predictions_and_flags_failures() {
        let gold = read_corpus(Cursor::new(GOLD)).unwrap();
        let pred = read_corpus(Cursor::new(
            "{\"id\": \"2\", \"task\": \"asqe\", \"raw\": \"no idea\"}\n{\"id\": \"1\", \"task\": \"asqe\", \"raw\": \"[<asp>pie</asp><opn>best</opn><cat>food</cat><sen>positive</sen>]\"}\n",
        ))
        .unwrap();
        let entries = join_entries(&gold, &pred, TaskKind::Asqe, false).unwrap();
        assert_eq!(entries[0].id, "1");
        assert_eq!(entries[0].pred.len(), 1);
        assert!(!entries[0].pred_parse_failed);
        assert!(entries[1].pred_parse_failed);
    }

    #[test]
    fn id_mismatches() {
        let gold = read_corpus(Cursor::new(GOLD)).unwrap();
        let pred = read_corpus(Cursor::new(r#"{"id": "9", "task": "asqe", "raw": "[]"}"#)).unwrap();
        assert!(matches!(
            join_entries(&gold, &pred, TaskKind::Asqe, false),
            Err(CorpusError::UnknownPredIds(ids)) if ids == ["9"]
        ));
        let pred = read_corpus(Cursor::new(r#"{"id": "1", "task": "asqe", "raw": "[]"}"#)).unwrap();
        assert!(matches!(
            join_entries(&gold, &pred, TaskKind::Asqe, false),
            Err(CorpusError::MissingPredIds(ids)) if ids == ["2"]
        ));
        let entries = join_entries(&gold, &pred, TaskKind::Asqe, true).unwrap();
        assert_eq!(entries.len(), 2);
    }

    #[test]
    fn conversion_projects_units() {
        let gold = read_corpus(Cursor::new(GOLD)).unwrap();
        let oe = convert_corpus(&gold, TaskKind::Oe).unwrap();
        let mut buf = Vec::new();
        write_corpus(&mut buf, &oe).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            r#"{"id":"1","text":"It's loud but the pie is the best.","task":"oe","units":[{"opinion":"loud"},{"opinion":"the best"}]}"#
        ));
        let back = read_corpus(Cursor::new(text)).unwrap();
        assert_eq!(back, oe);
        assert!(convert_corpus(&oe, TaskKind::Oe).is_err());
    }

    #[test]
    fn identical_gold_and_pred_score_one() {
        let gold = read_corpus(Cursor::new(GOLD)).unwrap();
        let entries = join_entries(&gold, &gold, TaskKind::Asqe, false).unwrap();
        let options = EvalOptions {
            metric: MetricSelection::Both,
            ..Default::default()
        };
        let report = evaluate_corpus(&entries, TaskKind::Asqe, &default_config(), options).unwrap();
        assert_eq!(report.reports.len(), 2);
        for flavor in &report.reports {
            assert_eq!(flavor.entry_count, 2);
            assert_eq!(flavor.macro_scores.f1, 1.0);
        }
        let fts = report.flavor(MetricFlavor::FtsObp).unwrap();
        assert!(fts.components.values().all(|s| s.f1 == 1.0));
        assert_eq!(fts.components.len(), 4);
    }

    #[test]
    fn parallel_and_serial_reports_are_identical() {
        let gold = read_corpus(Cursor::new(GOLD)).unwrap();
        let entries = join_entries(&gold, &gold, TaskKind::Asqe, false).unwrap();
        let mut options = EvalOptions {
            metric: MetricSelection::Both,
            per_entry: true,
            ..Default::default()
        };
        let parallel =
            evaluate_corpus(&entries, TaskKind::Asqe, &default_config(), options).unwrap();
        options.single_threaded = true;
        let serial = evaluate_corpus(&entries, TaskKind::Asqe, &default_config(), options).unwrap();
        assert_eq!(parallel.to_json().unwrap(), serial.to_json().unwrap());
    }

    #[test]
    fn config_documents() {
        let config = parse_config(r#"{"partial_main_category_score": 0.5}"#).unwrap();
        assert_eq!(config.partial_main_category_score, 0.5);
        assert_eq!(config.stopwords, default_config().stopwords);
        assert!(matches!(
            parse_config(r#"{"threshold": 0.5}"#),
            Err(CorpusError::Json(_))
        ));
        assert!(matches!(
            parse_config(r#"{"partial_main_category_score": 2.0}"#),
            Err(CorpusError::Eval(_))
        ));
    }

    #[test]
    fn report_values_use_six_decimals() {
        let v = serde_json::to_value(ReportScores::from(PrfScores::new(
            1.0 / 3.0,
            2.0 / 3.0,
            0.5,
        )))
        .unwrap();
        assert_eq!(v["precision"], 0.333333);
        assert_eq!(v["recall"], 0.666667);
    }
}

//! Entry-level confusion counts and macro-averaged corpus metrics, for both
//! the flexible (span similarity + optimal pairing) metric and the
//! exact-match baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::model::{
    normalize_text, CategoryLabel, Component, DegeneratePolicy, EvalEntry, FtsConfig, TaskKind,
};
use crate::pairing::{optimal_assignment, ComponentOutcome, Pairing, SimilarityMatrix};
use crate::tagged::serialize_unit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn new(tp: usize, fp: usize, fn_: usize) -> Self {
        Self { tp, fp, fn_ }
    }

    pub fn add(&mut self, other: ConfusionCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }

    pub fn is_empty(&self) -> bool {
        self.tp + self.fp + self.fn_ == 0
    }

    /// Precision, recall and F1 of these counts. Returns `None` when the
    /// policy excludes an entry without any units.
    pub fn scores(&self, policy: DegeneratePolicy) -> Option<PrfScores> {
        if self.is_empty() {
            return match policy {
                DegeneratePolicy::BothEmptyPerfect => Some(PrfScores::new(1.0, 1.0, 1.0)),
                DegeneratePolicy::BothEmptyZero => Some(PrfScores::default()),
                DegeneratePolicy::BothEmptyExcluded => None,
            };
        }
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(self.tp, self.tp + self.fp);
        let recall = ratio(self.tp, self.tp + self.fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Some(PrfScores::new(precision, recall, f1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PrfScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl PrfScores {
    pub fn new(precision: f64, recall: f64, f1: f64) -> Self {
        Self {
            precision,
            recall,
            f1,
        }
    }

    fn mean(scores: &[PrfScores]) -> PrfScores {
        let n = scores.len() as f64;
        let sum = scores.iter().fold(PrfScores::default(), |acc, s| {
            PrfScores::new(
                acc.precision + s.precision,
                acc.recall + s.recall,
                acc.f1 + s.f1,
            )
        });
        PrfScores::new(sum.precision / n, sum.recall / n, sum.f1 / n)
    }
}

/// Which metric produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricFlavor {
    FtsObp,
    Exact,
}

impl MetricFlavor {
    pub fn name(self) -> &'static str {
        match self {
            MetricFlavor::FtsObp => "fts-obp",
            MetricFlavor::Exact => "exact",
        }
    }
}

impl fmt::Display for MetricFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Confusion counts of one entry, the input to macro aggregation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryCounts {
    pub id: String,
    pub gold_units: usize,
    pub pred_units: usize,
    pub pred_parse_failed: bool,
    pub unit: ConfusionCounts,
    /// Empty for the exact-match baseline, which is unit-level only.
    pub components: BTreeMap<Component, ConfusionCounts>,
}

/// One optimal gold/pred pair and how each of its components fared.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairOutcome {
    pub gold_index: usize,
    pub pred_index: usize,
    pub similarity: f64,
    pub unit_matched: bool,
    pub components: Vec<ComponentOutcome>,
    pub gold_category: Option<String>,
    pub gold_aspect_implicit: bool,
}

impl PairOutcome {
    pub fn component(&self, component: Component) -> Option<&ComponentOutcome> {
        self.components.iter().find(|c| c.component == component)
    }
}

/// Full result of evaluating one entry with the flexible metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryEvalResult {
    pub task: TaskKind,
    pub counts: EntryCounts,
    pub pairing: Pairing,
    pub pairs: Vec<PairOutcome>,
    pub gold_implicit_aspects: usize,
    pub unit_scores: Option<PrfScores>,
    pub component_scores: BTreeMap<Component, Option<PrfScores>>,
}

impl EntryEvalResult {
    pub fn unit_counts(&self) -> ConfusionCounts {
        self.counts.unit
    }
}

fn validate_entry(entry: &EvalEntry) -> Result<(), EvalError> {
    entry.validate().map_err(|source| EvalError::InvalidEntry {
        id: entry.id.clone(),
        source,
    })
}

/// Pairs gold and predicted units optimally and counts matches.
///
/// A pair is a unit-level true positive only if every component matches;
/// otherwise it adds one false positive and one false negative. Unpaired
/// predictions are false positives and unpaired golds false negatives, for
/// the unit and for every component.
pub fn evaluate_entry(entry: &EvalEntry, config: &FtsConfig) -> Result<EntryEvalResult, EvalError> {
    validate_entry(entry)?;
    config.validate_for_task(entry.task)?;
    let task = entry.task;

    let matrix = SimilarityMatrix::build(&entry.gold, &entry.pred, &entry.text, task, config);
    let pairing = optimal_assignment(&matrix);

    let mut unit = ConfusionCounts::default();
    let mut components: BTreeMap<Component, ConfusionCounts> = task
        .components()
        .iter()
        .map(|c| (*c, ConfusionCounts::default()))
        .collect();

    let mut pairs = Vec::with_capacity(pairing.pairs.len());
    for &(g, p) in &pairing.pairs {
        let detail = matrix
            .detail(g, p)
            .expect("matrix built from units carries details");
        let unit_matched = detail.all_matched();
        if unit_matched {
            unit.tp += 1;
        } else {
            unit.fp += 1;
            unit.fn_ += 1;
        }
        for outcome in &detail.components {
            let counts = components
                .get_mut(&outcome.component)
                .expect("task component");
            if outcome.matched {
                counts.tp += 1;
            } else {
                counts.fp += 1;
                counts.fn_ += 1;
            }
        }
        let gold = &entry.gold[g];
        pairs.push(PairOutcome {
            gold_index: g,
            pred_index: p,
            similarity: detail.cell,
            unit_matched,
            components: detail.components.clone(),
            gold_category: gold.category.as_ref().map(CategoryLabel::to_string),
            gold_aspect_implicit: gold.aspect.as_ref().is_some_and(|a| a.is_implicit()),
        });
    }

    let unmatched_pred = pairing.unmatched_pred.len();
    let unmatched_gold = pairing.unmatched_gold.len();
    unit.fp += unmatched_pred;
    unit.fn_ += unmatched_gold;
    for counts in components.values_mut() {
        counts.fp += unmatched_pred;
        counts.fn_ += unmatched_gold;
    }

    let policy = config.degenerate_entry_policy;
    let component_scores = components
        .iter()
        .map(|(c, counts)| (*c, counts.scores(policy)))
        .collect();

    Ok(EntryEvalResult {
        task,
        counts: EntryCounts {
            id: entry.id.clone(),
            gold_units: entry.gold.len(),
            pred_units: entry.pred.len(),
            pred_parse_failed: entry.pred_parse_failed,
            unit,
            components,
        },
        unit_scores: unit.scores(policy),
        component_scores,
        pairing,
        pairs,
        gold_implicit_aspects: entry
            .gold
            .iter()
            .filter(|u| u.aspect.as_ref().is_some_and(|a| a.is_implicit()))
            .count(),
    })
}

fn exact_key(unit: &crate::model::OpinionUnit, task: TaskKind) -> String {
    normalize_text(&serialize_unit(unit, task).expect("validated unit"))
}

/// Exact-match baseline with set semantics over normalised unit strings.
pub fn exact_match_entry(entry: &EvalEntry) -> Result<ConfusionCounts, EvalError> {
    validate_entry(entry)?;
    let gold: BTreeSet<String> = entry
        .gold
        .iter()
        .map(|u| exact_key(u, entry.task))
        .collect();
    let pred: BTreeSet<String> = entry
        .pred
        .iter()
        .map(|u| exact_key(u, entry.task))
        .collect();
    let tp = gold.intersection(&pred).count();
    Ok(ConfusionCounts::new(tp, pred.len() - tp, gold.len() - tp))
}

/// [`exact_match_entry`] wrapped for aggregation.
pub fn exact_match_counts(entry: &EvalEntry) -> Result<EntryCounts, EvalError> {
    Ok(EntryCounts {
        id: entry.id.clone(),
        gold_units: entry.gold.len(),
        pred_units: entry.pred.len(),
        pred_parse_failed: entry.pred_parse_failed,
        unit: exact_match_entry(entry)?,
        components: BTreeMap::new(),
    })
}

/// Macro-averaged corpus metrics of one flavor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MacroMetrics {
    pub task: TaskKind,
    pub flavor: MetricFlavor,
    pub entry_count: usize,
    /// Entries that took part in averaging (see [`DegeneratePolicy`]).
    pub scored_entry_count: usize,
    pub parse_failures: usize,
    pub unit: PrfScores,
    pub components: BTreeMap<Component, PrfScores>,
}

/// Unweighted means of entry-level precision, recall and F1.
pub fn aggregate_macro(
    task: TaskKind,
    flavor: MetricFlavor,
    entries: &[EntryCounts],
    policy: DegeneratePolicy,
) -> Result<MacroMetrics, EvalError> {
    if entries.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let unit_scores: Vec<PrfScores> = entries
        .iter()
        .filter_map(|e| e.unit.scores(policy))
        .collect();
    if unit_scores.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut components = BTreeMap::new();
    if entries.iter().all(|e| !e.components.is_empty()) {
        for component in task.components() {
            let scores: Vec<PrfScores> = entries
                .iter()
                .filter_map(|e| e.components.get(component).and_then(|c| c.scores(policy)))
                .collect();
            if !scores.is_empty() {
                components.insert(*component, PrfScores::mean(&scores));
            }
        }
    }
    Ok(MacroMetrics {
        task,
        flavor,
        entry_count: entries.len(),
        scored_entry_count: unit_scores.len(),
        parse_failures: entries.iter().filter(|e| e.pred_parse_failed).count(),
        unit: PrfScores::mean(&unit_scores),
        components,
    })
}

/// Convenience: aggregate flexible-metric results that all share one task.
pub fn aggregate_results(
    results: &[EntryEvalResult],
    policy: DegeneratePolicy,
) -> Result<MacroMetrics, EvalError> {
    let task = results.first().ok_or(EvalError::EmptyCorpus)?.task;
    if let Some(other) = results.iter().find(|r| r.task != task) {
        return Err(EvalError::MixedTasks(task, other.task));
    }
    let counts: Vec<EntryCounts> = results.iter().map(|r| r.counts.clone()).collect();
    aggregate_macro(task, MetricFlavor::FtsObp, &counts, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{default_config, OpinionUnit, SentimentLabel};

    fn quad(a: Option<&str>, o: &str, c: &str, s: SentimentLabel) -> OpinionUnit {
        OpinionUnit::quad(a, o, c, s).unwrap()
    }

    const TEXT: &str = "It's loud but the pie is the best.";

    fn table_gold() -> Vec<OpinionUnit> {
        vec![
            quad(None, "loud", "ambient", SentimentLabel::Negative),
            quad(Some("pie"), "the best", "food", SentimentLabel::Positive),
        ]
    }

    #[test]
    fn two_gold_three_pred_scenario() {
        // pred 0 reproduces gold 0; pred 1 is spurious; pred 2 pairs with gold 1
        // but has the wrong sentiment.
        let pred = vec![
            quad(None, "loud", "ambient", SentimentLabel::Negative),
            quad(Some("it"), "loud", "service", SentimentLabel::Neutral),
            quad(Some("pie"), "best", "food", SentimentLabel::Negative),
        ];
        let entry = EvalEntry::new("fig", TEXT, TaskKind::Asqe, table_gold(), pred);
        let result = evaluate_entry(&entry, &default_config()).unwrap();
        assert_eq!(result.pairing.pairs, vec![(0, 0), (1, 2)]);
        assert_eq!(result.pairing.unmatched_pred, vec![1]);
        assert_eq!(result.unit_counts(), ConfusionCounts::new(1, 2, 1));
        assert_eq!(
            result.counts.components[&Component::Sentiment],
            ConfusionCounts::new(1, 2, 1)
        );
        assert_eq!(
            result.counts.components[&Component::Opinion],
            ConfusionCounts::new(2, 1, 0)
        );
        let scores = result.unit_scores.unwrap();
        assert!((scores.precision - 1.0 / 3.0).abs() < 1e-12);
        assert!((scores.recall - 0.5).abs() < 1e-12);
        assert!((scores.f1 - 0.4).abs() < 1e-12);
    }

    #[test]
    fn identical_single_unit() {
        let unit = vec![table_gold()[1].clone()];
        let entry = EvalEntry::new("1", TEXT, TaskKind::Asqe, unit.clone(), unit);
        let result = evaluate_entry(&entry, &default_config()).unwrap();
        assert_eq!(result.unit_counts(), ConfusionCounts::new(1, 0, 0));
        assert_eq!(result.unit_scores.unwrap().f1, 1.0);
    }

    #[test]
    fn degenerate_entries() {
        let entry = EvalEntry::new("1", TEXT, TaskKind::Oe, vec![], vec![]);
        let mut cfg = default_config();
        let r = evaluate_entry(&entry, &cfg).unwrap();
        assert_eq!(r.unit_scores, Some(PrfScores::new(1.0, 1.0, 1.0)));
        cfg.degenerate_entry_policy = DegeneratePolicy::BothEmptyZero;
        assert_eq!(
            evaluate_entry(&entry, &cfg).unwrap().unit_scores,
            Some(PrfScores::default())
        );
        cfg.degenerate_entry_policy = DegeneratePolicy::BothEmptyExcluded;
        assert_eq!(evaluate_entry(&entry, &cfg).unwrap().unit_scores, None);

        let one_sided = EvalEntry::new("2", TEXT, TaskKind::Asqe, table_gold(), vec![]);
        let r = evaluate_entry(&one_sided, &default_config()).unwrap();
        assert_eq!(r.unit_scores, Some(PrfScores::default()));
        assert_eq!(r.unit_counts(), ConfusionCounts::new(0, 0, 2));
    }

    #[test]
    fn rejects_task_mismatch() {
        let entry = EvalEntry::new("1", TEXT, TaskKind::Aste, table_gold(), vec![]);
        assert!(matches!(
            evaluate_entry(&entry, &default_config()),
            Err(EvalError::InvalidEntry { .. })
        ));
        assert!(exact_match_entry(&entry).is_err());
    }

    #[test]
    fn exact_match_boundary_difference() {
        let gold = vec![table_gold()[1].clone()];
        let pred = vec![quad(Some("pie"), "best", "food", SentimentLabel::Positive)];
        let entry = EvalEntry::new("1", TEXT, TaskKind::Asqe, gold, pred);
        assert_eq!(
            exact_match_entry(&entry).unwrap(),
            ConfusionCounts::new(0, 1, 1)
        );
        let flexible = evaluate_entry(&entry, &default_config()).unwrap();
        assert_eq!(flexible.unit_counts(), ConfusionCounts::new(1, 0, 0));
    }

    #[test]
    fn exact_match_normalizes_case_and_spacing() {
        let gold = table_gold();
        let pred = vec![
            quad(None, "LOUD", "Ambient", SentimentLabel::Negative),
            quad(Some("Pie"), "the  best", "food", SentimentLabel::Positive),
        ];
        let entry = EvalEntry::new("1", TEXT, TaskKind::Asqe, gold.clone(), pred);
        assert_eq!(
            exact_match_entry(&entry).unwrap(),
            ConfusionCounts::new(2, 0, 0)
        );
        let same = EvalEntry::new("2", TEXT, TaskKind::Asqe, gold.clone(), gold);
        assert_eq!(
            exact_match_entry(&same).unwrap(),
            ConfusionCounts::new(2, 0, 0)
        );
    }

    #[test]
    fn exact_match_absorbs_duplicate_predictions() {
        let gold = vec![table_gold()[1].clone()];
        let pred = vec![gold[0].clone(), gold[0].clone()];
        let entry = EvalEntry::new("1", TEXT, TaskKind::Asqe, gold, pred);
        assert_eq!(
            exact_match_entry(&entry).unwrap(),
            ConfusionCounts::new(1, 0, 0)
        );

        // A multiset reading would count the copy as a false positive, and so
        // does one-to-one pairing.
        let multiset_fp = entry.pred.len() - 1;
        assert_eq!(multiset_fp, 1);
        let flexible = evaluate_entry(&entry, &default_config()).unwrap();
        assert_eq!(flexible.unit_counts(), ConfusionCounts::new(1, 1, 0));
    }

    #[test]
    fn macro_averages_entry_scores() {
        let perfect = EntryCounts {
            id: "a".into(),
            gold_units: 1,
            pred_units: 1,
            pred_parse_failed: false,
            unit: ConfusionCounts::new(1, 0, 0),
            components: BTreeMap::new(),
        };
        let zero = EntryCounts {
            id: "b".into(),
            unit: ConfusionCounts::new(0, 1, 1),
            ..perfect.clone()
        };
        let policy = DegeneratePolicy::default();
        let m = aggregate_macro(
            TaskKind::Oe,
            MetricFlavor::Exact,
            &[perfect.clone(), zero],
            policy,
        )
        .unwrap();
        assert_eq!(m.unit.f1, 0.5);
        assert_eq!(m.entry_count, 2);
        let m = aggregate_macro(
            TaskKind::Oe,
            MetricFlavor::Exact,
            &[perfect.clone(), perfect.clone()],
            policy,
        )
        .unwrap();
        assert_eq!(m.unit, PrfScores::new(1.0, 1.0, 1.0));
        let half = EntryCounts {
            unit: ConfusionCounts::new(1, 1, 0),
            ..perfect
        };
        let m = aggregate_macro(TaskKind::Oe, MetricFlavor::Exact, &[half], policy).unwrap();
        assert_eq!(m.unit, half_scores());
        assert!(aggregate_macro(TaskKind::Oe, MetricFlavor::Exact, &[], policy).is_err());
    }

    fn half_scores() -> PrfScores {
        ConfusionCounts::new(1, 1, 0)
            .scores(DegeneratePolicy::default())
            .unwrap()
    }

    #[test]
    fn excluded_entries_drop_out_of_the_mean() {
        let cfg = FtsConfig {
            degenerate_entry_policy: DegeneratePolicy::BothEmptyExcluded,
            ..default_config()
        };
        let empty = EvalEntry::new("e", TEXT, TaskKind::Oe, vec![], vec![]);
        let unit = OpinionUnit {
            opinion: Some("loud".into()),
            ..Default::default()
        };
        let miss = EvalEntry::new("m", TEXT, TaskKind::Oe, vec![unit], vec![]);
        let results = [
            evaluate_entry(&empty, &cfg).unwrap(),
            evaluate_entry(&miss, &cfg).unwrap(),
        ];
        let m = aggregate_results(&results, cfg.degenerate_entry_policy).unwrap();
        assert_eq!((m.entry_count, m.scored_entry_count), (2, 1));
        assert_eq!(m.unit.f1, 0.0);
        assert_eq!(m.components[&Component::Opinion].recall, 0.0);
    }
}

//! Component-level diagnostics over evaluated entries and statistics for
//! comparing two metrics across runs.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::StatsError;
use crate::model::Component;
use crate::pairing::OutcomeDetail;
use crate::scoring::EntryEvalResult;
use crate::textsim::MatchCase;

/// Rounds to two decimals, the precision used for displayed percentages.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn percentage(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        round2(100.0 * part as f64 / whole as f64)
    }
}

/// Counts and percentages of match cases among a set of pairs.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CaseTally {
    pub total: usize,
    pub counts: BTreeMap<MatchCase, usize>,
    pub percentages: BTreeMap<MatchCase, f64>,
}

impl CaseTally {
    fn record(&mut self, case: MatchCase) {
        *self.counts.entry(case).or_default() += 1;
        self.total += 1;
    }

    fn finish(&mut self) {
        self.percentages = self
            .counts
            .iter()
            .map(|(case, n)| (*case, percentage(*n, self.total)))
            .collect();
    }

    pub fn count(&self, case: MatchCase) -> usize {
        self.counts.get(&case).copied().unwrap_or(0)
    }

    pub fn percentage(&self, case: MatchCase) -> f64 {
        self.percentages.get(&case).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ComponentCaseBreakdown {
    pub accepted: CaseTally,
    pub rejected: CaseTally,
}

/// Match cases of paired aspect/opinion components, split by acceptance.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct MatchCaseBreakdown {
    pub components: BTreeMap<Component, ComponentCaseBreakdown>,
}

/// Tallies the match case of every paired aspect and opinion component.
///
/// With `include_unmatched`, each unpaired gold or predicted unit also counts
/// as a rejected `NoOverlap` for each of those components.
pub fn match_case_breakdown(
    results: &[EntryEvalResult],
    include_unmatched: bool,
) -> MatchCaseBreakdown {
    let mut breakdown = MatchCaseBreakdown::default();
    for result in results {
        for component in result
            .task
            .components()
            .iter()
            .filter(|c| c.is_extraction())
        {
            let slot = breakdown.components.entry(*component).or_default();
            for pair in &result.pairs {
                let Some(outcome) = pair.component(*component) else {
                    continue;
                };
                let OutcomeDetail::Text(text) = outcome.detail else {
                    continue;
                };
                if outcome.matched {
                    slot.accepted.record(text.case);
                } else {
                    slot.rejected.record(text.case);
                }
            }
            if include_unmatched {
                let unpaired =
                    result.pairing.unmatched_gold.len() + result.pairing.unmatched_pred.len();
                for _ in 0..unpaired {
                    slot.rejected.record(MatchCase::NoOverlap);
                }
            }
        }
    }
    for slot in breakdown.components.values_mut() {
        slot.accepted.finish();
        slot.rejected.finish();
    }
    breakdown
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CategoryMatchRow {
    pub paired: usize,
    pub matched: usize,
    pub main_matched: usize,
    pub match_percentage: f64,
}

/// Per gold category label: how often its optimal pairs carried the same label.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CategoryMatchTable {
    pub labels: BTreeMap<String, CategoryMatchRow>,
}

pub fn category_match_table(results: &[EntryEvalResult]) -> CategoryMatchTable {
    let mut table = CategoryMatchTable::default();
    for pair in results.iter().flat_map(|r| &r.pairs) {
        let (Some(label), Some(outcome)) =
            (&pair.gold_category, pair.component(Component::Category))
        else {
            continue;
        };
        let row = table.labels.entry(label.clone()).or_default();
        row.paired += 1;
        if outcome.matched {
            row.matched += 1;
        }
        if let OutcomeDetail::Category { main_match: true } = outcome.detail {
            row.main_matched += 1;
        }
    }
    for row in table.labels.values_mut() {
        row.match_percentage = percentage(row.matched, row.paired);
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ImplicitAspectStats {
    pub total_gold_implicit: usize,
    pub matched: usize,
    pub percentage: f64,
}

/// Gold units with an implicit aspect, and how many were paired with a
/// prediction that also left the aspect implicit.
pub fn implicit_aspect_stats(results: &[EntryEvalResult]) -> ImplicitAspectStats {
    let total: usize = results.iter().map(|r| r.gold_implicit_aspects).sum();
    let matched = results
        .iter()
        .flat_map(|r| &r.pairs)
        .filter(|p| p.gold_aspect_implicit)
        .filter(|p| p.component(Component::Aspect).is_some_and(|c| c.matched))
        .count();
    ImplicitAspectStats {
        total_gold_implicit: total,
        matched,
        percentage: percentage(matched, total),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ComponentPairStats {
    pub paired: usize,
    pub matched: usize,
    pub match_percentage: f64,
}

/// Per component: number of optimal pairs and the share whose component matched.
pub fn component_pair_stats(
    results: &[EntryEvalResult],
) -> BTreeMap<Component, ComponentPairStats> {
    let mut stats: BTreeMap<Component, ComponentPairStats> = BTreeMap::new();
    for result in results {
        for component in result.task.components() {
            let slot = stats.entry(*component).or_default();
            for pair in &result.pairs {
                if let Some(outcome) = pair.component(*component) {
                    slot.paired += 1;
                    slot.matched += usize::from(outcome.matched);
                }
            }
        }
    }
    for slot in stats.values_mut() {
        slot.match_percentage = percentage(slot.matched, slot.paired);
    }
    stats
}

/// All diagnostic tables for one evaluated corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub match_cases: MatchCaseBreakdown,
    pub component_pairs: BTreeMap<Component, ComponentPairStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub categories: Option<CategoryMatchTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implicit_aspects: Option<ImplicitAspectStats>,
}

pub fn diagnostics(results: &[EntryEvalResult], include_unmatched_cases: bool) -> Diagnostics {
    let task = results.first().map(|r| r.task);
    Diagnostics {
        match_cases: match_case_breakdown(results, include_unmatched_cases),
        component_pairs: component_pair_stats(results),
        categories: task
            .filter(|t| t.has(Component::Category))
            .map(|_| category_match_table(results)),
        implicit_aspects: task
            .filter(|t| t.has(Component::Aspect))
            .map(|_| implicit_aspect_stats(results)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlation {
    pub pearson: f64,
    pub spearman: f64,
}

fn check_lengths(xs: &[f64], ys: &[f64]) -> Result<(), StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(StatsError::TooFewObservations(xs.len()));
    }
    Ok(())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    let (mx, my) = (mean(xs), mean(ys));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the mean of their positions.
pub fn fractional_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson's r and Spearman's rho (Pearson over fractional ranks).
pub fn correlation(xs: &[f64], ys: &[f64]) -> Result<Correlation, StatsError> {
    check_lengths(xs, ys)?;
    Ok(Correlation {
        pearson: pearson(xs, ys)?,
        spearman: pearson(&fractional_ranks(xs), &fractional_ranks(ys))?,
    })
}

/// Writes non-finite values as the strings `inf`, `-inf` or `nan`.
pub fn serialize_extended_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedDifference {
    pub n: usize,
    pub mean_delta: f64,
    /// Sample standard deviation of the differences.
    pub std_delta: f64,
    /// Paired t statistic; infinite when the differences are constant and nonzero.
    #[serde(serialize_with = "serialize_extended_f64")]
    pub t_statistic: f64,
    /// Cohen's d for paired samples; infinite as for `t_statistic`.
    #[serde(serialize_with = "serialize_extended_f64")]
    pub cohens_d: f64,
}

fn ratio_or_sentinel(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num == 0.0 {
        0.0
    } else {
        num.signum() * f64::INFINITY
    }
}

/// Statistics of `a[i] - b[i]`.
pub fn paired_difference_stats(a: &[f64], b: &[f64]) -> Result<PairedDifference, StatsError> {
    check_lengths(a, b)?;
    let deltas: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = deltas.len();
    let mean_delta = mean(&deltas);
    let variance = deltas.iter().map(|d| (d - mean_delta).powi(2)).sum::<f64>() / (n - 1) as f64;
    let mut std_delta = variance.sqrt();
    // differences that agree to rounding error count as constant
    if std_delta <= 1e-12 * mean_delta.abs().max(1.0) {
        std_delta = 0.0;
    }
    Ok(PairedDifference {
        n,
        mean_delta,
        std_delta,
        t_statistic: ratio_or_sentinel(mean_delta, std_delta / (n as f64).sqrt()),
        cohens_d: ratio_or_sentinel(mean_delta, std_delta),
    })
}

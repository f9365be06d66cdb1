//! Gold × pred unit similarity and optimal one-to-one unit pairing.

use serde::Serialize;

use crate::assignment::{max_weight_pairs, max_weight_total};
use crate::model::{Component, FtsConfig, OpinionUnit, TaskKind};
use crate::textsim::{component_text_match, Span, TextMatch};

/// Component-specific details of a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OutcomeDetail {
    Text(TextMatch),
    Category { main_match: bool },
    Sentiment,
}

/// Score and match decision for one component of a gold/pred unit pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentOutcome {
    pub component: Component,
    pub score: f64,
    pub matched: bool,
    pub detail: OutcomeDetail,
}

/// Similarity of two units: the weighted mean of the component scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitSimilarity {
    pub cell: f64,
    pub components: Vec<ComponentOutcome>,
}

impl UnitSimilarity {
    pub fn all_matched(&self) -> bool {
        self.components.iter().all(|c| c.matched)
    }

    pub fn component(&self, component: Component) -> Option<&ComponentOutcome> {
        self.components.iter().find(|c| c.component == component)
    }
}

fn text_outcome(component: Component, m: TextMatch) -> ComponentOutcome {
    ComponentOutcome {
        component,
        score: m.score,
        matched: m.matched,
        detail: OutcomeDetail::Text(m),
    }
}

fn missing<T>(component: Component) -> T {
    panic!("unit is missing its {component} component")
}

fn compare_component(
    component: Component,
    gold: &OpinionUnit,
    pred: &OpinionUnit,
    input: &str,
    config: &FtsConfig,
) -> ComponentOutcome {
    match component {
        Component::Aspect => {
            let (g, p) = (gold.aspect.as_ref(), pred.aspect.as_ref());
            let (g, p) = g.zip(p).unwrap_or_else(|| missing(component));
            text_outcome(
                component,
                component_text_match(g.into(), p.into(), input, config),
            )
        }
        Component::Opinion => {
            let (g, p) = gold
                .opinion
                .as_deref()
                .zip(pred.opinion.as_deref())
                .unwrap_or_else(|| missing(component));
            text_outcome(
                component,
                component_text_match(Span::Text(g), Span::Text(p), input, config),
            )
        }
        Component::Category => {
            let (g, p) = gold
                .category
                .as_ref()
                .zip(pred.category.as_ref())
                .unwrap_or_else(|| missing(component));
            let full = g.matches(p);
            let main_match = g.main_matches(p);
            let score = if full {
                1.0
            } else if main_match {
                config.partial_main_category_score
            } else {
                0.0
            };
            ComponentOutcome {
                component,
                score,
                matched: full,
                detail: OutcomeDetail::Category { main_match },
            }
        }
        Component::Sentiment => {
            let (g, p) = gold
                .sentiment
                .zip(pred.sentiment)
                .unwrap_or_else(|| missing(component));
            let matched = g == p;
            ComponentOutcome {
                component,
                score: if matched { 1.0 } else { 0.0 },
                matched,
                detail: OutcomeDetail::Sentiment,
            }
        }
    }
}

/// Compares two units of `task`. Both units must be valid for the task.
///
/// Aspect and opinion contribute their raw span similarity, category 1 for an
/// exact label, the configured partial score for a main-category-only match
/// and 0 otherwise, sentiment 1 or 0.
pub fn unit_similarity(
    gold: &OpinionUnit,
    pred: &OpinionUnit,
    input: &str,
    task: TaskKind,
    config: &FtsConfig,
) -> UnitSimilarity {
    let components: Vec<ComponentOutcome> = task
        .components()
        .iter()
        .map(|c| compare_component(*c, gold, pred, input, config))
        .collect();
    let (weighted, total_weight) = components.iter().fold((0.0, 0.0), |(s, w), o| {
        let weight = config.component_weights.get(o.component);
        (s + weight * o.score, w + weight)
    });
    let cell = if total_weight > 0.0 {
        weighted / total_weight
    } else {
        0.0
    };
    UnitSimilarity { cell, components }
}

/// An `n × p` gold × pred similarity matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    p: usize,
    cells: Vec<f64>,
    details: Vec<UnitSimilarity>,
}

impl SimilarityMatrix {
    /// A bare matrix without component breakdowns. `cells` is row-major.
    pub fn from_cells(n: usize, p: usize, cells: Vec<f64>) -> Self {
        assert_eq!(cells.len(), n * p, "cell count must be n * p");
        Self {
            n,
            p,
            cells,
            details: Vec::new(),
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let p = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == p), "ragged matrix");
        Self::from_cells(rows.len(), p, rows.concat())
    }

    /// Compares every gold unit with every predicted unit.
    pub fn build(
        gold: &[OpinionUnit],
        pred: &[OpinionUnit],
        input: &str,
        task: TaskKind,
        config: &FtsConfig,
    ) -> Self {
        let details: Vec<UnitSimilarity> = gold
            .iter()
            .flat_map(|g| pred.iter().map(move |p| (g, p)))
            .map(|(g, p)| unit_similarity(g, p, input, task, config))
            .collect();
        Self {
            n: gold.len(),
            p: pred.len(),
            cells: details.iter().map(|d| d.cell).collect(),
            details,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn cell(&self, gold: usize, pred: usize) -> f64 {
        self.cells[gold * self.p + pred]
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    /// Component breakdown of a cell, when the matrix was built from units.
    pub fn detail(&self, gold: usize, pred: usize) -> Option<&UnitSimilarity> {
        self.details.get(gold * self.p + pred)
    }
}

/// A one-to-one pairing of gold and predicted units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pairing {
    /// `(gold_index, pred_index)`, sorted by gold index.
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_gold: Vec<usize>,
    pub unmatched_pred: Vec<usize>,
    pub total: f64,
}

fn submatrix(weights: &[f64], p: usize, rows: &[usize], cols: &[usize]) -> Vec<f64> {
    rows.iter()
        .flat_map(|&i| cols.iter().map(move |&j| weights[i * p + j]))
        .collect()
}

/// Weight added to a cell whose units match on every component. It only
/// separates assignments whose similarity totals are otherwise equal.
const FULL_MATCH_BONUS: f64 = 1e-10;

/// Maximum-total-similarity pairing of size `min(n, p)`.
///
/// Ties between assignments with the same total are broken first by the
/// number of pairs that match on every component (more is preferred; only
/// for matrices built from units), then by the lexicographically smallest
/// list of `(gold_index, pred_index)` pairs. Gold rows are fixed one at a
/// time, each taking the smallest pred index that still allows the optimum.
pub fn optimal_assignment(matrix: &SimilarityMatrix) -> Pairing {
    let (n, p) = (matrix.n(), matrix.p());
    if n == 0 || p == 0 {
        return Pairing {
            pairs: Vec::new(),
            unmatched_gold: (0..n).collect(),
            unmatched_pred: (0..p).collect(),
            total: 0.0,
        };
    }

    let k = n.min(p) as f64;
    let (weights, tolerance) = if matrix.details.is_empty() {
        let scale = matrix.cells().iter().fold(1.0f64, |m, c| m.max(c.abs()));
        (matrix.cells().to_vec(), 1e-9 * scale * k)
    } else {
        let weights = matrix
            .cells()
            .iter()
            .zip(&matrix.details)
            .map(|(c, d)| {
                if d.all_matched() {
                    c + FULL_MATCH_BONUS
                } else {
                    *c
                }
            })
            .collect();
        (weights, FULL_MATCH_BONUS / (4.0 * (k + 1.0)))
    };
    let best = max_weight_total(&weights, n, p);

    let mut free_cols: Vec<usize> = (0..p).collect();
    let mut pairs = Vec::with_capacity(n.min(p));
    let mut unmatched_gold = Vec::new();
    let mut skips_left = n.saturating_sub(p);
    let mut fixed = 0.0;

    for i in 0..n {
        let rest: Vec<usize> = (i + 1..n).collect();
        let mut fallback: Option<(f64, usize)> = None;
        let mut chosen = None;
        for (k, &j) in free_cols.iter().enumerate() {
            let mut cols = free_cols.clone();
            cols.remove(k);
            let sub = submatrix(&weights, p, &rest, &cols);
            let candidate =
                fixed + weights[i * p + j] + max_weight_total(&sub, rest.len(), cols.len());
            if candidate >= best - tolerance {
                chosen = Some(k);
                break;
            }
            if fallback.is_none_or(|(v, _)| candidate > v) {
                fallback = Some((candidate, k));
            }
        }
        let chosen = match chosen {
            Some(k) => Some(k),
            None if skips_left > 0 => None,
            None => fallback.map(|(_, k)| k),
        };
        match chosen {
            Some(k) => {
                let j = free_cols.remove(k);
                fixed += weights[i * p + j];
                pairs.push((i, j));
            }
            None => {
                skips_left -= 1;
                unmatched_gold.push(i);
            }
        }
    }

    let total = pairs.iter().map(|&(i, j)| matrix.cell(i, j)).sum();
    Pairing {
        pairs,
        unmatched_gold,
        unmatched_pred: free_cols,
        total,
    }
}

/// Optimal pairing without the tie-breaking pass; any optimal assignment.
pub fn any_optimal_assignment(matrix: &SimilarityMatrix) -> Vec<(usize, usize)> {
    max_weight_pairs(matrix.cells(), matrix.n(), matrix.p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{default_config, SentimentLabel};

    fn quad(a: Option<&str>, o: &str, c: &str, s: SentimentLabel) -> OpinionUnit {
        OpinionUnit::quad(a, o, c, s).unwrap()
    }

    #[test]
    fn identical_quadruplets() {
        let u = quad(Some("pie"), "the best", "food", SentimentLabel::Positive);
        let sim = unit_similarity(
            &u,
            &u,
            "the pie is the best",
            TaskKind::Asqe,
            &default_config(),
        );
        assert_eq!(sim.cell, 1.0);
        assert!(sim.components.iter().all(|c| c.score == 1.0 && c.matched));
    }

    #[test]
    fn main_category_partial_score() {
        let text = "the lecturer explains well";
        let g = quad(
            Some("lecturer"),
            "explains well",
            "Staff - Teaching",
            SentimentLabel::Positive,
        );
        let p = quad(
            Some("lecturer"),
            "explains well",
            "Staff - Helpfulness",
            SentimentLabel::Positive,
        );
        let sim = unit_similarity(&g, &p, text, TaskKind::Asqe, &default_config());
        let cat = sim.component(Component::Category).unwrap();
        assert_eq!(cat.score, 0.3);
        assert!(!cat.matched);
        assert_eq!(cat.detail, OutcomeDetail::Category { main_match: true });
        assert!((sim.cell - 3.3 / 4.0).abs() < 1e-12);
        assert!(!sim.all_matched());
    }

    #[test]
    fn weighted_mean_of_aste_breakdown() {
        // aspect "careers help" vs gold "amount of careers help": F1 0.8
        let text = "the amount of careers help was great";
        let g = OpinionUnit::quad(
            Some("amount of careers help"),
            "great",
            "x",
            SentimentLabel::Positive,
        )
        .unwrap()
        .project(TaskKind::Aste);
        let p = OpinionUnit::quad(Some("careers help"), "great", "x", SentimentLabel::Positive)
            .unwrap()
            .project(TaskKind::Aste);
        let sim = unit_similarity(&g, &p, text, TaskKind::Aste, &default_config());
        let scores: Vec<f64> = sim.components.iter().map(|c| c.score).collect();
        assert!((scores[0] - 0.8).abs() < 1e-12);
        assert_eq!(&scores[1..], &[1.0, 1.0]);
        assert!((sim.cell - 2.8 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn weights_shift_the_mean() {
        let mut cfg = default_config();
        cfg.component_weights.sentiment = 3.0;
        let text = "pie good";
        let g = OpinionUnit::quad(Some("pie"), "good", "x", SentimentLabel::Positive)
            .unwrap()
            .project(TaskKind::Aste);
        let p = OpinionUnit::quad(Some("pie"), "good", "x", SentimentLabel::Negative)
            .unwrap()
            .project(TaskKind::Aste);
        let sim = unit_similarity(&g, &p, text, TaskKind::Aste, &cfg);
        assert!((sim.cell - 2.0 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn empty_sides_leave_everything_unmatched() {
        let m = SimilarityMatrix::from_cells(0, 3, vec![]);
        let pairing = optimal_assignment(&m);
        assert!(pairing.pairs.is_empty());
        assert_eq!(pairing.unmatched_pred, vec![0, 1, 2]);
        let m = SimilarityMatrix::from_cells(2, 0, vec![]);
        assert_eq!(optimal_assignment(&m).unmatched_gold, vec![0, 1]);
    }

    #[test]
    fn two_gold_three_pred() {
        let m = SimilarityMatrix::from_rows(&[vec![1.0, 0.2, 0.4], vec![0.3, 0.1, 0.825]]);
        let pairing = optimal_assignment(&m);
        assert_eq!(pairing.pairs, vec![(0, 0), (1, 2)]);
        assert_eq!(pairing.unmatched_pred, vec![1]);
        assert!(pairing.unmatched_gold.is_empty());
    }

    #[test]
    fn ties_break_lexicographically() {
        let m = SimilarityMatrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert_eq!(optimal_assignment(&m).pairs, vec![(0, 0), (1, 1)]);
        let m = SimilarityMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 0.0]]);
        assert_eq!(optimal_assignment(&m).pairs, vec![(0, 1), (1, 0)]);
        let m = SimilarityMatrix::from_rows(&[vec![0.0], vec![0.0], vec![0.0]]);
        let pairing = optimal_assignment(&m);
        assert_eq!(pairing.pairs, vec![(0, 0)]);
        assert_eq!(pairing.unmatched_gold, vec![1, 2]);
    }

    #[test]
    fn equal_totals_prefer_full_matches() {
        // The first prediction has the right spans but the wrong sentiment; the
        // second is exact. Both pairings total 1.0.
        let text = "pie good and fries cold";
        let unit = |a: &str, o: &str, s| {
            OpinionUnit::quad(Some(a), o, "x", s)
                .unwrap()
                .project(TaskKind::Aste)
        };
        let gold = [
            unit("pie", "good", SentimentLabel::Positive),
            unit("fries", "cold", SentimentLabel::Positive),
        ];
        let pred = [
            unit("pie", "good", SentimentLabel::Negative),
            unit("pie", "good", SentimentLabel::Positive),
        ];
        let m = SimilarityMatrix::build(&gold, &pred, text, TaskKind::Aste, &default_config());
        let lexicographic = [(0, 0), (1, 1)];
        let total: f64 = lexicographic.iter().map(|&(i, j)| m.cell(i, j)).sum();
        assert!((total - (m.cell(0, 1) + m.cell(1, 0))).abs() < 1e-12);
        assert_eq!(optimal_assignment(&m).pairs, vec![(0, 1), (1, 0)]);
        let bare = SimilarityMatrix::from_cells(2, 2, m.cells().to_vec());
        assert_eq!(optimal_assignment(&bare).pairs, lexicographic);
    }

    #[test]
    fn prefers_higher_total_over_greedy() {
        let m = SimilarityMatrix::from_rows(&[vec![0.9, 0.8], vec![0.85, 0.1]]);
        assert_eq!(optimal_assignment(&m).pairs, vec![(0, 1), (1, 0)]);
    }
}

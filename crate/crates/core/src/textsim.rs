//! Span similarity for the text-extraction components.
//!
//! A gold/pred span pair is scored with Rouge-L F1 over lowercase word-piece
//! tokens after stopword removal. Predicted spans that do not occur in the
//! input text score zero. Stopwords are removed at the level of
//! whitespace-separated words before the words are split into word pieces,
//! so a stopword glued to another word by punctuation (`in-residence`) is
//! kept. The gold length used for threshold lookup is the number of words
//! that remain.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{normalize_text, AspectField, FtsConfig};

/// Slack when comparing a score against its threshold. Scores are ratios of
/// small integers, so anything within this distance is a rounding artefact.
pub const SCORE_EPSILON: f64 = 1e-9;

/// An ordered list of lowercase tokens, none empty or containing whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TokenSeq(Vec<String>);

impl TokenSeq {
    /// Wraps tokens that already satisfy the invariants.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        debug_assert!(tokens
            .iter()
            .all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
        TokenSeq(tokens)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    /// True if `other` occurs as a contiguous run inside `self`.
    pub fn contains_run(&self, other: &TokenSeq) -> bool {
        other.is_empty() || self.0.windows(other.len()).any(|w| w == other.0.as_slice())
    }
}

impl fmt::Display for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

/// Lowercases and splits on every run of non-alphanumeric characters.
pub fn tokenize(text: &str) -> TokenSeq {
    TokenSeq(
        text.to_lowercase()
            .split(|c: char| !c.is_alphanumeric())
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect(),
    )
}

pub fn remove_stopwords(seq: &TokenSeq, stopwords: &BTreeSet<String>) -> TokenSeq {
    TokenSeq(
        seq.0
            .iter()
            .filter(|t| !stopwords.contains(t.as_str()))
            .cloned()
            .collect(),
    )
}

/// Stopword-filtered view of a span: its tokens and the number of
/// whitespace-separated words that survived filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredSpan {
    pub tokens: TokenSeq,
    pub word_count: usize,
}

pub fn filter_span(text: &str, stopwords: &BTreeSet<String>) -> FilteredSpan {
    let kept: Vec<&str> = text
        .split_whitespace()
        .filter(|w| !stopwords.contains(&w.to_lowercase()))
        .collect();
    FilteredSpan {
        tokens: TokenSeq(kept.iter().flat_map(|w| tokenize(w).0).collect()),
        word_count: kept.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RougeLScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Length of the longest common subsequence of two token sequences.
pub fn lcs_len(a: &TokenSeq, b: &TokenSeq) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut row = vec![0usize; b.len() + 1];
    for x in &a.0 {
        let mut diagonal = 0;
        for (j, y) in b.0.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if x == y {
                diagonal + 1
            } else {
                above.max(row[j])
            };
            diagonal = above;
        }
    }
    row[b.len()]
}

/// Rouge-L: precision against `pred`, recall against `gold`.
pub fn rouge_l(gold: &TokenSeq, pred: &TokenSeq) -> RougeLScore {
    let lcs = lcs_len(gold, pred);
    if lcs == 0 {
        return RougeLScore::default();
    }
    let lcs = lcs as f64;
    RougeLScore {
        precision: lcs / pred.len() as f64,
        recall: lcs / gold.len() as f64,
        // harmonic mean of the two ratios, kept in exact rational form
        f1: 2.0 * lcs / (gold.len() + pred.len()) as f64,
    }
}

/// Hallucination check: is `span` inside `input` once both are lowercased
/// and whitespace runs collapsed?
pub fn occurs_in(span: &str, input: &str) -> bool {
    normalize_text(input).contains(&normalize_text(span))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FtsScore {
    pub score: f64,
    pub gold_len: usize,
}

/// Everything computed when comparing two explicit spans.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanComparison {
    pub score: f64,
    pub gold_len: usize,
    pub gold_tokens: TokenSeq,
    pub pred_tokens: TokenSeq,
    pub pred_in_input: bool,
}

/// Compares two explicit spans. When the gold span consists of stopwords
/// only, both sides are compared unfiltered so that identical spans still
/// score 1.
pub fn compare_spans(gold: &str, pred: &str, input: &str, config: &FtsConfig) -> SpanComparison {
    let mut gold_side = filter_span(gold, &config.stopwords);
    let mut pred_side = filter_span(pred, &config.stopwords);
    if gold_side.tokens.is_empty() {
        let none = BTreeSet::new();
        gold_side = filter_span(gold, &none);
        pred_side = filter_span(pred, &none);
    }
    let pred_in_input = occurs_in(pred, input);
    let score = if pred_in_input {
        rouge_l(&gold_side.tokens, &pred_side.tokens).f1
    } else {
        0.0
    };
    SpanComparison {
        score,
        gold_len: gold_side.word_count,
        gold_tokens: gold_side.tokens,
        pred_tokens: pred_side.tokens,
        pred_in_input,
    }
}

/// Flexible text similarity of a predicted span against a gold span.
pub fn fts_score(gold: &str, pred: &str, input: &str, config: &FtsConfig) -> FtsScore {
    let cmp = compare_spans(gold, pred, input, config);
    FtsScore {
        score: cmp.score,
        gold_len: cmp.gold_len,
    }
}

pub fn threshold_for(gold_len: usize, config: &FtsConfig) -> f64 {
    config.threshold_for(gold_len)
}

/// `score >= threshold`, tolerant of floating-point rounding.
pub fn passes(score: f64, threshold: f64) -> bool {
    score + SCORE_EPSILON >= threshold
}

/// How a predicted span relates to its gold span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchCase {
    Exact,
    /// Predicted text does not occur in the input.
    Hallucination,
    /// Prediction extends beyond gold.
    Over,
    /// Prediction is a strict part of gold.
    Under,
    /// Partial overlap without containment.
    Shift,
    NoOverlap,
}

impl MatchCase {
    pub const ALL: [MatchCase; 6] = [
        MatchCase::Exact,
        MatchCase::Hallucination,
        MatchCase::Over,
        MatchCase::Under,
        MatchCase::Shift,
        MatchCase::NoOverlap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatchCase::Exact => "exact",
            MatchCase::Hallucination => "hallucination",
            MatchCase::Over => "over",
            MatchCase::Under => "under",
            MatchCase::Shift => "shift",
            MatchCase::NoOverlap => "no-overlap",
        }
    }
}

impl fmt::Display for MatchCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classifies stopword-filtered sequences. Containment is contiguous.
pub fn classify_match_case(gold: &TokenSeq, pred: &TokenSeq, pred_in_input: bool) -> MatchCase {
    if !pred_in_input {
        MatchCase::Hallucination
    } else if gold == pred && !gold.is_empty() {
        MatchCase::Exact
    } else if lcs_len(gold, pred) == 0 {
        MatchCase::NoOverlap
    } else if pred.contains_run(gold) {
        MatchCase::Over
    } else if gold.contains_run(pred) {
        MatchCase::Under
    } else {
        MatchCase::Shift
    }
}

/// A span on either side of a text-component comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Span<'a> {
    Implicit,
    Text(&'a str),
}

impl<'a> From<&'a AspectField> for Span<'a> {
    fn from(field: &'a AspectField) -> Self {
        match field {
            AspectField::Implicit => Span::Implicit,
            AspectField::Explicit(text) => Span::Text(text),
        }
    }
}

impl<'a> From<&'a str> for Span<'a> {
    fn from(text: &'a str) -> Self {
        Span::Text(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextMatch {
    pub score: f64,
    pub matched: bool,
    pub case: MatchCase,
    pub gold_len: usize,
    pub threshold: f64,
}

/// Scores and thresholds one aspect or opinion pair. Two implicit aspects
/// match exactly; an implicit aspect never matches an explicit one.
pub fn component_text_match(
    gold: Span<'_>,
    pred: Span<'_>,
    input: &str,
    config: &FtsConfig,
) -> TextMatch {
    match (gold, pred) {
        (Span::Implicit, Span::Implicit) => TextMatch {
            score: 1.0,
            matched: true,
            case: MatchCase::Exact,
            gold_len: 0,
            threshold: config.threshold_for(0),
        },
        (Span::Implicit, Span::Text(_)) | (Span::Text(_), Span::Implicit) => {
            let gold_len = match gold {
                Span::Text(text) => filter_span(text, &config.stopwords).word_count,
                Span::Implicit => 0,
            };
            TextMatch {
                score: 0.0,
                matched: false,
                case: MatchCase::NoOverlap,
                gold_len,
                threshold: config.threshold_for(gold_len),
            }
        }
        (Span::Text(gold), Span::Text(pred)) => {
            let cmp = compare_spans(gold, pred, input, config);
            let threshold = config.threshold_for(cmp.gold_len);
            TextMatch {
                score: cmp.score,
                matched: cmp.score > 0.0 && passes(cmp.score, threshold),
                case: classify_match_case(&cmp.gold_tokens, &cmp.pred_tokens, cmp.pred_in_input),
                gold_len: cmp.gold_len,
                threshold,
            }
        }
    }
}

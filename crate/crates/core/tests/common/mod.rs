//! Random synthetic corpora and unit lists shared by integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use absa_eval::model::{
    AspectField, CategoryLabel, EvalEntry, OpinionUnit, SentimentLabel, TaskKind,
};
use absa_eval::tagged::serialize_unit;
use rand::seq::SliceRandom;
use rand::Rng;

pub const CATEGORIES: [&str; 5] = [
    "Staff - Teaching",
    "Staff - Helpfulness",
    "Course - Content",
    "Facilities",
    "Social - Societies",
];

const SENTIMENTS: [SentimentLabel; 3] = [
    SentimentLabel::Positive,
    SentimentLabel::Neutral,
    SentimentLabel::Negative,
];

/// Hands out words that never repeat within one entry.
struct Words(usize);

impl Words {
    fn next(&mut self) -> String {
        self.0 += 1;
        format!("w{}", self.0)
    }

    fn span(&mut self, len: usize) -> Vec<String> {
        (0..len).map(|_| self.next()).collect()
    }
}

fn join(words: &[String]) -> String {
    words.join(" ")
}

struct GoldPlan {
    unit: OpinionUnit,
    aspect: Option<Vec<String>>,
    before_aspect: String,
    opinion: Vec<String>,
    after_opinion: String,
}

fn random_sentiment<R: Rng>(rng: &mut R) -> SentimentLabel {
    *SENTIMENTS.choose(rng).unwrap()
}

fn random_category<R: Rng>(rng: &mut R) -> CategoryLabel {
    CategoryLabel::parse(CATEGORIES.choose(rng).unwrap()).unwrap()
}

fn with_spans(base: &OpinionUnit, aspect: Option<&[String]>, opinion: &[String]) -> OpinionUnit {
    OpinionUnit {
        aspect: Some(match aspect {
            Some(words) => AspectField::Explicit(join(words)),
            None => AspectField::Implicit,
        }),
        opinion: Some(join(opinion)),
        ..base.clone()
    }
}

/// Perturbs one gold unit the way a model might.
fn predict_from<R: Rng>(rng: &mut R, gold: &GoldPlan, words: &mut Words) -> Option<OpinionUnit> {
    let aspect = gold.aspect.as_deref();
    let mut opinion = gold.opinion.clone();
    match rng.gen_range(0..9) {
        0..=2 => Some(gold.unit.clone()),
        3 => None,
        4 => {
            opinion.push(gold.after_opinion.clone());
            Some(with_spans(&gold.unit, aspect, &opinion))
        }
        5 => {
            if opinion.len() > 1 {
                opinion.pop();
            }
            let aspect = aspect.map(|a| {
                let mut a = a.to_vec();
                if rng.gen_bool(0.5) {
                    a.insert(0, gold.before_aspect.clone());
                }
                a
            });
            Some(with_spans(&gold.unit, aspect.as_deref(), &opinion))
        }
        6 => Some(OpinionUnit {
            sentiment: Some(random_sentiment(rng)),
            ..gold.unit.clone()
        }),
        7 => Some(OpinionUnit {
            category: Some(random_category(rng)),
            ..gold.unit.clone()
        }),
        _ => {
            // Spans that do not occur in the review.
            let len = rng.gen_range(1..3);
            Some(with_spans(&gold.unit, aspect, &words.span(len)))
        }
    }
}

fn dedup_serialized(units: Vec<OpinionUnit>, task: TaskKind) -> Vec<OpinionUnit> {
    let mut seen = BTreeSet::new();
    units
        .into_iter()
        .filter(|u| seen.insert(serialize_unit(u, task).unwrap().to_lowercase()))
        .collect()
}

/// One entry whose gold and predicted lists are each free of duplicates.
///
/// Gold units use disjoint fresh words; predictions copy, drop, stretch,
/// shrink or mislabel gold units, or invent spans.
pub fn random_entry<R: Rng>(rng: &mut R, id: usize, task: TaskKind) -> EvalEntry {
    let mut words = Words(0);
    let mut segments = Vec::new();
    let mut plans = Vec::new();
    for _ in 0..rng.gen_range(0..5) {
        let before_aspect = words.next();
        let aspect = rng.gen_bool(0.8).then(|| {
            let len = rng.gen_range(1..4);
            words.span(len)
        });
        let link = words.next();
        let opinion_len = rng.gen_range(1..5);
        let opinion = words.span(opinion_len);
        let after_opinion = words.next();
        segments.push(before_aspect.clone());
        if let Some(a) = &aspect {
            segments.push(join(a));
        }
        segments.push(link);
        segments.push(join(&opinion));
        segments.push(after_opinion.clone());
        let unit = OpinionUnit {
            aspect: None,
            opinion: None,
            category: Some(random_category(rng)),
            sentiment: Some(random_sentiment(rng)),
        };
        let unit = with_spans(&unit, aspect.as_deref(), &opinion);
        plans.push(GoldPlan {
            unit,
            aspect,
            before_aspect,
            opinion,
            after_opinion,
        });
    }

    let mut pred = Vec::new();
    for plan in &plans {
        if let Some(p) = predict_from(rng, plan, &mut words) {
            pred.push(p);
        }
        if rng.gen_bool(0.15) {
            if let Some(p) = predict_from(rng, plan, &mut words) {
                pred.push(p);
            }
        }
    }
    for _ in 0..rng.gen_range(0..3) {
        // A made-up unit over words that do occur in the review.
        let aspect = words.span(1);
        let opinion = words.span(rng.gen_range(1..3));
        segments.push(join(&aspect));
        segments.push(join(&opinion));
        let base = OpinionUnit {
            category: Some(random_category(rng)),
            sentiment: Some(random_sentiment(rng)),
            ..Default::default()
        };
        pred.push(with_spans(&base, Some(&aspect), &opinion));
    }
    pred.shuffle(rng);

    let gold: Vec<OpinionUnit> = plans.iter().map(|p| p.unit.project(task)).collect();
    let pred = dedup_serialized(pred.iter().map(|u| u.project(task)).collect(), task);
    let gold = dedup_serialized(gold, task);
    EvalEntry::new(id.to_string(), segments.join(" "), task, gold, pred)
}

pub fn random_corpus<R: Rng>(rng: &mut R, task: TaskKind, entries: usize) -> Vec<EvalEntry> {
    (0..entries).map(|i| random_entry(rng, i, task)).collect()
}

const TEXT_WORDS: [&str; 14] = [
    "pie",
    "the",
    "café",
    "tutor's",
    "self-paced",
    "24/7",
    "wi-fi",
    "A&B",
    "(great)",
    "x<y",
    "é",
    "NULLS",
    "50%",
    "Loud!",
];

fn random_text<R: Rng>(rng: &mut R) -> String {
    let len = rng.gen_range(1..5);
    let words: Vec<&str> = (0..len).map(|_| *TEXT_WORDS.choose(rng).unwrap()).collect();
    let sep = if rng.gen_bool(0.2) { "  " } else { " " };
    words.join(sep)
}

fn random_label<R: Rng>(rng: &mut R) -> CategoryLabel {
    let main = ["Staff", "Course", "Facilities & Campus", "Social"]
        .choose(rng)
        .unwrap();
    let sub = ["Teaching", "Content", "Wi-Fi", "Events (misc)"]
        .choose(rng)
        .unwrap();
    CategoryLabel::new(*main, rng.gen_bool(0.6).then(|| sub.to_string()))
}

/// A valid unit of `task` with messy but serializable texts.
pub fn random_unit<R: Rng>(rng: &mut R, task: TaskKind) -> OpinionUnit {
    let full = OpinionUnit {
        aspect: Some(if rng.gen_bool(0.25) {
            AspectField::Implicit
        } else {
            AspectField::Explicit(random_text(rng))
        }),
        opinion: Some(random_text(rng)),
        category: Some(random_label(rng)),
        sentiment: Some(random_sentiment(rng)),
    };
    full.project(task)
}

pub fn random_units<R: Rng>(rng: &mut R, task: TaskKind) -> Vec<OpinionUnit> {
    let len = rng.gen_range(0..5);
    (0..len).map(|_| random_unit(rng, task)).collect()
}

/// One row of the span-match reference table.
#[derive(Debug, Clone)]
pub struct SpanRow {
    pub component: String,
    pub gold: String,
    pub pred: String,
    pub fts: f64,
    pub gold_len: usize,
    pub threshold: f64,
    pub matched: bool,
}

impl SpanRow {
    /// A review containing both spans.
    pub fn input(&self) -> String {
        format!("{}. {}.", self.gold, self.pred)
    }
}

pub fn span_rows() -> Vec<SpanRow> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../core/tests/fixtures/span_matches.tsv"
    );
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split('\t').collect();
            assert_eq!(f.len(), 7, "bad row {line:?}");
            SpanRow {
                component: f[0].to_string(),
                gold: f[1].to_string(),
                pred: f[2].to_string(),
                fts: f[3].parse().unwrap(),
                gold_len: f[4].parse().unwrap(),
                threshold: f[5].parse().unwrap(),
                matched: f[6] == "True",
            }
        })
        .collect()
}

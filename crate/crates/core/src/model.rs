//! Domain types shared across the evaluator: tasks, components, opinion
//! units, evaluation entries and the scoring configuration.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// One of the four ABSA components an opinion unit can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Aspect,
    Opinion,
    Category,
    Sentiment,
}

impl Component {
    pub const ALL: [Component; 4] = [
        Component::Aspect,
        Component::Opinion,
        Component::Category,
        Component::Sentiment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::Aspect => "aspect",
            Component::Opinion => "opinion",
            Component::Category => "category",
            Component::Sentiment => "sentiment",
        }
    }

    /// Text-extraction components are scored by span similarity; the others
    /// are labels compared exactly.
    pub fn is_extraction(self) -> bool {
        matches!(self, Component::Aspect | Component::Opinion)
    }

    /// Tag name used in the tagged output format.
    pub fn tag(self) -> &'static str {
        match self {
            Component::Aspect => "asp",
            Component::Opinion => "opn",
            Component::Category => "cat",
            Component::Sentiment => "sen",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The five ABSA tasks, each defined by the components its units carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    /// Opinion extraction.
    Oe,
    /// Aspect-opinion pair extraction.
    Aope,
    /// Aspect-opinion categorisation.
    Aoc,
    /// Aspect-sentiment triplet extraction.
    Aste,
    /// Aspect-sentiment quadruplet extraction.
    Asqe,
}

impl TaskKind {
    pub const ALL: [TaskKind; 5] = [
        TaskKind::Oe,
        TaskKind::Aope,
        TaskKind::Aoc,
        TaskKind::Aste,
        TaskKind::Asqe,
    ];

    /// Components of this task in canonical (tag) order.
    pub fn components(self) -> &'static [Component] {
        use Component::*;
        match self {
            TaskKind::Oe => &[Opinion],
            TaskKind::Aope => &[Aspect, Opinion],
            TaskKind::Aoc => &[Aspect, Opinion, Category],
            TaskKind::Aste => &[Aspect, Opinion, Sentiment],
            TaskKind::Asqe => &[Aspect, Opinion, Category, Sentiment],
        }
    }

    pub fn has(self, component: Component) -> bool {
        self.components().contains(&component)
    }

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Oe => "oe",
            TaskKind::Aope => "aope",
            TaskKind::Aoc => "aoc",
            TaskKind::Aste => "aste",
            TaskKind::Asqe => "asqe",
        }
    }

    pub fn abbreviation(self) -> &'static str {
        match self {
            TaskKind::Oe => "OE",
            TaskKind::Aope => "AOPE",
            TaskKind::Aoc => "AOC",
            TaskKind::Aste => "ASTE",
            TaskKind::Asqe => "ASQE",
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lowered = s.trim().to_ascii_lowercase();
        TaskKind::ALL
            .into_iter()
            .find(|t| t.name() == lowered)
            .ok_or_else(|| ModelError::UnknownTask(s.to_string()))
    }
}

/// Lowercase, trim and collapse internal whitespace runs to single spaces.
pub fn normalize_text(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn contains_tag_marker(s: &str) -> bool {
    Component::ALL
        .iter()
        .any(|c| s.contains(&format!("<{}>", c.tag())) || s.contains(&format!("</{}>", c.tag())))
}

fn check_span_text(component: Component, text: &str) -> Result<(), ModelError> {
    if text.trim().is_empty() {
        return Err(ModelError::EmptyComponent(component));
    }
    if text.trim() != text || contains_tag_marker(text) {
        return Err(ModelError::UnserializableText {
            component,
            text: text.to_string(),
        });
    }
    Ok(())
}

/// Aspect slot of a unit: an implicit target (`null`) or an explicit span.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AspectField {
    Implicit,
    Explicit(String),
}

impl AspectField {
    /// Parses serialized aspect text; `null` in any case means implicit.
    pub fn parse(s: &str) -> Result<Self, ModelError> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            Err(ModelError::EmptyComponent(Component::Aspect))
        } else if trimmed.eq_ignore_ascii_case("null") {
            Ok(AspectField::Implicit)
        } else {
            Ok(AspectField::Explicit(trimmed.to_string()))
        }
    }

    pub fn is_implicit(&self) -> bool {
        matches!(self, AspectField::Implicit)
    }

    pub fn as_text(&self) -> &str {
        match self {
            AspectField::Implicit => "null",
            AspectField::Explicit(s) => s,
        }
    }
}

impl fmt::Display for AspectField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_text())
    }
}

/// Category label, optionally two-level (`main - sub`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CategoryLabel {
    pub main: String,
    pub sub: Option<String>,
}

const CATEGORY_SEPARATOR: &str = " - ";

impl CategoryLabel {
    pub fn new(main: impl Into<String>, sub: Option<String>) -> Self {
        Self {
            main: main.into(),
            sub,
        }
    }

    /// Splits on the first ` - `; surrounding whitespace of each part is dropped.
    pub fn parse(s: &str) -> Result<Self, ModelError> {
        let collapsed = s.split_whitespace().collect::<Vec<_>>().join(" ");
        if collapsed.is_empty() {
            return Err(ModelError::EmptyComponent(Component::Category));
        }
        // Padding lets a dangling separator ("Staff -") be caught as well.
        let padded = format!(" {collapsed} ");
        match padded.split_once(CATEGORY_SEPARATOR) {
            Some((main, sub)) => {
                let (main, sub) = (main.trim(), sub.trim());
                if main.is_empty() || sub.is_empty() {
                    return Err(ModelError::InvalidCategory(s.to_string()));
                }
                Ok(Self::new(main, Some(sub.to_string())))
            }
            None => Ok(Self::new(collapsed, None)),
        }
    }

    /// Case- and whitespace-insensitive equality of the full label.
    pub fn matches(&self, other: &CategoryLabel) -> bool {
        normalize_text(&self.to_string()) == normalize_text(&other.to_string())
    }

    /// Case- and whitespace-insensitive equality of the main part only.
    pub fn main_matches(&self, other: &CategoryLabel) -> bool {
        normalize_text(&self.main) == normalize_text(&other.main)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let rendered = self.to_string();
        match CategoryLabel::parse(&rendered) {
            Ok(ref reparsed) if reparsed == self && !contains_tag_marker(&rendered) => Ok(()),
            _ => Err(ModelError::InvalidCategory(rendered)),
        }
    }
}

impl fmt::Display for CategoryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.sub {
            Some(sub) => write!(f, "{}{}{}", self.main, CATEGORY_SEPARATOR, sub),
            None => f.write_str(&self.main),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Positive,
    Neutral,
    Negative,
}

impl SentimentLabel {
    pub const ALL: [SentimentLabel; 3] = [
        SentimentLabel::Positive,
        SentimentLabel::Neutral,
        SentimentLabel::Negative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SentimentLabel::Positive => "positive",
            SentimentLabel::Neutral => "neutral",
            SentimentLabel::Negative => "negative",
        }
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SentimentLabel {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lowered = s.trim().to_lowercase();
        SentimentLabel::ALL
            .into_iter()
            .find(|l| l.name() == lowered)
            .ok_or_else(|| ModelError::UnknownSentiment(s.to_string()))
    }
}

/// One aspect/opinion/category/sentiment tuple. Which fields are populated
/// depends on the task the unit belongs to.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpinionUnit {
    pub aspect: Option<AspectField>,
    pub opinion: Option<String>,
    pub category: Option<CategoryLabel>,
    pub sentiment: Option<SentimentLabel>,
}

impl OpinionUnit {
    /// A full quadruplet. `aspect` of `None` means an implicit aspect.
    pub fn quad(
        aspect: Option<&str>,
        opinion: &str,
        category: &str,
        sentiment: SentimentLabel,
    ) -> Result<Self, ModelError> {
        Ok(Self {
            aspect: Some(match aspect {
                Some(text) => AspectField::parse(text)?,
                None => AspectField::Implicit,
            }),
            opinion: Some(opinion.trim().to_string()),
            category: Some(CategoryLabel::parse(category)?),
            sentiment: Some(sentiment),
        })
    }

    pub fn has(&self, component: Component) -> bool {
        match component {
            Component::Aspect => self.aspect.is_some(),
            Component::Opinion => self.opinion.is_some(),
            Component::Category => self.category.is_some(),
            Component::Sentiment => self.sentiment.is_some(),
        }
    }

    /// Checks that the populated fields are exactly the task's components and
    /// that every text field survives the tagged format unchanged.
    pub fn validate_for(&self, task: TaskKind) -> Result<(), ModelError> {
        for component in Component::ALL {
            let expected = task.has(component);
            if self.has(component) != expected {
                return Err(ModelError::ComponentMismatch {
                    task,
                    component,
                    expected,
                });
            }
        }
        if let Some(AspectField::Explicit(text)) = &self.aspect {
            check_span_text(Component::Aspect, text)?;
            if text.eq_ignore_ascii_case("null") {
                return Err(ModelError::UnserializableText {
                    component: Component::Aspect,
                    text: text.clone(),
                });
            }
        }
        if let Some(opinion) = &self.opinion {
            check_span_text(Component::Opinion, opinion)?;
        }
        if let Some(category) = &self.category {
            category.validate()?;
        }
        Ok(())
    }

    /// Drops every component outside `task`'s component set.
    pub fn project(&self, task: TaskKind) -> OpinionUnit {
        OpinionUnit {
            aspect: self.aspect.clone().filter(|_| task.has(Component::Aspect)),
            opinion: self
                .opinion
                .clone()
                .filter(|_| task.has(Component::Opinion)),
            category: self
                .category
                .clone()
                .filter(|_| task.has(Component::Category)),
            sentiment: self.sentiment.filter(|_| task.has(Component::Sentiment)),
        }
    }
}

/// One review text with its gold and predicted units for a single task.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalEntry {
    pub id: String,
    pub text: String,
    pub task: TaskKind,
    pub gold: Vec<OpinionUnit>,
    pub pred: Vec<OpinionUnit>,
    pub pred_parse_failed: bool,
}

impl EvalEntry {
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        task: TaskKind,
        gold: Vec<OpinionUnit>,
        pred: Vec<OpinionUnit>,
    ) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            task,
            gold,
            pred,
            pred_parse_failed: false,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.pred_parse_failed && !self.pred.is_empty() {
            return Err(ModelError::ParseFailedWithUnits(self.id.clone()));
        }
        for unit in self.gold.iter().chain(&self.pred) {
            unit.validate_for(self.task)?;
        }
        Ok(())
    }
}

/// Score band: gold lengths up to `max_gold_len` (inclusive) use `threshold`.
/// `None` marks the final, unbounded band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdBand {
    pub max_gold_len: Option<usize>,
    pub threshold: f64,
}

/// Per-component weights used when averaging component scores into a unit
/// similarity. Only the weights of the task's components are used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ComponentWeights {
    pub aspect: f64,
    pub opinion: f64,
    pub category: f64,
    pub sentiment: f64,
}

impl Default for ComponentWeights {
    fn default() -> Self {
        Self {
            aspect: 1.0,
            opinion: 1.0,
            category: 1.0,
            sentiment: 1.0,
        }
    }
}

impl ComponentWeights {
    pub fn get(&self, component: Component) -> f64 {
        match component {
            Component::Aspect => self.aspect,
            Component::Opinion => self.opinion,
            Component::Category => self.category,
            Component::Sentiment => self.sentiment,
        }
    }
}

/// How entries with no gold and no predicted units are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegeneratePolicy {
    /// Correct abstention: P = R = F1 = 1.
    #[default]
    BothEmptyPerfect,
    /// P = R = F1 = 0.
    BothEmptyZero,
    /// Left out of macro averaging altogether.
    BothEmptyExcluded,
}

/// Scoring configuration. Every field has a default, so a config file only
/// needs the fields it overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FtsConfig {
    pub stopwords: BTreeSet<String>,
    pub threshold_schedule: Vec<ThresholdBand>,
    pub partial_main_category_score: f64,
    pub component_weights: ComponentWeights,
    pub degenerate_entry_policy: DegeneratePolicy,
}

pub const DEFAULT_STOPWORDS: [&str; 22] = [
    "a",
    "an",
    "the",
    "is",
    "are",
    "was",
    "were",
    "be",
    "to",
    "of",
    "and",
    "in",
    "this",
    "that",
    "have",
    "it",
    "very",
    "really",
    "extremely",
    "super",
    "absolutely",
    "definitely",
];

impl Default for FtsConfig {
    fn default() -> Self {
        default_config()
    }
}

/// Default settings: 22 stopwords, length-banded thresholds of 0.5/0.6/0.7,
/// a 0.3 partial score for main-category matches and equal weights.
pub fn default_config() -> FtsConfig {
    FtsConfig {
        stopwords: DEFAULT_STOPWORDS.iter().map(|w| w.to_string()).collect(),
        threshold_schedule: vec![
            ThresholdBand {
                max_gold_len: Some(2),
                threshold: 0.5,
            },
            ThresholdBand {
                max_gold_len: Some(4),
                threshold: 0.6,
            },
            ThresholdBand {
                max_gold_len: None,
                threshold: 0.7,
            },
        ],
        partial_main_category_score: 0.3,
        component_weights: ComponentWeights::default(),
        degenerate_entry_policy: DegeneratePolicy::default(),
    }
}

impl FtsConfig {
    /// Threshold for a gold span of `gold_len` tokens.
    pub fn threshold_for(&self, gold_len: usize) -> f64 {
        self.threshold_schedule
            .iter()
            .find(|band| band.max_gold_len.is_none_or(|max| gold_len <= max))
            .or(self.threshold_schedule.last())
            .map_or(1.0, |band| band.threshold)
    }

    /// Replaces the schedule with a single band at `threshold`.
    pub fn with_uniform_threshold(mut self, threshold: f64) -> Self {
        self.threshold_schedule = vec![ThresholdBand {
            max_gold_len: None,
            threshold,
        }];
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bands = &self.threshold_schedule;
        if bands.is_empty() {
            return Err(ModelError::InvalidConfig(
                "threshold schedule is empty".into(),
            ));
        }
        let mut previous: Option<usize> = None;
        for (i, band) in bands.iter().enumerate() {
            if !(band.threshold > 0.0 && band.threshold <= 1.0) {
                return Err(ModelError::InvalidConfig(format!(
                    "threshold {} is outside (0, 1]",
                    band.threshold
                )));
            }
            let is_last = i + 1 == bands.len();
            match (band.max_gold_len, is_last) {
                (None, true) => {}
                (None, false) => {
                    return Err(ModelError::InvalidConfig(
                        "only the last threshold band may be unbounded".into(),
                    ))
                }
                (Some(_), true) => {
                    return Err(ModelError::InvalidConfig(
                        "the last threshold band must be unbounded".into(),
                    ))
                }
                (Some(max), false) => {
                    if previous.is_some_and(|p| max <= p) {
                        return Err(ModelError::InvalidConfig(
                            "threshold bands must have increasing upper bounds".into(),
                        ));
                    }
                    previous = Some(max);
                }
            }
        }
        if !(0.0..=1.0).contains(&self.partial_main_category_score) {
            return Err(ModelError::InvalidConfig(
                "partial_main_category_score must lie in [0, 1]".into(),
            ));
        }
        let weights = Component::ALL.map(|c| self.component_weights.get(c));
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(ModelError::InvalidConfig(
                "component weights must be finite and nonnegative".into(),
            ));
        }
        if weights.iter().all(|w| *w == 0.0) {
            return Err(ModelError::InvalidConfig(
                "component weights are all zero".into(),
            ));
        }
        if self.stopwords.iter().any(|w| *w != w.to_lowercase()) {
            return Err(ModelError::InvalidConfig(
                "stopwords must be lowercase".into(),
            ));
        }
        Ok(())
    }

    /// Like [`validate`](Self::validate), and additionally requires a nonzero
    /// weight on at least one of `task`'s components.
    pub fn validate_for_task(&self, task: TaskKind) -> Result<(), ModelError> {
        self.validate()?;
        let total: f64 = task
            .components()
            .iter()
            .map(|c| self.component_weights.get(*c))
            .sum();
        if total <= 0.0 {
            return Err(ModelError::InvalidConfig(format!(
                "every component weight of task {task} is zero"
            )));
        }
        Ok(())
    }
}

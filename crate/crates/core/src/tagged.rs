//! The XML-style tagged unit format (`<asp>…</asp><opn>…</opn>…`), task
//! projection of quadruplet annotations, and the instruction prompt templates.

use crate::error::ModelError;
use crate::model::{AspectField, CategoryLabel, Component, OpinionUnit, SentimentLabel, TaskKind};

/// Result of parsing free-form model output.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedOutput {
    pub units: Vec<OpinionUnit>,
    /// Set when the output is non-empty yet contains no usable unit and is not
    /// a recognisable "no units" answer.
    pub failed: bool,
}

fn open_tag(c: Component) -> String {
    format!("<{}>", c.tag())
}

fn close_tag(c: Component) -> String {
    format!("</{}>", c.tag())
}

fn has_any_tag(s: &str) -> bool {
    Component::ALL
        .iter()
        .any(|c| s.contains(&open_tag(*c)) || s.contains(&close_tag(*c)))
}

/// Tries to read one complete tag group for `task` starting exactly at `at`.
/// Returns the trimmed contents and the offset just past the group.
fn match_group(raw: &str, at: usize, task: TaskKind) -> Option<(Vec<&str>, usize)> {
    let mut pos = at;
    let mut contents = Vec::with_capacity(task.components().len());
    for (i, component) in task.components().iter().enumerate() {
        if i > 0 {
            pos += raw[pos..].len() - raw[pos..].trim_start().len();
        }
        let open = open_tag(*component);
        if !raw[pos..].starts_with(&open) {
            return None;
        }
        pos += open.len();
        let close = close_tag(*component);
        let end = raw[pos..].find(&close)?;
        let content = &raw[pos..pos + end];
        if has_any_tag(content) {
            return None;
        }
        contents.push(content.trim());
        pos += end + close.len();
    }
    Some((contents, pos))
}

enum GroupContent {
    Unit(OpinionUnit),
    Empty,
    Invalid,
}

fn build_unit(contents: &[&str], task: TaskKind) -> GroupContent {
    if contents.iter().all(|c| c.is_empty()) {
        return GroupContent::Empty;
    }
    let mut unit = OpinionUnit::default();
    for (component, text) in task.components().iter().zip(contents) {
        let filled = match component {
            Component::Aspect => AspectField::parse(text).map(|a| unit.aspect = Some(a)),
            Component::Opinion if text.is_empty() => Err(ModelError::EmptyComponent(*component)),
            Component::Opinion => {
                unit.opinion = Some(text.to_string());
                Ok(())
            }
            Component::Category => CategoryLabel::parse(text).map(|c| unit.category = Some(c)),
            Component::Sentiment => text
                .parse::<SentimentLabel>()
                .map(|s| unit.sentiment = Some(s)),
        };
        if filled.is_err() {
            return GroupContent::Invalid;
        }
    }
    GroupContent::Unit(unit)
}

fn is_empty_list_form(raw: &str) -> bool {
    let trimmed = raw
        .trim()
        .trim_matches(|c| c == '"' || c == '\'' || c == '`');
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(trimmed);
    inner.trim().is_empty()
}

/// Extracts every well-formed tag group for `task` from `raw`, in order of
/// appearance. Never fails: malformed fragments are skipped and reported only
/// through [`ParsedOutput::failed`].
pub fn parse_output(raw: &str, task: TaskKind) -> ParsedOutput {
    let first_open = open_tag(task.components()[0]);
    let mut units = Vec::new();
    let mut saw_empty_group = false;
    let mut cursor = 0;
    while let Some(offset) = raw[cursor..].find(&first_open) {
        let start = cursor + offset;
        match match_group(raw, start, task) {
            Some((contents, end)) => {
                match build_unit(&contents, task) {
                    GroupContent::Unit(unit) => units.push(unit),
                    GroupContent::Empty => saw_empty_group = true,
                    GroupContent::Invalid => {}
                }
                cursor = end;
            }
            None => cursor = start + first_open.len(),
        }
    }
    let failed = units.is_empty() && !saw_empty_group && !is_empty_list_form(raw);
    ParsedOutput { units, failed }
}

fn component_text(unit: &OpinionUnit, component: Component) -> String {
    match component {
        Component::Aspect => unit.aspect.as_ref().map(|a| a.to_string()),
        Component::Opinion => unit.opinion.clone(),
        Component::Category => unit.category.as_ref().map(|c| c.to_string()),
        Component::Sentiment => unit.sentiment.map(|s| s.to_string()),
    }
    .unwrap_or_default()
}

fn render_group(task: TaskKind, text_of: impl Fn(Component) -> String) -> String {
    task.components()
        .iter()
        .map(|c| format!("{}{}{}", open_tag(*c), text_of(*c), close_tag(*c)))
        .collect()
}

/// Serializes a single unit as one tag group, without brackets.
pub fn serialize_unit(unit: &OpinionUnit, task: TaskKind) -> Result<String, ModelError> {
    unit.validate_for(task)?;
    Ok(render_group(task, |c| component_text(unit, c)))
}

/// Canonical bracketed, comma-separated form. An empty list is written as a
/// single all-empty group.
pub fn serialize_units(units: &[OpinionUnit], task: TaskKind) -> Result<String, ModelError> {
    if units.is_empty() {
        return Ok(format!("[{}]", render_group(task, |_| String::new())));
    }
    let groups = units
        .iter()
        .map(|u| serialize_unit(u, task))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(format!("[{}]", groups.join(", ")))
}

/// Projects quadruplet annotations onto `target`'s components. Order is kept
/// and units that become identical are not merged.
pub fn derive_subtask_gold(asqe_units: &[OpinionUnit], target: TaskKind) -> Vec<OpinionUnit> {
    asqe_units.iter().map(|u| u.project(target)).collect()
}

fn task_title(task: TaskKind) -> &'static str {
    match task {
        TaskKind::Oe => "opinion extraction (OE)",
        TaskKind::Aope => "aspect-opinion pair extraction (AOPE)",
        TaskKind::Aoc => "aspect-opinion categorisation (AOC)",
        TaskKind::Aste => "aspect-sentiment triplet extraction (ASTE)",
        TaskKind::Asqe => "aspect-sentiment quadruplet extraction (ASQE)",
    }
}

fn unit_noun(task: TaskKind) -> (&'static str, &'static str) {
    match task {
        TaskKind::Oe => ("opinion expression", "Opinion expressions"),
        TaskKind::Aope => ("pair", "Pairs"),
        TaskKind::Aoc | TaskKind::Aste => ("triplet", "Triplets"),
        TaskKind::Asqe => ("quadruplet", "Quadruplets"),
    }
}

use Component::{Aspect as A, Category as C, Opinion as O, Sentiment as S};

/// Instruction lines, each kept only when the task has every listed component.
const INSTRUCTION_LINES: &[(&[Component], &str)] = &[
    (&[A, O], "Given the input text, extract ALL pairs of opinion expressions and their corresponding aspect terms about the course, staff, or university."),
    (&[C, S], "Then classify the category and sentiment for each aspect-opinion pair."),
    (&[O], "Opinion expressions are words/phrases expressing evaluation, feeling, or judgment (including both explicit and implicit opinions, not objective facts)."),
    (&[A], "Aspect terms are opinion targets. Only use a pronoun if you cannot find a direct aspect term in the same sentence or adjacent context."),
    (&[A, O, C, S], "Each aspect-opinion-category-sentiment combination is a quadruplet."),
];

const RULE_LINES: &[(&[Component], &str)] = &[
    (&[O], "- Extract EVERY opinion in the text, including both explicit and implicit opinion expressions."),
    (&[A, O], "- Extract all opinion and aspect terms VERBATIM and as CONSECUTIVE tokens."),
    (&[A, O], "- Use 'null' for implicit aspects. Opinions cannot be null."),
    (&[A, O], "- If an aspect is mapped to multiple opinion expressions, or vice versa, extract each 1:1 pair separately."),
    (&[C], "- Categorise each aspect-opinion pair first into one main category (the keys) in the category_mapping below, and then into one of its appropriate subcategories (values for the key). The category label follows \"Main category - subcategory\" format."),
    (&[C], "category_mapping = {"),
    (&[C], "  \"Course\": [\"Content\", \"Learning activity\", \"Assessment\", \"Workload\", \"Difficulty\", \"Course materials\", \"Technology & tools\", \"Overall\"],"),
    (&[C], "  \"Staff\": [\"Teaching\", \"Knowledge & skills\", \"Helpfulness\", \"Attitude\", \"Personal traits\", \"Overall\"],"),
    (&[C], "  \"University\": [\"Cost\", \"Opportunities\", \"Programme\", \"Campus & facilities\", \"Culture & diversity\", \"Information & Services\", \"Social engagement & activities\", \"Overall\"]"),
    (&[C], "}"),
    (&[S], "- Classify the sentiment into one of 'positive', 'neutral', 'negative'."),
];

/// Few-shot examples as (review, quadruplets). Units are projected onto the
/// requested task when rendered.
fn example_quads() -> Vec<(&'static str, Vec<OpinionUnit>)> {
    let quad = |a: Option<&str>, o: &str, c: &str, s: SentimentLabel| {
        OpinionUnit::quad(a, o, c, s).expect("built-in example units are valid")
    };
    vec![
        (
            "The professor was knowledgeable but the assignments were too hard.",
            vec![
                quad(
                    Some("professor"),
                    "knowledgeable",
                    "Staff - Knowledge & skills",
                    SentimentLabel::Positive,
                ),
                quad(
                    Some("assignments"),
                    "too hard",
                    "Course - Assessment",
                    SentimentLabel::Negative,
                ),
            ],
        ),
        (
            "It was disappointing overall.",
            vec![quad(
                None,
                "disappointing",
                "Course - Overall",
                SentimentLabel::Negative,
            )],
        ),
        (
            "She never reply to emails or answer questions",
            vec![quad(
                Some("She"),
                "never reply to emails or answer questions",
                "Staff - Helpfulness",
                SentimentLabel::Negative,
            )],
        ),
        (
            "There were 10 assignments, 5 quizzes, 1 final exam.",
            vec![],
        ),
    ]
}

fn keep_line(task: TaskKind, needs: &[Component]) -> bool {
    needs.iter().all(|c| task.has(*c))
}

/// Renders the instruction prompt for `task`, with four worked examples when
/// `shots` is 4 and none when it is 0. Lines about components the task does
/// not have are left out.
pub fn emit_prompt(task: TaskKind, shots: usize) -> String {
    let (noun, plural) = unit_noun(task);
    let mut lines: Vec<String> = vec![
        "### Task type:".into(),
        task_title(task).into(),
        String::new(),
        "### Instruction:".into(),
        String::new(),
    ];
    lines.extend(
        INSTRUCTION_LINES
            .iter()
            .filter(|(needs, _)| keep_line(task, needs))
            .map(|(_, line)| line.to_string()),
    );
    lines.push(String::new());
    lines.push("**Rules:**".into());
    lines.extend(
        RULE_LINES
            .iter()
            .filter(|(needs, _)| keep_line(task, needs))
            .map(|(_, line)| line.to_string()),
    );
    lines.push(String::new());

    let tag_list = task
        .components()
        .iter()
        .map(|c| {
            let what = match c {
                Component::Aspect => "aspect terms",
                Component::Opinion => "opinion expressions",
                Component::Category => "category",
                Component::Sentiment => "sentiment",
            };
            format!("{}{}{}", open_tag(*c), what, close_tag(*c))
        })
        .collect::<Vec<_>>()
        .join(", ");
    lines.push(format!(
        "- Use these specific tags for each component within each {noun}: {tag_list}"
    ));
    lines.push(String::new());
    lines.push("**Critical formatting requirements:**".into());
    lines.push("- Output MUST be a valid Python list".into());
    lines.push(format!("- {plural} MUST be separated by commas"));
    lines.push(String::new());
    lines.push("**Output format:**".into());
    let placeholder = render_group(task, |_| "...".into());
    lines.push(format!(
        "[{placeholder}, {placeholder}, ..., {placeholder}]"
    ));
    lines.push(String::new());

    if shots > 0 {
        lines.push("### Examples:".into());
        lines.push(String::new());
        for (review, quads) in example_quads().into_iter().take(shots) {
            let units = derive_subtask_gold(&quads, task);
            let output = serialize_units(&units, task).expect("built-in example units are valid");
            lines.push(format!("Input: \"{review}\""));
            lines.push(format!("Output: {output}"));
            lines.push(String::new());
        }
    }
    lines.push("### Input:".into());
    lines.push("```<review text entry>```".into());
    let mut prompt = lines.join("\n");
    prompt.push('\n');
    prompt
}

//! Synthetic boundary-variation study of the span threshold schedule.
//!
//! The input text is the 50 tokens `a1 … a50`. For each gold span
//! `a1 … aL` (L = 1..10) three kinds of variation are generated: extending
//! the span by n following tokens (n = 1..20), dropping its last n tokens
//! (n = 1..L-1) and shifting the window right by n tokens while keeping its
//! length (n = 1..L-1, so that some overlap remains). One exact copy per
//! gold length completes the 300 cases.

use std::fmt;
use std::io;

use serde::Serialize;

use crate::diagnostics::round2;
use crate::model::FtsConfig;
use crate::textsim::{fts_score, passes};

pub const UNIVERSE_SIZE: usize = 50;
pub const MAX_GOLD_LEN: usize = 10;
pub const MAX_OVER: usize = 20;
pub const MAX_SHIFT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Exact,
    Over,
    Under,
    Shift,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Exact => "exact",
            Scenario::Over => "over",
            Scenario::Under => "under",
            Scenario::Shift => "shift",
        })
    }
}

/// Which shift magnitudes are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftRange {
    /// n = 1..min(10, L-1): only shifts that keep some overlap with gold.
    #[default]
    Overlapping,
    /// n = 1..10 regardless of overlap.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimCase {
    pub scenario: Scenario,
    pub gold_len: usize,
    pub n: usize,
    pub gold: Vec<String>,
    pub pred: Vec<String>,
}

fn window(start: usize, len: usize) -> Vec<String> {
    (start..start + len).map(|i| format!("a{i}")).collect()
}

/// `a1 a2 … a50`.
pub fn input_text() -> String {
    window(1, UNIVERSE_SIZE).join(" ")
}

pub fn generate_cases(shift_range: ShiftRange) -> Vec<SimCase> {
    let mut cases = Vec::new();
    for gold_len in 1..=MAX_GOLD_LEN {
        let gold = window(1, gold_len);
        let case = |scenario, n, pred| SimCase {
            scenario,
            gold_len,
            n,
            gold: gold.clone(),
            pred,
        };
        cases.push(case(Scenario::Exact, 0, gold.clone()));
        for n in 1..=MAX_OVER {
            cases.push(case(Scenario::Over, n, window(1, gold_len + n)));
        }
        for n in 1..gold_len {
            cases.push(case(Scenario::Under, n, window(1, gold_len - n)));
        }
        let max_shift = match shift_range {
            ShiftRange::Overlapping => MAX_SHIFT.min(gold_len - 1),
            ShiftRange::Full => MAX_SHIFT,
        };
        for n in 1..=max_shift {
            cases.push(case(Scenario::Shift, n, window(1 + n, gold_len)));
        }
    }
    debug_assert!(cases
        .iter()
        .flat_map(|c| c.gold.iter().chain(&c.pred))
        .all(|t| t[1..]
            .parse::<usize>()
            .is_ok_and(|i| (1..=UNIVERSE_SIZE).contains(&i))));
    cases
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ScenarioStats {
    /// Smallest and largest accepted n, if any.
    pub accepted_range: Option<(usize, usize)>,
    pub total: usize,
    pub accepted: usize,
}

impl ScenarioStats {
    fn record(&mut self, n: usize, accepted: bool) {
        self.total += 1;
        if accepted {
            self.accepted += 1;
            self.accepted_range = Some(match self.accepted_range {
                Some((lo, hi)) => (lo.min(n), hi.max(n)),
                None => (n, n),
            });
        }
    }

    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.accepted as f64 / self.total as f64
        }
    }

    /// `-`, `n` or `lo-hi`.
    pub fn range_label(&self) -> String {
        match self.accepted_range {
            None => "-".into(),
            Some((lo, hi)) if lo == hi => lo.to_string(),
            Some((lo, hi)) => format!("{lo}-{hi}"),
        }
    }

    fn merge(&mut self, other: &ScenarioStats) {
        self.total += other.total;
        self.accepted += other.accepted;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub gold_len: usize,
    pub threshold: f64,
    pub over: ScenarioStats,
    pub under: ScenarioStats,
    pub shift: ScenarioStats,
    /// Exact copies scored below threshold (always 0 for a valid schedule).
    pub exact_rejected: usize,
}

/// Acceptance counts per gold length and scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationTable {
    pub rows: Vec<SimRow>,
    pub case_count: usize,
}

impl SimulationTable {
    pub fn totals(&self) -> (ScenarioStats, ScenarioStats, ScenarioStats) {
        let mut totals = (
            ScenarioStats::default(),
            ScenarioStats::default(),
            ScenarioStats::default(),
        );
        for row in &self.rows {
            totals.0.merge(&row.over);
            totals.1.merge(&row.under);
            totals.2.merge(&row.shift);
        }
        totals
    }

    pub const CSV_HEADER: [&'static str; 14] = [
        "gold_len",
        "threshold",
        "over_n_range",
        "over_n",
        "over_a",
        "over_a_n",
        "under_n_range",
        "under_n",
        "under_a",
        "under_a_n",
        "shift_n_range",
        "shift_n",
        "shift_a",
        "shift_a_n",
    ];

    /// One row per gold length plus a `TOTAL` row; ratios to two decimals.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(Self::CSV_HEADER)?;
        let stats_fields = |s: &ScenarioStats, range: String| {
            [
                range,
                s.total.to_string(),
                s.accepted.to_string(),
                format!("{:.2}", round2(s.ratio())),
            ]
        };
        for row in &self.rows {
            let mut record = vec![row.gold_len.to_string(), format!("{}", row.threshold)];
            for s in [&row.over, &row.under, &row.shift] {
                record.extend(stats_fields(s, s.range_label()));
            }
            writer.write_record(&record)?;
        }
        let (over, under, shift) = self.totals();
        let mut record = vec!["TOTAL".to_string(), "-".to_string()];
        for s in [&over, &under, &shift] {
            record.extend(stats_fields(s, "-".into()));
        }
        writer.write_record(&record)?;
        writer.flush()?;
        Ok(())
    }
}

/// Scores every generated case and tabulates acceptances.
pub fn run_simulation(config: &FtsConfig, shift_range: ShiftRange) -> SimulationTable {
    let input = input_text();
    let cases = generate_cases(shift_range);
    let mut rows: Vec<SimRow> = (1..=MAX_GOLD_LEN)
        .map(|gold_len| SimRow {
            gold_len,
            threshold: 0.0,
            over: ScenarioStats::default(),
            under: ScenarioStats::default(),
            shift: ScenarioStats::default(),
            exact_rejected: 0,
        })
        .collect();
    for case in &cases {
        let score = fts_score(&case.gold.join(" "), &case.pred.join(" "), &input, config);
        let threshold = config.threshold_for(score.gold_len);
        let accepted = score.score > 0.0 && passes(score.score, threshold);
        let row = &mut rows[case.gold_len - 1];
        row.threshold = threshold;
        match case.scenario {
            Scenario::Exact => row.exact_rejected += usize::from(!accepted),
            Scenario::Over => row.over.record(case.n, accepted),
            Scenario::Under => row.under.record(case.n, accepted),
            Scenario::Shift => row.shift.record(case.n, accepted),
        }
    }
    SimulationTable {
        rows,
        case_count: cases.len(),
    }
}

/// Expected `(n-range, N, A)` for one scenario of a row.
pub type ExpectedStats = (&'static str, usize, usize);

/// Expected outcome with the default configuration, per gold length 1..10:
/// over, under and shift.
pub const EXPECTED_ACCEPTANCE: [[ExpectedStats; 3]; 10] = [
    [("1-2", 20, 2), ("-", 0, 0), ("-", 0, 0)],
    [("1-4", 20, 4), ("1", 1, 1), ("1", 1, 1)],
    [("1-4", 20, 4), ("1", 2, 1), ("1", 2, 1)],
    [("1-5", 20, 5), ("1-2", 3, 2), ("1", 3, 1)],
    [("1-4", 20, 4), ("1-2", 4, 2), ("1", 4, 1)],
    [("1-5", 20, 5), ("1-2", 5, 2), ("1", 5, 1)],
    [("1-6", 20, 6), ("1-3", 6, 3), ("1-2", 6, 2)],
    [("1-6", 20, 6), ("1-3", 7, 3), ("1-2", 7, 2)],
    [("1-7", 20, 7), ("1-4", 8, 4), ("1-2", 8, 2)],
    [("1-8", 20, 8), ("1-4", 9, 4), ("1-3", 9, 3)],
];

/// Expected `(N, A)` totals for over, under and shift.
pub const EXPECTED_TOTALS: [(usize, usize); 3] = [(200, 51), (45, 22), (45, 14)];

/// Compares a table with the expected outcome; returns one message per
/// disagreement.
pub fn check_against_expected(table: &SimulationTable) -> Vec<String> {
    let mut problems = Vec::new();
    if table.rows.len() != EXPECTED_ACCEPTANCE.len() {
        problems.push(format!(
            "expected {} rows, got {}",
            EXPECTED_ACCEPTANCE.len(),
            table.rows.len()
        ));
        return problems;
    }
    for (row, expected) in table.rows.iter().zip(EXPECTED_ACCEPTANCE) {
        for ((name, got), (range, total, accepted)) in [
            ("over", &row.over),
            ("under", &row.under),
            ("shift", &row.shift),
        ]
        .into_iter()
        .zip(expected)
        {
            let actual = (got.range_label(), got.total, got.accepted);
            if actual != (range.to_string(), total, accepted) {
                problems.push(format!(
                    "gold_len {} {name}: expected range {range} N={total} A={accepted}, got range {} N={} A={}",
                    row.gold_len, actual.0, actual.1, actual.2
                ));
            }
        }
        if row.exact_rejected > 0 {
            problems.push(format!("gold_len {}: exact copy rejected", row.gold_len));
        }
    }
    let (over, under, shift) = table.totals();
    for ((name, got), (total, accepted)) in [("over", over), ("under", under), ("shift", shift)]
        .into_iter()
        .zip(EXPECTED_TOTALS)
    {
        if (got.total, got.accepted) != (total, accepted) {
            problems.push(format!(
                "{name} total: expected {accepted}/{total}, got {}/{}",
                got.accepted, got.total
            ));
        }
    }
    problems
}

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use csv::StringRecord;

use super::{DerivedTrial, Framing, GameTrial, PreviousOutcome, Response};
use crate::error::{Error, Result};

/// Header of the canonical trial CSV, in order.
pub const CSV_COLUMNS: [&str; 13] = [
    "subject_id",
    "block_id",
    "trial_index",
    "initial_amount",
    "win_prob",
    "framing",
    "time_limit",
    "need_level",
    "current_score",
    "sure_amount",
    "previous_outcome",
    "is_catch",
    "response",
];

/// Validated trials of all complete subjects plus the ids of subjects that
/// were dropped because at least one of their rows lacked a response.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialSet {
    pub trials: Vec<GameTrial>,
    pub dropped_subjects: Vec<String>,
}

impl TrialSet {
    /// Subject ids in sorted order.
    pub fn subjects(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.trials.iter().map(|t| t.subject_id.as_str()).collect();
        set.into_iter().map(str::to_owned).collect()
    }

    /// Trials of one subject, in (block, trial_index) order.
    pub fn subject_trials(&self, subject: &str) -> Vec<GameTrial> {
        self.trials
            .iter()
            .filter(|t| t.subject_id == subject)
            .cloned()
            .collect()
    }
}

/// Loads the canonical trial CSV.
///
/// Rows are validated, sorted by (subject, block, trial_index), and any
/// subject with a missing response is removed whole and listed in
/// [`TrialSet::dropped_subjects`].
pub fn load_trials(path: impl AsRef<Path>) -> Result<TrialSet> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let trials = read_trials(BufReader::new(file))?;
    if trials.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    Ok(drop_incomplete(trials))
}

/// Parses and validates trial rows from any reader, keeping every row
/// (including those without a response) sorted by (subject, block, trial_index).
pub fn read_trials<R: Read>(reader: R) -> Result<Vec<GameTrial>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);

    let header = rdr.headers()?.clone();
    if header.len() != CSV_COLUMNS.len()
        || header.iter().zip(CSV_COLUMNS).any(|(got, want)| got != want)
    {
        return Err(Error::MalformedRow {
            line: 1,
            reason: format!(
                "header must be `{}`, found `{}`",
                CSV_COLUMNS.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut trials = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let trial = parse_record(&record, line)?;
        trial.validate()?;
        trials.push(trial);
    }

    trials.sort_by(|a, b| {
        a.subject_id
            .cmp(&b.subject_id)
            .then(a.block_id.cmp(&b.block_id))
            .then(a.trial_index.cmp(&b.trial_index))
    });
    for pair in trials.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.subject_id == b.subject_id
            && a.block_id == b.block_id
            && a.trial_index == b.trial_index
        {
            return Err(Error::invariant(
                format!("subject {} block {}", a.subject_id, a.block_id),
                format!("duplicate trial_index {}", a.trial_index),
            ));
        }
    }
    Ok(trials)
}

fn drop_incomplete(trials: Vec<GameTrial>) -> TrialSet {
    let incomplete: BTreeSet<String> = trials
        .iter()
        .filter(|t| t.response == Response::Missing)
        .map(|t| t.subject_id.clone())
        .collect();
    let trials = trials
        .into_iter()
        .filter(|t| !incomplete.contains(&t.subject_id))
        .collect();
    TrialSet {
        trials,
        dropped_subjects: incomplete.into_iter().collect(),
    }
}

fn parse_record(record: &StringRecord, line: usize) -> Result<GameTrial> {
    if record.len() != CSV_COLUMNS.len() {
        return Err(Error::MalformedRow {
            line,
            reason: format!(
                "expected {} columns, found {}",
                CSV_COLUMNS.len(),
                record.len()
            ),
        });
    }
    let field = |i: usize| record.get(i).unwrap_or("");
    let malformed = |col: usize, what: &str| Error::MalformedRow {
        line,
        reason: format!("column `{}`: {what} (got `{}`)", CSV_COLUMNS[col], field(col)),
    };
    let number = |col: usize| -> Result<f64> {
        field(col)
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| malformed(col, "expected a finite number"))
    };
    let integer = |col: usize| -> Result<u32> {
        field(col)
            .parse::<u32>()
            .map_err(|_| malformed(col, "expected a non-negative integer"))
    };

    let subject_id = field(0).to_owned();
    if subject_id.is_empty() {
        return Err(malformed(0, "subject id must not be empty"));
    }
    let framing = match field(5).to_ascii_lowercase().as_str() {
        "gain" => Framing::Gain,
        "loss" => Framing::Loss,
        _ => return Err(malformed(5, "expected `gain` or `loss`")),
    };
    let current_score = match field(8) {
        "" => None,
        _ => Some(number(8)?),
    };
    let previous_outcome = match field(10).to_ascii_lowercase().as_str() {
        "" => None,
        "won" => Some(PreviousOutcome::Won),
        "lost" => Some(PreviousOutcome::Lost),
        "sure" => Some(PreviousOutcome::Sure),
        "none" => Some(PreviousOutcome::Absent),
        _ => return Err(malformed(10, "expected won, lost, sure, none or empty")),
    };
    let is_catch = match field(11) {
        "0" => false,
        "1" => true,
        _ => return Err(malformed(11, "expected 0 or 1")),
    };
    let response = match field(12).to_ascii_lowercase().as_str() {
        "" => Response::Missing,
        "gamble" => Response::Gamble,
        "sure" => Response::Sure,
        _ => return Err(malformed(12, "expected gamble, sure or empty")),
    };

    Ok(GameTrial {
        subject_id,
        block_id: integer(1)?,
        trial_index: integer(2)?,
        initial_amount: number(3)?,
        win_prob: number(4)?,
        framing,
        time_limit: number(6)?,
        need_level: number(7)?,
        current_score,
        sure_amount: number(9)?,
        previous_outcome,
        is_catch,
        response,
    })
}

/// Writes trials in the canonical CSV layout.
pub fn write_trials<W: Write>(writer: W, trials: &[GameTrial]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(CSV_COLUMNS)?;
    for t in trials {
        wtr.write_record([
            t.subject_id.clone(),
            t.block_id.to_string(),
            t.trial_index.to_string(),
            t.initial_amount.to_string(),
            t.win_prob.to_string(),
            t.framing.as_str().to_owned(),
            t.time_limit.to_string(),
            t.need_level.to_string(),
            t.current_score.map(|s| s.to_string()).unwrap_or_default(),
            t.sure_amount.to_string(),
            t.previous_outcome
                .map(|p| p.as_str().to_owned())
                .unwrap_or_default(),
            if t.is_catch { "1" } else { "0" }.to_owned(),
            t.response.as_str().to_owned(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// Header of the flat feature matrix: the trial fields without the
/// response, then the derived features and the 0/1 response label.
pub const FEATURE_COLUMNS: [&str; 16] = [
    "subject_id",
    "block_id",
    "trial_index",
    "initial_amount",
    "win_prob",
    "framing",
    "time_limit",
    "need_level",
    "current_score",
    "sure_amount",
    "previous_outcome",
    "is_catch",
    "std",
    "need_gap",
    "previous_indicator",
    "chose_gamble",
];

/// Writes one feature row per derived trial. `chose_gamble` is empty for a
/// trial without a response.
pub fn write_features<W: Write>(writer: W, trials: &[DerivedTrial]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(FEATURE_COLUMNS)?;
    for d in trials {
        let t = d.trial();
        wtr.write_record([
            t.subject_id.clone(),
            t.block_id.to_string(),
            t.trial_index.to_string(),
            t.initial_amount.to_string(),
            t.win_prob.to_string(),
            t.framing.as_str().to_owned(),
            t.time_limit.to_string(),
            t.need_level.to_string(),
            d.current_score().to_string(),
            t.sure_amount.to_string(),
            d.previous_outcome().as_str().to_owned(),
            if t.is_catch { "1" } else { "0" }.to_owned(),
            d.std().to_string(),
            d.need_gap().to_string(),
            d.previous_outcome().indicator().to_string(),
            d.response()
                .choice()
                .map(|c| c.label().to_string())
                .unwrap_or_default(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

//! Scoring of model predictions, accuracy shifts between base hypotheses and
//! probes, report tables, and few-shot prompts for external models.

#[cfg(feature = "model-client")]
mod client;
mod prompt;
mod report;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Hypothesis, Label};
use crate::probegen::{Level, Probe, ReasoningType};

#[cfg(feature = "model-client")]
pub use client::ModelClient;
pub use prompt::{build_prompt, PromptSpec, Shot, DEFAULT_INSTRUCTION};
pub use report::{read_score_table, render_csv, render_text};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("duplicate prediction for {0:?}")]
    DuplicatePrediction(String),
    #[error("gold set is empty")]
    EmptyGoldSet,
    #[error("no baseline scores for {reasoning_type} (flip={flip})")]
    MissingBaseline { reasoning_type: ReasoningType, flip: bool },
    #[error("prompt needs {needed} shots, {available} available")]
    InsufficientShots { needed: usize, available: usize },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("model client: {0}")]
    Client(String),
}

/// A model answer mapped onto the two labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictedLabel {
    Entail,
    Contradict,
    Unparseable,
}

impl PredictedLabel {
    pub fn matches(self, gold: Label) -> bool {
        matches!(
            (self, gold),
            (PredictedLabel::Entail, Label::Entail) | (PredictedLabel::Contradict, Label::Contradict)
        )
    }
}

const ENTAIL_PREFIXES: [&str; 3] = ["entail", "support", "true"];
const CONTRADICT_PREFIXES: [&str; 4] = ["contradict", "refute", "false", "not entail"];

/// Case-insensitive synonym and prefix matching of a raw model answer.
pub fn normalize_label(raw: &str) -> PredictedLabel {
    let s = raw.trim().trim_start_matches(|c: char| !c.is_alphanumeric()).to_lowercase();
    let first: String = s.chars().take_while(|c| c.is_alphabetic()).collect();
    if CONTRADICT_PREFIXES.iter().any(|p| s.starts_with(p)) || first == "no" {
        PredictedLabel::Contradict
    } else if ENTAIL_PREFIXES.iter().any(|p| s.starts_with(p)) || first == "yes" {
        PredictedLabel::Entail
    } else {
        PredictedLabel::Unparseable
    }
}

/// One prediction line: `{"item_id": ..., "label": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub item_id: String,
    #[serde(rename = "label")]
    pub raw: String,
    #[serde(skip)]
    pub normalized: Option<PredictedLabel>,
}

impl PredictionRecord {
    pub fn new(item_id: impl Into<String>, raw: impl Into<String>) -> Self {
        let raw = raw.into();
        PredictionRecord { item_id: item_id.into(), normalized: Some(normalize_label(&raw)), raw }
    }

    pub fn label(&self) -> PredictedLabel {
        self.normalized.unwrap_or_else(|| normalize_label(&self.raw))
    }
}

/// Parses JSON Lines predictions; `path` only labels errors.
pub fn parse_predictions(text: &str, path: &Path) -> Result<Vec<PredictionRecord>, EvalError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || crate::corpus::is_header_line(line) {
            continue;
        }
        let r: PredictionRecord = serde_json::from_str(line).map_err(|e| EvalError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(PredictionRecord::new(r.item_id, r.raw));
    }
    Ok(out)
}

pub fn load_predictions(path: &Path) -> Result<Vec<PredictionRecord>, EvalError> {
    let text = std::fs::read_to_string(path).map_err(|source| EvalError::Io { path: path.to_path_buf(), source })?;
    parse_predictions(&text, path)
}

/// Accuracy over a gold set, in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub total: usize,
    pub correct: usize,
    pub unparseable: usize,
    /// Gold items without a prediction; they count as incorrect.
    pub missing: usize,
    pub accuracy: f64,
}

/// Scores predictions against gold labels. Unparseable and missing
/// predictions count as incorrect; predictions for other ids are ignored.
pub fn score(predictions: &[PredictionRecord], gold: &[(String, Label)]) -> Result<Score, EvalError> {
    if gold.is_empty() {
        return Err(EvalError::EmptyGoldSet);
    }
    let mut by_id: HashMap<&str, PredictedLabel> = HashMap::with_capacity(predictions.len());
    for p in predictions {
        if by_id.insert(&p.item_id, p.label()).is_some() {
            return Err(EvalError::DuplicatePrediction(p.item_id.clone()));
        }
    }
    let mut s = Score { total: gold.len(), correct: 0, unparseable: 0, missing: 0, accuracy: 0.0 };
    for (id, label) in gold {
        match by_id.get(id.as_str()) {
            None => s.missing += 1,
            Some(PredictedLabel::Unparseable) => s.unparseable += 1,
            Some(p) if p.matches(*label) => s.correct += 1,
            Some(_) => {}
        }
    }
    s.accuracy = s.correct as f64 / s.total as f64 * 100.0;
    Ok(s)
}

/// Reasoning type and flip flag of a probe group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupKey {
    pub reasoning_type: ReasoningType,
    pub flip: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupScore {
    pub key: GroupKey,
    pub n: usize,
    pub accuracy: f64,
}

/// One line of the shift report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub reasoning_type: ReasoningType,
    pub flip: bool,
    pub n_base: usize,
    pub n_probe: usize,
    pub acc_base: f64,
    pub acc_probe: f64,
    /// Relative change in percent; undefined when the base accuracy is zero.
    pub shift_pct: Option<f64>,
}

impl EvalRow {
    pub fn level(&self) -> Level {
        self.reasoning_type.level()
    }
}

/// Relative accuracy change `(probe - base) / base * 100`.
pub fn shift_pct(acc_base: f64, acc_probe: f64) -> Option<f64> {
    (acc_base > 0.0).then(|| (acc_probe - acc_base) / acc_base * 100.0)
}

/// Pairs probe groups with their baselines, ordered by level, then flip,
/// then type.
pub fn shift_report(base: &[GroupScore], probe: &[GroupScore]) -> Result<Vec<EvalRow>, EvalError> {
    let base: HashMap<GroupKey, &GroupScore> = base.iter().map(|g| (g.key, g)).collect();
    let mut rows = Vec::with_capacity(probe.len());
    for p in probe {
        let b = base
            .get(&p.key)
            .ok_or(EvalError::MissingBaseline { reasoning_type: p.key.reasoning_type, flip: p.key.flip })?;
        rows.push(EvalRow {
            reasoning_type: p.key.reasoning_type,
            flip: p.key.flip,
            n_base: b.n,
            n_probe: p.n,
            acc_base: b.accuracy,
            acc_probe: p.accuracy,
            shift_pct: shift_pct(b.accuracy, p.accuracy),
        });
    }
    rows.sort_by_key(|r| (r.level(), r.flip, r.reasoning_type));
    Ok(rows)
}

/// Rows of a full evaluation plus the number of unanswered items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub rows: Vec<EvalRow>,
    pub missing_base: usize,
    pub missing_probe: usize,
}

/// Scores each (type, flip) probe group against the base hypotheses it was
/// generated from.
pub fn evaluate(
    probes: &[Probe],
    hypotheses: &[Hypothesis],
    base_predictions: &[PredictionRecord],
    probe_predictions: &[PredictionRecord],
) -> Result<Evaluation, EvalError> {
    let labels: HashMap<&str, Label> = hypotheses.iter().map(|h| (h.id.as_str(), h.label)).collect();
    let mut groups: BTreeMap<GroupKey, Vec<&Probe>> = BTreeMap::new();
    for p in probes {
        groups.entry(GroupKey { reasoning_type: p.reasoning_type, flip: p.flip }).or_default().push(p);
    }
    let (mut base_scores, mut probe_scores) = (Vec::new(), Vec::new());
    let (mut missing_base, mut missing_probe) = (0, 0);
    for (key, ps) in groups {
        let mut seen = HashSet::new();
        let base_gold: Vec<(String, Label)> = ps
            .iter()
            .filter(|p| seen.insert(p.base_id.as_str()))
            .filter_map(|p| labels.get(p.base_id.as_str()).map(|l| (p.base_id.clone(), *l)))
            .collect();
        if base_gold.is_empty() {
            return Err(EvalError::MissingBaseline { reasoning_type: key.reasoning_type, flip: key.flip });
        }
        let probe_gold: Vec<(String, Label)> = ps.iter().map(|p| (p.probe_id.clone(), p.expected_label)).collect();
        let b = score(base_predictions, &base_gold)?;
        let q = score(probe_predictions, &probe_gold)?;
        missing_base += b.missing;
        missing_probe += q.missing;
        base_scores.push(GroupScore { key, n: b.total, accuracy: b.accuracy });
        probe_scores.push(GroupScore { key, n: q.total, accuracy: q.accuracy });
    }
    Ok(Evaluation { rows: shift_report(&base_scores, &probe_scores)?, missing_base, missing_probe })
}

//! Probes and the edits that produce them.

use serde::{Deserialize, Serialize};

use super::{Level, ReasoningType};
use crate::corpus::{CellRef, Label, Relation, SortDirection, Table};
use crate::numparse::{NumericValue, Span};

/// One replacement: a span of the base hypothesis, or a table cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<CellRef>,
    pub old: String,
    pub new: String,
    pub rule: String,
}

impl EditRecord {
    pub fn text(span: Span, base: &str, new: impl Into<String>, rule: impl Into<String>) -> EditRecord {
        EditRecord {
            span: Some(span),
            cell: None,
            old: span.slice(base).to_string(),
            new: new.into(),
            rule: rule.into(),
        }
    }

    pub fn cell(at: CellRef, old: impl Into<String>, new: impl Into<String>, rule: impl Into<String>) -> EditRecord {
        EditRecord { span: None, cell: Some(at), old: old.into(), new: new.into(), rule: rule.into() }
    }
}

/// Facts a generator relied on, kept so that validation can re-check them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProbeDetail {
    Scale {
        from_unit: String,
        to_unit: String,
        base_value: NumericValue,
        stated: NumericValue,
        /// Multiplicative error applied to a flipped conversion.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        error_factor: Option<NumericValue>,
    },
    Comparison {
        table_value: NumericValue,
        relation_before: Relation,
        relation_after: Relation,
        threshold_before: NumericValue,
        threshold_after: NumericValue,
    },
    Approximation {
        value: NumericValue,
        correct: NumericValue,
        stated: NumericValue,
        granularity_exp: i32,
    },
    Range {
        value: NumericValue,
        low: NumericValue,
        high: NumericValue,
    },
    Sorting {
        column: usize,
        direction: SortDirection,
        values: Vec<NumericValue>,
        stated: NumericValue,
        rank_before: u64,
        rank_after: u64,
        /// Element of the sorted column at `rank_after`.
        selected: NumericValue,
    },
    Arithmetic {
        computed: NumericValue,
        stated: NumericValue,
        /// Exponent of the last digit the stated result shows.
        precision_exp: i32,
    },
    WordProblem {
        column: usize,
        values: Vec<NumericValue>,
        original: NumericValue,
        replacement: NumericValue,
    },
    Counterfactual {
        table_id: String,
        swapped: (CellRef, CellRef),
        /// Hypothesis mentions whose link pointed at a swapped cell.
        broken_links: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub probe_id: String,
    pub base_id: String,
    #[serde(rename = "type")]
    pub reasoning_type: ReasoningType,
    pub level: Level,
    pub flip: bool,
    pub expected_label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_ref: Option<String>,
    pub edits: Vec<EditRecord>,
    pub seed: u64,
    pub sub_mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<ProbeDetail>,
}

impl Probe {
    pub fn probe_id(base: &str, rt: ReasoningType, sub_mode: &str, occ: usize) -> String {
        format!("{base}:{rt}:{sub_mode}:{occ}")
    }
}

/// Edits must be text edits, sorted and disjoint.
fn check_text_edits(edits: &[EditRecord]) -> Result<Vec<Span>, String> {
    let mut spans = Vec::with_capacity(edits.len());
    let mut last_end = 0;
    for (i, e) in edits.iter().enumerate() {
        let s = e.span.ok_or_else(|| format!("edit {i} has no text span"))?;
        if s.start < last_end || s.start > s.end {
            return Err(format!("edit {i} overlaps or precedes the previous edit"));
        }
        last_end = s.end;
        spans.push(s);
    }
    Ok(spans)
}

/// Applies text edits to `base`, left to right.
pub fn apply_edits(base: &str, edits: &[EditRecord]) -> Result<String, String> {
    let spans = check_text_edits(edits)?;
    let mut out = String::with_capacity(base.len());
    let mut pos = 0;
    for (s, e) in spans.iter().zip(edits) {
        if s.end > base.len() || !base.is_char_boundary(s.start) || !base.is_char_boundary(s.end) {
            return Err(format!("span {s:?} is outside the text"));
        }
        if base[s.start..s.end] != e.old {
            return Err(format!("span {s:?} reads {:?}, edit expects {:?}", &base[s.start..s.end], e.old));
        }
        out.push_str(&base[pos..s.start]);
        out.push_str(&e.new);
        pos = s.end;
    }
    out.push_str(&base[pos..]);
    Ok(out)
}

/// Undoes text edits on a probe text, last edit first, and returns the base.
pub fn revert_edits(probe: &str, edits: &[EditRecord]) -> Result<String, String> {
    let spans = check_text_edits(edits)?;
    // Position of each edit in the probe text.
    let mut shift: isize = 0;
    let mut located = Vec::with_capacity(edits.len());
    for (s, e) in spans.iter().zip(edits) {
        let start = (s.start as isize + shift) as usize;
        located.push((start, start + e.new.len()));
        shift += e.new.len() as isize - e.old.len() as isize;
    }
    let mut text = probe.to_string();
    for ((start, end), e) in located.into_iter().zip(edits).rev() {
        if end > text.len() || text.get(start..end) != Some(e.new.as_str()) {
            return Err(format!("probe text does not contain {:?} at {start}", e.new));
        }
        text.replace_range(start..end, &e.old);
    }
    Ok(text)
}

/// Undoes cell edits on a counterfactual table.
pub fn revert_table_edits(table: &Table, edits: &[EditRecord]) -> Result<Table, String> {
    let mut t = table.clone();
    for (i, e) in edits.iter().enumerate().rev() {
        let at = e.cell.ok_or_else(|| format!("edit {i} has no cell"))?;
        let cell = t.rows.get_mut(at.row).and_then(|r| r.get_mut(at.col)).ok_or_else(|| format!("no cell {at}"))?;
        if cell.raw != e.new {
            return Err(format!("cell {at} reads {:?}, edit expects {:?}", cell.raw, e.new));
        }
        *cell = e.old.as_str().into();
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_and_revert() {
        let base = "Born in 1986, Nadal is age 37 currently.";
        let edits = vec![
            EditRecord::text(Span::new(8, 12), base, "nineteen eighty six", "t"),
            EditRecord::text(Span::new(27, 29), base, "thirty seven", "t"),
        ];
        let probe = apply_edits(base, &edits).unwrap();
        assert_eq!(probe, "Born in nineteen eighty six, Nadal is age thirty seven currently.");
        assert_eq!(revert_edits(&probe, &edits).unwrap(), base);
        assert!(revert_edits("something else entirely", &edits).is_err());
        let overlapping = vec![edits[1].clone(), edits[0].clone()];
        assert!(apply_edits(base, &overlapping).is_err());
    }
}

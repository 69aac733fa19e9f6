//! Reading and writing corpora: TNLI JSON Lines, table files and QA JSON Lines.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::recast::recast_qa_to_nli;
use super::types::{ArithMetadata, Dataset, Hypothesis, Label, Table};
use super::CorpusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    /// Hypotheses with labels.
    Tnli,
    /// Questions and answers, recast on load.
    Qa,
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tnli" => Ok(InputFormat::Tnli),
            "qa" => Ok(InputFormat::Qa),
            other => Err(format!("unknown input format {other:?} (expected tnli or qa)")),
        }
    }
}

/// One table-QA item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaRecord {
    pub id: String,
    pub table_id: String,
    pub question: String,
    pub answer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<ArithMetadata>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source: String,
}

fn read(path: &Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))
}

/// Key of the metadata record that may open a JSON Lines file.
pub const HEADER_KEY: &str = "header";

/// True for a `{"header": ...}` metadata line.
pub fn is_header_line(line: &str) -> bool {
    let t = line.trim_start();
    t.starts_with('{') && t[1..].trim_start().starts_with(&format!("\"{HEADER_KEY}\""))
}

fn parse_lines<T: serde::de::DeserializeOwned>(text: &str, path: &Path) -> Result<Vec<T>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || is_header_line(line) {
            continue;
        }
        let rec = serde_json::from_str(line).map_err(|e| CorpusError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

fn check_unique<'a>(ids: impl Iterator<Item = &'a str>) -> Result<(), CorpusError> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(CorpusError::DuplicateId(id.to_string()));
        }
    }
    Ok(())
}

fn check_arith(path: &Path, text: &str, id: &str, arith: Option<&ArithMetadata>) -> Result<(), CorpusError> {
    if let Some(a) = arith {
        a.validate().map_err(|e| CorpusError::Parse {
            path: path.to_path_buf(),
            line: line_of(text, id),
            msg: format!("record {id}: {e}"),
        })?;
    }
    Ok(())
}

/// 1-based line of the record with `id`, for error messages.
fn line_of(text: &str, id: &str) -> usize {
    let needle = format!("\"id\":\"{id}\"");
    let spaced = format!("\"id\": \"{id}\"");
    text.lines().position(|l| l.contains(&needle) || l.contains(&spaced)).map(|i| i + 1).unwrap_or(0)
}

/// TNLI JSON Lines: `{id, table_id, hypothesis, label}` per line.
pub fn parse_hypotheses(text: &str, path: &Path) -> Result<Vec<Hypothesis>, CorpusError> {
    let hyps: Vec<Hypothesis> = parse_lines(text, path)?;
    check_unique(hyps.iter().map(|h| h.id.as_str()))?;
    for h in &hyps {
        check_arith(path, text, &h.id, h.arith.as_ref())?;
    }
    Ok(hyps)
}

/// Tables as a JSON array or as JSON Lines.
pub fn parse_tables(text: &str, path: &Path) -> Result<Vec<Table>, CorpusError> {
    let tables: Vec<Table> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| CorpusError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            msg: e.to_string(),
        })?
    } else {
        parse_lines(text, path)?
    };
    check_unique(tables.iter().map(|t| t.id.as_str()))?;
    Ok(tables)
}

/// QA JSON Lines: `{id, table_id, question, answer, derivation?}` per line.
pub fn parse_qa(text: &str, path: &Path) -> Result<Vec<QaRecord>, CorpusError> {
    let recs: Vec<QaRecord> = parse_lines(text, path)?;
    check_unique(recs.iter().map(|r| r.id.as_str()))?;
    for r in &recs {
        check_arith(path, text, &r.id, r.derivation.as_ref())?;
    }
    Ok(recs)
}

pub fn load_tables(path: &Path) -> Result<Vec<Table>, CorpusError> {
    parse_tables(&read(path)?, path)
}

pub fn load_qa(path: &Path) -> Result<Vec<QaRecord>, CorpusError> {
    parse_qa(&read(path)?, path)
}

/// Loads hypotheses (recasting QA items, dropping unsupported questions) and
/// their tables, and checks that every table reference resolves.
pub fn load_dataset(hypotheses: &Path, tables: &Path, format: InputFormat) -> Result<Dataset, CorpusError> {
    let tables = load_tables(tables)?;
    let text = read(hypotheses)?;
    let hypotheses = match format {
        InputFormat::Tnli => parse_hypotheses(&text, hypotheses)?,
        InputFormat::Qa => parse_qa(&text, hypotheses)?
            .into_iter()
            .filter_map(|r| {
                let text = recast_qa_to_nli(&r.question, &r.answer).ok()?;
                Some(Hypothesis {
                    id: r.id,
                    table_id: r.table_id,
                    text,
                    label: Label::Entail,
                    source: r.source,
                    arith: r.derivation,
                })
            })
            .collect(),
    };
    let ds = Dataset { tables, hypotheses };
    check_refs(&ds)?;
    Ok(ds)
}

/// Every hypothesis must name a loaded table.
pub fn check_refs(ds: &Dataset) -> Result<(), CorpusError> {
    let index = ds.table_index();
    for h in &ds.hypotheses {
        if !index.contains_key(h.table_id.as_str()) {
            return Err(CorpusError::DanglingTableRef { hypothesis: h.id.clone(), table: h.table_id.clone() });
        }
    }
    Ok(())
}

fn write_lines<T: Serialize>(mut w: impl Write, items: &[T]) -> std::io::Result<()> {
    for it in items {
        serde_json::to_writer(&mut w, it)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_hypotheses(w: impl Write, hyps: &[Hypothesis]) -> std::io::Result<()> {
    write_lines(w, hyps)
}

pub fn write_tables(w: impl Write, tables: &[Table]) -> std::io::Result<()> {
    write_lines(w, tables)
}

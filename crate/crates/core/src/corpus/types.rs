//! Tables, hypotheses and the annotations attached to them.

use std::fmt;

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use super::CorpusError;
use crate::numparse::{NumberMention, NumericValue, Scanner, DIVISION_DIGITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    #[serde(alias = "entailment", alias = "Entail", alias = "ENTAIL")]
    Entail,
    #[serde(alias = "contradiction", alias = "Contradict", alias = "CONTRADICT", alias = "refuted")]
    Contradict,
}

impl Label {
    pub fn flipped(self) -> Label {
        match self {
            Label::Entail => Label::Contradict,
            Label::Contradict => Label::Entail,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Entail => "entail",
            Label::Contradict => "contradict",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// Key/value rows describing one entity.
    EntityInfobox,
    /// Header row plus records.
    RelationalGrid,
}

/// Zero-based (row, column) coordinate into `Table::rows`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellRef {
    pub row: usize,
    pub col: usize,
}

impl CellRef {
    pub fn new(row: usize, col: usize) -> Self {
        CellRef { row, col }
    }
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.row, self.col)
    }
}

/// A table cell; mentions are scanned on first use.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub struct Cell {
    pub raw: String,
    mentions: OnceLock<Vec<NumberMention>>,
}

impl Cell {
    pub fn new(raw: impl Into<String>) -> Self {
        Cell { raw: raw.into(), mentions: OnceLock::new() }
    }

    pub fn mentions(&self, scanner: &Scanner) -> &[NumberMention] {
        self.mentions.get_or_init(|| scanner.scan(&self.raw))
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw
    }
}

impl Eq for Cell {}

impl From<String> for Cell {
    fn from(raw: String) -> Self {
        Cell::new(raw)
    }
}

impl From<&str> for Cell {
    fn from(raw: &str) -> Self {
        Cell::new(raw)
    }
}

impl From<Cell> for String {
    fn from(c: Cell) -> Self {
        c.raw
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableRecord")]
pub struct Table {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(skip_serializing)]
    pub orientation: Orientation,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// On-disk table record: `{id, title, headers, rows}`.
#[derive(Deserialize)]
struct TableRecord {
    id: String,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    headers: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl TryFrom<TableRecord> for Table {
    type Error = CorpusError;

    fn try_from(r: TableRecord) -> Result<Self, Self::Error> {
        Table::new(r.id, r.title, r.headers, r.rows)
    }
}

impl Table {
    /// Builds a table, inferring the orientation: no headers means an infobox.
    pub fn new(
        id: impl Into<String>,
        title: Option<String>,
        headers: Vec<String>,
        rows: Vec<Vec<Cell>>,
    ) -> Result<Table, CorpusError> {
        let mut t = Table { id: id.into(), title, orientation: Orientation::RelationalGrid, headers, rows };
        t.orientation = t.inferred_orientation();
        t.check_shape()?;
        Ok(t)
    }

    pub fn inferred_orientation(&self) -> Orientation {
        if self.headers.is_empty() {
            Orientation::EntityInfobox
        } else {
            Orientation::RelationalGrid
        }
    }

    pub fn check_shape(&self) -> Result<(), CorpusError> {
        let arity = match self.orientation {
            Orientation::EntityInfobox => 2,
            Orientation::RelationalGrid => self.headers.len(),
        };
        for (i, r) in self.rows.iter().enumerate() {
            if r.len() != arity {
                return Err(CorpusError::Shape { table: self.id.clone(), row: i, found: r.len(), expected: arity });
            }
        }
        Ok(())
    }

    pub fn cell(&self, at: CellRef) -> Option<&Cell> {
        self.rows.get(at.row).and_then(|r| r.get(at.col))
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map(Vec::len).unwrap_or(self.headers.len())
    }

    /// Cells that carry facts: every cell of a grid, the value column of an infobox.
    pub fn value_cells(&self) -> impl Iterator<Item = (CellRef, &Cell)> {
        let infobox = self.orientation == Orientation::EntityInfobox;
        self.rows.iter().enumerate().flat_map(move |(r, row)| {
            row.iter()
                .enumerate()
                .filter(move |(c, _)| !infobox || *c == 1)
                .map(move |(c, cell)| (CellRef::new(r, c), cell))
        })
    }

    /// Column header (grid) or row key (infobox) naming the cell.
    pub fn cell_label(&self, at: CellRef) -> Option<&str> {
        match self.orientation {
            Orientation::RelationalGrid => self.headers.get(at.col).map(String::as_str),
            Orientation::EntityInfobox => self.cell(CellRef::new(at.row, 0)).map(|c| c.raw.as_str()),
        }
    }

    /// Single-line rendering: `title | key: value | key: value`.
    pub fn linearize(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if let Some(t) = &self.title {
            parts.push(t.clone());
        }
        match self.orientation {
            Orientation::EntityInfobox => {
                for r in &self.rows {
                    parts.push(format!("{}: {}", r[0].raw, r[1].raw));
                }
            }
            Orientation::RelationalGrid => {
                for (i, r) in self.rows.iter().enumerate() {
                    let fields: Vec<String> =
                        self.headers.iter().zip(r).map(|(h, c)| format!("{h}: {}", c.raw)).collect();
                    parts.push(format!("row {}: {}", i + 1, fields.join("; ")));
                }
            }
        }
        parts.join(" | ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    #[serde(alias = "+", alias = "sum", alias = "addition")]
    Add,
    #[serde(alias = "-", alias = "diff", alias = "difference", alias = "subtraction")]
    Subtract,
    #[serde(alias = "*", alias = "x", alias = "times", alias = "product", alias = "multiplication")]
    Multiply,
    #[serde(alias = "/", alias = "ratio", alias = "division")]
    Divide,
}

/// One operand of a derivation and the cell it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(NumericValue, usize, usize)", into = "(NumericValue, usize, usize)")]
pub struct Operand {
    pub value: NumericValue,
    pub cell: CellRef,
}

impl From<(NumericValue, usize, usize)> for Operand {
    fn from((value, row, col): (NumericValue, usize, usize)) -> Self {
        Operand { value, cell: CellRef::new(row, col) }
    }
}

impl From<Operand> for (NumericValue, usize, usize) {
    fn from(o: Operand) -> Self {
        (o.value, o.cell.row, o.cell.col)
    }
}

/// Annotated derivation of a numeric answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithMetadata {
    pub operands: Vec<Operand>,
    pub op: Operation,
    pub result: NumericValue,
}

/// Relative tolerance for results of a division.
pub const DIVIDE_TOLERANCE: f64 = 1e-9;

impl ArithMetadata {
    /// Folds the operands left to right with `op`.
    pub fn compute(&self) -> Result<NumericValue, CorpusError> {
        let (first, rest) = self.operands.split_first().ok_or(CorpusError::Arith("no operands".into()))?;
        if rest.is_empty() {
            return Err(CorpusError::Arith("an operation needs at least two operands".into()));
        }
        let mut acc = first.value.clone();
        for o in rest {
            acc = match self.op {
                Operation::Add => &acc + &o.value,
                Operation::Subtract => &acc - &o.value,
                Operation::Multiply => &acc * &o.value,
                Operation::Divide => acc
                    .div_with_digits(&o.value, DIVISION_DIGITS)
                    .ok_or_else(|| CorpusError::Arith("division by zero".into()))?,
            };
        }
        Ok(acc)
    }

    /// True when `value` is the result of the derivation (to 1e-9 for division).
    pub fn matches(&self, value: &NumericValue) -> Result<bool, CorpusError> {
        let c = self.compute()?;
        Ok(match self.op {
            Operation::Divide => c.relative_gap(value) <= DIVIDE_TOLERANCE,
            _ => &c == value,
        })
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.matches(&self.result)? {
            Ok(())
        } else {
            Err(CorpusError::Arith(format!(
                "{:?} of operands gives {}, not the annotated {}",
                self.op,
                self.compute()?,
                self.result
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub id: String,
    pub table_id: String,
    #[serde(rename = "hypothesis")]
    pub text: String,
    pub label: Label,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arith: Option<ArithMetadata>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    /// Equal values (dates on day, month and year).
    Exact,
    /// Equal after converting the cell value into the hypothesis unit.
    Converted,
    /// A year equal to the year of a dated cell.
    DateYear,
    /// Relative gap at most [`super::APPROXIMATE_GAP`].
    Approximate,
}

/// A hypothesis mention tied to the table cell mention that supports it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionLink {
    pub hyp_mention: usize,
    pub cell: CellRef,
    pub cell_mention: usize,
    pub kind: LinkKind,
    /// (from, to) unit ids of the conversion applied to the cell value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conversion: Option<(String, String)>,
}

impl MentionLink {
    pub fn is_approximate(&self) -> bool {
        self.kind == LinkKind::Approximate
    }
}

/// Tables plus hypotheses, as loaded from disk.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub tables: Vec<Table>,
    pub hypotheses: Vec<Hypothesis>,
}

impl Dataset {
    pub fn table(&self, id: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.id == id)
    }

    pub fn hypothesis(&self, id: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.id == id)
    }

    /// Map from table id to table.
    pub fn table_index(&self) -> std::collections::HashMap<&str, &Table> {
        self.tables.iter().map(|t| (t.id.as_str(), t)).collect()
    }
}

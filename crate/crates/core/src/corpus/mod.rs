//! Tabular NLI corpora: loading, QA recasting, mention linking and candidate
//! filtering.

mod link;
mod load;
mod recast;
mod tokens;
mod types;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use link::{
    extract_numeric_column, filter_candidates, has_trigger, link_mentions, link_scanned, linked_value, ColumnValues,
    SkippedCell,
};
pub use load::{
    check_refs, is_header_line, load_dataset, load_qa, load_tables, parse_hypotheses, parse_qa, parse_tables,
    write_hypotheses, write_tables, InputFormat, QaRecord, HEADER_KEY,
};
pub use recast::{recast_qa_to_nli, recast_traced, RecastTrace, RECAST_RULES};
pub use tokens::{
    match_case, PositionIndicator, ReferenceTokens, Relation, Resources, SignalMatch, SignalPair, SortDirection,
    SuperlativeGroup, BUNDLED_TOKENS,
};
pub use types::{
    ArithMetadata, Cell, CellRef, Dataset, Hypothesis, Label, LinkKind, MentionLink, Operand, Operation, Orientation,
    Table, DIVIDE_TOLERANCE,
};

/// Largest relative gap between a hypothesis value and a cell value that
/// still counts as an approximate link.
pub const APPROXIMATE_GAP: f64 = 0.15;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("table {table}: row {row} has {found} cells, expected {expected}")]
    Shape { table: String, row: usize, found: usize, expected: usize },
    #[error("arithmetic annotation: {0}")]
    Arith(String),
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("hypothesis {hypothesis} refers to missing table {table}")]
    DanglingTableRef { hypothesis: String, table: String },
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported question form: {0:?}")]
    UnsupportedQuestionForm(String),
    #[error("table {table}: column {col} has no numeric cells")]
    NoNumericCells { table: String, col: usize },
    #[error("table {table}: no column {col}")]
    ColumnOutOfRange { table: String, col: usize },
    #[error("resource file: {0}")]
    Resource(String),
}

impl CorpusError {
    pub fn io(path: &Path, source: std::io::Error) -> CorpusError {
        CorpusError::Io { path: path.to_path_buf(), source }
    }
}

//! Label-preserving and label-flipping probes for the eleven reasoning types,
//! with edit provenance and seeded determinism.

mod config;
mod context;
mod counterfactual;
mod generate;
mod number_sense;
mod probe;
mod representation;
mod structure;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{derive_seed, FlipPolicy, GenerationConfig, DEFAULT_SEED};
pub use context::GenContext;
pub use counterfactual::{admit_counterfactual, gen_counterfactual_table};
pub use generate::{count_probes, generate_all, generate_for, ProbeSet, SkipRecord, TypeCount};
pub use number_sense::{gen_approximation, gen_comparison, gen_range, gen_scale};
pub use probe::{apply_edits, revert_edits, revert_table_edits, EditRecord, Probe, ProbeDetail};
pub use representation::{gen_heterogeneous, gen_negative, gen_numeration};
pub use structure::{gen_arithmetic, gen_sorting, gen_wordproblem};
pub use validate::{validate_probe, validate_probes, ValidationReport, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    R1,
    R2,
    R3,
    R4,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasoningType {
    Numeration,
    Heterogeneous,
    Negative,
    Scale,
    Comparison,
    Approximation,
    Range,
    Sorting,
    Arithmetic,
    WordProblem,
    Counterfactual,
}

impl ReasoningType {
    pub const ALL: [ReasoningType; 11] = [
        ReasoningType::Numeration,
        ReasoningType::Heterogeneous,
        ReasoningType::Negative,
        ReasoningType::Scale,
        ReasoningType::Comparison,
        ReasoningType::Approximation,
        ReasoningType::Range,
        ReasoningType::Sorting,
        ReasoningType::Arithmetic,
        ReasoningType::WordProblem,
        ReasoningType::Counterfactual,
    ];

    pub fn level(self) -> Level {
        use ReasoningType::*;
        match self {
            Numeration | Heterogeneous | Negative => Level::R1,
            Scale | Comparison | Approximation | Range => Level::R2,
            Sorting | Arithmetic => Level::R3,
            WordProblem | Counterfactual => Level::R4,
        }
    }

    pub fn id(self) -> &'static str {
        use ReasoningType::*;
        match self {
            Numeration => "numeration",
            Heterogeneous => "heterogeneous",
            Negative => "negative",
            Scale => "scale",
            Comparison => "comparison",
            Approximation => "approximation",
            Range => "range",
            Sorting => "sorting",
            Arithmetic => "arithmetic",
            WordProblem => "word_problem",
            Counterfactual => "counterfactual",
        }
    }

    /// Whether the type defines label-flipping probes.
    pub fn has_flip(self) -> bool {
        self != ReasoningType::Range
    }
}

impl fmt::Display for ReasoningType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ReasoningType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let key = match key.as_str() {
            "wordproblem" | "word_problems" => "word_problem",
            "numbers" | "numerals" => "numeration",
            other => other,
        }
        .to_string();
        ReasoningType::ALL.into_iter().find(|t| t.id() == key).ok_or_else(|| format!("unknown reasoning type {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Preserve,
    Flip,
}

impl Mode {
    pub fn is_flip(self) -> bool {
        self == Mode::Flip
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("{0}: no applicable mention")]
    NoApplicableMention(ReasoningType),
    #[error("{0}: {1}")]
    Unsupported(ReasoningType, String),
    #[error("invalid generation config: {0}")]
    Config(String),
}

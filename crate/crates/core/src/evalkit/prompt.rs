//! Few-shot prompts over linearized tables.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::corpus::{Label, Table};

pub const DEFAULT_INSTRUCTION: &str = "Decide whether the hypothesis is entailed or contradicted by the table. \
Answer with \"entailed\" or \"contradicted\".";

/// A worked example taken from training data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shot {
    pub table: Table,
    pub hypothesis: String,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub instruction: String,
    /// Number of worked examples; zero gives a zero-shot prompt.
    pub k: usize,
    pub shots: Vec<Shot>,
}

impl Default for PromptSpec {
    fn default() -> Self {
        PromptSpec { instruction: DEFAULT_INSTRUCTION.into(), k: 2, shots: Vec::new() }
    }
}

fn answer(label: Label) -> &'static str {
    match label {
        Label::Entail => "entailed",
        Label::Contradict => "contradicted",
    }
}

fn item(out: &mut String, table: &Table, hypothesis: &str) {
    let _ = write!(out, "Table: {}\nHypothesis: {}\nAnswer:", table.linearize(), hypothesis);
}

/// Instruction, the first `k` shots, then the query with an open answer.
pub fn build_prompt(spec: &PromptSpec, table: &Table, hypothesis: &str) -> Result<String, EvalError> {
    if spec.shots.len() < spec.k {
        return Err(EvalError::InsufficientShots { needed: spec.k, available: spec.shots.len() });
    }
    let mut out = format!("{}\n\n", spec.instruction);
    for s in &spec.shots[..spec.k] {
        item(&mut out, &s.table, &s.hypothesis);
        let _ = write!(out, " {}\n\n", answer(s.label));
    }
    item(&mut out, table, hypothesis);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hulk() -> Table {
        let rows = vec![vec!["Directed by".into(), "Ang Lee".into()], vec!["Budget".into(), "$137 million".into()]];
        Table::new("hulk", Some("Hulk".into()), vec![], rows).unwrap()
    }

    #[test]
    fn shots_precede_the_query() {
        let t = hulk();
        let zero = PromptSpec { k: 0, ..Default::default() };
        let p = build_prompt(&zero, &t, "Hulk cost $137 million.").unwrap();
        assert_eq!(p.matches("Hypothesis:").count(), 1);
        assert!(p.contains("Table: Hulk | Directed by: Ang Lee"));
        assert!(p.ends_with("Hypothesis: Hulk cost $137 million.\nAnswer:"));

        let shot = |h: &str, l| Shot { table: t.clone(), hypothesis: h.into(), label: l };
        let mut two = PromptSpec { shots: vec![shot("Ang Lee directed Hulk.", Label::Entail)], ..Default::default() };
        assert!(matches!(build_prompt(&two, &t, "x"), Err(EvalError::InsufficientShots { needed: 2, available: 1 })));
        two.shots.push(shot("Hulk cost $10.", Label::Contradict));
        two.shots.push(shot("unused", Label::Entail));
        let p = build_prompt(&two, &t, "Hulk cost $137 million.").unwrap();
        assert_eq!(p.matches("Hypothesis:").count(), 3);
        assert!(!p.contains("unused"));
        assert!(p.contains("Answer: entailed\n\n") && p.contains("Answer: contradicted\n\n"));
    }
}

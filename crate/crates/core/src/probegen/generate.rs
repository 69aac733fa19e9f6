//! Runs every enabled generator over a corpus.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::context::GenContext;
use super::counterfactual::gen_counterfactual_table;
use super::number_sense::{gen_approximation, gen_comparison, gen_range, gen_scale};
use super::representation::{gen_heterogeneous, gen_negative, gen_numeration};
use super::structure::{gen_arithmetic, gen_sorting, gen_wordproblem};
use super::{GenerationConfig, Mode, Probe, ProbeError, ReasoningType};
use crate::corpus::{has_trigger, Dataset, Label, Resources, Table};

/// A generator that produced nothing for a hypothesis, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub hypothesis_id: String,
    #[serde(rename = "type")]
    pub reasoning_type: Option<ReasoningType>,
    pub flip: bool,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCount {
    #[serde(rename = "type")]
    pub reasoning_type: ReasoningType,
    pub preserve: usize,
    pub flip: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbeSet {
    pub probes: Vec<Probe>,
    /// Edited tables referenced by counterfactual probes.
    pub counterfactual_tables: Vec<Table>,
    /// One entry per reasoning type, in type order.
    pub counts: Vec<TypeCount>,
    pub skips: Vec<SkipRecord>,
}

/// One generator in one mode.
pub fn generate_for(ctx: &GenContext, rt: ReasoningType, mode: Mode) -> Result<(Vec<Probe>, Vec<Table>), ProbeError> {
    // Replacing a value in a false statement does not make it true, and
    // widening one to a range or a rounded value can. Only comparison checks
    // the truth of its rewrite against the table.
    if ctx.hyp.label != Label::Entail {
        let widens = matches!(rt, ReasoningType::Approximation | ReasoningType::Range);
        if (mode.is_flip() || widens) && rt != ReasoningType::Comparison {
            return Err(ProbeError::Unsupported(rt, "needs an entailed base".into()));
        }
    }
    let probes = match rt {
        ReasoningType::Numeration => gen_numeration(ctx, mode)?,
        ReasoningType::Heterogeneous => gen_heterogeneous(ctx, mode)?,
        ReasoningType::Negative => gen_negative(ctx, mode)?,
        ReasoningType::Scale => gen_scale(ctx, mode)?,
        ReasoningType::Comparison => gen_comparison(ctx, mode)?,
        ReasoningType::Approximation => gen_approximation(ctx, mode)?,
        ReasoningType::Range => gen_range(ctx, mode)?,
        ReasoningType::Sorting => gen_sorting(ctx, mode)?,
        ReasoningType::Arithmetic => gen_arithmetic(ctx, mode)?,
        ReasoningType::WordProblem => gen_wordproblem(ctx, mode)?,
        ReasoningType::Counterfactual => {
            let (t, p) = gen_counterfactual_table(ctx, mode)?;
            return Ok((vec![p], vec![t]));
        }
    };
    Ok((probes, vec![]))
}

#[derive(Default)]
struct Partial {
    probes: Vec<Probe>,
    tables: Vec<Table>,
    skips: Vec<SkipRecord>,
}

fn for_hypothesis(
    ds: &Dataset,
    tables: &BTreeMap<&str, &Table>,
    i: usize,
    config: &GenerationConfig,
    res: &Resources,
) -> Partial {
    let h = &ds.hypotheses[i];
    let mut out = Partial::default();
    let Some(table) = tables.get(h.table_id.as_str()) else {
        out.skips.push(SkipRecord {
            hypothesis_id: h.id.clone(),
            reasoning_type: None,
            flip: false,
            reason: format!("table {:?} not found", h.table_id),
        });
        return out;
    };
    let ctx = GenContext::new(h, table, res, config);
    for rt in ReasoningType::ALL {
        if !config.enables(rt) || !has_trigger(h, rt, res) {
            continue;
        }
        for mode in [Mode::Preserve, Mode::Flip] {
            if !config.flip.allows(mode) || (mode.is_flip() && !rt.has_flip()) {
                continue;
            }
            match generate_for(&ctx, rt, mode) {
                Ok((p, t)) => {
                    out.probes.extend(p);
                    out.tables.extend(t);
                }
                Err(e) => out.skips.push(SkipRecord {
                    hypothesis_id: h.id.clone(),
                    reasoning_type: Some(rt),
                    flip: mode.is_flip(),
                    reason: e.to_string(),
                }),
            }
        }
    }
    out
}

/// Applies every enabled generator to every candidate hypothesis. Output
/// order follows the corpus and does not depend on scheduling.
pub fn generate_all(ds: &Dataset, config: &GenerationConfig, res: &Resources) -> Result<ProbeSet, ProbeError> {
    config.validate()?;
    let tables: BTreeMap<&str, &Table> = ds.tables.iter().map(|t| (t.id.as_str(), t)).collect();
    let parts: Vec<Partial> =
        (0..ds.hypotheses.len()).into_par_iter().map(|i| for_hypothesis(ds, &tables, i, config, res)).collect();
    let mut set = ProbeSet::default();
    for p in parts {
        set.probes.extend(p.probes);
        set.counterfactual_tables.extend(p.tables);
        set.skips.extend(p.skips);
    }
    set.counts = count_probes(&set.probes);
    Ok(set)
}

/// Probes per type and flip flag.
pub fn count_probes(probes: &[Probe]) -> Vec<TypeCount> {
    ReasoningType::ALL
        .into_iter()
        .map(|rt| {
            let of = |flip: bool| probes.iter().filter(|p| p.reasoning_type == rt && p.flip == flip).count();
            TypeCount { reasoning_type: rt, preserve: of(false), flip: of(true) }
        })
        .collect()
}

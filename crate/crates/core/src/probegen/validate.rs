//! Independent re-checks of generated probes: label algebra, reversibility,
//! and the per-type facts each generator relied on.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::counterfactual::still_linked;
use super::number_sense::holds;
use super::probe::{apply_edits, revert_edits, revert_table_edits, Probe, ProbeDetail};
use super::structure::{rank_value, sort_column, RESULT_SCALES};
use super::{GenerationConfig, ReasoningType};
use crate::corpus::{extract_numeric_column, Dataset, Hypothesis, Label, Resources, Table};
use crate::numparse::{round_magnitude, value_equal, MentionValue, NumericValue};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub probe_id: String,
    pub check: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Checker<'a> {
    probe: &'a Probe,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn check(&mut self, ok: bool, check: &str, message: impl FnOnce() -> String) {
        if !ok {
            self.out.push(Violation { probe_id: self.probe.probe_id.clone(), check: check.into(), message: message() });
        }
    }
}

fn values(text: &str, res: &Resources) -> Vec<MentionValue> {
    res.scanner.scan(text).into_iter().map(|m| m.value).collect()
}

fn same_values(a: &[MentionValue], b: &[MentionValue]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| value_equal(x, y))
}

/// Checks one probe against its base hypothesis and table.
pub fn validate_probe(
    probe: &Probe,
    ds: &Dataset,
    cf_tables: &HashMap<&str, &Table>,
    res: &Resources,
    config: &GenerationConfig,
) -> Vec<Violation> {
    let mut c = Checker { probe, out: Vec::new() };
    let Some(base) = ds.hypothesis(&probe.base_id) else {
        c.check(false, "dangling_ref", || format!("base hypothesis {:?} not found", probe.base_id));
        return c.out;
    };
    let Some(table) = ds.table(&base.table_id) else {
        c.check(false, "dangling_ref", || format!("table {:?} not found", base.table_id));
        return c.out;
    };
    c.check(probe.flip != (probe.expected_label == base.label), "label_algebra", || {
        format!("flip={} with expected {} on a {} base", probe.flip, probe.expected_label, base.label)
    });
    c.check(probe.level == probe.reasoning_type.level(), "level", || format!("level {}", probe.level));
    match (&probe.text, &probe.table_ref) {
        (Some(text), None) => check_text(&mut c, base, text, res, config),
        (None, Some(tref)) => match cf_tables.get(tref.as_str()) {
            Some(cf) => check_table(&mut c, base, table, cf, res),
            None => c.check(false, "dangling_ref", || format!("counterfactual table {tref:?} not found")),
        },
        _ => c.check(false, "shape", || "a probe carries exactly one of text and table_ref".into()),
    }
    if let Some(d) = &probe.detail {
        check_detail(&mut c, base, table, d, res);
    }
    c.out
}

fn check_text(c: &mut Checker, base: &Hypothesis, text: &str, res: &Resources, config: &GenerationConfig) {
    let p = c.probe;
    match apply_edits(&base.text, &p.edits) {
        Ok(t) => c.check(t == text, "edits", || format!("edits give {t:?}, probe reads {text:?}")),
        Err(e) => c.check(false, "edits", || e),
    }
    match revert_edits(text, &p.edits) {
        Ok(t) => c.check(t == base.text, "reversibility", || format!("reverting gives {t:?}")),
        Err(e) => c.check(false, "reversibility", || e),
    }
    let rt = p.reasoning_type;
    if !matches!(rt, ReasoningType::Numeration | ReasoningType::Heterogeneous | ReasoningType::Negative) {
        return;
    }
    let before = values(&base.text, res);
    let after = values(text, res);
    if !p.flip {
        c.check(same_values(&before, &after), "preservation", || format!("values {before:?} became {after:?}"));
        return;
    }
    if rt == ReasoningType::Negative {
        c.check(!same_values(&before, &after), "difference", || "flip left every value unchanged".into());
        return;
    }
    c.check(before.len() == after.len() && !same_values(&before, &after), "difference", || {
        format!("values {before:?} became {after:?}")
    });
    if rt == ReasoningType::Numeration && before.len() == after.len() {
        let h = &config.flip_replacement_halfwidth;
        for (x, y) in before.iter().zip(&after) {
            let (Some(x), Some(y)) = (x.as_number(), y.as_number()) else { continue };
            if x == y || x.is_zero() {
                continue;
            }
            let spread = &x.abs() * h;
            c.check(*y >= x - &spread && *y <= x + &spread, "numeration_bounds", || {
                format!("{y} lies outside [{}, {}]", x - &spread, x + &spread)
            });
        }
    }
}

fn check_table(c: &mut Checker, base: &Hypothesis, table: &Table, cf: &Table, res: &Resources) {
    let p = c.probe;
    match revert_table_edits(cf, &p.edits) {
        Ok(t) => c.check(t.rows == table.rows && t.headers == table.headers, "reversibility", || {
            "reverting the cell edits does not give the original table".into()
        }),
        Err(e) => c.check(false, "reversibility", || e),
    }
    if let Some(ProbeDetail::Counterfactual { swapped: (a, _), .. }) = &p.detail {
        if p.flip {
            let mentions = res.scanner.scan(&base.text);
            let links = crate::corpus::link_scanned(&mentions, table, &res.scanner);
            for l in links.iter().filter(|l| l.cell == *a && !l.is_approximate()) {
                c.check(!still_linked(&mentions, l.hyp_mention, cf, *a, &res.scanner), "difference", || {
                    format!("mention {} still links to cell {a}", l.hyp_mention)
                });
            }
        }
    }
}

fn is_entail(l: Label) -> bool {
    l == Label::Entail
}

fn check_detail(c: &mut Checker, base: &Hypothesis, table: &Table, d: &ProbeDetail, res: &Resources) {
    let p = c.probe;
    let flip = p.flip;
    match d {
        ProbeDetail::Scale { from_unit, to_unit, base_value, stated, error_factor } => {
            let cat = res.catalog();
            match p.sub_mode.as_str() {
                "conversion-preserve" => {
                    let ok = cat.convert(base_value, from_unit, to_unit).is_ok_and(|v| v == *stated);
                    c.check(ok, "scale", || format!("{base_value} {from_unit} is not {stated} {to_unit}"));
                }
                "conversion-flip" => {
                    let truth = cat.convert(base_value, from_unit, to_unit);
                    c.check(truth.is_ok_and(|t| t != *stated), "scale", || format!("{stated} {to_unit} is correct"));
                    let f = error_factor.clone().unwrap_or_else(|| NumericValue::from_i64(1));
                    let in_band = |lo: i64, hi: i64| f >= NumericValue::new(lo, -1) && f <= NumericValue::new(hi, -1);
                    c.check(in_band(5, 9) || in_band(11, 15), "scale", || format!("error factor {f} out of band"));
                }
                "mapping-preserve" => c.check(from_unit == to_unit && base_value == stated, "scale", || {
                    "mapping changed the quantity".into()
                }),
                _ => {
                    let fam = |u: &str| cat.get(u).map(|e| e.family.clone());
                    c.check(fam(from_unit) != fam(to_unit), "scale", || {
                        format!("{to_unit} is in the family of {from_unit}")
                    })
                }
            }
            if let Some(text) = &p.text {
                let found = res
                    .scanner
                    .scan(text)
                    .iter()
                    .any(|m| m.number() == Some(stated) && m.unit.as_deref() == Some(to_unit.as_str()));
                c.check(found, "scale", || format!("probe does not state {stated} {to_unit}"));
            }
        }
        ProbeDetail::Comparison { table_value, relation_before, relation_after, threshold_before, threshold_after } => {
            c.check(
                holds(*relation_before, table_value, threshold_before) == is_entail(base.label),
                "comparison",
                || "base relation disagrees with the base label".into(),
            );
            c.check(
                holds(*relation_after, table_value, threshold_after) == is_entail(p.expected_label),
                "comparison",
                || format!("{table_value} vs {threshold_after} disagrees with the expected label"),
            );
        }
        ProbeDetail::Approximation { value, correct, stated, granularity_exp } => {
            c.check(round_magnitude(value) == *correct, "approximation", || format!("{value} rounds to {correct}?"));
            if flip {
                let g = NumericValue::pow10(*granularity_exp);
                let off = (value - stated).abs();
                c.check(stated != correct && &off + &off > g, "approximation", || {
                    format!("{stated} is an acceptable approximation of {value}")
                });
            } else {
                c.check(stated == correct, "approximation", || format!("{stated} is not {correct}"));
            }
        }
        ProbeDetail::Range { value, low, high } => {
            c.check(low <= value && value <= high && low < high, "range", || format!("{value} not in [{low}, {high}]"));
        }
        ProbeDetail::Sorting { column, direction, values, stated, rank_before, rank_after, selected } => {
            let col = extract_numeric_column(table, *column, &res.scanner).map(|c| c.numbers());
            c.check(col.as_ref().is_ok_and(|v| v == values), "sorting", || format!("column {column} changed"));
            let sorted = sort_column(values, *direction);
            let at = |k: u64| rank_value(&sorted, k).cloned();
            c.check(at(*rank_before).is_some_and(|v| (v == *stated) == is_entail(base.label)), "sorting", || {
                format!("rank {rank_before} does not ground the base label")
            });
            c.check(at(*rank_after).as_ref() == Some(selected), "sorting", || {
                format!("rank {rank_after} element is not {selected}")
            });
            c.check((selected == stated) == is_entail(p.expected_label), "sorting", || {
                format!("rank {rank_after} element {selected} disagrees with the expected label")
            });
        }
        ProbeDetail::Arithmetic { computed, stated, precision_exp } => {
            let derived = base.arith.as_ref().and_then(|a| a.compute().ok());
            let scaled_ok =
                derived.is_some_and(|d| RESULT_SCALES.iter().any(|s| &d * &NumericValue::pow10(*s) == *computed));
            c.check(scaled_ok, "arithmetic", || format!("{computed} is not the derivation result"));
            let correct = computed.round_to_exp(*precision_exp, crate::numparse::Rounding::HalfAwayFromZero);
            if flip {
                c.check(*stated != correct, "arithmetic", || format!("flipped result {stated} is correct"));
            } else {
                c.check(*stated == correct, "arithmetic", || format!("{stated} is not {correct}"));
            }
        }
        ProbeDetail::WordProblem { values, original, replacement, .. } => {
            c.check(
                values.contains(original) && values.contains(replacement) && original != replacement,
                "word_problem",
                || format!("{replacement} is not another value of the column"),
            );
        }
        ProbeDetail::Counterfactual { table_id, swapped: (a, b), .. } => {
            c.check(*table_id == table.id && a != b, "counterfactual", || "swap is not within the base table".into());
        }
    }
}

/// Checks every probe; `cf_tables` are the counterfactual tables produced alongside.
pub fn validate_probes(
    probes: &[Probe],
    ds: &Dataset,
    cf_tables: &[Table],
    res: &Resources,
    config: &GenerationConfig,
) -> ValidationReport {
    let index: HashMap<&str, &Table> = cf_tables.iter().map(|t| (t.id.as_str(), t)).collect();
    let violations = probes.iter().flat_map(|p| validate_probe(p, ds, &index, res, config)).collect();
    ValidationReport { checked: probes.len(), violations }
}

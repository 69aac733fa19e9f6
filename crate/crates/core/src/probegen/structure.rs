//! Structural probes: sorting, arithmetic and word problems. These need the
//! table (sorting, word problems) or derivation metadata (arithmetic).

use rand::seq::SliceRandom;

use super::context::{numeral_of, per_mention, render_like, sample_factor, GenContext};
use super::probe::{EditRecord, Probe, ProbeDetail};
use super::{Mode, ProbeError, ReasoningType};
use crate::corpus::{
    extract_numeric_column, match_case, Label, LinkKind, Orientation, PositionIndicator, SortDirection,
};
use crate::numparse::{
    format_ordinal, FormatDescriptor, MentionKind, NumberMention, NumeralFormat, NumericValue, Rounding, Span,
};

/// Column values ordered for ranking: descending, ascending, or as listed.
pub fn sort_column(values: &[NumericValue], direction: SortDirection) -> Vec<NumericValue> {
    let mut v = values.to_vec();
    match direction {
        SortDirection::Desc => v.sort_by(|a, b| b.cmp(a)),
        SortDirection::Asc => v.sort(),
        SortDirection::RowOrder => {}
    }
    v
}

/// Element at 1-based `rank`.
pub fn rank_value(sorted: &[NumericValue], rank: u64) -> Option<&NumericValue> {
    sorted.get((rank as usize).checked_sub(1)?)
}

/// A rank selector with the linked quantity it is about.
#[derive(Clone, Copy)]
struct Grounded<'a> {
    indicator: &'a PositionIndicator,
    column: usize,
    row: usize,
}

fn toggle_ordinal(m: &NumberMention, n: u64) -> Option<String> {
    let target = match m.format {
        FormatDescriptor::OrdinalWord => FormatDescriptor::OrdinalSuffix,
        _ => FormatDescriptor::OrdinalWord,
    };
    format_ordinal(n, target).ok()
}

/// Rank synonyms, or a different rank whose value differs from the stated one.
pub fn gen_sorting(ctx: &GenContext, mode: Mode) -> Result<Vec<Probe>, ProbeError> {
    let rt = ReasoningType::Sorting;
    if ctx.table.orientation != Orientation::RelationalGrid {
        return Err(ProbeError::Unsupported(rt, "sorting needs a relational table".into()));
    }
    if mode.is_flip() && ctx.hyp.label != Label::Entail {
        return Err(ProbeError::Unsupported(rt, "rank flips need an entailed base".into()));
    }
    let text = ctx.text();
    let positions = ctx.res.tokens.find_positions(text, &ctx.mentions);
    let mut eligible = Vec::new();
    for p in &positions {
        // Nearest linked quantity other than the indicator's own ordinal.
        let stated = ctx
            .links
            .iter()
            .filter(|l| Some(l.hyp_mention) != p.ordinal && l.kind != LinkKind::Approximate)
            .filter(|l| {
                let m = &ctx.mentions[l.hyp_mention];
                m.number().is_some() && !matches!(m.kind, MentionKind::Ordinal | MentionKind::Date | MentionKind::Time)
            })
            .min_by_key(|l| {
                let s = ctx.mentions[l.hyp_mention].span;
                s.start.abs_diff(p.span.start)
            });
        if let Some(l) = stated {
            eligible.push(Grounded { indicator: p, column: l.cell.col, row: l.cell.row });
        }
    }
    let eligible: Vec<(usize, Grounded)> = eligible.into_iter().enumerate().collect();
    let sm = match mode {
        Mode::Preserve => "preserve",
        Mode::Flip => "flip",
    };
    per_mention(ctx, rt, &[sm], &eligible, |sm, occ, g| {
        let (seed, mut rng) = ctx.stream(rt, sm, occ);
        let col = extract_numeric_column(ctx.table, g.column, &ctx.res.scanner).ok()?;
        let stated = col.value_at(g.row)?.clone();
        let values = col.numbers();
        if values.len() < 2 {
            return None;
        }
        let p = g.indicator;
        let sorted = sort_column(&values, p.direction);
        let holds = rank_value(&sorted, p.rank)? == &stated;
        if holds != (ctx.hyp.label == Label::Entail) {
            return None;
        }
        let ordinal = p.ordinal.map(|i| &ctx.mentions[i]);
        let (edits, rank_after) = match mode {
            Mode::Preserve => {
                let synonym = p.superlative.and_then(|(span, gi)| {
                    let current = span.slice(text).to_ascii_lowercase();
                    let others: Vec<&String> =
                        ctx.res.tokens.superlatives[gi].words.iter().filter(|w| **w != current).collect();
                    let w = others.choose(&mut rng)?;
                    Some(EditRecord::text(span, text, match_case(w, span.slice(text)), "superlative-synonym"))
                });
                let edit = match (synonym, ordinal) {
                    (Some(e), _) => e,
                    (None, Some(m)) => EditRecord::text(m.span, text, toggle_ordinal(m, p.rank)?, "ordinal-reformat"),
                    (None, None) => return None,
                };
                (vec![edit], p.rank)
            }
            Mode::Flip => {
                let ranks: Vec<u64> =
                    (1..=sorted.len() as u64).filter(|k| *k != p.rank && sorted[*k as usize - 1] != stated).collect();
                let k = *ranks.choose(&mut rng)?;
                let edit = match (ordinal, p.superlative) {
                    (Some(m), Some((sup, _))) if k == 1 => {
                        EditRecord::text(Span::new(m.span.start, sup.start), text, "", "rank-change")
                    }
                    (Some(m), _) => {
                        let fmt = if m.format == FormatDescriptor::OrdinalSuffix {
                            FormatDescriptor::OrdinalSuffix
                        } else {
                            FormatDescriptor::OrdinalWord
                        };
                        let new = match_case(&format_ordinal(k, fmt).ok()?, m.span.slice(text));
                        EditRecord::text(m.span, text, new, "rank-change")
                    }
                    (None, Some((sup, _))) => {
                        let word = format_ordinal(k, FormatDescriptor::OrdinalWord).ok()?;
                        let word = match_case(&word, sup.slice(text));
                        EditRecord::text(Span::new(sup.start, sup.start), text, format!("{word} "), "rank-change")
                    }
                    (None, None) => return None,
                };
                (vec![edit], k)
            }
        };
        let detail = ProbeDetail::Sorting {
            column: g.column,
            direction: p.direction,
            selected: rank_value(&sorted, rank_after)?.clone(),
            values,
            stated,
            rank_before: p.rank,
            rank_after,
        };
        Some(ctx.text_probe(rt, sm, occ, mode.is_flip(), seed, edits, Some(detail)))
    })
}

/// Scales under which a stated result may express a computed one.
pub const RESULT_SCALES: [i32; 9] = [0, 2, 3, 6, 9, -2, -3, -6, -9];

/// The derivation result as the mention states it, with its layout.
fn stated_result<'m>(ctx: &'m GenContext, computed: &NumericValue) -> Option<(&'m NumberMention, NumericValue)> {
    for m in &ctx.mentions {
        let Some(v) = m.number() else { continue };
        if matches!(m.kind, MentionKind::Ordinal | MentionKind::Date | MentionKind::Time) {
            continue;
        }
        let fmt = numeral_of(m);
        for s in RESULT_SCALES {
            let scaled = computed * &NumericValue::pow10(s);
            if fmt.quantize(&scaled) == *v {
                return Some((m, scaled));
            }
        }
    }
    None
}

/// The annotated result re-rendered, or replaced by a close wrong value.
pub fn gen_arithmetic(ctx: &GenContext, mode: Mode) -> Result<Vec<Probe>, ProbeError> {
    let rt = ReasoningType::Arithmetic;
    let arith = ctx.hyp.arith.as_ref().ok_or(ProbeError::NoApplicableMention(rt))?;
    if ctx.hyp.label != Label::Entail {
        return Err(ProbeError::Unsupported(rt, "derivations are checked against entailed bases".into()));
    }
    let computed = arith.compute().map_err(|e| ProbeError::Unsupported(rt, e.to_string()))?;
    let (m, scaled) = stated_result(ctx, &computed).ok_or(ProbeError::NoApplicableMention(rt))?;
    let fmt = numeral_of(m);
    let correct = fmt.quantize(&scaled);
    let sm = match mode {
        Mode::Preserve => "preserve",
        Mode::Flip => "flip",
    };
    let (seed, mut rng) = ctx.stream(rt, sm, 0);
    let stated = match mode {
        Mode::Preserve => correct.clone(),
        Mode::Flip => (0..32)
            .map(|_| {
                let f = sample_factor(&mut rng, (800, 950), (1050, 1200));
                (&scaled * &f).round_to_exp(fmt.precision_exp, Rounding::HalfAwayFromZero)
            })
            .find(|w| *w != correct && !w.is_zero())
            .ok_or(ProbeError::NoApplicableMention(rt))?,
    };
    let rule = if mode.is_flip() { "wrong-result" } else { "computed-result" };
    let edit = EditRecord::text(m.number_span, ctx.text(), render_like(m, &stated), rule);
    let detail = ProbeDetail::Arithmetic { computed: scaled, stated, precision_exp: fmt.precision_exp };
    Ok(vec![ctx.text_probe(rt, sm, 0, mode.is_flip(), seed, vec![edit], Some(detail))?])
}

/// Word problems kept as recast, or with the answer swapped for another
/// value of the same column.
pub fn gen_wordproblem(ctx: &GenContext, mode: Mode) -> Result<Vec<Probe>, ProbeError> {
    let rt = ReasoningType::WordProblem;
    if !ctx.res.tokens.is_word_problem(&ctx.hyp.source) {
        return Err(ProbeError::NoApplicableMention(rt));
    }
    if mode == Mode::Preserve {
        let (seed, _) = ctx.stream(rt, "preserve", 0);
        return Ok(vec![ctx.text_probe(rt, "preserve", 0, false, seed, vec![], None)?]);
    }
    if ctx.hyp.label != Label::Entail {
        return Err(ProbeError::Unsupported(rt, "answer swaps need an entailed base".into()));
    }
    let eligible: Vec<(usize, usize)> = ctx
        .links
        .iter()
        .filter(|l| {
            l.conversion.is_none() && l.kind == LinkKind::Exact && ctx.mentions[l.hyp_mention].number().is_some()
        })
        .map(|l| l.hyp_mention)
        .enumerate()
        .collect();
    per_mention(ctx, rt, &["flip"], &eligible, |sm, occ, mi| {
        let (seed, mut rng) = ctx.stream(rt, sm, occ);
        let m = &ctx.mentions[mi];
        let link = ctx.link_for(mi)?;
        let col = extract_numeric_column(ctx.table, link.cell.col, &ctx.res.scanner).ok()?;
        let original = col.value_at(link.cell.row)?.clone();
        let values = col.numbers();
        let mut others: Vec<&NumericValue> = values.iter().filter(|v| **v != original).collect();
        others.sort();
        others.dedup();
        let replacement = (*others.choose(&mut rng)?).clone();
        let fmt = numeral_of(m);
        let fmt = NumeralFormat { precision_exp: fmt.precision_exp.min(replacement.scale_exp()), ..fmt };
        let new = fmt.render(&replacement).ok()?;
        let edit = EditRecord::text(m.number_span, ctx.text(), new, "column-value");
        let detail = ProbeDetail::WordProblem { column: link.cell.col, values, original, replacement };
        Some(ctx.text_probe(rt, sm, occ, true, seed, vec![edit], Some(detail)))
    })
}

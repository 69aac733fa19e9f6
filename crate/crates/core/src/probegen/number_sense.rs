//! Number-sense probes: scale, comparison, approximation and range. Each
//! emits one probe per eligible mention and sub-mode, left to right.

use rand::seq::SliceRandom;
use rand::Rng;

use super::context::{numeral_of, per_mention, render_digits, render_like, sample_factor, to_steps, GenContext};
use super::probe::{EditRecord, Probe, ProbeDetail};
use super::{Mode, ProbeError, ReasoningType};
use crate::corpus::{linked_value, match_case, Relation};
use crate::numparse::{
    rounding_exp, MentionKind, NumberMention, NumeralFormat, NumeralStyle, NumericValue, Rounding, Span, UnitSpelling,
};

fn unit_text(ctx: &GenContext, unit: &str, spelling: Option<UnitSpelling>, value: &NumericValue) -> Option<String> {
    let u = ctx.res.catalog().get(unit)?;
    Some(match spelling {
        Some(UnitSpelling::Symbol) => u.symbol.clone(),
        _ => u.name_for(value).to_string(),
    })
}

/// Plain digits at the value's own precision.
fn plain(v: &NumericValue) -> String {
    let fmt = NumeralFormat { style: NumeralStyle::Digits, precision_exp: v.scale_exp().min(0), scale_word: None };
    render_digits(fmt, v)
}

/// Unit conversion and unit spelling probes on measured quantities.
pub fn gen_scale(ctx: &GenContext, mode: Mode) -> Result<Vec<Probe>, ProbeError> {
    let rt = ReasoningType::Scale;
    let cat = ctx.res.catalog();
    let text = ctx.text();
    let eligible: Vec<(usize, &NumberMention)> = ctx
        .mentions
        .iter()
        .filter(|m| {
            m.kind == MentionKind::MeasuredQuantity
                && m.unit_span.is_some()
                && m.unit.as_deref().and_then(|u| cat.get(u)).is_some_and(|u| !u.is_currency())
        })
        .enumerate()
        .collect();
    let sub_modes: &[&str] = match mode {
        Mode::Preserve => &["conversion-preserve", "mapping-preserve"],
        Mode::Flip => &["conversion-flip", "mapping-flip"],
    };
    per_mention(ctx, rt, sub_modes, &eligible, |sm, occ, m| {
        let (seed, mut rng) = ctx.stream(rt, sm, occ);
        let unit = m.unit.as_deref()?;
        let v = m.number()?;
        let unit_span = m.unit_span?;
        let sep = &text[m.number_span.end..unit_span.start];
        let whole = Span::new(m.number_span.start, unit_span.end);
        let (edit, detail) = match sm {
            "conversion-preserve" => {
                let target = cat.next_smaller(unit)?;
                if !cat.conversion_is_exact(v, unit, &target.id) {
                    return None;
                }
                let nv = cat.convert(v, unit, &target.id).ok()?;
                let new = format!("{}{sep}{}", plain(&nv), unit_text(ctx, &target.id, m.unit_spelling, &nv)?);
                let detail = ProbeDetail::Scale {
                    from_unit: unit.into(),
                    to_unit: target.id.clone(),
                    base_value: v.clone(),
                    stated: nv,
                    error_factor: None,
                };
                (EditRecord::text(whole, text, new, "convert-to-smaller-unit"), detail)
            }
            "conversion-flip" => {
                let target = cat.counterpart(unit)?;
                let truth = cat.convert(v, unit, &target.id).ok()?;
                let f = sample_factor(&mut rng, (500, 900), (1100, 1500));
                let wrong = &truth * &f;
                let wrong = wrong.round_to_exp(wrong.magnitude()? - 2, Rounding::HalfAwayFromZero);
                let new = format!("{}{sep}{}", plain(&wrong), unit_text(ctx, &target.id, m.unit_spelling, &wrong)?);
                let detail = ProbeDetail::Scale {
                    from_unit: unit.into(),
                    to_unit: target.id.clone(),
                    base_value: v.clone(),
                    stated: wrong,
                    error_factor: Some(f),
                };
                (EditRecord::text(whole, text, new, "convert-with-error"), detail)
            }
            "mapping-preserve" => {
                let u = cat.get(unit)?;
                let new = match m.unit_spelling {
                    Some(UnitSpelling::Symbol) => format!(" {}", u.name_for(v)),
                    _ => format!(" {}", u.symbol),
                };
                let span = Span::new(m.number_span.end, unit_span.end);
                let detail = ProbeDetail::Scale {
                    from_unit: unit.into(),
                    to_unit: unit.into(),
                    base_value: v.clone(),
                    stated: v.clone(),
                    error_factor: None,
                };
                (EditRecord::text(span, text, new, "unit-alias"), detail)
            }
            _ => {
                let family = &cat.get(unit)?.family;
                let others: Vec<_> = cat.units().iter().filter(|u| &u.family != family && !u.is_currency()).collect();
                let target = others.choose(&mut rng)?;
                let span = Span::new(m.number_span.end, unit_span.end);
                let detail = ProbeDetail::Scale {
                    from_unit: unit.into(),
                    to_unit: target.id.clone(),
                    base_value: v.clone(),
                    stated: v.clone(),
                    error_factor: None,
                };
                (EditRecord::text(span, text, format!(" {}", target.name_for(v)), "unit-other-family"), detail)
            }
        };
        Some(ctx.text_probe(rt, sm, occ, mode.is_flip(), seed, vec![edit], Some(detail)))
    })
}

/// Truth of "table value `v` stands in `rel` to threshold `x`".
pub(crate) fn holds(rel: Relation, v: &NumericValue, x: &NumericValue) -> bool {
    match rel {
        Relation::Greater => v > x,
        Relation::Lesser => v < x,
    }
}

fn is_quantity(m: &NumberMention) -> bool {
    m.number().is_some() && !matches!(m.kind, MentionKind::Ordinal | MentionKind::Date | MentionKind::Time)
}

/// Signal-word comparisons against the linked table value.
pub fn gen_comparison(ctx: &GenContext, mode: Mode) -> Result<Vec<Probe>, ProbeError> {
    let rt = ReasoningType::Comparison;
    let text = ctx.text();
    let signals = ctx.res.tokens.find_signals(text);
    // Each signal word with the linked quantity it compares against.
    let mut grounded = Vec::new();
    for s in &signals {
        let linked = |i: &usize| is_quantity(&ctx.mentions[*i]) && ctx.link_for(*i).is_some();
        let idx: Vec<usize> = (0..ctx.mentions.len()).filter(linked).collect();
        let after = idx.iter().copied().find(|&i| ctx.mentions[i].span.start >= s.span.end);
        let before = idx.iter().copied().rev().find(|&i| ctx.mentions[i].span.end <= s.span.start);
        let Some(mi) = after.or(before) else { continue };
        let Some(v) = linked_value(ctx.link_for(mi).unwrap(), ctx.table, &ctx.res.scanner) else { continue };
        let x = ctx.mentions[mi].number().unwrap().clone();
        let truth = holds(s.relation, &v, &x);
        if x == v || truth != (ctx.hyp.label == crate::corpus::Label::Entail) {
            continue;
        }
        grounded.push((s.clone(), mi, v, x));
    }
    if grounded.is_empty() {
        return Err(ProbeError::NoApplicableMention(rt));
    }
    let sub_modes: &[&str] = match mode {
        Mode::Preserve => &["preserve-number"],
        Mode::Flip => &["flip-word", "flip-both"],
    };
    let mut out = Vec::new();
    for sm in sub_modes {
        for (occ, (s, mi, v, x)) in grounded.iter().enumerate().take(ctx.config.max_probes_per_hypothesis) {
            let (seed, mut rng) = ctx.stream(rt, sm, occ);
            let m = &ctx.mentions[*mi];
            let fmt = numeral_of(m);
            let q = fmt.precision_exp;
            let d = (v - x).abs();
            let Some(d_steps) = to_steps(&d.round_to_exp(q, Rounding::HalfAwayFromZero), q) else { continue };
            let lo = to_steps(&(&d * &NumericValue::new(1, -1)).round_to_exp(q, Rounding::Ceil), q).unwrap_or(1).max(1);
            let hi = (2 * d_steps).max(10);
            let word = s.span.slice(text);
            let (relation_after, side, new_word) = match *sm {
                "preserve-number" => (s.relation, if x > v { 1 } else { -1 }, None),
                "flip-word" => (s.relation.opposite(), 0, ctx.res.tokens.opposite(word)),
                _ => {
                    let r2 = s.relation.opposite();
                    let target = ctx.hyp.label != crate::corpus::Label::Entail;
                    // Side of v on which the new relation evaluates to `target`.
                    let side = match (r2, target) {
                        (Relation::Greater, true) | (Relation::Lesser, false) => -1,
                        _ => 1,
                    };
                    (r2, side, ctx.res.tokens.opposite(word))
                }
            };
            let threshold_after = if side == 0 {
                x.clone()
            } else {
                let exclude = if (x > v) == (side > 0) { vec![d_steps] } else { vec![] };
                let mut cands: Vec<i128> = (lo..=hi).filter(|k| !exclude.contains(k)).collect();
                if x.is_positive() {
                    cands.retain(|k| (v + &NumericValue::new(side * k, q)).is_positive());
                }
                let Some(k) = cands.choose(&mut rng) else { continue };
                v + &NumericValue::new(side * k, q)
            };
            let mut edits = Vec::new();
            if let Some(w) = &new_word {
                edits.push(EditRecord::text(s.span, text, match_case(w, word), "signal-opposite"));
            } else if *sm != "preserve-number" {
                continue;
            }
            if threshold_after != *x {
                edits.push(EditRecord::text(m.number_span, text, render_like(m, &threshold_after), "threshold"));
            }
            edits.sort_by_key(|e| e.span.map(|s| s.start));
            let detail = ProbeDetail::Comparison {
                table_value: v.clone(),
                relation_before: s.relation,
                relation_after,
                threshold_before: x.clone(),
                threshold_after,
            };
            out.push(ctx.text_probe(rt, sm, occ, mode.is_flip(), seed, edits, Some(detail))?);
            let _ = rng.gen::<u8>();
        }
    }
    if out.is_empty() {
        return Err(ProbeError::NoApplicableMention(rt));
    }
    Ok(out)
}

fn hedged(ctx: &GenContext, m: &NumberMention) -> bool {
    let before = ctx.text()[..m.span.start].trim_end().to_ascii_lowercase();
    ctx.res.catalog().format.approximation_hedges.iter().any(|h| {
        before.ends_with(h.as_str())
            && before[..before.len() - h.len()].chars().last().is_none_or(|c| !c.is_alphanumeric())
    })
}

/// Layout for a rounded value: no finer than the rounding granularity allows.
fn rounded_format(m: &NumberMention, g_exp: i32) -> NumeralFormat {
    let fmt = numeral_of(m);
    let style = match fmt.style {
        NumeralStyle::Scientific => NumeralStyle::Digits,
        s => s,
    };
    let coarsest = g_exp.min(fmt.scale_word.map(|s| s as i32).unwrap_or(0));
    NumeralFormat { style, precision_exp: fmt.precision_exp.max(coarsest), scale_word: fmt.scale_word }
}

/// "about" plus the magnitude-rounded value; a flip rounds to a wrong value.
pub fn gen_approximation(ctx: &GenContext, mode: Mode) -> Result<Vec<Probe>, ProbeError> {
    let rt = ReasoningType::Approximation;
    let ten = NumericValue::from_i64(10);
    let eligible: Vec<(usize, &NumberMention)> = ctx
        .mentions
        .iter()
        .filter(|m| {
            is_quantity(m)
                && m.kind != MentionKind::ScientificNotation
                && !m.is_year_like()
                && m.number().is_some_and(|v| v.abs() >= ten)
        })
        .enumerate()
        .collect();
    let sm = match mode {
        Mode::Preserve => "preserve",
        Mode::Flip => "flip",
    };
    per_mention(ctx, rt, &[sm], &eligible, |sm, occ, m| {
        let (seed, mut rng) = ctx.stream(rt, sm, occ);
        let v = m.number()?;
        let g_exp = rounding_exp(v);
        let correct = crate::numparse::round_magnitude(v);
        if correct == *v {
            return None;
        }
        let stated = match mode {
            Mode::Preserve => correct.clone(),
            Mode::Flip => {
                let g = NumericValue::pow10(g_exp);
                let mut cands = Vec::new();
                for k in 1..=ctx.config.approximation_max_steps as i64 {
                    for s in [-1i64, 1] {
                        let c = &correct + &(&g * &NumericValue::from_i64(s * k));
                        let off = (&c - v).abs();
                        if c.is_zero() || c.is_negative() != v.is_negative() || &off + &off <= g {
                            continue;
                        }
                        cands.push(c);
                    }
                }
                cands.choose(&mut rng)?.clone()
            }
        };
        let fmt = rounded_format(m, g_exp);
        let number = fmt.render(&stated).ok()?;
        let hedge = if hedged(ctx, m) {
            ""
        } else if occ % 2 == 0 {
            "about "
        } else {
            "approximately "
        };
        let new = format!("{hedge}{}", m.with_number_text(&number));
        let detail = ProbeDetail::Approximation { value: v.clone(), correct, stated, granularity_exp: g_exp };
        let edit = EditRecord::text(m.span, ctx.text(), new, "approximate");
        Some(ctx.text_probe(rt, sm, occ, mode.is_flip(), seed, vec![edit], Some(detail)))
    })
}

/// "a-b" in the layout of `fmt`, the scale word written once at the end.
fn render_range(fmt: NumeralFormat, a: &NumericValue, b: &NumericValue) -> Option<String> {
    let style = match fmt.style {
        NumeralStyle::Grouped => NumeralStyle::Grouped,
        _ => NumeralStyle::Digits,
    };
    let scale = fmt.scale_word.unwrap_or(0) as i32;
    let bare = NumeralFormat { style, precision_exp: fmt.precision_exp - scale, scale_word: None };
    let unscale = NumericValue::pow10(-scale);
    let mut out = format!("{}-{}", bare.render(&(a * &unscale)).ok()?, bare.render(&(b * &unscale)).ok()?);
    if let Some(e) = fmt.scale_word {
        out.push(' ');
        out.push_str(crate::numparse::scale_word_name(e));
    }
    Some(out)
}

/// A number replaced by a range around it.
pub fn gen_range(ctx: &GenContext, mode: Mode) -> Result<Vec<Probe>, ProbeError> {
    let rt = ReasoningType::Range;
    if mode.is_flip() {
        return Err(ProbeError::Unsupported(rt, "range probes are label-preserving only".into()));
    }
    let cfg = ctx.config;
    let eligible: Vec<(usize, &NumberMention)> = ctx
        .mentions
        .iter()
        .filter(|m| {
            matches!(
                m.kind,
                MentionKind::CardinalDigits
                    | MentionKind::CardinalWords
                    | MentionKind::MeasuredQuantity
                    | MentionKind::Currency
                    | MentionKind::Percentage
            ) && !m.is_year_like()
                && m.number().is_some_and(NumericValue::is_positive)
        })
        .enumerate()
        .collect();
    per_mention(ctx, rt, &["preserve"], &eligible, |sm, occ, m| {
        let (seed, mut rng) = ctx.stream(rt, sm, occ);
        let n = m.number()?;
        let fmt = numeral_of(m);
        let q = fmt.precision_exp;
        let small = n.is_integer() && *n < NumericValue::from_i64(cfg.range_small_limit as i64);
        let (r1, r2) = if small {
            let max_low = (cfg.range_small_max_radius as i128).min(n.to_i128()?);
            let r1 = rng.gen_range(1..=max_low);
            let r2 = rng.gen_range(1..=cfg.range_small_max_radius as i128);
            (NumericValue::new(r1, 0), NumericValue::new(r2, 0))
        } else {
            let mut radius = || {
                let pct = rng.gen_range(cfg.range_pct_min..=cfg.range_pct_max) as i64;
                let r = (n * &NumericValue::new(pct, -2)).round_to_exp(q, Rounding::HalfAwayFromZero);
                if r.is_zero() {
                    NumericValue::pow10(q)
                } else {
                    r
                }
            };
            let r1 = radius();
            (r1, radius())
        };
        let low = n - &r1;
        let high = n + &r2;
        let range = render_range(fmt, &low, &high)?;
        let new = format!("between {}", m.with_number_text(&range));
        let detail = ProbeDetail::Range { value: n.clone(), low, high };
        let edit = EditRecord::text(m.span, ctx.text(), new, "range");
        Some(ctx.text_probe(rt, sm, occ, false, seed, vec![edit], Some(detail)))
    })
}

//! Representation probes: numeration, heterogeneous number types and
//! negative numbers. Each rewrites every eligible mention of a hypothesis
//! in one probe per mode.

use chrono::NaiveDate;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::context::{numeral_of, render_digits, sample_excluding, sample_near, GenContext};
use super::probe::{EditRecord, Probe};
use super::{Mode, ProbeError, ReasoningType};
use crate::numparse::{
    format_date, format_ordinal, format_scientific, format_time, DatePattern, DateValue, FormatDescriptor, MentionKind,
    MentionValue, NumberMention, NumeralStyle, NumericValue, Span, TimeValue,
};

fn sub_mode(mode: Mode) -> &'static str {
    match mode {
        Mode::Preserve => "preserve",
        Mode::Flip => "flip",
    }
}

fn finish(
    ctx: &GenContext,
    rt: ReasoningType,
    mode: Mode,
    seed: u64,
    edits: Vec<EditRecord>,
) -> Result<Vec<Probe>, ProbeError> {
    if edits.is_empty() {
        return Err(ProbeError::NoApplicableMention(rt));
    }
    Ok(vec![ctx.text_probe(rt, sub_mode(mode), 0, mode.is_flip(), seed, edits, None)?])
}

fn is_cardinal(m: &NumberMention) -> bool {
    matches!(m.kind, MentionKind::CardinalDigits | MentionKind::CardinalWords)
}

/// Digits become words and words become digits; a flip also moves the value.
pub fn gen_numeration(ctx: &GenContext, mode: Mode) -> Result<Vec<Probe>, ProbeError> {
    let rt = ReasoningType::Numeration;
    let (seed, mut rng) = ctx.stream(rt, sub_mode(mode), 0);
    let mut edits = Vec::new();
    for m in ctx.mentions.iter().filter(|m| is_cardinal(m)) {
        let Some(x) = m.number() else { continue };
        let fmt = numeral_of(m);
        let value = match mode {
            Mode::Preserve => x.clone(),
            Mode::Flip => match sample_near(&mut rng, x, &ctx.config.flip_replacement_halfwidth, fmt.precision_exp) {
                Some(v) => v,
                None => continue,
            },
        };
        let to_words = !matches!(fmt.style, NumeralStyle::Words { .. });
        let rendered = if to_words {
            let year_pairs = m.is_year_like() && (mode == Mode::Preserve || crate::numparse::is_year_like(&value));
            match fmt.with_style(NumeralStyle::Words { hyphenate: false, year_pairs }).render(&value) {
                Ok(s) => s,
                Err(_) => continue,
            }
        } else {
            render_digits(fmt, &value)
        };
        let rule = if to_words { "digits-to-words" } else { "words-to-digits" };
        edits.push(EditRecord::text(m.number_span, ctx.text(), rendered, rule));
    }
    finish(ctx, rt, mode, seed, edits)
}

fn is_heterogeneous(m: &NumberMention) -> bool {
    match m.kind {
        MentionKind::Date => m.value.as_date().is_some_and(|d| d.day.is_some()),
        MentionKind::Time | MentionKind::Ordinal | MentionKind::Percentage | MentionKind::ScientificNotation => true,
        MentionKind::Currency => true,
        MentionKind::CardinalDigits | MentionKind::MeasuredQuantity => {
            m.number().is_some_and(|v| v.abs() >= NumericValue::pow10(6))
        }
        _ => false,
    }
}

fn days_in_month(year: i32, month: u32) -> u32 {
    (28..=31).rev().find(|d| NaiveDate::from_ymd_opt(year, month, *d).is_some()).unwrap_or(28)
}

fn random_date(rng: &mut ChaCha8Rng, d: &DateValue, years: i32) -> DateValue {
    loop {
        let year = rng.gen_range(d.year - years..=d.year + years);
        let month = rng.gen_range(1..=12u32);
        let day = rng.gen_range(1..=days_in_month(year, month));
        let cand = DateValue::new(Some(day as u8), month as u8, year, d.source_format)
            .expect("calendar-valid by construction");
        if !cand.same_day(d) {
            return cand;
        }
    }
}

fn random_time(rng: &mut ChaCha8Rng, t: TimeValue) -> TimeValue {
    loop {
        let hour = rng.gen_range(0..24u8);
        let minute = if t.minute == 0 { 0 } else { rng.gen_range(0..12u8) * 5 };
        let cand = TimeValue { hour, minute };
        if cand != t {
            return cand;
        }
    }
}

fn shortest_prefix(ctx: &GenContext, unit: &str) -> Option<String> {
    let u = ctx.res.catalog().get(unit)?;
    u.prefix_symbols.iter().min_by_key(|s| s.chars().count()).cloned()
}

/// Alternative rendering of one heterogeneous mention, optionally with a new value.
fn reformat(ctx: &GenContext, m: &NumberMention, rng: Option<&mut ChaCha8Rng>) -> Option<(Span, String, &'static str)> {
    let text = ctx.text();
    let halfwidth = &ctx.config.flip_replacement_halfwidth;
    match (&m.kind, &m.value) {
        (MentionKind::Date, MentionValue::Date(d)) => {
            let d = match rng {
                Some(r) => random_date(r, d, ctx.config.date_flip_years),
                None => d.clone(),
            };
            let target = match m.format {
                FormatDescriptor::Date(DatePattern::DmyHyphen) => {
                    DatePattern::DayMonthYear { ordinal: false, comma: false }
                }
                _ => DatePattern::DmyHyphen,
            };
            Some((m.span, format_date(&d, target).ok()?, "date-reformat"))
        }
        (MentionKind::Time, MentionValue::Time(t)) => {
            let t = match rng {
                Some(r) => random_time(r, *t),
                None => *t,
            };
            let target = match m.format {
                FormatDescriptor::Time24 => FormatDescriptor::Time12,
                _ => FormatDescriptor::Time24,
            };
            Some((m.span, format_time(t, target).ok()?, "time-reformat"))
        }
        (MentionKind::Ordinal, MentionValue::Number(v)) => {
            let n = v.to_i128()?;
            let n = match rng {
                Some(r) => sample_excluding(r, (n - 5).max(1), n + 5, &[n])?,
                None => n,
            };
            let target = match m.format {
                FormatDescriptor::OrdinalWord => FormatDescriptor::OrdinalSuffix,
                _ => FormatDescriptor::OrdinalWord,
            };
            Some((m.span, format_ordinal(n as u64, target).ok()?, "ordinal-reformat"))
        }
        (MentionKind::Percentage, MentionValue::Number(v)) => {
            let fmt = numeral_of(m);
            let number = match rng {
                Some(r) => fmt.render(&sample_near(r, v, halfwidth, fmt.precision_exp)?).ok()?,
                None => m.number_span.slice(text).to_string(),
            };
            let new = match m.format {
                FormatDescriptor::PercentSign => crate::numparse::render_percentage_word(&number),
                _ => crate::numparse::render_percentage_sign(&number),
            };
            Some((m.span, new, "percent-reformat"))
        }
        (MentionKind::ScientificNotation, MentionValue::Number(v)) => {
            let v = match rng {
                Some(r) => sample_near(r, v, halfwidth, numeral_of(m).precision_exp)?,
                None => v.clone(),
            };
            let plain = crate::numparse::NumeralFormat {
                style: NumeralStyle::Grouped,
                precision_exp: v.scale_exp().min(0),
                scale_word: None,
            };
            Some((m.number_span, plain.render(&v).ok()?, "scientific-to-digits"))
        }
        (MentionKind::Currency, MentionValue::Number(v))
            if v.abs() < NumericValue::pow10(6) || numeral_of(m).scale_word.is_some() =>
        {
            let fmt = numeral_of(m);
            let number = match rng {
                Some(r) => fmt.render(&sample_near(r, v, halfwidth, fmt.precision_exp)?).ok()?,
                None => m.number_span.slice(text).to_string(),
            };
            let unit = m.unit.as_deref()?;
            let new = match m.format {
                FormatDescriptor::CurrencyPrefix => format!("{number} {}", ctx.res.catalog().get(unit)?.symbol),
                _ => format!("{}{number}", shortest_prefix(ctx, unit)?),
            };
            Some((m.span, new, "currency-reformat"))
        }
        (_, MentionValue::Number(v)) => {
            // Large amounts in scientific notation.
            let v = match rng {
                Some(r) => sample_near(r, v, halfwidth, numeral_of(m).precision_exp)?,
                None => v.clone(),
            };
            if v.abs() < NumericValue::pow10(6) {
                return None;
            }
            Some((m.number_span, format_scientific(&v), "digits-to-scientific"))
        }
        _ => None,
    }
}

/// Dates, times, ordinals, percentages, currency amounts and large numbers
/// in another layout; a flip also replaces the value.
pub fn gen_heterogeneous(ctx: &GenContext, mode: Mode) -> Result<Vec<Probe>, ProbeError> {
    let rt = ReasoningType::Heterogeneous;
    let (seed, mut rng) = ctx.stream(rt, sub_mode(mode), 0);
    let mut edits = Vec::new();
    for m in ctx.mentions.iter().filter(|m| is_heterogeneous(m)) {
        let r = if mode.is_flip() { Some(&mut rng) } else { None };
        if let Some((span, new, rule)) = reformat(ctx, m, r) {
            edits.push(EditRecord::text(span, ctx.text(), new, rule));
        }
    }
    finish(ctx, rt, mode, seed, edits)
}

/// End of the gap between a sign marker and the number that follows it.
fn after_sign(text: &str, sign: Span) -> usize {
    sign.end + text[sign.end..].len() - text[sign.end..].trim_start().len()
}

/// "-n" spelled "minus n" or "negative n" (and back); a flip drops the sign.
pub fn gen_negative(ctx: &GenContext, mode: Mode) -> Result<Vec<Probe>, ProbeError> {
    let rt = ReasoningType::Negative;
    let (seed, mut rng) = ctx.stream(rt, sub_mode(mode), 0);
    let text = ctx.text();
    let mut use_minus = rng.gen_bool(0.5);
    let mut edits = Vec::new();
    for m in ctx.mentions.iter().filter(|m| m.kind == MentionKind::NegativeNumber) {
        let Some(sign) = m.sign_span else { continue };
        let edit = match mode {
            Mode::Flip => EditRecord::text(Span::new(sign.start, after_sign(text, sign)), text, "", "drop-sign"),
            Mode::Preserve if sign.slice(text) == "-" => {
                let word = if use_minus { "minus " } else { "negative " };
                use_minus = !use_minus;
                EditRecord::text(sign, text, word, "sign-to-word")
            }
            Mode::Preserve => {
                EditRecord::text(Span::new(sign.start, after_sign(text, sign)), text, "-", "word-to-sign")
            }
        };
        edits.push(edit);
    }
    finish(ctx, rt, mode, seed, edits)
}

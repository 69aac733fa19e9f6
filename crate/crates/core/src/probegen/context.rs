//! Per-hypothesis state shared by the generators, and sampling helpers.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::config::{derive_seed, rng_from};
use super::probe::{apply_edits, EditRecord, Probe, ProbeDetail};
use super::{GenerationConfig, ProbeError, ReasoningType};
use crate::corpus::{link_scanned, Hypothesis, MentionLink, Resources, Table};
use crate::numparse::{NumberMention, NumeralFormat, NumeralStyle, NumericValue, Rounding};

/// A hypothesis, its table, and what scanning and linking found in them.
pub struct GenContext<'a> {
    pub hyp: &'a Hypothesis,
    pub table: &'a Table,
    pub res: &'a Resources,
    pub config: &'a GenerationConfig,
    pub mentions: Vec<NumberMention>,
    pub links: Vec<MentionLink>,
}

impl<'a> GenContext<'a> {
    pub fn new(hyp: &'a Hypothesis, table: &'a Table, res: &'a Resources, config: &'a GenerationConfig) -> Self {
        let mentions = res.scanner.scan(&hyp.text);
        let links = link_scanned(&mentions, table, &res.scanner);
        GenContext { hyp, table, res, config, mentions, links }
    }

    pub fn text(&self) -> &str {
        &self.hyp.text
    }

    pub fn link_for(&self, mention: usize) -> Option<&MentionLink> {
        self.links.iter().find(|l| l.hyp_mention == mention)
    }

    pub(crate) fn stream(&self, rt: ReasoningType, sub_mode: &str, occ: usize) -> (u64, ChaCha8Rng) {
        let seed = derive_seed(self.config.master_seed, &self.hyp.id, rt, sub_mode, occ);
        (seed, rng_from(seed))
    }

    /// Builds a text probe from edits on the hypothesis.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn text_probe(
        &self,
        rt: ReasoningType,
        sub_mode: &str,
        occ: usize,
        flip: bool,
        seed: u64,
        edits: Vec<EditRecord>,
        detail: Option<ProbeDetail>,
    ) -> Result<Probe, ProbeError> {
        let text = apply_edits(self.text(), &edits).map_err(|e| ProbeError::Unsupported(rt, e))?;
        Ok(Probe {
            probe_id: Probe::probe_id(&self.hyp.id, rt, sub_mode, occ),
            base_id: self.hyp.id.clone(),
            reasoning_type: rt,
            level: rt.level(),
            flip,
            expected_label: if flip { self.hyp.label.flipped() } else { self.hyp.label },
            text: Some(text),
            table_ref: None,
            edits,
            seed,
            sub_mode: sub_mode.to_string(),
            detail,
        })
    }
}

/// Runs `one` for each sub-mode over the eligible items, capping probes per sub-mode.
pub(crate) fn per_mention<T: Copy>(
    ctx: &GenContext,
    rt: ReasoningType,
    sub_modes: &[&'static str],
    eligible: &[(usize, T)],
    mut one: impl FnMut(&'static str, usize, T) -> Option<Result<Probe, ProbeError>>,
) -> Result<Vec<Probe>, ProbeError> {
    if eligible.is_empty() {
        return Err(ProbeError::NoApplicableMention(rt));
    }
    let mut out = Vec::new();
    for sm in sub_modes {
        let mut made = 0;
        for (occ, m) in eligible {
            if made == ctx.config.max_probes_per_hypothesis {
                break;
            }
            if let Some(p) = one(sm, *occ, *m) {
                out.push(p?);
                made += 1;
            }
        }
    }
    if out.is_empty() {
        return Err(ProbeError::NoApplicableMention(rt));
    }
    Ok(out)
}

/// The numeral layout of a mention, plain digits when none was recorded.
pub(crate) fn numeral_of(m: &NumberMention) -> NumeralFormat {
    m.numeral.unwrap_or_else(NumeralFormat::digits)
}

/// Renders `v` in the mention's numeral layout.
pub(crate) fn render_like(m: &NumberMention, v: &NumericValue) -> String {
    numeral_of(m).render(v).unwrap_or_else(|_| v.to_plain_string())
}

/// Renders `v` in digits, keeping grouping and scale word of `fmt`.
pub(crate) fn render_digits(fmt: NumeralFormat, v: &NumericValue) -> String {
    let style = match fmt.style {
        NumeralStyle::Grouped => NumeralStyle::Grouped,
        _ if v.abs() >= NumericValue::from_i64(10_000) && fmt.scale_word.is_none() => NumeralStyle::Grouped,
        _ => NumeralStyle::Digits,
    };
    let f = fmt.with_style(style);
    f.render(v).unwrap_or_else(|_| v.to_plain_string())
}

/// `v` as a whole number of `10^exp` steps.
pub(crate) fn to_steps(v: &NumericValue, exp: i32) -> Option<i128> {
    (v * &NumericValue::pow10(-exp)).to_i128()
}

pub(crate) fn from_steps(k: i128, exp: i32) -> NumericValue {
    NumericValue::new(k, exp)
}

/// Uniform integer in `[lo, hi]` avoiding `exclude`.
pub(crate) fn sample_excluding(rng: &mut ChaCha8Rng, lo: i128, hi: i128, exclude: &[i128]) -> Option<i128> {
    if lo > hi {
        return None;
    }
    let mut ex: Vec<i128> = exclude.iter().copied().filter(|x| (lo..=hi).contains(x)).collect();
    ex.sort_unstable();
    ex.dedup();
    let total = (hi - lo + 1) - ex.len() as i128;
    if total <= 0 {
        return None;
    }
    let mut k = lo + rng.gen_range(0..total);
    for x in ex {
        if x <= k {
            k += 1;
        }
    }
    Some(k)
}

/// A replacement for `x` drawn uniformly from `[x - h|x|, x + h|x|]` on the
/// grid of `10^exp`, never equal to `x`. Zero is replaced by 1 to 9.
pub(crate) fn sample_near(rng: &mut ChaCha8Rng, x: &NumericValue, h: &NumericValue, exp: i32) -> Option<NumericValue> {
    if x.is_zero() {
        return Some(NumericValue::from_i64(rng.gen_range(1..=9)));
    }
    let spread = &x.abs() * h;
    let lo = (x - &spread).round_to_exp(exp, Rounding::Ceil);
    let hi = (x + &spread).round_to_exp(exp, Rounding::Floor);
    let k = sample_excluding(rng, to_steps(&lo, exp)?, to_steps(&hi, exp)?, &[to_steps(x, exp)?])?;
    Some(from_steps(k, exp))
}

/// A factor drawn in steps of 0.001 from one of two intervals given in thousandths.
pub(crate) fn sample_factor(rng: &mut ChaCha8Rng, low: (i64, i64), high: (i64, i64)) -> NumericValue {
    let k = if rng.gen_bool(0.5) { rng.gen_range(low.0..=low.1) } else { rng.gen_range(high.0..=high.1) };
    NumericValue::new(k, -3)
}

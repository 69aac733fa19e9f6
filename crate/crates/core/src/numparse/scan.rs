//! Mention scanning: find every number-bearing span in a piece of text.

use std::cmp::Reverse;
use std::sync::Arc;

use regex::Regex;
use serde::{Deserialize, Serialize};
use std::sync::LazyLock;

use super::date::{find_dates, find_times, DateValue, TimeValue};
use super::format::{FormatDescriptor, NumeralFormat, NumeralStyle, SCALE_WORDS};
use super::forms::is_year_like;
use super::numeric::NumericValue;
use super::units::{UnitCatalog, UnitSpelling};
use super::words::{is_number_word, is_ordinal_word, ordinal_from_words, ordinal_suffix, words_to_numeral};

/// Half-open byte range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        &text[self.start..self.end]
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MentionKind {
    CardinalDigits,
    CardinalWords,
    Ordinal,
    Date,
    Time,
    Percentage,
    Currency,
    ScientificNotation,
    NegativeNumber,
    MeasuredQuantity,
}

impl MentionKind {
    /// Tie-break order among equally long candidates at one position.
    fn priority(self) -> u8 {
        match self {
            MentionKind::Date => 0,
            MentionKind::Time => 1,
            MentionKind::Currency => 2,
            MentionKind::Percentage => 3,
            MentionKind::ScientificNotation => 4,
            MentionKind::MeasuredQuantity => 5,
            MentionKind::Ordinal => 6,
            MentionKind::NegativeNumber => 7,
            MentionKind::CardinalDigits => 8,
            MentionKind::CardinalWords => 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum MentionValue {
    Number(NumericValue),
    Date(DateValue),
    Time(TimeValue),
}

impl MentionValue {
    pub fn as_number(&self) -> Option<&NumericValue> {
        match self {
            MentionValue::Number(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_date(&self) -> Option<&DateValue> {
        match self {
            MentionValue::Date(d) => Some(d),
            _ => None,
        }
    }
}

/// Equality of the quantities behind two mentions, ignoring how they were written.
pub fn value_equal(a: &MentionValue, b: &MentionValue) -> bool {
    match (a, b) {
        (MentionValue::Number(x), MentionValue::Number(y)) => x == y,
        (MentionValue::Date(x), MentionValue::Date(y)) => x.same_day(y),
        (MentionValue::Time(x), MentionValue::Time(y)) => x == y,
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberMention {
    pub span: Span,
    pub surface: String,
    pub kind: MentionKind,
    pub value: MentionValue,
    /// Catalog unit id for measured quantities and currency amounts.
    pub unit: Option<String>,
    pub format: FormatDescriptor,
    /// How the numeral was written; absent for dates, times and ordinals.
    pub numeral: Option<NumeralFormat>,
    /// The numeral itself, including any scale word.
    pub number_span: Span,
    pub unit_span: Option<Span>,
    pub unit_spelling: Option<UnitSpelling>,
    /// The "-", "minus" or "negative" marker of a negative number.
    pub sign_span: Option<Span>,
}

impl NumberMention {
    pub fn number(&self) -> Option<&NumericValue> {
        self.value.as_number()
    }

    /// The mention's surface with `part` (absolute offsets) replaced by `new`.
    pub fn splice(&self, part: Span, new: &str) -> String {
        debug_assert!(self.span.contains(&part));
        let a = part.start - self.span.start;
        let b = part.end - self.span.start;
        format!("{}{}{}", &self.surface[..a], new, &self.surface[b..])
    }

    /// The surface with the numeral replaced.
    pub fn with_number_text(&self, new: &str) -> String {
        self.splice(self.number_span, new)
    }

    /// Plain cardinal written in digits that reads as a year.
    pub fn is_year_like(&self) -> bool {
        matches!(self.kind, MentionKind::CardinalDigits | MentionKind::CardinalWords)
            && self.numeral.is_some_and(|f| f.scale_word.is_none())
            && self.number().is_some_and(is_year_like)
    }
}

static DIGITS_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(\d{1,3}(?:,\d{3})+|\d+)(?:\.(\d+))?(?:[eE]([+-]?\d+))?").unwrap());
static SCALE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^\s+(thousand|million|billion|trillion)\b").unwrap());
static WORD_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Za-z]+(?:-[A-Za-z]+)*").unwrap());
static ORDINAL_DIGITS_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(\d+)(st|nd|rd|th)\b").unwrap());

const CONNECTORS: [&str; 3] = ["and", "point", "oh"];
const DETERMINERS: [&str; 12] =
    ["the", "this", "that", "which", "each", "every", "any", "no", "another", "a", "some", "only"];

/// A bare numeral before composite extension.
#[derive(Debug, Clone)]
struct Numeral {
    span: Span,
    value: NumericValue,
    format: NumeralFormat,
    /// No letter or digit glued on the right.
    free_right: bool,
}

impl Numeral {
    fn base_kind(&self) -> MentionKind {
        match self.format.style {
            NumeralStyle::Words { .. } => MentionKind::CardinalWords,
            NumeralStyle::Scientific => MentionKind::ScientificNotation,
            _ => MentionKind::CardinalDigits,
        }
    }

    fn base_format(&self) -> FormatDescriptor {
        match self.format.style {
            NumeralStyle::Digits => FormatDescriptor::Digits,
            NumeralStyle::Grouped => FormatDescriptor::GroupedThousands,
            NumeralStyle::Words { .. } => FormatDescriptor::Words,
            NumeralStyle::Scientific => FormatDescriptor::SciENotation,
        }
    }

    fn is_digits(&self) -> bool {
        !matches!(self.format.style, NumeralStyle::Words { .. })
    }
}

/// Mention scanner bound to a unit catalog.
#[derive(Debug, Clone)]
pub struct Scanner {
    catalog: Arc<UnitCatalog>,
    suffixes: Vec<String>,
    prefixes: Vec<String>,
    percent_words: Vec<String>,
    negative_words: Vec<String>,
}

static BUNDLED: LazyLock<Scanner> = LazyLock::new(|| Scanner::new(UnitCatalog::bundled().clone()));

/// Scan with the bundled catalog.
pub fn scan_mentions(text: &str) -> Vec<NumberMention> {
    Scanner::bundled().scan(text)
}

fn longest_first(mut v: Vec<String>) -> Vec<String> {
    v.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    v.dedup();
    v
}

fn starts_with_ci(text: &str, pos: usize, pat: &str) -> bool {
    text.get(pos..pos + pat.len()).is_some_and(|s| s.eq_ignore_ascii_case(pat))
}

fn ends_with_ci(text: &str, end: usize, pat: &str) -> bool {
    end >= pat.len() && text.get(end - pat.len()..end).is_some_and(|s| s.eq_ignore_ascii_case(pat))
}

fn char_before(text: &str, idx: usize) -> Option<char> {
    text[..idx].chars().next_back()
}

fn char_after(text: &str, idx: usize) -> Option<char> {
    text[idx..].chars().next()
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn previous_word(text: &str, idx: usize) -> Option<String> {
    let head = text[..idx].trim_end();
    let start = head.rfind(|c: char| !c.is_ascii_alphabetic()).map(|i| i + 1).unwrap_or(0);
    let w = &head[start..];
    (!w.is_empty()).then(|| w.to_ascii_lowercase())
}

impl Scanner {
    pub fn new(catalog: UnitCatalog) -> Scanner {
        let suffixes = longest_first(catalog.suffix_aliases().map(str::to_string).collect());
        let prefixes = longest_first(catalog.prefix_symbols().map(str::to_string).collect());
        let lower = |v: &[String]| longest_first(v.iter().map(|s| s.to_lowercase()).collect());
        let percent_words = lower(&catalog.format.percent_words);
        let negative_words = lower(&catalog.format.negative_words);
        Scanner { catalog: Arc::new(catalog), suffixes, prefixes, percent_words, negative_words }
    }

    pub fn bundled() -> &'static Scanner {
        &BUNDLED
    }

    pub fn catalog(&self) -> &UnitCatalog {
        &self.catalog
    }

    /// All maximal non-overlapping mentions, left to right.
    pub fn scan(&self, text: &str) -> Vec<NumberMention> {
        let mut cands: Vec<NumberMention> = Vec::new();
        for (s, e, d) in find_dates(text) {
            let span = Span::new(s, e);
            cands.push(NumberMention {
                span,
                surface: span.slice(text).to_string(),
                kind: MentionKind::Date,
                format: d.source_format,
                value: MentionValue::Date(d),
                unit: None,
                numeral: None,
                number_span: span,
                unit_span: None,
                unit_spelling: None,
                sign_span: None,
            });
        }
        for (s, e, t, fmt) in find_times(text) {
            let span = Span::new(s, e);
            cands.push(NumberMention {
                span,
                surface: span.slice(text).to_string(),
                kind: MentionKind::Time,
                value: MentionValue::Time(t),
                format: fmt,
                unit: None,
                numeral: None,
                number_span: span,
                unit_span: None,
                unit_spelling: None,
                sign_span: None,
            });
        }
        self.ordinals(text, &mut cands);
        let numerals = self.digit_numerals(text).into_iter().chain(self.word_numerals(text));
        for n in numerals {
            self.composites(text, &n, &mut cands);
        }
        let negatives: Vec<NumberMention> = cands.iter().filter_map(|c| self.negative_of(text, c)).collect();
        cands.extend(negatives);

        cands.sort_by_key(|c| (c.span.start, Reverse(c.span.end), c.kind.priority()));
        let mut out: Vec<NumberMention> = Vec::new();
        let mut last_end = 0;
        for c in cands {
            if c.span.start >= last_end && !c.span.is_empty() {
                last_end = c.span.end;
                out.push(c);
            }
        }
        out
    }

    /// The single mention covering all of `text` (surrounding whitespace ignored).
    pub fn sole_mention(&self, text: &str) -> Option<NumberMention> {
        let trimmed = text.trim();
        let mut ms = self.scan(trimmed);
        if ms.len() == 1 && ms[0].span == Span::new(0, trimmed.len()) {
            ms.pop()
        } else {
            None
        }
    }

    fn ordinals(&self, text: &str, out: &mut Vec<NumberMention>) {
        let mut push = |span: Span, n: u64, format: FormatDescriptor| {
            out.push(NumberMention {
                span,
                surface: span.slice(text).to_string(),
                kind: MentionKind::Ordinal,
                value: MentionValue::Number(NumericValue::new(n, 0)),
                unit: None,
                format,
                numeral: None,
                number_span: span,
                unit_span: None,
                unit_spelling: None,
                sign_span: None,
            });
        };
        for c in ORDINAL_DIGITS_RE.captures_iter(text) {
            let m = c.get(0).unwrap();
            if let Ok(n) = c[1].parse::<u64>() {
                if n > 0 && c[2].eq_ignore_ascii_case(ordinal_suffix(n)) {
                    push(Span::new(m.start(), m.end()), n, FormatDescriptor::OrdinalSuffix);
                }
            }
        }
        let tokens: Vec<regex::Match> = WORD_RE.find_iter(text).collect();
        for (i, t) in tokens.iter().enumerate() {
            let last_part = t.as_str().rsplit('-').next().unwrap_or("");
            if !is_ordinal_word(last_part) {
                continue;
            }
            let Ok(n) = ordinal_from_words(t.as_str()) else { continue };
            push(Span::new(t.start(), t.end()), n, FormatDescriptor::OrdinalWord);
            // "twenty first" written with a space.
            if i > 0 {
                let p = &tokens[i - 1];
                if text[p.end()..t.start()].trim().is_empty() && is_number_word(p.as_str()) {
                    if let Ok(n) = ordinal_from_words(&text[p.start()..t.end()]) {
                        push(Span::new(p.start(), t.end()), n, FormatDescriptor::OrdinalWord);
                    }
                }
            }
        }
    }

    fn digit_numerals(&self, text: &str) -> Vec<Numeral> {
        let mut out = Vec::new();
        for c in DIGITS_RE.captures_iter(text) {
            let m = c.get(0).unwrap();
            if char_before(text, m.start()).is_some_and(|ch| is_word_char(ch) || ch == '.' || ch == ',') {
                continue;
            }
            let int = c[1].replace(',', "");
            let grouped = c[1].contains(',');
            let frac = c.get(2).map(|f| f.as_str()).unwrap_or("");
            let decimals = frac.len() as i32;
            let mantissa = if frac.is_empty() { int.clone() } else { format!("{int}.{frac}") };
            let Some(mut value) = NumericValue::parse_decimal(&mantissa) else { continue };
            let mut end = m.end();
            let format = if let Some(e) = c.get(3) {
                let Ok(exp) = e.as_str().parse::<i32>() else { continue };
                value = &value * &NumericValue::pow10(exp);
                NumeralFormat { style: NumeralStyle::Scientific, precision_exp: exp - decimals, scale_word: None }
            } else {
                let style = if grouped { NumeralStyle::Grouped } else { NumeralStyle::Digits };
                let mut f = NumeralFormat { style, precision_exp: -decimals, scale_word: None };
                if let Some(s) = SCALE_RE.captures(&text[end..]) {
                    let word = s[1].to_ascii_lowercase();
                    let exp = SCALE_WORDS.iter().find(|(w, _)| *w == word).map(|(_, e)| *e).unwrap();
                    value = &value * &NumericValue::pow10(exp as i32);
                    f.scale_word = Some(exp);
                    f.precision_exp += exp as i32;
                    end += s.get(0).unwrap().end();
                }
                f
            };
            let free_right = !char_after(text, end).is_some_and(is_word_char);
            out.push(Numeral { span: Span::new(m.start(), end), value, format, free_right });
        }
        out
    }

    fn word_numerals(&self, text: &str) -> Vec<Numeral> {
        let tokens: Vec<regex::Match> = WORD_RE.find_iter(text).collect();
        let is_connector = |t: &regex::Match| CONNECTORS.contains(&t.as_str().to_ascii_lowercase().as_str());
        let is_numberish = |t: &regex::Match| t.as_str().split('-').all(is_number_word);
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            if !is_numberish(&tokens[i]) {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            while j < tokens.len()
                && text[tokens[j - 1].end()..tokens[j].start()].chars().all(|c| c == ' ')
                && (is_numberish(&tokens[j]) || is_connector(&tokens[j]))
            {
                j += 1;
            }
            let run = &tokens[i..j];
            let mut k = 0;
            while k < run.len() {
                if !is_numberish(&run[k]) {
                    k += 1;
                    continue;
                }
                let mut parsed = None;
                for stop in (k + 1..=run.len()).rev() {
                    if is_connector(&run[stop - 1]) {
                        continue;
                    }
                    let span = Span::new(run[k].start(), run[stop - 1].end());
                    if let Ok(v) = words_to_numeral(span.slice(text)) {
                        parsed = Some((stop, span, v));
                        break;
                    }
                }
                let Some((stop, span, value)) = parsed else {
                    k += 1;
                    continue;
                };
                k = stop;
                let phrase = span.slice(text).to_ascii_lowercase();
                if phrase == "one" && previous_word(text, span.start).is_some_and(|w| DETERMINERS.contains(&w.as_str()))
                {
                    continue;
                }
                let year_pairs = is_year_like(&value) && !phrase.contains("thousand");
                let style = NumeralStyle::Words { hyphenate: phrase.contains('-'), year_pairs };
                let format = NumeralFormat { style, precision_exp: -(value.decimal_places() as i32), scale_word: None };
                out.push(Numeral { span, value, format, free_right: true });
            }
            i = j;
        }
        out
    }

    fn bare(&self, text: &str, n: &Numeral) -> NumberMention {
        NumberMention {
            span: n.span,
            surface: n.span.slice(text).to_string(),
            kind: n.base_kind(),
            value: MentionValue::Number(n.value.clone()),
            unit: None,
            format: n.base_format(),
            numeral: Some(n.format),
            number_span: n.span,
            unit_span: None,
            unit_spelling: None,
            sign_span: None,
        }
    }

    fn composites(&self, text: &str, n: &Numeral, out: &mut Vec<NumberMention>) {
        if n.free_right {
            out.push(self.bare(text, n));
        }
        let after = &text[n.span.end..];
        let gap = after.len() - after.trim_start_matches([' ', '\u{a0}']).len();
        let word_pos = n.span.end + gap;

        // Percentages.
        if after.starts_with('%') || (gap == 1 && after[1..].starts_with('%')) {
            let pos = if after.starts_with('%') { n.span.end } else { n.span.end + 1 };
            let unit_span = Span::new(pos, pos + 1);
            out.push(self.extend(
                text,
                n,
                MentionKind::Percentage,
                FormatDescriptor::PercentSign,
                n.span.start,
                unit_span,
                None,
                None,
            ));
        } else if gap > 0 {
            for w in &self.percent_words {
                let end = word_pos + w.len();
                if starts_with_ci(text, word_pos, w) && !char_after(text, end).is_some_and(is_word_char) {
                    let unit_span = Span::new(word_pos, end);
                    out.push(self.extend(
                        text,
                        n,
                        MentionKind::Percentage,
                        FormatDescriptor::PercentWord,
                        n.span.start,
                        unit_span,
                        None,
                        None,
                    ));
                    break;
                }
            }
        }

        // Unit or currency code after the number; glued only to digits.
        if gap > 0 || n.is_digits() {
            for alias in &self.suffixes {
                let end = word_pos + alias.len();
                if !starts_with_ci(text, word_pos, alias) || char_after(text, end).is_some_and(is_word_char) {
                    continue;
                }
                let Some((unit, spelling)) = self.catalog.lookup_alias(alias) else { continue };
                let (kind, format) = if unit.is_currency() {
                    (MentionKind::Currency, FormatDescriptor::CurrencySuffix)
                } else {
                    (MentionKind::MeasuredQuantity, FormatDescriptor::UnitSuffix)
                };
                let unit_span = Span::new(word_pos, end);
                out.push(self.extend(
                    text,
                    n,
                    kind,
                    format,
                    n.span.start,
                    unit_span,
                    Some(unit.id.clone()),
                    Some(spelling),
                ));
                break;
            }
        }

        // Currency symbol before the number.
        if n.is_digits() {
            let head_end = if char_before(text, n.span.start) == Some(' ') { n.span.start - 1 } else { n.span.start };
            for p in &self.prefixes {
                let spaced = head_end != n.span.start;
                if !text[..head_end].ends_with(p.as_str())
                    || (spaced && !p.ends_with(|c: char| c.is_alphabetic() || c == '.' || c == '$'))
                {
                    continue;
                }
                let start = head_end - p.len();
                if p.starts_with(|c: char| c.is_alphabetic()) && char_before(text, start).is_some_and(is_word_char) {
                    continue;
                }
                if !n.free_right {
                    break;
                }
                let unit = self.catalog.lookup_prefix(p).expect("prefix comes from the catalog");
                let unit_span = Span::new(start, head_end);
                out.push(self.extend(
                    text,
                    n,
                    MentionKind::Currency,
                    FormatDescriptor::CurrencyPrefix,
                    start,
                    unit_span,
                    Some(unit.id.clone()),
                    Some(UnitSpelling::PrefixSymbol),
                ));
                break;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        text: &str,
        n: &Numeral,
        kind: MentionKind,
        format: FormatDescriptor,
        start: usize,
        unit_span: Span,
        unit: Option<String>,
        unit_spelling: Option<UnitSpelling>,
    ) -> NumberMention {
        let span = Span::new(start.min(n.span.start), unit_span.end.max(n.span.end));
        NumberMention {
            span,
            surface: span.slice(text).to_string(),
            kind,
            value: MentionValue::Number(n.value.clone()),
            unit,
            format,
            numeral: Some(n.format),
            number_span: n.span,
            unit_span: Some(unit_span),
            unit_spelling,
            sign_span: None,
        }
    }

    /// The negative reading of `c` when a sign marker precedes it.
    fn negative_of(&self, text: &str, c: &NumberMention) -> Option<NumberMention> {
        let negatable = matches!(
            c.kind,
            MentionKind::CardinalDigits
                | MentionKind::CardinalWords
                | MentionKind::ScientificNotation
                | MentionKind::Percentage
                | MentionKind::Currency
                | MentionKind::MeasuredQuantity
        );
        let value = c.number()?;
        if !negatable || value.is_zero() || value.is_negative() {
            return None;
        }
        let s = c.span.start;
        let sign_span = if text[..s].ends_with('-') {
            let before = char_before(text, s - 1);
            if before.is_some_and(|ch| !(ch.is_whitespace() || ch == '(')) {
                return None;
            }
            Span::new(s - 1, s)
        } else {
            let head_end = s - (text[..s].len() - text[..s].trim_end_matches(' ').len());
            if head_end == s {
                return None;
            }
            let w = self.negative_words.iter().find(|w| ends_with_ci(text, head_end, w))?;
            let ws = head_end - w.len();
            if char_before(text, ws).is_some_and(is_word_char) {
                return None;
            }
            Span::new(ws, s)
        };
        let span = Span::new(sign_span.start, c.span.end);
        Some(NumberMention {
            span,
            surface: span.slice(text).to_string(),
            kind: MentionKind::NegativeNumber,
            value: MentionValue::Number(-value.clone()),
            sign_span: Some(sign_span),
            ..c.clone()
        })
    }
}

//! Format descriptors: which surface pattern a mention was written in, and how
//! to write a value back in that pattern.

use serde::{Deserialize, Serialize};

use super::numeric::{NumericValue, Rounding};
use super::words::{numeral_to_words_styled, WordStyle};
use super::NumParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "layout")]
pub enum DatePattern {
    /// 03-06-1986
    DmyHyphen,
    /// 03/06/1986
    DmySlash,
    /// 1986-06-03
    Iso,
    /// 3 June 1986, 3rd June, 1986
    DayMonthYear { ordinal: bool, comma: bool },
    /// June 3, 1986
    MonthDayYear { ordinal: bool, comma: bool },
    /// June 1986
    MonthYear { comma: bool },
}

/// Surface pattern of a mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormatDescriptor {
    Digits,
    GroupedThousands,
    Words,
    SciENotation,
    Date(DatePattern),
    Time24,
    Time12,
    OrdinalSuffix,
    OrdinalWord,
    PercentSign,
    PercentWord,
    CurrencyPrefix,
    CurrencySuffix,
    UnitSuffix,
}

impl FormatDescriptor {
    pub fn date_pattern(self) -> Option<DatePattern> {
        match self {
            FormatDescriptor::Date(p) => Some(p),
            _ => None,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            FormatDescriptor::Digits => "digits",
            FormatDescriptor::GroupedThousands => "grouped-thousands",
            FormatDescriptor::Words => "words",
            FormatDescriptor::SciENotation => "sci-e-notation",
            FormatDescriptor::Date(DatePattern::DmyHyphen) => "DMY-hyphen",
            FormatDescriptor::Date(DatePattern::DmySlash) => "DMY-slash",
            FormatDescriptor::Date(DatePattern::Iso) => "ISO-date",
            FormatDescriptor::Date(DatePattern::DayMonthYear { .. }) => "day-MonthName-year",
            FormatDescriptor::Date(DatePattern::MonthDayYear { .. }) => "MonthName-day-comma-year",
            FormatDescriptor::Date(DatePattern::MonthYear { .. }) => "MonthName-year",
            FormatDescriptor::Time24 => "time-24h",
            FormatDescriptor::Time12 => "time-12h",
            FormatDescriptor::OrdinalSuffix => "ordinal-suffix",
            FormatDescriptor::OrdinalWord => "ordinal-word",
            FormatDescriptor::PercentSign => "percent-sign",
            FormatDescriptor::PercentWord => "percent-word",
            FormatDescriptor::CurrencyPrefix => "currency-prefix",
            FormatDescriptor::CurrencySuffix => "currency-suffix",
            FormatDescriptor::UnitSuffix => "unit-suffix",
        }
    }
}

/// How the numeral inside a mention was written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "style")]
pub enum NumeralStyle {
    Digits,
    Grouped,
    Words { hyphenate: bool, year_pairs: bool },
    Scientific,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NumeralFormat {
    pub style: NumeralStyle,
    /// Exponent of the smallest written digit: "245.4 million" is 5, "37" is 0.
    pub precision_exp: i32,
    /// Exponent of a trailing scale word ("million" is 6).
    pub scale_word: Option<u32>,
}

pub const SCALE_WORDS: [(&str, u32); 4] = [("thousand", 3), ("million", 6), ("billion", 9), ("trillion", 12)];

pub fn scale_word_name(exp: u32) -> &'static str {
    SCALE_WORDS.iter().find(|(_, e)| *e == exp).map(|(w, _)| *w).unwrap_or("")
}

impl NumeralFormat {
    pub fn digits() -> Self {
        NumeralFormat { style: NumeralStyle::Digits, precision_exp: 0, scale_word: None }
    }

    /// Smallest step representable in this format.
    pub fn quantum(&self) -> NumericValue {
        NumericValue::pow10(self.precision_exp)
    }

    pub fn with_style(self, style: NumeralStyle) -> Self {
        NumeralFormat { style, ..self }
    }

    /// Round `value` to what this format can show.
    pub fn quantize(&self, value: &NumericValue) -> NumericValue {
        value.round_to_exp(self.precision_exp, Rounding::HalfAwayFromZero)
    }

    pub fn render(&self, value: &NumericValue) -> Result<String, NumParseError> {
        let value = self.quantize(value);
        let scale = self.scale_word.unwrap_or(0) as i32;
        let scaled = &value * &NumericValue::pow10(-scale);
        let places = (scale - self.precision_exp).max(0) as u32;
        let mut out = match self.style {
            NumeralStyle::Digits => scaled.to_fixed(places),
            NumeralStyle::Grouped => scaled.to_grouped(places),
            NumeralStyle::Words { hyphenate, year_pairs } => {
                numeral_to_words_styled(&scaled, WordStyle { hyphenate, year_pairs })?
            }
            NumeralStyle::Scientific => format_scientific(&scaled),
        };
        if let Some(e) = self.scale_word {
            out.push(' ');
            out.push_str(scale_word_name(e));
        }
        Ok(out)
    }
}

/// Engineering-style e-notation with a coefficient in [1, 1000): 116111561 → "116.111561e6".
pub fn format_scientific(value: &NumericValue) -> String {
    let Some(mag) = value.magnitude() else {
        return "0e0".to_string();
    };
    let exp = mag.div_euclid(3) * 3;
    let coeff = value * &NumericValue::pow10(-exp);
    format!("{}e{}", coeff.to_plain_string(), exp)
}

/// Parse any e-notation literal ("2.5e3", "1E-4", "116.111561e6").
pub fn parse_scientific(surface: &str) -> Result<NumericValue, NumParseError> {
    let s = surface.trim();
    let has_exp = s.contains(['e', 'E']);
    if !has_exp || s.contains(',') {
        return Err(NumParseError::NotScientific(surface.to_string()));
    }
    NumericValue::parse_decimal(s).ok_or_else(|| NumParseError::NotScientific(surface.to_string()))
}

//! Detection, parsing, normalization, conversion and re-rendering of numbers
//! written in English prose and table cells.

mod date;
mod format;
mod forms;
mod numeric;
mod scan;
mod units;
mod words;

pub use date::{format_date, format_time, month_from_name, parse_date, DateValue, TimeValue, MONTHS};
pub use format::{
    format_scientific, parse_scientific, scale_word_name, DatePattern, FormatDescriptor, NumeralFormat, NumeralStyle,
    SCALE_WORDS,
};
pub use forms::{
    format_ordinal, is_year_like, parse_currency, parse_ordinal, parse_percentage, render_percentage_sign,
    render_percentage_word, round_magnitude, rounding_exp, Currency, Percentage,
};
pub use numeric::{NumericValue, ParseDecimalError, Rounding, Sign, DIVISION_DIGITS};
pub use scan::{scan_mentions, value_equal, MentionKind, MentionValue, NumberMention, Scanner, Span};
pub use units::{convert_unit, FormatCatalog, UnitCatalog, UnitEntry, UnitSpelling, BUNDLED_CATALOG, CATALOG_VERSION};
pub use words::{
    is_number_word, is_ordinal_word, numeral_to_words, numeral_to_words_styled, ordinal_from_words, ordinal_suffix,
    ordinal_to_words, words_to_numeral, WordStyle, WORDS_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumParseError {
    #[error("not a number phrase: {0:?}")]
    NotANumberPhrase(String),
    #[error("value out of the supported range")]
    OutOfRange,
    #[error("not an ordinal: {0:?}")]
    NotAnOrdinal(String),
    #[error("calendar-invalid date: {0}")]
    InvalidDate(String),
    #[error("not a date: {0:?}")]
    NotADate(String),
    #[error("format mismatch: {0}")]
    FormatMismatch(String),
    #[error("not scientific notation: {0:?}")]
    NotScientific(String),
    #[error("not a percentage: {0:?}")]
    NotAPercentage(String),
    #[error("not a currency amount: {0:?}")]
    NotCurrency(String),
    #[error("cannot convert {from} to {to}: different scale families")]
    DimensionMismatch { from: String, to: String },
    #[error("cannot convert {from} to {to}: no exchange rates")]
    NoExchangeRate { from: String, to: String },
    #[error("unknown unit {0:?}")]
    UnknownUnit(String),
    #[error("unit catalog: {0}")]
    Catalog(String),
}

//! Magnitude rounding and the small single-purpose forms: ordinals,
//! percentages and currency amounts.

use super::format::FormatDescriptor;
use super::numeric::{NumericValue, Rounding};
use super::scan::{MentionKind, MentionValue, Scanner};
use super::words::{ordinal_from_words, ordinal_suffix, ordinal_to_words};
use super::NumParseError;

/// Exponent of the rounding granularity used by [`round_magnitude`].
///
/// | |v| < 10^3 | tens |
/// | |v| < 10^5 | hundreds |
/// | |v| < 10^7 | thousands |
/// | otherwise  | three significant digits |
pub fn rounding_exp(value: &NumericValue) -> i32 {
    let a = value.abs();
    if a < NumericValue::pow10(3) {
        1
    } else if a < NumericValue::pow10(5) {
        2
    } else if a < NumericValue::pow10(7) {
        3
    } else {
        a.magnitude().expect("nonzero") - 2
    }
}

/// Tiered rounding, half away from zero: 138 → 140, 116,111,561 → 116,000,000.
pub fn round_magnitude(value: &NumericValue) -> NumericValue {
    value.round_to_exp(rounding_exp(value), Rounding::HalfAwayFromZero)
}

/// Plain integers that read as a calendar year (1000..=2100).
pub fn is_year_like(value: &NumericValue) -> bool {
    value.is_integer() && value.to_i128().is_some_and(|v| (1000..=2100).contains(&v))
}

/// "3rd" or "third" → 3. A digit form must carry its matching suffix.
pub fn parse_ordinal(surface: &str) -> Result<u64, NumParseError> {
    let s = surface.trim();
    let err = || NumParseError::NotAnOrdinal(surface.to_string());
    let split = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    if split == 0 {
        return ordinal_from_words(s).map_err(|_| err());
    }
    let n: u64 = s[..split].parse().map_err(|_| err())?;
    if n == 0 || !s[split..].eq_ignore_ascii_case(ordinal_suffix(n)) {
        return Err(err());
    }
    Ok(n)
}

/// Render an ordinal as "3rd" (`OrdinalSuffix`) or "third" (`OrdinalWord`).
pub fn format_ordinal(n: u64, fmt: FormatDescriptor) -> Result<String, NumParseError> {
    match fmt {
        FormatDescriptor::OrdinalSuffix if n > 0 => Ok(format!("{n}{}", ordinal_suffix(n))),
        FormatDescriptor::OrdinalSuffix => Err(NumParseError::OutOfRange),
        FormatDescriptor::OrdinalWord => ordinal_to_words(n),
        other => Err(NumParseError::FormatMismatch(format!("{other:?} is not an ordinal layout"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Percentage {
    pub value: NumericValue,
    pub format: FormatDescriptor,
}

/// "35%" or "35 percent" → 35.
pub fn parse_percentage(surface: &str) -> Result<Percentage, NumParseError> {
    let err = || NumParseError::NotAPercentage(surface.to_string());
    let m = Scanner::bundled().sole_mention(surface).ok_or_else(err)?;
    match (m.kind, m.value) {
        (MentionKind::Percentage, MentionValue::Number(value)) => Ok(Percentage { value, format: m.format }),
        (MentionKind::NegativeNumber, MentionValue::Number(value))
            if matches!(m.format, FormatDescriptor::PercentSign | FormatDescriptor::PercentWord) =>
        {
            Ok(Percentage { value, format: m.format })
        }
        _ => Err(err()),
    }
}

pub fn render_percentage_sign(number: &str) -> String {
    format!("{number}%")
}

pub fn render_percentage_word(number: &str) -> String {
    format!("{number} percent")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Currency {
    pub value: NumericValue,
    /// Catalog unit id ("USD").
    pub unit: String,
    pub format: FormatDescriptor,
}

/// "$137 million", "US$ 5", "5 million USD" → amount and currency id.
pub fn parse_currency(surface: &str) -> Result<Currency, NumParseError> {
    let err = || NumParseError::NotCurrency(surface.to_string());
    let m = Scanner::bundled().sole_mention(surface).ok_or_else(err)?;
    let is_currency_format = matches!(m.format, FormatDescriptor::CurrencyPrefix | FormatDescriptor::CurrencySuffix);
    match (m.kind, m.value, m.unit) {
        (MentionKind::Currency | MentionKind::NegativeNumber, MentionValue::Number(value), Some(unit))
            if is_currency_format =>
        {
            Ok(Currency { value, unit, format: m.format })
        }
        _ => Err(err()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> NumericValue {
        s.parse().unwrap()
    }

    #[test]
    fn rounding_examples() {
        assert_eq!(round_magnitude(&n("116111561")), n("116000000"));
        assert_eq!(round_magnitude(&n("0")), n("0"));
        assert_eq!(round_magnitude(&n("138")), n("140"));
        assert_eq!(round_magnitude(&n("-138")), n("-140"));
        assert_eq!(round_magnitude(&n("12345")), n("12300"));
        assert_eq!(round_magnitude(&n("1234567")), n("1235000"));
        assert_eq!(round_magnitude(&n("995")), n("1000"));
    }

    /// Independent oracle: integer arithmetic on i128 with explicit halves.
    fn oracle(v: i128) -> i128 {
        let a = v.abs();
        let g: i128 = if a < 1_000 {
            10
        } else if a < 100_000 {
            100
        } else if a < 10_000_000 {
            1_000
        } else {
            let digits = a.to_string().len() as u32;
            10i128.pow(digits - 3)
        };
        let q = (a + g / 2) / g * g;
        if v < 0 {
            -q
        } else {
            q
        }
    }

    #[test]
    fn tier_boundaries_match_oracle() {
        let mut probes = Vec::new();
        for edge in [1_000i128, 100_000, 10_000_000, 100_000_000, 1_000_000_000, 1_000_000_000_000] {
            for d in -60..=60 {
                probes.push(edge + d);
                probes.push(edge - edge / 200 + d);
            }
        }
        probes.extend(0..2_000);
        for v in probes {
            for s in [v, -v] {
                let got = round_magnitude(&NumericValue::new(s, 0));
                assert_eq!(got, NumericValue::new(oracle(s), 0), "value {s}");
                let g = NumericValue::pow10(rounding_exp(&NumericValue::new(s, 0)));
                let diff = (&got - &NumericValue::new(s, 0)).abs();
                assert!(&diff + &diff <= g, "{s}");
            }
        }
    }

    #[test]
    fn ordinal_forms() {
        assert_eq!(parse_ordinal("3rd").unwrap(), 3);
        assert_eq!(parse_ordinal("first").unwrap(), 1);
        assert_eq!(parse_ordinal("11th").unwrap(), 11);
        assert!(parse_ordinal("3th").is_err());
        assert!(parse_ordinal("0th").is_err());
        assert!(parse_ordinal("banana").is_err());
        assert_eq!(format_ordinal(3, FormatDescriptor::OrdinalWord).unwrap(), "third");
        assert_eq!(format_ordinal(1, FormatDescriptor::OrdinalSuffix).unwrap(), "1st");
        assert_eq!(format_ordinal(22, FormatDescriptor::OrdinalSuffix).unwrap(), "22nd");
        assert!(format_ordinal(2, FormatDescriptor::Digits).is_err());
    }

    #[test]
    fn percentages() {
        let p = parse_percentage("35%").unwrap();
        assert_eq!((p.value, p.format), (n("35"), FormatDescriptor::PercentSign));
        let p = parse_percentage("35 percent").unwrap();
        assert_eq!((p.value, p.format), (n("35"), FormatDescriptor::PercentWord));
        assert_eq!(parse_percentage("12.5 per cent").unwrap().value, n("12.5"));
        assert!(matches!(parse_percentage("35"), Err(NumParseError::NotAPercentage(_))));
        assert_eq!(render_percentage_word("35"), "35 percent");
        assert_eq!(render_percentage_sign("35"), "35%");
    }

    #[test]
    fn currencies() {
        let c = parse_currency("$137 million").unwrap();
        assert_eq!((c.value, c.unit.as_str()), (n("137000000"), "USD"));
        let c = parse_currency("5 million USD").unwrap();
        assert_eq!((c.value, c.format), (n("5000000"), FormatDescriptor::CurrencySuffix));
        assert_eq!(parse_currency("€12").unwrap().unit, "EUR");
        assert_eq!(parse_currency("-$3").unwrap().value, n("-3"));
        assert!(matches!(parse_currency("12 meters"), Err(NumParseError::NotCurrency(_))));
    }
}

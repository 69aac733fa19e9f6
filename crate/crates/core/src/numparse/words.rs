//! English number words: cardinals, ordinals and year-pair readings.

use super::numeric::NumericValue;
use super::NumParseError;

const UNITS: [&str; 10] = ["zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine"];
const TEENS: [&str; 10] =
    ["ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"];
const TENS: [&str; 10] = ["", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"];
const SCALES: [(&str, u32); 4] = [("thousand", 3), ("million", 6), ("billion", 9), ("trillion", 12)];

const ORDINAL_UNITS: [&str; 10] =
    ["zeroth", "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth"];
const ORDINAL_TEENS: [&str; 10] = [
    "tenth",
    "eleventh",
    "twelfth",
    "thirteenth",
    "fourteenth",
    "fifteenth",
    "sixteenth",
    "seventeenth",
    "eighteenth",
    "nineteenth",
];
const ORDINAL_TENS: [&str; 10] =
    ["", "", "twentieth", "thirtieth", "fortieth", "fiftieth", "sixtieth", "seventieth", "eightieth", "ninetieth"];

/// Largest magnitude (exclusive) accepted by [`numeral_to_words`].
pub const WORDS_LIMIT: i128 = 1_000_000_000_000_000;

/// How [`numeral_to_words_styled`] renders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WordStyle {
    /// Join compound tens with a hyphen ("forty-four") instead of a space.
    pub hyphenate: bool,
    /// Read four-digit years as two pairs ("nineteen eighty six").
    pub year_pairs: bool,
}

impl WordStyle {
    pub const CANONICAL: WordStyle = WordStyle { hyphenate: true, year_pairs: false };
    pub const SPOKEN: WordStyle = WordStyle { hyphenate: false, year_pairs: true };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Unit(u32),
    Teen(u32),
    Tens(u32),
    Hundred,
    Scale(u32),
    Oh,
}

fn classify(word: &str) -> Option<Tok> {
    if let Some(i) = UNITS.iter().position(|w| *w == word) {
        return Some(Tok::Unit(i as u32));
    }
    if let Some(i) = TEENS.iter().position(|w| *w == word) {
        return Some(Tok::Teen(10 + i as u32));
    }
    if let Some(i) = TENS.iter().position(|w| !w.is_empty() && *w == word) {
        return Some(Tok::Tens(10 * i as u32));
    }
    if word == "hundred" {
        return Some(Tok::Hundred);
    }
    if word == "oh" {
        return Some(Tok::Oh);
    }
    SCALES.iter().find(|(w, _)| *w == word).map(|(_, e)| Tok::Scale(*e))
}

/// True for any word that can appear inside a cardinal phrase.
pub fn is_number_word(word: &str) -> bool {
    let w = word.to_ascii_lowercase();
    matches!(classify(&w), Some(t) if t != Tok::Oh)
}

pub fn is_ordinal_word(word: &str) -> bool {
    ordinal_word_value(&word.to_ascii_lowercase()).is_some()
}

fn ordinal_word_value(word: &str) -> Option<u32> {
    if let Some(i) = ORDINAL_UNITS.iter().position(|w| *w == word) {
        return Some(i as u32);
    }
    if let Some(i) = ORDINAL_TEENS.iter().position(|w| *w == word) {
        return Some(10 + i as u32);
    }
    if let Some(i) = ORDINAL_TENS.iter().position(|w| !w.is_empty() && *w == word) {
        return Some(10 * i as u32);
    }
    match word {
        "hundredth" => Some(100),
        "thousandth" => Some(1000),
        "millionth" => Some(1_000_000),
        _ => None,
    }
}

fn tokenize(words: &str) -> Vec<String> {
    words.to_ascii_lowercase().replace(['-', ','], " ").split_whitespace().map(str::to_string).collect()
}

/// Two 2-digit groups, e.g. "nineteen eighty six" or "nineteen oh five".
fn year_pair(toks: &[Tok]) -> Option<i128> {
    fn group(toks: &[Tok], allow_oh: bool) -> Option<(u32, usize)> {
        match toks {
            [Tok::Teen(t), ..] => Some((*t, 1)),
            [Tok::Tens(t), Tok::Unit(u), ..] if *u > 0 => Some((t + u, 2)),
            [Tok::Tens(t), ..] => Some((*t, 1)),
            [Tok::Oh, Tok::Unit(u), ..] if allow_oh && *u > 0 => Some((*u, 2)),
            _ => None,
        }
    }
    let (hi, n1) = group(toks, false)?;
    let (lo, n2) = group(&toks[n1..], true)?;
    if n1 + n2 != toks.len() {
        return None;
    }
    Some(hi as i128 * 100 + lo as i128)
}

fn standard(toks: &[Tok]) -> Option<i128> {
    if toks.is_empty() {
        return None;
    }
    let mut total: i128 = 0;
    let mut current: i128 = 0;
    // What the last token allows next; encoded as the last token itself.
    let mut last: Option<Tok> = None;
    let mut last_scale: Option<u32> = None;
    let mut group_seen = false;
    for &t in toks {
        match t {
            Tok::Unit(u) => {
                let ok = match last {
                    None | Some(Tok::Hundred) | Some(Tok::Scale(_)) => current % 100 == 0,
                    Some(Tok::Tens(_)) => u > 0,
                    _ => false,
                };
                if !ok || (u == 0 && (last.is_some() || toks.len() > 1)) {
                    return None;
                }
                current += u as i128;
            }
            Tok::Teen(v) | Tok::Tens(v) => {
                let ok = matches!(last, None | Some(Tok::Hundred) | Some(Tok::Scale(_))) && current % 100 == 0;
                if !ok {
                    return None;
                }
                current += v as i128;
            }
            Tok::Hundred => {
                // "twelve hundred" is accepted; "hundred" alone is not.
                if current == 0 || current >= 100 || matches!(last, Some(Tok::Hundred) | Some(Tok::Scale(_)) | None) {
                    return None;
                }
                current *= 100;
            }
            Tok::Scale(e) => {
                if current == 0 || matches!(last, Some(Tok::Scale(_)) | None) {
                    return None;
                }
                if let Some(prev) = last_scale {
                    if e >= prev {
                        return None;
                    }
                }
                total += current * 10i128.pow(e);
                current = 0;
                last_scale = Some(e);
            }
            Tok::Oh => return None,
        }
        group_seen = true;
        last = Some(t);
    }
    if !group_seen {
        return None;
    }
    Some(total + current)
}

/// Parse an English cardinal phrase ("thirty seven", "one hundred and forty-four",
/// "nineteen eighty six", "minus two point five").
pub fn words_to_numeral(words: &str) -> Result<NumericValue, NumParseError> {
    let err = || NumParseError::NotANumberPhrase(words.to_string());
    let mut toks = tokenize(words);
    let negative = matches!(toks.first().map(String::as_str), Some("minus") | Some("negative"));
    if negative {
        toks.remove(0);
    }
    let (int_words, frac_words) = match toks.iter().position(|t| t == "point") {
        Some(i) => (toks[..i].to_vec(), Some(toks[i + 1..].to_vec())),
        None => (toks, None),
    };
    // "and" is only a connector; it may not lead or trail.
    if int_words.first().map(String::as_str) == Some("and") || int_words.last().map(String::as_str) == Some("and") {
        return Err(err());
    }
    let classified: Option<Vec<Tok>> = int_words.iter().filter(|w| *w != "and").map(|w| classify(w)).collect();
    let classified = classified.ok_or_else(err)?;
    let int_value = if classified.is_empty() {
        if frac_words.is_some() {
            0
        } else {
            return Err(err());
        }
    } else if int_words.iter().any(|w| w == "and") {
        standard(&classified).ok_or_else(err)?
    } else {
        year_pair(&classified).or_else(|| standard(&classified)).ok_or_else(err)?
    };
    let mut value = NumericValue::new(int_value, 0);
    if let Some(frac) = frac_words {
        if frac.is_empty() {
            return Err(err());
        }
        let mut digits = String::new();
        for w in &frac {
            match classify(w) {
                Some(Tok::Unit(u)) => digits.push(char::from(b'0' + u as u8)),
                Some(Tok::Oh) => digits.push('0'),
                _ => return Err(err()),
            }
        }
        let frac_value = NumericValue::parse_decimal(&format!("0.{digits}")).ok_or_else(err)?;
        value = &value + &frac_value;
    }
    Ok(if negative { -value } else { value })
}

fn below_hundred(n: u32, style: WordStyle) -> String {
    debug_assert!(n < 100);
    match n {
        0..=9 => UNITS[n as usize].to_string(),
        10..=19 => TEENS[(n - 10) as usize].to_string(),
        _ => {
            let tens = TENS[(n / 10) as usize];
            match n % 10 {
                0 => tens.to_string(),
                u => format!("{tens}{}{}", if style.hyphenate { "-" } else { " " }, UNITS[u as usize]),
            }
        }
    }
}

fn below_thousand(n: u32, style: WordStyle) -> String {
    let h = n / 100;
    let r = n % 100;
    match (h, r) {
        (0, r) => below_hundred(r, style),
        (h, 0) => format!("{} hundred", UNITS[h as usize]),
        (h, r) => format!("{} hundred and {}", UNITS[h as usize], below_hundred(r, style)),
    }
}

fn integer_words(n: u128, style: WordStyle) -> String {
    if n == 0 {
        return "zero".into();
    }
    if style.year_pairs {
        if let Some(s) = year_words(n, style) {
            return s;
        }
    }
    let mut groups = Vec::new();
    let mut rest = n;
    while rest > 0 {
        groups.push((rest % 1000) as u32);
        rest /= 1000;
    }
    let mut parts: Vec<String> = Vec::new();
    for (i, g) in groups.iter().enumerate().rev() {
        if *g == 0 {
            continue;
        }
        let mut s = below_thousand(*g, style);
        if i > 0 {
            s = format!("{s} {}", SCALES[i - 1].0);
        } else if groups.len() > 1 && *g < 100 {
            s = format!("and {s}");
        }
        parts.push(s);
    }
    parts.join(" ")
}

/// Year reading for 1100..=2099, or `None` when the standard reading is used.
fn year_words(n: u128, style: WordStyle) -> Option<String> {
    if !(1100..=2099).contains(&n) {
        return None;
    }
    let hi = (n / 100) as u32;
    let lo = (n % 100) as u32;
    if n.is_multiple_of(1000) {
        return None;
    }
    if hi >= 20 && lo < 10 {
        // "two thousand and five" reads better than "twenty oh five".
        return None;
    }
    Some(match lo {
        0 => format!("{} hundred", below_hundred(hi, style)),
        1..=9 => format!("{} oh {}", below_hundred(hi, style), UNITS[lo as usize]),
        _ => format!("{} {}", below_hundred(hi, style), below_hundred(lo, style)),
    })
}

/// Canonical English words: 144 → "one hundred and forty-four".
pub fn numeral_to_words(value: &NumericValue) -> Result<String, NumParseError> {
    numeral_to_words_styled(value, WordStyle::CANONICAL)
}

pub fn numeral_to_words_styled(value: &NumericValue, style: WordStyle) -> Result<String, NumParseError> {
    let int_part = value.abs().round_to_exp(0, super::numeric::Rounding::Floor);
    let int = int_part.to_i128().filter(|v| *v < WORDS_LIMIT).ok_or(NumParseError::OutOfRange)?;
    let mut out = String::new();
    if value.is_negative() {
        out.push_str("minus ");
    }
    // Year readings only make sense for whole numbers.
    let style = if value.is_integer() { style } else { WordStyle { year_pairs: false, ..style } };
    out.push_str(&integer_words(int as u128, style));
    if !value.is_integer() {
        let frac = &value.abs() - &int_part;
        let digits = frac.to_plain_string();
        let digits = digits.trim_start_matches("0.");
        out.push_str(" point");
        for d in digits.bytes() {
            out.push(' ');
            out.push_str(UNITS[(d - b'0') as usize]);
        }
    }
    Ok(out)
}

/// Parse an ordinal in word form ("first", "twenty-first", "one hundredth").
pub fn ordinal_from_words(words: &str) -> Result<u64, NumParseError> {
    let err = || NumParseError::NotAnOrdinal(words.to_string());
    let toks = tokenize(words);
    let (last, head) = toks.split_last().ok_or_else(err)?;
    let last_value = ordinal_word_value(last).ok_or_else(err)? as u64;
    if head.is_empty() {
        return Ok(last_value);
    }
    let head_classified: Option<Vec<Tok>> = head.iter().filter(|w| *w != "and").map(|w| classify(w)).collect();
    let head_classified = head_classified.ok_or_else(err)?;
    let head_value = standard(&head_classified).ok_or_else(err)? as u64;
    match last_value {
        100 | 1000 | 1_000_000 => {
            // "seven hundredth" closes the cardinal "... seven hundred".
            let mut all = head_classified;
            all.push(classify(last.trim_end_matches("th")).ok_or_else(err)?);
            standard(&all).map(|v| v as u64).ok_or_else(err)
        }
        v => {
            // The head must leave room for the final ordinal word.
            let room_ok = if v < 10 {
                head_value.is_multiple_of(10) && head_value > 0
            } else {
                head_value.is_multiple_of(100) && head_value > 0
            };
            if !room_ok || v == 0 {
                return Err(err());
            }
            Ok(head_value + v)
        }
    }
}

/// "third", "twenty-first", "one hundredth".
pub fn ordinal_to_words(n: u64) -> Result<String, NumParseError> {
    if n == 0 || n as i128 >= WORDS_LIMIT {
        return Err(NumParseError::OutOfRange);
    }
    let cardinal = integer_words(n as u128, WordStyle::CANONICAL);
    // Rewrite only the final word of the cardinal form.
    let split = cardinal.rfind([' ', '-']).map(|i| i + 1).unwrap_or(0);
    let (head, last) = cardinal.split_at(split);
    let last_ord = if let Some(i) = UNITS.iter().position(|w| *w == last) {
        ORDINAL_UNITS[i].to_string()
    } else if let Some(i) = TEENS.iter().position(|w| *w == last) {
        ORDINAL_TEENS[i].to_string()
    } else if let Some(i) = TENS.iter().position(|w| !w.is_empty() && *w == last) {
        ORDINAL_TENS[i].to_string()
    } else {
        format!("{last}th")
    };
    Ok(format!("{head}{last_ord}"))
}

/// "1st", "2nd", "3rd", "11th", "23rd".
pub fn ordinal_suffix(n: u64) -> &'static str {
    match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: i64) -> NumericValue {
        NumericValue::from_i64(n)
    }

    #[test]
    fn cardinal_examples() {
        assert_eq!(words_to_numeral("thirty seven").unwrap(), v(37));
        assert_eq!(words_to_numeral("zero").unwrap(), v(0));
        assert_eq!(words_to_numeral("nineteen eighty six").unwrap(), v(1986));
        assert_eq!(words_to_numeral("one hundred and forty-four").unwrap(), v(144));
        assert_eq!(words_to_numeral("Two").unwrap(), v(2));
        assert_eq!(words_to_numeral("twelve hundred").unwrap(), v(1200));
        assert_eq!(words_to_numeral("nineteen oh five").unwrap(), v(1905));
        assert_eq!(words_to_numeral("five million").unwrap(), v(5_000_000));
        assert_eq!(words_to_numeral("minus two point five").unwrap(), "-2.5".parse().unwrap());
    }

    #[test]
    fn cardinal_rejects() {
        for s in
            ["", "banana", "two three", "hundred", "and five", "five and", "thousand million", "zero zero", "point"]
        {
            assert!(words_to_numeral(s).is_err(), "{s}");
        }
    }

    #[test]
    fn words_examples() {
        assert_eq!(numeral_to_words(&v(2)).unwrap(), "two");
        assert_eq!(numeral_to_words(&v(0)).unwrap(), "zero");
        assert_eq!(numeral_to_words(&v(144)).unwrap(), "one hundred and forty-four");
        assert_eq!(numeral_to_words(&v(2005)).unwrap(), "two thousand and five");
        assert_eq!(numeral_to_words(&v(1986)).unwrap(), "one thousand nine hundred and eighty-six");
        assert_eq!(numeral_to_words_styled(&v(1986), WordStyle::SPOKEN).unwrap(), "nineteen eighty six");
        assert_eq!(numeral_to_words_styled(&v(37), WordStyle::SPOKEN).unwrap(), "thirty seven");
        assert_eq!(numeral_to_words_styled(&v(1905), WordStyle::SPOKEN).unwrap(), "nineteen oh five");
        assert_eq!(numeral_to_words_styled(&v(2000), WordStyle::SPOKEN).unwrap(), "two thousand");
        assert_eq!(numeral_to_words(&"1.85".parse().unwrap()).unwrap(), "one point eight five");
        assert_eq!(numeral_to_words(&v(-3)).unwrap(), "minus three");
    }

    #[test]
    fn out_of_range() {
        let big = NumericValue::new(1, 15);
        assert_eq!(numeral_to_words(&big), Err(NumParseError::OutOfRange));
        assert!(numeral_to_words(&NumericValue::new(999_999_999_999_999i64, 0)).is_ok());
    }

    #[test]
    fn ordinals() {
        assert_eq!(ordinal_from_words("first").unwrap(), 1);
        assert_eq!(ordinal_from_words("third").unwrap(), 3);
        assert_eq!(ordinal_from_words("twenty-first").unwrap(), 21);
        assert_eq!(ordinal_from_words("one hundredth").unwrap(), 100);
        assert_eq!(ordinal_from_words("one hundred and twelfth").unwrap(), 112);
        assert!(ordinal_from_words("first second").is_err());
        assert!(ordinal_from_words("seven").is_err());
        assert_eq!(ordinal_to_words(3).unwrap(), "third");
        assert_eq!(ordinal_to_words(21).unwrap(), "twenty-first");
        assert_eq!(ordinal_to_words(40).unwrap(), "fortieth");
        assert_eq!(ordinal_to_words(100).unwrap(), "one hundredth");
        assert_eq!(ordinal_to_words(112).unwrap(), "one hundred and twelfth");
        assert_eq!(ordinal_suffix(3), "rd");
        assert_eq!(ordinal_suffix(13), "th");
        assert_eq!(ordinal_suffix(22), "nd");
    }
}

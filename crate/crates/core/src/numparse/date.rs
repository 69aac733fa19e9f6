//! Calendar dates and clock times in the handful of English layouts seen in
//! table corpora.

use chrono::NaiveDate;
use regex::Regex;
use serde::{Deserialize, Serialize};
use std::sync::LazyLock;

use super::format::{DatePattern, FormatDescriptor};
use super::words::ordinal_suffix;
use super::NumParseError;

pub const MONTHS: [&str; 12] = [
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DateValue {
    pub day: Option<u8>,
    pub month: u8,
    pub year: i32,
    pub source_format: FormatDescriptor,
}

impl DateValue {
    /// Builds a calendar-checked date.
    pub fn new(day: Option<u8>, month: u8, year: i32, source_format: FormatDescriptor) -> Result<Self, NumParseError> {
        let valid = match day {
            Some(d) => NaiveDate::from_ymd_opt(year, month as u32, d as u32).is_some(),
            None => (1..=12).contains(&month),
        };
        if !valid {
            return Err(NumParseError::InvalidDate(format!("{day:?}-{month}-{year}")));
        }
        Ok(DateValue { day, month, year, source_format })
    }

    /// Calendar equality, ignoring the source layout.
    pub fn same_day(&self, other: &DateValue) -> bool {
        self.day == other.day && self.month == other.month && self.year == other.year
    }

    pub fn to_naive(&self) -> Option<NaiveDate> {
        NaiveDate::from_ymd_opt(self.year, self.month as u32, self.day? as u32)
    }
}

pub fn month_from_name(name: &str) -> Option<u8> {
    let lower = name.to_ascii_lowercase();
    MONTHS.iter().position(|m| m.to_ascii_lowercase() == lower).map(|i| i as u8 + 1)
}

const MONTH_ALT: &str = "January|February|March|April|May|June|July|August|September|October|November|December";

pub(crate) struct DateRegexes {
    pub dmy_hyphen: Regex,
    pub dmy_slash: Regex,
    pub iso: Regex,
    pub day_month_year: Regex,
    pub month_day_year: Regex,
    pub month_year: Regex,
}

pub(crate) static DATE_RES: LazyLock<DateRegexes> = LazyLock::new(|| DateRegexes {
    dmy_hyphen: Regex::new(r"\b(\d{1,2})-(\d{1,2})-(\d{4})\b").unwrap(),
    dmy_slash: Regex::new(r"\b(\d{1,2})/(\d{1,2})/(\d{4})\b").unwrap(),
    iso: Regex::new(r"\b(\d{4})-(\d{2})-(\d{2})\b").unwrap(),
    day_month_year: Regex::new(&format!(r"(?i)\b(\d{{1,2}})(st|nd|rd|th)?\s+({MONTH_ALT})(,)?\s+(\d{{4}})\b")).unwrap(),
    month_day_year: Regex::new(&format!(r"(?i)\b({MONTH_ALT})\s+(\d{{1,2}})(st|nd|rd|th)?(,)?\s+(\d{{4}})\b")).unwrap(),
    month_year: Regex::new(&format!(r"(?i)\b({MONTH_ALT}),?\s+(\d{{4}})\b")).unwrap(),
});

static TIME_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(\d{1,2}):([0-5]\d)(?:\s?([ap])\.?m\.?)?").unwrap());

/// Matches found by the date patterns, as (start, end, value).
pub(crate) fn find_dates(text: &str) -> Vec<(usize, usize, DateValue)> {
    let mut out = Vec::new();
    let res = &*DATE_RES;
    let num = |s: &str| s.parse::<i64>().ok();
    for c in res.dmy_hyphen.captures_iter(text) {
        let m = c.get(0).unwrap();
        if let (Some(d), Some(mo), Some(y)) = (num(&c[1]), num(&c[2]), num(&c[3])) {
            if let Ok(v) =
                DateValue::new(Some(d as u8), mo as u8, y as i32, FormatDescriptor::Date(DatePattern::DmyHyphen))
            {
                out.push((m.start(), m.end(), v));
            }
        }
    }
    for c in res.dmy_slash.captures_iter(text) {
        let m = c.get(0).unwrap();
        if let (Some(d), Some(mo), Some(y)) = (num(&c[1]), num(&c[2]), num(&c[3])) {
            if let Ok(v) =
                DateValue::new(Some(d as u8), mo as u8, y as i32, FormatDescriptor::Date(DatePattern::DmySlash))
            {
                out.push((m.start(), m.end(), v));
            }
        }
    }
    for c in res.iso.captures_iter(text) {
        let m = c.get(0).unwrap();
        if let (Some(y), Some(mo), Some(d)) = (num(&c[1]), num(&c[2]), num(&c[3])) {
            if let Ok(v) = DateValue::new(Some(d as u8), mo as u8, y as i32, FormatDescriptor::Date(DatePattern::Iso)) {
                out.push((m.start(), m.end(), v));
            }
        }
    }
    for c in res.day_month_year.captures_iter(text) {
        let m = c.get(0).unwrap();
        let pattern = DatePattern::DayMonthYear { ordinal: c.get(2).is_some(), comma: c.get(4).is_some() };
        if let (Some(d), Some(mo), Some(y)) = (num(&c[1]), month_from_name(&c[3]), num(&c[5])) {
            if let Ok(v) = DateValue::new(Some(d as u8), mo, y as i32, FormatDescriptor::Date(pattern)) {
                out.push((m.start(), m.end(), v));
            }
        }
    }
    for c in res.month_day_year.captures_iter(text) {
        let m = c.get(0).unwrap();
        let pattern = DatePattern::MonthDayYear { ordinal: c.get(3).is_some(), comma: c.get(4).is_some() };
        if let (Some(mo), Some(d), Some(y)) = (month_from_name(&c[1]), num(&c[2]), num(&c[5])) {
            if let Ok(v) = DateValue::new(Some(d as u8), mo, y as i32, FormatDescriptor::Date(pattern)) {
                out.push((m.start(), m.end(), v));
            }
        }
    }
    for c in res.month_year.captures_iter(text) {
        let m = c.get(0).unwrap();
        // "May 2003" only when written with a capital: "may" is too often a verb.
        if c[1].chars().next().is_some_and(|ch| ch.is_lowercase()) {
            continue;
        }
        let comma = m.as_str().contains(',');
        if let (Some(mo), Some(y)) = (month_from_name(&c[1]), num(&c[2])) {
            if let Ok(v) = DateValue::new(None, mo, y as i32, FormatDescriptor::Date(DatePattern::MonthYear { comma }))
            {
                out.push((m.start(), m.end(), v));
            }
        }
    }
    out
}

/// Parse a complete date string in any supported layout.
pub fn parse_date(surface: &str) -> Result<DateValue, NumParseError> {
    let s = surface.trim();
    // Calendar-invalid but well-formed numeric dates are reported as such.
    let res = &*DATE_RES;
    for (re, pat) in [(&res.dmy_hyphen, DatePattern::DmyHyphen), (&res.dmy_slash, DatePattern::DmySlash)] {
        if let Some(c) = re.captures(s) {
            if c.get(0).unwrap().as_str() == s {
                let d: u8 = c[1].parse().map_err(|_| NumParseError::InvalidDate(s.into()))?;
                let mo: u8 = c[2].parse().map_err(|_| NumParseError::InvalidDate(s.into()))?;
                let y: i32 = c[3].parse().map_err(|_| NumParseError::InvalidDate(s.into()))?;
                return DateValue::new(Some(d), mo, y, FormatDescriptor::Date(pat))
                    .map_err(|_| NumParseError::InvalidDate(s.into()));
            }
        }
    }
    let mut found = find_dates(s);
    found.retain(|(a, b, _)| *a == 0 && *b == s.len());
    match found.into_iter().next() {
        Some((_, _, v)) => Ok(v),
        None => {
            if res.day_month_year.is_match(s) || res.month_day_year.is_match(s) || res.iso.is_match(s) {
                Err(NumParseError::InvalidDate(s.into()))
            } else {
                Err(NumParseError::NotADate(s.into()))
            }
        }
    }
}

/// Render a date in the requested layout.
pub fn format_date(d: &DateValue, pattern: DatePattern) -> Result<String, NumParseError> {
    let month = MONTHS[(d.month - 1) as usize];
    let need_day = || d.day.ok_or_else(|| NumParseError::FormatMismatch(format!("{pattern:?} needs a day")));
    Ok(match pattern {
        DatePattern::DmyHyphen => format!("{:02}-{:02}-{}", need_day()?, d.month, d.year),
        DatePattern::DmySlash => format!("{:02}/{:02}/{}", need_day()?, d.month, d.year),
        DatePattern::Iso => format!("{}-{:02}-{:02}", d.year, d.month, need_day()?),
        DatePattern::DayMonthYear { ordinal, comma } => {
            let day = need_day()?;
            let suffix = if ordinal { ordinal_suffix(day as u64) } else { "" };
            format!("{day}{suffix} {month}{} {}", if comma { "," } else { "" }, d.year)
        }
        DatePattern::MonthDayYear { ordinal, comma } => {
            let day = need_day()?;
            let suffix = if ordinal { ordinal_suffix(day as u64) } else { "" };
            format!("{month} {day}{suffix}{} {}", if comma { "," } else { "" }, d.year)
        }
        DatePattern::MonthYear { comma } => format!("{month}{} {}", if comma { "," } else { "" }, d.year),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimeValue {
    pub hour: u8,
    pub minute: u8,
}

pub(crate) fn find_times(text: &str) -> Vec<(usize, usize, TimeValue, FormatDescriptor)> {
    let mut out = Vec::new();
    for c in TIME_RE.captures_iter(text) {
        let m = c.get(0).unwrap();
        let h: u8 = match c[1].parse() {
            Ok(h) => h,
            Err(_) => continue,
        };
        let minute: u8 = c[2].parse().unwrap_or(0);
        let (hour, fmt) = match c.get(3).map(|x| x.as_str().to_ascii_lowercase()) {
            Some(ap) => {
                if !(1..=12).contains(&h) {
                    continue;
                }
                let pm = ap == "p";
                let hour = match (h, pm) {
                    (12, false) => 0,
                    (12, true) => 12,
                    (h, true) => h + 12,
                    (h, false) => h,
                };
                (hour, FormatDescriptor::Time12)
            }
            None => {
                if h > 23 {
                    continue;
                }
                (h, FormatDescriptor::Time24)
            }
        };
        out.push((m.start(), m.end(), TimeValue { hour, minute }, fmt));
    }
    out
}

pub fn format_time(t: TimeValue, fmt: FormatDescriptor) -> Result<String, NumParseError> {
    match fmt {
        FormatDescriptor::Time24 => Ok(format!("{:02}:{:02}", t.hour, t.minute)),
        FormatDescriptor::Time12 => {
            let (h, ap) = match t.hour {
                0 => (12, "am"),
                1..=11 => (t.hour, "am"),
                12 => (12, "pm"),
                h => (h - 12, "pm"),
            };
            Ok(format!("{h}:{:02} {ap}", t.minute))
        }
        other => Err(NumParseError::FormatMismatch(format!("{other:?} is not a time layout"))),
    }
}

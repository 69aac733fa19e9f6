//! Round-trip properties of the number parsers and renderers.

use numprobe_core::numparse::*;
use proptest::prelude::*;

const CASES: u32 = 10_000;

fn config() -> ProptestConfig {
    ProptestConfig { cases: CASES, ..ProptestConfig::default() }
}

fn date_patterns() -> impl Strategy<Value = DatePattern> {
    prop_oneof![
        Just(DatePattern::DmyHyphen),
        Just(DatePattern::DmySlash),
        Just(DatePattern::Iso),
        (any::<bool>(), any::<bool>()).prop_map(|(ordinal, comma)| DatePattern::DayMonthYear { ordinal, comma }),
        (any::<bool>(), any::<bool>()).prop_map(|(ordinal, comma)| DatePattern::MonthDayYear { ordinal, comma }),
    ]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn integer_words_round_trip(n in -999_999_999_999_999i64..=999_999_999_999_999, spoken in any::<bool>()) {
        let v = NumericValue::from_i64(n);
        let style = if spoken { WordStyle::SPOKEN } else { WordStyle::CANONICAL };
        let w = numeral_to_words_styled(&v, style).unwrap();
        prop_assert_eq!(words_to_numeral(&w).unwrap(), v, "{}", w);
    }

    #[test]
    fn decimal_words_round_trip(c in -9_999_999i64..=9_999_999, scale in 0i32..=3) {
        let v = NumericValue::new(c, -scale);
        let w = numeral_to_words(&v).unwrap();
        prop_assert_eq!(words_to_numeral(&w).unwrap(), v, "{}", w);
    }

    #[test]
    fn date_round_trip(y in 1000i32..=2100, m in 1u8..=12, d in 1u8..=31, pattern in date_patterns()) {
        prop_assume!(chrono::NaiveDate::from_ymd_opt(y, m.into(), d.into()).is_some());
        let date = DateValue::new(Some(d), m, y, FormatDescriptor::Date(pattern)).unwrap();
        let s = format_date(&date, pattern).unwrap();
        let back = parse_date(&s).unwrap();
        prop_assert!(back.same_day(&date), "{} -> {:?}", s, back);
        prop_assert_eq!(format_date(&back, pattern).unwrap(), s);
    }

    #[test]
    fn ordinal_round_trip(n in 1u64..=1_000_000_000, word in any::<bool>()) {
        let fmt = if word { FormatDescriptor::OrdinalWord } else { FormatDescriptor::OrdinalSuffix };
        let s = format_ordinal(n, fmt).unwrap();
        prop_assert_eq!(parse_ordinal(&s).unwrap(), n, "{}", s);
    }

    #[test]
    fn scientific_round_trip(c in -999_999_999i64..=999_999_999, exp in -12i32..=12) {
        prop_assume!(c != 0);
        let v = NumericValue::new(c, exp);
        let s = format_scientific(&v);
        prop_assert_eq!(parse_scientific(&s).unwrap(), v, "{}", s);
    }

    #[test]
    fn conversions_compose(c in 1i64..=10_000_000, family_pick in any::<prop::sample::Index>(), picks in any::<[prop::sample::Index; 3]>()) {
        let cat = UnitCatalog::bundled();
        let mut families: Vec<&str> = cat.units().iter().filter(|u| !u.is_currency()).map(|u| u.family.as_str()).collect();
        families.sort();
        families.dedup();
        let family = families[family_pick.index(families.len())];
        let units: Vec<&UnitEntry> = cat.units().iter().filter(|u| u.family == family).collect();
        let [a, b, d] = picks.map(|p| units[p.index(units.len())].id.as_str());
        let v = NumericValue::new(c, -2);
        let direct = cat.convert(&v, a, d).unwrap().to_f64();
        let via = cat.convert(&cat.convert(&v, a, b).unwrap(), b, d).unwrap().to_f64();
        prop_assert!((direct - via).abs() <= 1e-9 * direct.abs().max(1.0), "{} {} {} {}: {} vs {}", v, a, b, d, direct, via);
        let back = cat.convert(&cat.convert(&v, a, d).unwrap(), d, a).unwrap().to_f64();
        prop_assert!((back - v.to_f64()).abs() <= 1e-9 * v.to_f64().abs());
    }
}

//! Unit catalog and exact unit conversion.

use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;
use std::sync::LazyLock;

use super::numeric::NumericValue;
use super::NumParseError;

pub const BUNDLED_CATALOG: &str = include_str!("../../resources/catalog.toml");
pub const CATALOG_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
pub struct UnitEntry {
    pub id: String,
    pub family: String,
    pub system: String,
    pub factor: NumericValue,
    pub symbol: String,
    pub singular: String,
    pub plural: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    #[serde(default)]
    pub prefix_symbols: Vec<String>,
    /// Usual unit of another measurement system.
    #[serde(default)]
    pub counterpart: Option<String>,
}

impl UnitEntry {
    pub fn is_currency(&self) -> bool {
        self.family == "currency"
    }

    /// Every suffix spelling: symbol, names, extra aliases.
    pub fn suffix_spellings(&self) -> impl Iterator<Item = &str> {
        [self.symbol.as_str(), self.singular.as_str(), self.plural.as_str()]
            .into_iter()
            .chain(self.aliases.iter().map(String::as_str))
    }

    /// Name agreeing in number with `value`.
    pub fn name_for(&self, value: &NumericValue) -> &str {
        if value.abs() == NumericValue::from_i64(1) {
            &self.singular
        } else {
            &self.plural
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct FormatCatalog {
    #[serde(default)]
    pub percent_words: Vec<String>,
    #[serde(default)]
    pub negative_words: Vec<String>,
    #[serde(default)]
    pub approximation_hedges: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct CatalogFile {
    version: u32,
    #[serde(default)]
    format: FormatCatalog,
    #[serde(rename = "unit", default)]
    units: Vec<UnitEntry>,
}

/// How a unit token was written next to its number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitSpelling {
    Symbol,
    Name,
    PrefixSymbol,
}

#[derive(Debug, Clone)]
pub struct UnitCatalog {
    pub version: u32,
    pub format: FormatCatalog,
    units: Vec<UnitEntry>,
    by_alias: HashMap<String, (usize, UnitSpelling)>,
    by_prefix: HashMap<String, usize>,
    by_id: HashMap<String, usize>,
}

static DEFAULT: LazyLock<UnitCatalog> =
    LazyLock::new(|| UnitCatalog::from_toml(BUNDLED_CATALOG).expect("bundled catalog is valid"));

impl UnitCatalog {
    pub fn bundled() -> &'static UnitCatalog {
        &DEFAULT
    }

    pub fn load(path: &Path) -> Result<UnitCatalog, NumParseError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| NumParseError::Catalog(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<UnitCatalog, NumParseError> {
        let file: CatalogFile = toml::from_str(text).map_err(|e| NumParseError::Catalog(e.to_string()))?;
        if file.version != CATALOG_VERSION {
            return Err(NumParseError::Catalog(format!(
                "unsupported catalog version {} (expected {CATALOG_VERSION})",
                file.version
            )));
        }
        let mut by_alias: HashMap<String, (usize, UnitSpelling)> = HashMap::new();
        let mut by_prefix = HashMap::new();
        let mut by_id = HashMap::new();
        for (i, u) in file.units.iter().enumerate() {
            if !u.factor.is_positive() {
                return Err(NumParseError::Catalog(format!("unit {} has a non-positive factor", u.id)));
            }
            if by_id.insert(u.id.clone(), i).is_some() {
                return Err(NumParseError::Catalog(format!("duplicate unit id {}", u.id)));
            }
            let mut spellings = vec![(u.symbol.to_lowercase(), UnitSpelling::Symbol)];
            for name in [&u.singular, &u.plural].into_iter().chain(u.aliases.iter()) {
                spellings.push((name.to_lowercase(), UnitSpelling::Name));
            }
            for (alias, spelling) in spellings {
                match by_alias.get(&alias) {
                    Some((j, _)) if *j != i => {
                        return Err(NumParseError::Catalog(format!(
                            "alias {alias:?} is ambiguous between {} and {}",
                            file.units[*j].id, u.id
                        )));
                    }
                    Some(_) => {}
                    None => {
                        by_alias.insert(alias, (i, spelling));
                    }
                }
            }
            for p in &u.prefix_symbols {
                if by_prefix.insert(p.clone(), i).is_some() {
                    return Err(NumParseError::Catalog(format!("prefix symbol {p:?} is ambiguous")));
                }
            }
        }
        Ok(UnitCatalog { version: file.version, format: file.format, units: file.units, by_alias, by_prefix, by_id })
    }

    pub fn units(&self) -> &[UnitEntry] {
        &self.units
    }

    pub fn get(&self, id: &str) -> Option<&UnitEntry> {
        self.by_id.get(id).map(|i| &self.units[*i])
    }

    /// Case-insensitive alias lookup.
    pub fn lookup_alias(&self, alias: &str) -> Option<(&UnitEntry, UnitSpelling)> {
        self.by_alias.get(&alias.to_lowercase()).map(|(i, s)| (&self.units[*i], *s))
    }

    pub fn lookup_prefix(&self, symbol: &str) -> Option<&UnitEntry> {
        self.by_prefix.get(symbol).map(|i| &self.units[*i])
    }

    pub fn suffix_aliases(&self) -> impl Iterator<Item = &str> {
        self.units.iter().flat_map(|u| u.suffix_spellings())
    }

    pub fn prefix_symbols(&self) -> impl Iterator<Item = &str> {
        self.units.iter().flat_map(|u| u.prefix_symbols.iter().map(String::as_str))
    }

    pub fn family(&self, family: &str) -> impl Iterator<Item = &UnitEntry> + '_ {
        let family = family.to_string();
        self.units.iter().filter(move |u| u.family == family)
    }

    pub fn families(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for u in &self.units {
            if !out.contains(&u.family.as_str()) {
                out.push(&u.family);
            }
        }
        out
    }

    /// Exact conversion `value * from.factor / to.factor`.
    pub fn convert(&self, value: &NumericValue, from: &str, to: &str) -> Result<NumericValue, NumParseError> {
        let f = self.get(from).ok_or_else(|| NumParseError::UnknownUnit(from.to_string()))?;
        let t = self.get(to).ok_or_else(|| NumParseError::UnknownUnit(to.to_string()))?;
        if f.family != t.family {
            return Err(NumParseError::DimensionMismatch { from: f.id.clone(), to: t.id.clone() });
        }
        if f.id == t.id {
            return Ok(value.clone());
        }
        if f.is_currency() {
            return Err(NumParseError::NoExchangeRate { from: f.id.clone(), to: t.id.clone() });
        }
        let base = value * &f.factor;
        Ok(base.checked_div(&t.factor).expect("catalog factors are positive"))
    }

    /// True when converting between the two units never needs rounding.
    pub fn conversion_is_exact(&self, value: &NumericValue, from: &str, to: &str) -> bool {
        match (self.get(from), self.get(to)) {
            (Some(f), Some(t)) if f.family == t.family => (value * &f.factor).divides_exactly(&t.factor),
            _ => false,
        }
    }

    /// Largest unit in the same family and system that is smaller than `id`.
    pub fn next_smaller(&self, id: &str) -> Option<&UnitEntry> {
        let u = self.get(id)?;
        self.units
            .iter()
            .filter(|c| c.family == u.family && c.system == u.system && c.factor < u.factor)
            .max_by(|a, b| a.factor.cmp(&b.factor))
    }

    /// The declared counterpart of `id`, else the unit of another measurement
    /// system in the same family whose size is closest (falling back to any
    /// other unit of the family).
    pub fn counterpart(&self, id: &str) -> Option<&UnitEntry> {
        let u = self.get(id)?;
        if let Some(c) = u.counterpart.as_deref().and_then(|c| self.get(c)) {
            if c.family == u.family {
                return Some(c);
            }
        }
        let distance = |c: &UnitEntry| {
            let ratio = c.factor.to_f64() / u.factor.to_f64();
            ratio.ln().abs()
        };
        let pick = |pred: &dyn Fn(&UnitEntry) -> bool| {
            self.units
                .iter()
                .filter(|c| c.family == u.family && c.id != u.id && pred(c))
                .min_by(|a, b| distance(a).total_cmp(&distance(b)))
        };
        pick(&|c| c.system != u.system).or_else(|| pick(&|_| true))
    }
}

/// Convert with the bundled catalog.
pub fn convert_unit(value: &NumericValue, from: &str, to: &str) -> Result<NumericValue, NumParseError> {
    UnitCatalog::bundled().convert(value, from, to)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> NumericValue {
        s.parse().unwrap()
    }

    #[test]
    fn conversion_examples() {
        assert_eq!(convert_unit(&n("1.85"), "meter", "centimeter").unwrap(), n("185"));
        assert_eq!(convert_unit(&n("1"), "kilometer", "meter").unwrap(), n("1000"));
        let ft = convert_unit(&n("1.85"), "meter", "foot").unwrap();
        assert!((ft.to_f64() - 6.07).abs() <= 0.005, "{ft}");
        assert!(matches!(convert_unit(&n("1"), "meter", "kilogram"), Err(NumParseError::DimensionMismatch { .. })));
        assert!(matches!(convert_unit(&n("1"), "USD", "EUR"), Err(NumParseError::NoExchangeRate { .. })));
        assert!(matches!(convert_unit(&n("1"), "parsec", "meter"), Err(NumParseError::UnknownUnit(_))));
    }

    #[test]
    fn power_of_ten_round_trip_is_exact() {
        let v = n("1.85");
        let cm = convert_unit(&v, "meter", "centimeter").unwrap();
        assert_eq!(convert_unit(&cm, "centimeter", "meter").unwrap(), v);
        let ft = convert_unit(&v, "meter", "foot").unwrap();
        let back = convert_unit(&ft, "foot", "meter").unwrap();
        assert!(back.relative_gap(&v) < 1e-9);
    }

    #[test]
    fn lookups() {
        let c = UnitCatalog::bundled();
        assert_eq!(c.lookup_alias("Meters").unwrap().0.id, "meter");
        assert_eq!(c.lookup_alias("KG").unwrap().0.id, "kilogram");
        assert_eq!(c.lookup_prefix("US$").unwrap().id, "USD");
        assert_eq!(c.next_smaller("meter").unwrap().id, "centimeter");
        assert_eq!(c.next_smaller("hour").unwrap().id, "minute");
        assert_eq!(c.next_smaller("foot").unwrap().id, "inch");
        assert!(c.next_smaller("millimeter").is_none());
        assert_eq!(c.counterpart("meter").unwrap().id, "foot");
        assert_eq!(c.counterpart("kilogram").unwrap().id, "pound");
        assert!(c.families().contains(&"speed"));
    }

    #[test]
    fn catalog_validation() {
        let dup = r#"
version = 1
[[unit]]
id = "a"
family = "x"
system = "s"
factor = "1"
symbol = "q"
singular = "qa"
plural = "qas"
[[unit]]
id = "b"
family = "y"
system = "s"
factor = "2"
symbol = "Q"
singular = "qb"
plural = "qbs"
"#;
        assert!(matches!(UnitCatalog::from_toml(dup), Err(NumParseError::Catalog(_))));
        let bad_version = "version = 9\n";
        assert!(UnitCatalog::from_toml(bad_version).is_err());
        let neg = "version = 1\n[[unit]]\nid='a'\nfamily='x'\nsystem='s'\nfactor='-1'\nsymbol='a'\nsingular='aa'\nplural='aas'\n";
        assert!(UnitCatalog::from_toml(neg).is_err());
    }
}

//! Reference-token lists: comparison signal words, position indicators and
//! word-problem source tags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use std::sync::LazyLock;

use super::CorpusError;
use crate::numparse::{MentionKind, NumberMention, Scanner, Span, UnitCatalog};

pub const BUNDLED_TOKENS: &str = include_str!("../../resources/reference_tokens.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// The table value lies above the threshold.
    Greater,
    /// The table value lies below the threshold.
    Lesser,
}

impl Relation {
    pub fn opposite(self) -> Relation {
        match self {
            Relation::Greater => Relation::Lesser,
            Relation::Lesser => Relation::Greater,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct SignalPair {
    pub greater: Vec<String>,
    pub lesser: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SortDirection {
    Desc,
    Asc,
    /// Position in table order ("the third quarter").
    RowOrder,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SuperlativeGroup {
    pub direction: SortDirection,
    pub words: Vec<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct WordProblemTags {
    pub source_tags: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct TokensFile {
    version: u32,
    #[serde(default, rename = "signal_pair")]
    signal_pairs: Vec<SignalPair>,
    #[serde(default, rename = "superlative")]
    superlatives: Vec<SuperlativeGroup>,
    #[serde(default)]
    word_problem: WordProblemTags,
}

#[derive(Debug, Clone)]
pub struct ReferenceTokens {
    pub signal_pairs: Vec<SignalPair>,
    pub superlatives: Vec<SuperlativeGroup>,
    pub word_problem: WordProblemTags,
}

/// A signal word found in text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalMatch {
    pub span: Span,
    pub relation: Relation,
    pub pair: usize,
}

/// A rank selector such as "highest", "second highest" or "third".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionIndicator {
    pub span: Span,
    pub rank: u64,
    pub direction: SortDirection,
    /// Index into the mention list of the ordinal part, if any.
    pub ordinal: Option<usize>,
    /// Superlative word span and group index.
    pub superlative: Option<(Span, usize)>,
}

static BUNDLED: LazyLock<ReferenceTokens> =
    LazyLock::new(|| ReferenceTokens::from_toml(BUNDLED_TOKENS).expect("bundled reference tokens are valid"));

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

/// Whole-word, case-insensitive occurrences of `phrase`.
fn find_phrase(text: &str, phrase: &str) -> Vec<Span> {
    let lower = text.to_ascii_lowercase();
    let needle = phrase.to_ascii_lowercase();
    let bytes = lower.as_bytes();
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(i) = lower[from..].find(&needle) {
        let s = from + i;
        let e = s + needle.len();
        let left_ok = s == 0 || !is_word_byte(bytes[s - 1]);
        let right_ok = e == bytes.len() || !is_word_byte(bytes[e]);
        if left_ok && right_ok {
            out.push(Span::new(s, e));
        }
        from = s + 1;
    }
    out
}

/// Copy the capitalization of the first letter of `like` onto `word`.
pub fn match_case(word: &str, like: &str) -> String {
    if like.chars().next().is_some_and(char::is_uppercase) {
        let mut c = word.chars();
        match c.next() {
            Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
            None => String::new(),
        }
    } else {
        word.to_string()
    }
}

impl ReferenceTokens {
    pub fn bundled() -> &'static ReferenceTokens {
        &BUNDLED
    }

    pub fn load(path: &Path) -> Result<ReferenceTokens, CorpusError> {
        let text = std::fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<ReferenceTokens, CorpusError> {
        let f: TokensFile = toml::from_str(text).map_err(|e| CorpusError::Resource(e.to_string()))?;
        if f.version != 1 {
            return Err(CorpusError::Resource(format!("unsupported reference-token version {}", f.version)));
        }
        for p in &f.signal_pairs {
            if p.greater.is_empty() || p.lesser.is_empty() {
                return Err(CorpusError::Resource("signal pair with an empty side".into()));
            }
        }
        Ok(ReferenceTokens { signal_pairs: f.signal_pairs, superlatives: f.superlatives, word_problem: f.word_problem })
    }

    /// Signal words in `text`, left to right, longest phrase first on overlap.
    pub fn find_signals(&self, text: &str) -> Vec<SignalMatch> {
        let mut found: Vec<SignalMatch> = Vec::new();
        for (pi, p) in self.signal_pairs.iter().enumerate() {
            for (words, relation) in [(&p.greater, Relation::Greater), (&p.lesser, Relation::Lesser)] {
                for w in words {
                    for span in find_phrase(text, w) {
                        found.push(SignalMatch { span, relation, pair: pi });
                    }
                }
            }
        }
        found.sort_by_key(|m| (m.span.start, std::cmp::Reverse(m.span.end), m.pair));
        let mut out: Vec<SignalMatch> = Vec::new();
        for m in found {
            if out.last().is_none_or(|l| l.span.end <= m.span.start) {
                out.push(m);
            }
        }
        out
    }

    /// Relation stated by a signal word, from the first pair containing it.
    pub fn relation_of(&self, word: &str) -> Option<(Relation, usize)> {
        let w = word.to_ascii_lowercase();
        self.signal_pairs.iter().enumerate().find_map(|(i, p)| {
            if p.greater.contains(&w) {
                Some((Relation::Greater, i))
            } else if p.lesser.contains(&w) {
                Some((Relation::Lesser, i))
            } else {
                None
            }
        })
    }

    /// Replacement stating the opposite relation, in the case of `word`.
    pub fn opposite(&self, word: &str) -> Option<String> {
        let (rel, i) = self.relation_of(word)?;
        let p = &self.signal_pairs[i];
        let w = match rel {
            Relation::Greater => &p.lesser[0],
            Relation::Lesser => &p.greater[0],
        };
        Some(match_case(w, word))
    }

    pub fn superlative_group(&self, word: &str) -> Option<usize> {
        let w = word.to_ascii_lowercase();
        self.superlatives.iter().position(|g| g.words.contains(&w))
    }

    /// Rank selectors in `text`; `mentions` must come from scanning the same text.
    pub fn find_positions(&self, text: &str, mentions: &[NumberMention]) -> Vec<PositionIndicator> {
        let mut out = Vec::new();
        let mut used_ordinals = Vec::new();
        for (gi, g) in self.superlatives.iter().enumerate() {
            for w in &g.words {
                for span in find_phrase(text, w) {
                    let before = text[..span.start].trim_end_matches(' ');
                    let ord = mentions.iter().position(|m| {
                        m.kind == MentionKind::Ordinal && m.span.end == before.len() && before.len() < span.start
                    });
                    let (start, rank) = match ord {
                        Some(i) => {
                            used_ordinals.push(i);
                            let rank = mentions[i].number().and_then(|n| n.to_i128()).unwrap_or(1) as u64;
                            (mentions[i].span.start, rank)
                        }
                        None => (span.start, 1),
                    };
                    out.push(PositionIndicator {
                        span: Span::new(start, span.end),
                        rank,
                        direction: g.direction,
                        ordinal: ord,
                        superlative: Some((span, gi)),
                    });
                }
            }
        }
        for (i, m) in mentions.iter().enumerate() {
            if m.kind == MentionKind::Ordinal && !used_ordinals.contains(&i) {
                let rank = m.number().and_then(|n| n.to_i128()).unwrap_or(0);
                if rank >= 1 {
                    out.push(PositionIndicator {
                        span: m.span,
                        rank: rank as u64,
                        direction: SortDirection::RowOrder,
                        ordinal: Some(i),
                        superlative: None,
                    });
                }
            }
        }
        out.sort_by_key(|p| p.span.start);
        out
    }

    pub fn is_word_problem(&self, source: &str) -> bool {
        let s = source.to_ascii_lowercase();
        self.word_problem.source_tags.iter().any(|t| s.contains(&t.to_ascii_lowercase()))
    }
}

/// Everything the corpus and probe layers look things up in.
#[derive(Debug, Clone)]
pub struct Resources {
    pub scanner: Scanner,
    pub tokens: ReferenceTokens,
}

static BUNDLED_RESOURCES: LazyLock<Resources> =
    LazyLock::new(|| Resources { scanner: Scanner::bundled().clone(), tokens: ReferenceTokens::bundled().clone() });

impl Resources {
    pub fn bundled() -> &'static Resources {
        &BUNDLED_RESOURCES
    }

    pub fn with_catalog(catalog: UnitCatalog) -> Resources {
        Resources { scanner: Scanner::new(catalog), tokens: ReferenceTokens::bundled().clone() }
    }

    pub fn catalog(&self) -> &UnitCatalog {
        self.scanner.catalog()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signals() {
        let t = ReferenceTokens::bundled();
        let m = t.find_signals("After the year 2000, the player Nadal turned pro.");
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].relation, Relation::Greater);
        assert_eq!(t.opposite("After").as_deref(), Some("Before"));
        assert_eq!(t.opposite("shorter").as_deref(), Some("longer"));
        assert_eq!(t.opposite("taller").as_deref(), Some("shorter"));
        assert!(t.find_signals("Afterwards he left").is_empty());
        let m = t.find_signals("finished later than 5 pm");
        assert_eq!(m[0].span, Span::new(9, 19));
    }

    #[test]
    fn positions() {
        let t = ReferenceTokens::bundled();
        let text = "Hulk was the one with the second highest box office income.";
        let ms = crate::numparse::scan_mentions(text);
        let p = t.find_positions(text, &ms);
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].rank, p[0].direction), (2, SortDirection::Desc));
        assert_eq!(p[0].span.slice(text), "second highest");
        let text = "Sales in the first quarter of 2018 were 5 million.";
        let ms = crate::numparse::scan_mentions(text);
        let p = t.find_positions(text, &ms);
        assert_eq!((p[0].rank, p[0].direction), (1, SortDirection::RowOrder));
        let text = "the lowest score was 3rd";
        let ms = crate::numparse::scan_mentions(text);
        assert_eq!(t.find_positions(text, &ms).len(), 2);
        assert!(t.is_word_problem("tabmwp-recast"));
        assert!(!t.is_word_problem("tatqa"));
    }
}

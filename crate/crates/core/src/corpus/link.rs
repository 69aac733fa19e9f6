//! Tying hypothesis mentions to table cells, numeric columns, and the
//! per-type candidate filter.

use serde::{Deserialize, Serialize};

use super::tokens::Resources;
use super::types::{CellRef, Hypothesis, LinkKind, MentionLink, Table};
use super::{CorpusError, APPROXIMATE_GAP};
use crate::numparse::{MentionKind, MentionValue, NumberMention, NumericValue, Scanner};
use crate::probegen::ReasoningType;

fn kind_rank(k: LinkKind) -> u8 {
    match k {
        LinkKind::Exact => 0,
        LinkKind::Converted => 1,
        LinkKind::DateYear => 2,
        LinkKind::Approximate => 3,
    }
}

struct Candidate {
    kind: LinkKind,
    gap: f64,
    hyp: usize,
    cell: CellRef,
    cell_mention: usize,
    conversion: Option<(String, String)>,
}

/// Cell value expressed in the hypothesis mention's unit, if the two can be compared.
fn comparable(
    h: &NumberMention,
    c: &NumberMention,
    scanner: &Scanner,
) -> Option<(NumericValue, Option<(String, String)>)> {
    let cv = c.number()?;
    match (&h.unit, &c.unit) {
        (Some(hu), Some(cu)) if hu != cu => {
            let conv = scanner.catalog().convert(cv, cu, hu).ok()?;
            Some((conv, Some((cu.clone(), hu.clone()))))
        }
        _ => Some((cv.clone(), None)),
    }
}

/// Link kind, relative gap and the (cell unit, hypothesis unit) conversion.
type Scored = (LinkKind, f64, Option<(String, String)>);

fn score(h: &NumberMention, c: &NumberMention, scanner: &Scanner) -> Option<Scored> {
    let h_ord = h.kind == MentionKind::Ordinal;
    let c_ord = c.kind == MentionKind::Ordinal;
    if h_ord != c_ord {
        return None;
    }
    match (&h.value, &c.value) {
        (MentionValue::Date(a), MentionValue::Date(b)) => a.same_day(b).then_some((LinkKind::Exact, 0.0, None)),
        (MentionValue::Time(a), MentionValue::Time(b)) => (a == b).then_some((LinkKind::Exact, 0.0, None)),
        (MentionValue::Number(_), MentionValue::Date(d)) if h.is_year_like() => {
            let year = NumericValue::from_i64(d.year as i64);
            let hv = h.number()?;
            if *hv == year {
                Some((LinkKind::DateYear, 0.0, None))
            } else {
                let gap = hv.relative_gap(&year);
                (gap <= APPROXIMATE_GAP).then_some((LinkKind::Approximate, gap, None))
            }
        }
        (MentionValue::Number(hv), MentionValue::Number(_)) => {
            let (cv, conversion) = comparable(h, c, scanner)?;
            if *hv == cv {
                let kind = if conversion.is_some() { LinkKind::Converted } else { LinkKind::Exact };
                return Some((kind, 0.0, conversion));
            }
            if conversion.is_some() {
                if let Some(f) = h.numeral {
                    if f.quantize(&cv) == *hv {
                        return Some((LinkKind::Converted, hv.relative_gap(&cv), conversion));
                    }
                }
            }
            if h.is_year_like() != c.is_year_like() {
                return None;
            }
            let gap = hv.relative_gap(&cv);
            (gap <= APPROXIMATE_GAP).then_some((LinkKind::Approximate, gap, conversion))
        }
        _ => None,
    }
}

/// Links for an already scanned hypothesis: greedy one-to-one matching,
/// preferring exact over converted over year-of-date over approximate links,
/// then the smallest gap, then reading order.
pub fn link_scanned(mentions: &[NumberMention], table: &Table, scanner: &Scanner) -> Vec<MentionLink> {
    let mut cands = Vec::new();
    for (cell_ref, cell) in table.value_cells() {
        for (j, cm) in cell.mentions(scanner).iter().enumerate() {
            for (i, hm) in mentions.iter().enumerate() {
                if let Some((kind, gap, conversion)) = score(hm, cm, scanner) {
                    cands.push(Candidate { kind, gap, hyp: i, cell: cell_ref, cell_mention: j, conversion });
                }
            }
        }
    }
    cands.sort_by(|a, b| {
        kind_rank(a.kind)
            .cmp(&kind_rank(b.kind))
            .then(a.gap.total_cmp(&b.gap))
            .then(a.hyp.cmp(&b.hyp))
            .then(a.cell.cmp(&b.cell))
            .then(a.cell_mention.cmp(&b.cell_mention))
    });
    let mut used_h = vec![false; mentions.len()];
    let mut used_c: Vec<(CellRef, usize)> = Vec::new();
    let mut out = Vec::new();
    for c in cands {
        if used_h[c.hyp] || used_c.contains(&(c.cell, c.cell_mention)) {
            continue;
        }
        used_h[c.hyp] = true;
        used_c.push((c.cell, c.cell_mention));
        out.push(MentionLink {
            hyp_mention: c.hyp,
            cell: c.cell,
            cell_mention: c.cell_mention,
            kind: c.kind,
            conversion: c.conversion,
        });
    }
    out.sort_by_key(|l| l.hyp_mention);
    out
}

/// Links between the hypothesis's mentions and the table's cells.
pub fn link_mentions(h: &Hypothesis, table: &Table, scanner: &Scanner) -> Vec<MentionLink> {
    link_scanned(&scanner.scan(&h.text), table, scanner)
}

/// The linked cell's value in the hypothesis mention's unit (the year for a dated cell).
pub fn linked_value(link: &MentionLink, table: &Table, scanner: &Scanner) -> Option<NumericValue> {
    let cm = table.cell(link.cell)?.mentions(scanner).get(link.cell_mention)?;
    match &cm.value {
        MentionValue::Number(v) => match &link.conversion {
            Some((from, to)) => scanner.catalog().convert(v, from, to).ok(),
            None => Some(v.clone()),
        },
        MentionValue::Date(d) => Some(NumericValue::from_i64(d.year as i64)),
        MentionValue::Time(_) => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedCell {
    pub row: usize,
    pub raw: String,
}

/// Numeric values of one column in row order, plus the rows that had none.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ColumnValues {
    pub values: Vec<(usize, NumericValue)>,
    pub skipped: Vec<SkippedCell>,
}

impl ColumnValues {
    pub fn numbers(&self) -> Vec<NumericValue> {
        self.values.iter().map(|(_, v)| v.clone()).collect()
    }

    pub fn value_at(&self, row: usize) -> Option<&NumericValue> {
        self.values.iter().find(|(r, _)| *r == row).map(|(_, v)| v)
    }
}

/// Values of every cell in `col` whose only mention is a number.
pub fn extract_numeric_column(table: &Table, col: usize, scanner: &Scanner) -> Result<ColumnValues, CorpusError> {
    if col >= table.n_cols() {
        return Err(CorpusError::ColumnOutOfRange { table: table.id.clone(), col });
    }
    let mut out = ColumnValues::default();
    for (r, row) in table.rows.iter().enumerate() {
        let cell = &row[col];
        match cell.mentions(scanner) {
            [m] if m.number().is_some() => out.values.push((r, m.number().unwrap().clone())),
            _ => out.skipped.push(SkippedCell { row: r, raw: cell.raw.clone() }),
        }
    }
    if out.values.is_empty() {
        return Err(CorpusError::NoNumericCells { table: table.id.clone(), col });
    }
    Ok(out)
}

fn is_quantity(m: &NumberMention) -> bool {
    m.number().is_some() && !matches!(m.kind, MentionKind::Ordinal)
}

fn is_heterogeneous(m: &NumberMention) -> bool {
    match m.kind {
        MentionKind::Date
        | MentionKind::Time
        | MentionKind::Ordinal
        | MentionKind::Percentage
        | MentionKind::Currency
        | MentionKind::ScientificNotation => true,
        _ => m.number().is_some_and(|v| v.abs() >= NumericValue::pow10(6)),
    }
}

/// Whether the hypothesis text carries the trigger of `rt`. Table-dependent
/// conditions are checked by the generators.
pub fn has_trigger(h: &Hypothesis, rt: ReasoningType, res: &Resources) -> bool {
    let ms = res.scanner.scan(&h.text);
    match rt {
        ReasoningType::Numeration => {
            ms.iter().any(|m| matches!(m.kind, MentionKind::CardinalDigits | MentionKind::CardinalWords))
        }
        ReasoningType::Heterogeneous => ms.iter().any(is_heterogeneous),
        ReasoningType::Negative => ms.iter().any(|m| m.kind == MentionKind::NegativeNumber),
        ReasoningType::Scale => ms.iter().any(|m| {
            m.kind == MentionKind::MeasuredQuantity
                && m.unit.as_deref().and_then(|u| res.catalog().get(u)).is_some_and(|u| !u.is_currency())
        }),
        ReasoningType::Comparison => !res.tokens.find_signals(&h.text).is_empty() && ms.iter().any(is_quantity),
        ReasoningType::Approximation => ms.iter().any(|m| {
            is_quantity(m) && !m.is_year_like() && m.number().is_some_and(|v| v.abs() >= NumericValue::from_i64(10))
        }),
        ReasoningType::Range => ms.iter().any(|m| is_quantity(m) && !m.is_year_like()),
        ReasoningType::Sorting => !res.tokens.find_positions(&h.text, &ms).is_empty(),
        ReasoningType::Arithmetic => h.arith.is_some(),
        ReasoningType::WordProblem => res.tokens.is_word_problem(&h.source) && ms.iter().any(is_quantity),
        ReasoningType::Counterfactual => !ms.is_empty(),
    }
}

/// The hypotheses carrying the trigger of `rt`, in input order.
pub fn filter_candidates<'a>(hyps: &'a [Hypothesis], rt: ReasoningType, res: &Resources) -> Vec<&'a Hypothesis> {
    hyps.iter().filter(|h| has_trigger(h, rt, res)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Cell, Label};

    fn infobox(rows: &[(&str, &str)]) -> Table {
        let rows = rows.iter().map(|(k, v)| vec![Cell::from(*k), Cell::from(*v)]).collect();
        Table::new("t", Some("Hulk".into()), vec![], rows).unwrap()
    }

    fn hyp(text: &str) -> Hypothesis {
        Hypothesis {
            id: "h".into(),
            table_id: "t".into(),
            text: text.into(),
            label: Label::Entail,
            source: String::new(),
            arith: None,
        }
    }

    #[test]
    fn date_across_formats() {
        let t = infobox(&[("Directed by", "Ang Lee"), ("Release date", "June 20, 2003")]);
        let links = link_mentions(&hyp("Hulk was released on 20th June, 2003"), &t, Scanner::bundled());
        assert_eq!(links.len(), 1);
        assert_eq!(links[0].kind, LinkKind::Exact);
        assert_eq!(links[0].cell, CellRef::new(1, 1));
        assert!(link_mentions(&hyp("Ang Lee directed it"), &t, Scanner::bundled()).is_empty());
    }

    #[test]
    fn approximate_with_conversion() {
        let t = infobox(&[("Running time", "138 minutes")]);
        let links = link_mentions(&hyp("It can be watched in about two hours"), &t, Scanner::bundled());
        assert_eq!(links.len(), 1);
        assert_eq!(links[0].kind, LinkKind::Converted);
        assert_eq!(links[0].conversion, Some(("minute".into(), "hour".into())));
        let v = linked_value(&links[0], &t, Scanner::bundled()).unwrap();
        assert_eq!(v, "2.3".parse().unwrap());
    }

    #[test]
    fn converted_link() {
        let t = infobox(&[("Height", "1.85 m")]);
        let links = link_mentions(&hyp("He is 185 centimeters tall"), &t, Scanner::bundled());
        assert_eq!(links[0].kind, LinkKind::Converted);
    }

    #[test]
    fn numeric_columns() {
        let rows = vec![
            vec![Cell::from("Hulk"), Cell::from("$137 million")],
            vec![Cell::from("Other"), Cell::from("$245.4 million")],
        ];
        let t = Table::new("g", None, vec!["Film".into(), "Budget".into()], rows).unwrap();
        let c = extract_numeric_column(&t, 1, Scanner::bundled()).unwrap();
        assert_eq!(c.numbers(), vec!["137000000".parse().unwrap(), "245400000".parse().unwrap()]);
        assert!(matches!(extract_numeric_column(&t, 0, Scanner::bundled()), Err(CorpusError::NoNumericCells { .. })));
        let cells = ["12", "n/a", "7", "unknown", "30"];
        let rows = cells.iter().map(|c| vec![Cell::from(*c)]).collect();
        let t = Table::new("m", None, vec!["x".into()], rows).unwrap();
        let c = extract_numeric_column(&t, 0, Scanner::bundled()).unwrap();
        assert_eq!((c.values.len(), c.skipped.len()), (3, 2));
        assert_eq!(c.skipped[0], SkippedCell { row: 1, raw: "n/a".into() });
    }

    #[test]
    fn candidates() {
        let res = Resources::bundled();
        let hs = vec![hyp("The height of the player is 1.85 meters."), hyp("The film was released in 2003.")];
        let got = filter_candidates(&hs, ReasoningType::Scale, res);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].text, hs[0].text);
        assert!(filter_candidates(&[], ReasoningType::Scale, res).is_empty());
        let hs = vec![hyp("Hulk was the one with the second highest box office income."), hyp("Hulk is a film.")];
        let got = filter_candidates(&hs, ReasoningType::Sorting, res);
        assert_eq!(got.len(), 1);
        assert!(got[0].text.contains("second highest"));
    }
}

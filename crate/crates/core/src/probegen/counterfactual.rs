//! Counterfactual tables: an edited copy of the premise with two cells of
//! one column swapped.

use rand::seq::SliceRandom;

use super::context::GenContext;
use super::probe::{EditRecord, Probe, ProbeDetail};
use super::{Mode, ProbeError, ReasoningType};
use crate::corpus::{link_scanned, CellRef, Label, LinkKind, Orientation, Resources, Table};
use crate::numparse::{value_equal, NumberMention, Scanner};

/// The cell's only mention, if it has exactly one.
fn sole<'t>(table: &'t Table, at: CellRef, scanner: &Scanner) -> Option<&'t NumberMention> {
    match table.cell(at)?.mentions(scanner) {
        [m] => Some(m),
        _ => None,
    }
}

/// Cells that can trade places with `at`: same column (or infobox value
/// column), same mention kind, different value.
fn partners(table: &Table, at: CellRef, scanner: &Scanner, exclude_rows: &[usize]) -> Vec<CellRef> {
    let Some(m) = sole(table, at, scanner) else { return vec![] };
    let col = match table.orientation {
        Orientation::RelationalGrid => at.col,
        Orientation::EntityInfobox => 1,
    };
    (0..table.rows.len())
        .filter(|r| *r != at.row && !exclude_rows.contains(r))
        .map(|r| CellRef::new(r, col))
        .filter(|c| sole(table, *c, scanner).is_some_and(|o| o.kind == m.kind && !value_equal(&o.value, &m.value)))
        .collect()
}

fn swap(table: &Table, id: &str, a: CellRef, b: CellRef) -> (Table, Vec<EditRecord>) {
    let mut t = table.clone();
    t.id = id.to_string();
    let ra = table.cell(a).map(|c| c.raw.clone()).unwrap_or_default();
    let rb = table.cell(b).map(|c| c.raw.clone()).unwrap_or_default();
    t.rows[a.row][a.col] = rb.as_str().into();
    t.rows[b.row][b.col] = ra.as_str().into();
    let edits =
        vec![EditRecord::cell(a, ra.clone(), rb.clone(), "cell-swap"), EditRecord::cell(b, rb, ra, "cell-swap")];
    (t, edits)
}

/// True when the mention still has a non-approximate link to `at` in `table`.
pub(crate) fn still_linked(
    mentions: &[NumberMention],
    mention: usize,
    table: &Table,
    at: CellRef,
    scanner: &Scanner,
) -> bool {
    link_scanned(mentions, table, scanner)
        .iter()
        .any(|l| l.hyp_mention == mention && l.cell == at && l.kind != LinkKind::Approximate)
}

/// Flip: swaps a linked cell so the link breaks. Preserve: swaps two cells
/// in rows the hypothesis does not touch.
pub fn gen_counterfactual_table(ctx: &GenContext, mode: Mode) -> Result<(Table, Probe), ProbeError> {
    let rt = ReasoningType::Counterfactual;
    let scanner = &ctx.res.scanner;
    let sm = match mode {
        Mode::Preserve => "preserve",
        Mode::Flip => "flip",
    };
    let (seed, mut rng) = ctx.stream(rt, sm, 0);
    let probe_id = Probe::probe_id(&ctx.hyp.id, rt, sm, 0);
    let linked_rows: Vec<usize> = ctx.links.iter().map(|l| l.cell.row).collect();
    let (a, b, broken) = match mode {
        Mode::Flip => {
            if ctx.hyp.label != Label::Entail {
                return Err(ProbeError::Unsupported(rt, "a broken link refutes only an entailed base".into()));
            }
            let mut found = None;
            for l in ctx.links.iter().filter(|l| l.kind != LinkKind::Approximate) {
                let cands = partners(ctx.table, l.cell, scanner, &[]);
                let mut order: Vec<CellRef> = cands.clone();
                order.shuffle(&mut rng);
                if let Some(b) = order.into_iter().find(|b| {
                    let (t, _) = swap(ctx.table, &probe_id, l.cell, *b);
                    !still_linked(&ctx.mentions, l.hyp_mention, &t, l.cell, scanner)
                }) {
                    found = Some((l.cell, b));
                    break;
                }
            }
            let (a, b) = found.ok_or(ProbeError::NoApplicableMention(rt))?;
            let broken: Vec<usize> =
                ctx.links.iter().filter(|l| l.cell == a || l.cell == b).map(|l| l.hyp_mention).collect();
            (a, b, broken)
        }
        Mode::Preserve => {
            if ctx.links.is_empty() || !ctx.res.tokens.find_positions(ctx.text(), &ctx.mentions).is_empty() {
                return Err(ProbeError::NoApplicableMention(rt));
            }
            let mut pairs = Vec::new();
            for (at, _) in ctx.table.value_cells() {
                if linked_rows.contains(&at.row) {
                    continue;
                }
                for b in partners(ctx.table, at, scanner, &linked_rows) {
                    if b.row > at.row {
                        pairs.push((at, b));
                    }
                }
            }
            let (a, b) = *pairs.choose(&mut rng).ok_or(ProbeError::NoApplicableMention(rt))?;
            (a, b, vec![])
        }
    };
    let (table, edits) = swap(ctx.table, &probe_id, a, b);
    let probe = Probe {
        probe_id: probe_id.clone(),
        base_id: ctx.hyp.id.clone(),
        reasoning_type: rt,
        level: rt.level(),
        flip: mode.is_flip(),
        expected_label: if mode.is_flip() { ctx.hyp.label.flipped() } else { ctx.hyp.label },
        text: None,
        table_ref: Some(probe_id.clone()),
        edits,
        seed,
        sub_mode: sm.to_string(),
        detail: Some(ProbeDetail::Counterfactual {
            table_id: ctx.table.id.clone(),
            swapped: (a, b),
            broken_links: broken,
        }),
    };
    Ok((table, probe))
}

/// Filter for externally built counterfactual triples: the hypothesis must
/// mention a number.
pub fn admit_counterfactual(hypothesis: &str, res: &Resources) -> bool {
    !res.scanner.scan(hypothesis).is_empty()
}

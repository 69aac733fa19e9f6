//! Shift reports as CSV and as an aligned text table, and per-group
//! accuracy tables read back from CSV.

use std::fmt::Write;

use serde::Deserialize;

use super::{EvalError, EvalRow, GroupKey, GroupScore};
use crate::probegen::{Level, ReasoningType};

fn level_name(l: Level) -> &'static str {
    match l {
        Level::R1 => "Representation",
        Level::R2 => "Number sense",
        Level::R3 => "Manipulation",
        Level::R4 => "Complex reasoning",
    }
}

fn fmt_shift(s: Option<f64>) -> String {
    s.map(|v| format!("{v:+.2}")).unwrap_or_else(|| "N/A".into())
}

/// CSV with one line per row and a header line.
pub fn render_csv(rows: &[EvalRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["type", "level", "flip", "n_base", "n_probe", "acc_base", "acc_probe", "shift_pct"])
        .expect("writing to memory");
    for r in rows {
        let shift = r.shift_pct.map(|v| format!("{v:.2}")).unwrap_or_else(|| "N/A".into());
        w.write_record([
            r.reasoning_type.id().to_string(),
            r.level().to_string(),
            r.flip.to_string(),
            r.n_base.to_string(),
            r.n_probe.to_string(),
            format!("{:.2}", r.acc_base),
            format!("{:.2}", r.acc_probe),
            shift,
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

/// Text table grouped by level, label-flipping rows in their own block.
pub fn render_text(rows: &[EvalRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:>7} {:>7} {:>9} {:>9} {:>9}",
        "type", "n_base", "n_probe", "acc_base", "acc_probe", "shift%"
    );
    for level in [Level::R1, Level::R2, Level::R3, Level::R4] {
        for flip in [false, true] {
            let block: Vec<&EvalRow> = rows.iter().filter(|r| r.level() == level && r.flip == flip).collect();
            if block.is_empty() {
                continue;
            }
            let title = if flip {
                format!("{level} {} (label flipped)", level_name(level))
            } else {
                format!("{level} {}", level_name(level))
            };
            let _ = writeln!(out, "-- {title}");
            for r in block {
                let _ = writeln!(
                    out,
                    "{:<16} {:>7} {:>7} {:>9.2} {:>9.2} {:>9}",
                    r.reasoning_type.id(),
                    r.n_base,
                    r.n_probe,
                    r.acc_base,
                    r.acc_probe,
                    fmt_shift(r.shift_pct)
                );
            }
        }
    }
    out
}

#[derive(Deserialize)]
struct ScoreLine {
    #[serde(rename = "type")]
    reasoning_type: String,
    flip: bool,
    acc_base: f64,
    acc_probe: f64,
    #[serde(default)]
    n_base: Option<usize>,
    #[serde(default)]
    n_probe: Option<usize>,
}

/// Reads precomputed accuracies, one `type,flip,acc_base,acc_probe` line
/// per group (optional `n_base,n_probe` columns).
pub fn read_score_table(text: &str) -> Result<(Vec<GroupScore>, Vec<GroupScore>), EvalError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let (mut base, mut probe) = (Vec::new(), Vec::new());
    for (i, rec) in r.deserialize::<ScoreLine>().enumerate() {
        let parse = |msg: String| EvalError::Parse { path: "<scores>".into(), line: i + 2, msg };
        let line = rec.map_err(|e| parse(e.to_string()))?;
        let rt: ReasoningType = line.reasoning_type.parse().map_err(parse)?;
        for acc in [line.acc_base, line.acc_probe] {
            if !(0.0..=100.0).contains(&acc) {
                return Err(parse(format!("accuracy {acc} outside [0, 100]")));
            }
        }
        let key = GroupKey { reasoning_type: rt, flip: line.flip };
        base.push(GroupScore { key, n: line.n_base.unwrap_or(0), accuracy: line.acc_base });
        probe.push(GroupScore { key, n: line.n_probe.unwrap_or(0), accuracy: line.acc_probe });
    }
    Ok((base, probe))
}

#[cfg(test)]
mod tests {
    use super::super::shift_report;
    use super::*;

    #[test]
    fn table_round_trip() {
        let text =
            "type,flip,acc_base,acc_probe\nnegative,false,20.37,28.98\nrange,false,20.09,55.87\nnegative,true,0,12\n";
        let (b, p) = read_score_table(text).unwrap();
        let rows = shift_report(&b, &p).unwrap();
        let csv = render_csv(&rows);
        assert!(csv.starts_with("type,level,flip,"));
        assert!(csv.contains("negative,R1,false,0,0,20.37,28.98,42.27"));
        assert!(csv.contains("negative,R1,true,0,0,0.00,12.00,N/A"));
        let txt = render_text(&rows);
        assert!(txt.contains("-- R1 Representation\n") && txt.contains("(label flipped)") && txt.contains("+178.10"));
        assert!(read_score_table("type,flip,acc_base,acc_probe\nnegative,false,120,3\n").is_err());
        assert!(read_score_table("type,flip,acc_base,acc_probe\nnothing,false,1,3\n").is_err());
    }
}

//! End-to-end behaviour of the `numprobe` subcommands.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use numprobe_cli::{read_probes, ConfigFile, PROBES_FILE, REPORT_CSV, SKIPS_FILE, STATS_FILE};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn numprobe(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_numprobe")).args(args).output().expect("spawn numprobe")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(out: &Path, extra: &[&str]) -> std::process::Output {
    let (h, t) = (fixture("corpus_hypotheses.jsonl"), fixture("corpus_tables.jsonl"));
    let mut args = vec!["generate", "--in", s(&h), "--tables", s(&t), "--out", s(out)];
    args.extend_from_slice(extra);
    numprobe(&args)
}

fn first_line(path: &Path) -> serde_json::Value {
    let text = fs::read_to_string(path).unwrap();
    serde_json::from_str(text.lines().next().unwrap()).unwrap()
}

#[test]
fn generate_writes_headed_outputs_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let out = generate(dir.path(), &["--seed", "11"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("numeration") && stdout.contains("probes from 50 hypotheses"));

    for f in [PROBES_FILE, SKIPS_FILE] {
        let h = first_line(&dir.path().join(f));
        assert_eq!(h["header"]["tool"], "numprobe");
        assert_eq!(h["header"]["command"], "generate");
        assert_eq!(h["header"]["settings"]["master_seed"], 11);
    }
    let probes = read_probes(&dir.path().join(PROBES_FILE)).unwrap();
    let stats = fs::read_to_string(dir.path().join(STATS_FILE)).unwrap();
    assert!(stats.starts_with("type,count\n"));
    assert!(stats.ends_with(&format!("total,{}\n", probes.len())));
    assert_eq!(stats.lines().count(), 13);
}

#[test]
fn types_flag_restricts_output() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate(dir.path(), &["--types", "numeration", "--flip", "none"]).status.success());
    let probes = read_probes(&dir.path().join(PROBES_FILE)).unwrap();
    assert!(!probes.is_empty());
    assert!(probes.iter().all(|p| p.reasoning_type.id() == "numeration" && !p.flip));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# run settings\nseed = 5\ntypes = range\nflip = none\n").unwrap();
    let out = dir.path().join("out");
    assert!(generate(&out, &["--config", s(&cfg), "--types", "negative"]).status.success());
    let probes = read_probes(&out.join(PROBES_FILE)).unwrap();
    assert!(!probes.is_empty() && probes.iter().all(|p| p.reasoning_type.id() == "negative" && !p.flip));
    assert!(probes.iter().all(|p| p.seed != 0));
    assert_eq!(first_line(&out.join(PROBES_FILE))["header"]["settings"]["master_seed"], 5);

    assert!(ConfigFile::parse("seed 5").is_err());
}

#[test]
fn validate_flags_a_corrupted_label() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate(dir.path(), &[]).status.success());
    let path = dir.path().join(PROBES_FILE);
    let (h, t) = (fixture("corpus_hypotheses.jsonl"), fixture("corpus_tables.jsonl"));
    let ok = numprobe(&["validate", "--probes", s(&path), "--in", s(&h), "--tables", s(&t)]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stdout));

    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let victim =
        lines.iter().position(|l| l.contains("\"flip\":true") && l.contains("\"type\":\"numeration\"")).unwrap();
    lines[victim] = lines[victim].replace("\"expected_label\":\"contradict\"", "\"expected_label\":\"entail\"");
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let bad = numprobe(&["validate", "--probes", s(&path), "--in", s(&h), "--tables", s(&t)]);
    assert_eq!(bad.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    let violations = report["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1, "{violations:?}");
    assert_eq!(violations[0]["check"], "label_algebra");
    let err: serde_json::Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("1 violations"));
}

#[test]
fn missing_base_hypothesis_is_a_dangling_reference() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate(dir.path(), &[]).status.success());
    let fewer = dir.path().join("fewer.jsonl");
    let text = fs::read_to_string(fixture("corpus_hypotheses.jsonl")).unwrap();
    fs::write(&fewer, text.lines().filter(|l| !l.contains("\"id\": \"H1\"")).collect::<Vec<_>>().join("\n")).unwrap();
    let t = fixture("corpus_tables.jsonl");
    let out =
        numprobe(&["validate", "--probes", s(&dir.path().join(PROBES_FILE)), "--in", s(&fewer), "--tables", s(&t)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("dangling_ref"));
}

#[test]
fn eval_scores_predictions_and_warns_on_gaps() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate(dir.path(), &["--types", "negative"]).status.success());
    let probes = read_probes(&dir.path().join(PROBES_FILE)).unwrap();
    let (h, t) = (fixture("corpus_hypotheses.jsonl"), fixture("corpus_tables.jsonl"));
    let hyps = fs::read_to_string(&h).unwrap();
    let base: String = hyps
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .map(|v| format!("{{\"item_id\": {}, \"label\": \"entailed\"}}\n", v["id"]))
        .collect();
    // Every probe is predicted "entail", and one probe has no prediction.
    let preds: String = probes
        .iter()
        .skip(1)
        .map(|p| format!("{{\"item_id\": \"{}\", \"label\": \"ENTAILMENT\"}}\n", p.probe_id))
        .collect();
    let (bp, pp) = (dir.path().join("base.jsonl"), dir.path().join("probe.jsonl"));
    fs::write(&bp, base).unwrap();
    fs::write(&pp, preds).unwrap();
    let out_dir = dir.path().join("report");
    let probes_path = dir.path().join(PROBES_FILE);
    let out = numprobe(&[
        "eval",
        "--probes",
        s(&probes_path),
        "--in",
        s(&h),
        "--tables",
        s(&t),
        "--base-preds",
        s(&bp),
        "--probe-preds",
        s(&pp),
        "--out",
        s(&out_dir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: 0 base and 1 probe items"));
    let csv = fs::read_to_string(out_dir.join(REPORT_CSV)).unwrap();
    // Both negative base hypotheses are entailed; the preserving probe for the
    // first lacks a prediction and the flipped probes are all wrong.
    assert!(csv.contains("negative,R1,false,2,2,100.00,50.00,-50.00"), "{csv}");
    assert!(csv.contains("negative,R1,true,2,2,100.00,0.00,-100.00"), "{csv}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("(label flipped)"));
}

#[test]
fn eval_rejects_bad_scores_and_unmatched_ids() {
    let dir = tempfile::tempdir().unwrap();
    let scores = dir.path().join("s.csv");
    fs::write(&scores, "type,flip,acc_base,acc_probe\nrange,false,50,60\n").unwrap();
    assert!(numprobe(&["eval", "--scores", s(&scores)]).status.success());
    fs::write(&scores, "type,flip,acc_base,acc_probe\nrange,false,50,160\n").unwrap();
    assert!(!numprobe(&["eval", "--scores", s(&scores)]).status.success());

    // Probes whose base hypotheses are absent from the corpus have no baseline.
    assert!(generate(dir.path(), &["--types", "negative"]).status.success());
    let others = dir.path().join("others.jsonl");
    let text = fs::read_to_string(fixture("corpus_hypotheses.jsonl")).unwrap();
    let kept: Vec<&str> =
        text.lines().filter(|l| !l.contains("\"id\": \"f14\"") && !l.contains("\"id\": \"r1\"")).collect();
    fs::write(&others, kept.join("\n")).unwrap();
    let preds = dir.path().join("p.jsonl");
    fs::write(&preds, "").unwrap();
    let t = fixture("corpus_tables.jsonl");
    let probes = dir.path().join(PROBES_FILE);
    let out = numprobe(&[
        "eval",
        "--probes",
        s(&probes),
        "--in",
        s(&others),
        "--tables",
        s(&t),
        "--base-preds",
        s(&preds),
        "--probe-preds",
        s(&preds),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no baseline scores for negative"));
}

#[test]
fn recast_reports_skips_and_line_numbered_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = numprobe(&["recast", "--in", s(&fixture("recast_qa.jsonl")), "--out", s(dir.path())]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "recast 18 of 20 items (2 skipped)");

    let empty = dir.path().join("empty.jsonl");
    fs::write(&empty, "").unwrap();
    let out_dir = dir.path().join("e");
    assert!(numprobe(&["recast", "--in", s(&empty), "--out", s(&out_dir)]).status.success());
    assert_eq!(fs::read_to_string(out_dir.join("hypotheses.jsonl")).unwrap().lines().count(), 1);

    let broken = dir.path().join("broken.jsonl");
    fs::write(&broken, "{\"id\":\"a\",\"table_id\":\"t\",\"question\":\"Who?\",\"answer\":\"x\"}\n{not json\n")
        .unwrap();
    let out = numprobe(&["recast", "--in", s(&broken), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err.to_string().contains(":2"), "{err}");
}

#[test]
fn stats_counts_a_probe_file() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate(dir.path(), &["--types", "sorting"]).status.success());
    let out = numprobe(&["stats", "--probes", s(&dir.path().join(PROBES_FILE))]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("sorting,12\n") && text.contains("numeration,0\n") && text.ends_with("total,12\n"), "{text}");
}

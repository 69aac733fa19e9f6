//! Command implementations for the `numprobe` binary.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use numprobe_core::corpus::{
    is_header_line, load_dataset, load_qa, load_tables, recast_traced, write_hypotheses, write_tables, Dataset,
    Hypothesis, InputFormat, Label, Resources, Table, HEADER_KEY,
};
use numprobe_core::evalkit::{evaluate, load_predictions, read_score_table, render_csv, render_text, shift_report};
use numprobe_core::numparse::{UnitCatalog, CATALOG_VERSION};
use numprobe_core::probegen::{
    count_probes, generate_all, validate_probes, FlipPolicy, GenerationConfig, Probe, ReasoningType, DEFAULT_SEED,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "numprobe", version, about = "Numerical-reasoning probes for tabular NLI")]
pub struct Cli {
    /// key=value configuration file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recast table QA items into NLI hypotheses.
    Recast(IoArgs),
    /// Generate probes for a corpus.
    Generate(GenerateArgs),
    /// Re-check generated probes against their corpus.
    Validate(ValidateArgs),
    /// Score predictions and report accuracy shifts.
    Eval(EvalArgs),
    /// Count probes per reasoning type.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct IoArgs {
    /// Input hypotheses (or QA items).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CorpusArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Tables (JSON array or JSON Lines).
    #[arg(long)]
    pub tables: Option<PathBuf>,
    /// Input format: tnli or qa.
    #[arg(long)]
    pub format: Option<String>,
    /// Replacement unit catalog (TOML).
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Master seed; defaults to a fixed constant.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated reasoning types to generate.
    #[arg(long)]
    pub types: Option<String>,
    /// none, only or both.
    #[arg(long)]
    pub flip: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Probe file written by `generate`.
    #[arg(long)]
    pub probes: Option<PathBuf>,
    /// Counterfactual tables; defaults to the file next to the probes.
    #[arg(long)]
    pub cf_tables: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Probe file written by `generate`.
    #[arg(long)]
    pub probes: Option<PathBuf>,
    /// Predictions on base hypotheses (JSON Lines `{item_id, label}`).
    #[arg(long)]
    pub base_preds: Option<PathBuf>,
    /// Predictions on probes.
    #[arg(long)]
    pub probe_preds: Option<PathBuf>,
    /// Precomputed accuracies (`type,flip,acc_base,acc_probe` CSV) instead of predictions.
    #[arg(long)]
    pub scores: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct StatsArgs {
    /// Probe file written by `generate`.
    #[arg(long)]
    pub probes: Option<PathBuf>,
    /// Directory to write stats.csv into; the table is printed either way.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Settings from a key=value file.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').with_context(|| format!("config line {}: expected key=value", i + 1))?;
            values.insert(k.trim().replace('-', "_"), v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        ConfigFile::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn path(&self, flag: &Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.clone().or_else(|| self.get(key).map(PathBuf::from))
    }

    fn require(&self, flag: &Option<PathBuf>, key: &str) -> Result<PathBuf> {
        self.path(flag, key).with_context(|| format!("--{} is required", key.replace('_', "-")))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| anyhow::anyhow!("config {key}={v}: {e}")),
        }
    }
}

fn parse_types(list: &str) -> Result<Vec<ReasoningType>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<ReasoningType>().map_err(anyhow::Error::msg))
        .collect()
}

/// Generation settings from the config file overridden by flags.
pub fn generation_config(args: &GenerateArgs, file: &ConfigFile) -> Result<GenerationConfig> {
    let mut c = GenerationConfig {
        master_seed: args.seed.or(file.parsed("seed")?).unwrap_or(DEFAULT_SEED),
        ..GenerationConfig::default()
    };
    if let Some(t) = args.types.as_deref().or(file.get("types")) {
        let types = parse_types(t)?;
        if types.is_empty() {
            bail!("--types names no reasoning type");
        }
        c.enabled = types.into_iter().collect();
    }
    if let Some(f) = args.flip.as_deref().or(file.get("flip")) {
        c.flip = f.parse::<FlipPolicy>().map_err(anyhow::Error::msg)?;
    }
    if let Some(v) = file.parsed("flip_replacement_halfwidth")? {
        c.flip_replacement_halfwidth = v;
    }
    macro_rules! knob {
        ($($k:ident),*) => {$(
            if let Some(v) = file.parsed(stringify!($k))? {
                c.$k = v;
            }
        )*};
    }
    knob!(
        range_small_max_radius,
        range_small_limit,
        range_pct_min,
        range_pct_max,
        approximation_max_steps,
        max_probes_per_hypothesis,
        date_flip_years
    );
    c.validate()?;
    Ok(c)
}

fn resources(args: &CorpusArgs, file: &ConfigFile) -> Result<Resources> {
    match file.path(&args.catalog, "catalog") {
        Some(p) => {
            let cat = UnitCatalog::load(&p).with_context(|| format!("loading catalog {}", p.display()))?;
            Ok(Resources::with_catalog(cat))
        }
        None => Ok(Resources::with_catalog(Resources::bundled().catalog().clone())),
    }
}

fn load_corpus(args: &CorpusArgs, file: &ConfigFile) -> Result<Dataset> {
    let input = file.require(&args.io.input, "in")?;
    let tables = file.require(&args.tables, "tables")?;
    let format = match args.format.as_deref().or(file.get("format")) {
        Some(f) => f.parse::<InputFormat>().map_err(anyhow::Error::msg)?,
        None => InputFormat::Tnli,
    };
    load_dataset(&input, &tables, format).with_context(|| format!("loading corpus {}", input.display()))
}

fn out_dir(flag: &Option<PathBuf>, file: &ConfigFile) -> Result<PathBuf> {
    let dir = file.path(flag, "out").unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

/// Metadata record opening every JSON Lines output.
pub fn header(command: &str, settings: serde_json::Value) -> serde_json::Value {
    json!({ HEADER_KEY: {
        "tool": "numprobe",
        "version": VERSION,
        "catalog_version": CATALOG_VERSION,
        "command": command,
        "settings": settings,
    }})
}

fn write_jsonl<T: Serialize>(path: &Path, header: &serde_json::Value, items: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    serde_json::to_writer(&mut buf, header)?;
    buf.push(b'\n');
    for it in items {
        serde_json::to_writer(&mut buf, it)?;
        buf.push(b'\n');
    }
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}

fn with_header(
    path: &Path,
    header: &serde_json::Value,
    write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
) -> Result<()> {
    let mut buf = Vec::new();
    serde_json::to_writer(&mut buf, header)?;
    buf.push(b'\n');
    write(&mut buf)?;
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}

/// Probes from a JSON Lines file, skipping the header record.
pub fn read_probes(path: &Path) -> Result<Vec<Probe>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || is_header_line(line) {
            continue;
        }
        let p: Probe =
            serde_json::from_str(line).with_context(|| format!("{}:{}: bad probe record", path.display(), i + 1))?;
        out.push(p);
    }
    Ok(out)
}

/// Output file names.
pub const PROBES_FILE: &str = "probes.jsonl";
pub const CF_TABLES_FILE: &str = "counterfactual_tables.jsonl";
pub const STATS_FILE: &str = "stats.csv";
pub const SKIPS_FILE: &str = "skips.jsonl";
pub const HYPOTHESES_FILE: &str = "hypotheses.jsonl";
pub const RECAST_SKIPS_FILE: &str = "recast_skips.jsonl";
pub const REPORT_CSV: &str = "report.csv";
pub const REPORT_TXT: &str = "report.txt";
pub const VALIDATION_FILE: &str = "validation.json";

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::Recast(a) => cmd_recast(a, &file, stdout),
        Command::Generate(a) => cmd_generate(a, &file, stdout),
        Command::Validate(a) => cmd_validate(a, &file, stdout),
        Command::Eval(a) => cmd_eval(a, &file, stdout),
        Command::Stats(a) => cmd_stats(a, &file, stdout),
    }
}

pub fn cmd_recast(args: &IoArgs, file: &ConfigFile, stdout: &mut dyn Write) -> Result<()> {
    let input = file.require(&args.input, "in")?;
    let records = load_qa(&input).with_context(|| format!("loading {}", input.display()))?;
    let dir = out_dir(&args.out, file)?;
    let mut hyps = Vec::new();
    let mut skips = Vec::new();
    for r in records {
        match recast_traced(&r.question, &r.answer) {
            Ok((text, trace)) => hyps.push((
                Hypothesis {
                    id: r.id,
                    table_id: r.table_id,
                    text,
                    label: Label::Entail,
                    source: r.source,
                    arith: r.derivation,
                },
                trace,
            )),
            Err(e) => skips.push(json!({"id": r.id, "question": r.question, "reason": e.to_string()})),
        }
    }
    let h = header("recast", json!({"input": input}));
    let plain: Vec<Hypothesis> = hyps.iter().map(|(h, _)| h.clone()).collect();
    with_header(&dir.join(HYPOTHESES_FILE), &h, |w| write_hypotheses(w, &plain))?;
    write_jsonl(&dir.join(RECAST_SKIPS_FILE), &h, &skips)?;
    writeln!(stdout, "recast {} of {} items ({} skipped)", plain.len(), plain.len() + skips.len(), skips.len())?;
    Ok(())
}

pub fn cmd_generate(args: &GenerateArgs, file: &ConfigFile, stdout: &mut dyn Write) -> Result<()> {
    let config = generation_config(args, file)?;
    let res = resources(&args.corpus, file)?;
    let ds = load_corpus(&args.corpus, file)?;
    let dir = out_dir(&args.corpus.io.out, file)?;
    let set = generate_all(&ds, &config, &res)?;
    let h = header("generate", serde_json::to_value(&config)?);
    write_jsonl(&dir.join(PROBES_FILE), &h, &set.probes)?;
    with_header(&dir.join(CF_TABLES_FILE), &h, |w| write_tables(w, &set.counterfactual_tables))?;
    write_jsonl(&dir.join(SKIPS_FILE), &h, &set.skips)?;
    fs::write(dir.join(STATS_FILE), stats_csv(&set.probes))?;
    writeln!(stdout, "{:<16} {:>8} {:>8}", "type", "preserve", "flip")?;
    for c in &set.counts {
        writeln!(stdout, "{:<16} {:>8} {:>8}", c.reasoning_type.id(), c.preserve, c.flip)?;
    }
    writeln!(stdout, "{} probes from {} hypotheses, {} skips", set.probes.len(), ds.hypotheses.len(), set.skips.len())?;
    Ok(())
}

/// Two-column CSV: type and probe count, then the total.
pub fn stats_csv(probes: &[Probe]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["type", "count"]);
    for c in count_probes(probes) {
        let _ = w.write_record([c.reasoning_type.id().to_string(), (c.preserve + c.flip).to_string()]);
    }
    let _ = w.write_record(["total".to_string(), probes.len().to_string()]);
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

pub fn cmd_validate(args: &ValidateArgs, file: &ConfigFile, stdout: &mut dyn Write) -> Result<()> {
    let res = resources(&args.corpus, file)?;
    let ds = load_corpus(&args.corpus, file)?;
    let probes_path = file.require(&args.probes, "probes")?;
    let probes = read_probes(&probes_path)?;
    let cf_path = file.path(&args.cf_tables, "cf_tables").unwrap_or_else(|| probes_path.with_file_name(CF_TABLES_FILE));
    let cf: Vec<Table> = if cf_path.exists() { load_tables(&cf_path)? } else { Vec::new() };
    let gen = GenerationConfig::default();
    let report = validate_probes(&probes, &ds, &cf, &res, &gen);
    let text = serde_json::to_string_pretty(&report)?;
    if let Some(dir) = file.path(&args.corpus.io.out, "out") {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join(VALIDATION_FILE), &text)?;
    }
    writeln!(stdout, "{text}")?;
    if !report.is_clean() {
        bail!("{} violations in {} probes", report.violations.len(), report.checked);
    }
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs, file: &ConfigFile, stdout: &mut dyn Write) -> Result<()> {
    let rows = if let Some(scores) = file.path(&args.scores, "scores") {
        let text = fs::read_to_string(&scores).with_context(|| format!("reading {}", scores.display()))?;
        let (base, probe) = read_score_table(&text)?;
        shift_report(&base, &probe)?
    } else {
        let ds = load_corpus(&args.corpus, file)?;
        let probes = read_probes(&file.require(&args.probes, "probes")?)?;
        let base = load_predictions(&file.require(&args.base_preds, "base_preds")?)?;
        let preds = load_predictions(&file.require(&args.probe_preds, "probe_preds")?)?;
        let e = evaluate(&probes, &ds.hypotheses, &base, &preds)?;
        if e.missing_base + e.missing_probe > 0 {
            eprintln!(
                "warning: {} base and {} probe items have no prediction and count as incorrect",
                e.missing_base, e.missing_probe
            );
        }
        e.rows
    };
    if let Some(dir) = file.path(&args.corpus.io.out, "out") {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join(REPORT_CSV), render_csv(&rows))?;
        fs::write(dir.join(REPORT_TXT), render_text(&rows))?;
    }
    write!(stdout, "{}", render_text(&rows))?;
    Ok(())
}

pub fn cmd_stats(args: &StatsArgs, file: &ConfigFile, stdout: &mut dyn Write) -> Result<()> {
    let probes = read_probes(&file.require(&args.probes, "probes")?)?;
    let csv = stats_csv(&probes);
    if let Some(dir) = file.path(&args.out, "out") {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join(STATS_FILE), &csv)?;
    }
    write!(stdout, "{csv}")?;
    Ok(())
}

/// Machine-readable error summary written to stderr on failure.
pub fn error_summary(e: &anyhow::Error) -> serde_json::Value {
    let causes: Vec<String> = e.chain().skip(1).map(|c| c.to_string()).collect();
    json!({"error": e.to_string(), "causes": causes})
}

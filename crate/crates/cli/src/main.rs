//! Command-line front end over the proof engine: compile knowledge
//! snapshots, annotate claim corpora into proofs, re-verify stored proofs,
//! score predictions, render explanations, and serve the token-constraint
//! protocol over stdio. All commands stream JSONL and are deterministic
//! for fixed inputs and configuration.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use natproof::annotate::{AnnotateConfig, Annotator, FilterMode};
use natproof::batch::{annotate_stream, verify_record, verify_stream};
use natproof::constrain::{run_protocol, Constrainer};
use natproof::explain::{explain, render_text, Explanation};
use natproof::kb::{KbSources, KbStore};
use natproof::metrics::{
    extract_rationale, fever_score, label_accuracy, stability_error_rate, token_f1, EvalItem,
    SerDenominator,
};
use natproof::natlog::{NatOp, VeracityLabel};
use natproof::proof::{EvidenceSentence, Proof};
use natproof::records::{BatchErrorRecord, ProofRecord};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "natproof",
    version,
    about = "Natural-logic proof engine for claim verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile tab-separated knowledge tables into one JSON snapshot.
    KbBuild(KbBuildArgs),
    /// Annotate claim records (JSONL) into proof records (JSONL).
    Annotate(AnnotateArgs),
    /// Recompute verdicts for stored proof records, emitting predictions.
    Verify(IoArgs),
    /// Score proof records: label accuracy, evidence-aware accuracy, and
    /// optional stability and rationale-overlap metrics.
    Evaluate(EvaluateArgs),
    /// Render proof records as fixed-phrase explanations.
    Explain(ExplainArgs),
    /// Serve the token-constraint line protocol for one claim over stdio.
    Constrain(ConstrainArgs),
}

#[derive(Args)]
struct KbBuildArgs {
    /// Paraphrase table (claim phrase, evidence phrase, operator).
    #[arg(long)]
    paraphrases: Option<PathBuf>,
    /// Alias table (canonical name, surface form).
    #[arg(long)]
    aliases: Option<PathBuf>,
    /// Relation definitions (id, claim-to-evidence op, evidence-to-claim op).
    #[arg(long)]
    relations: Option<PathBuf>,
    /// Taxonomy and relation instances (child, parent, edge type).
    #[arg(long)]
    hierarchy: Option<PathBuf>,
    /// Negation lexicon (one word per line).
    #[arg(long)]
    negation: Option<PathBuf>,
    /// Where to write the snapshot JSON.
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct AnnotateArgs {
    /// Knowledge snapshot produced by kb-build; empty store when omitted.
    #[arg(long)]
    kb: Option<PathBuf>,
    /// Pipeline configuration file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one configuration key, e.g. --set threshold=0.6; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Input claim records; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output proof records; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct IoArgs {
    /// Input records; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output records; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Proof records to score; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Second proof-record file over augmented inputs, paired with the
    /// primary file by record id; enables the stability error rate.
    #[arg(long)]
    augmented: Option<PathBuf>,
    /// What the stability error rate divides by.
    #[arg(long, default_value = "eligible", value_name = "eligible|all")]
    ser_denominator: String,
    /// Gold rationales (JSONL: {"id": ..., "tokens": [...]}) for the
    /// rationale-overlap score.
    #[arg(long)]
    rationales: Option<PathBuf>,
}

#[derive(Args)]
struct ExplainArgs {
    /// Input proof records; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Emit one JSON object per record instead of text blocks.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConstrainArgs {
    /// The claim to cover.
    #[arg(long)]
    claim: String,
    /// One evidence sentence; repeatable. Sentence ids are assigned e1,
    /// e2, ... in order.
    #[arg(long = "evidence", value_name = "SENTENCE")]
    evidence: Vec<String>,
    /// Longest claim chunk and evidence span offered, in words.
    #[arg(long, default_value_t = 7)]
    max_span_words: usize,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::KbBuild(args) => cmd_kb_build(args),
        Command::Annotate(args) => cmd_annotate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Explain(args) => cmd_explain(args),
        Command::Constrain(args) => cmd_constrain(args),
    }
}

fn open_input(path: Option<&Path>) -> Result<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) => {
            let file =
                fs::File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
            Box::new(BufReader::new(file))
        }
        None => Box::new(BufReader::new(io::stdin())),
    })
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let file =
                fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn cmd_kb_build(args: KbBuildArgs) -> Result<()> {
    let sources = KbSources {
        paraphrases: args.paraphrases,
        aliases: args.aliases,
        relations: args.relations,
        hierarchy: args.hierarchy,
        negation: args.negation,
    };
    let (store, warnings) = KbStore::load(&sources)?;
    for warning in &warnings {
        eprintln!("warning: {warning}");
    }
    fs::write(&args.output, store.to_snapshot_json())
        .with_context(|| format!("cannot write {}", args.output.display()))?;
    eprintln!("wrote {}", args.output.display());
    Ok(())
}

/// The configuration file schema; every key optional, falling back to the
/// pipeline defaults. `--set key=value` applies the same keys on top.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    threshold: Option<f64>,
    align_word_floor: Option<f64>,
    span_max_words: Option<usize>,
    filter_mode: Option<String>,
    candidate_cap: Option<usize>,
    max_evidence: Option<usize>,
    priority: Option<Vec<String>>,
}

fn parse_priority(tokens: &[String]) -> Result<Vec<NatOp>> {
    if tokens.is_empty() {
        bail!("priority must list at least one operator");
    }
    let mut ops = Vec::new();
    for token in tokens {
        let op = NatOp::parse_token(token)
            .with_context(|| format!("unknown operator token {token:?} in priority"))?;
        if ops.contains(&op) {
            bail!("duplicate operator {token:?} in priority");
        }
        ops.push(op);
    }
    Ok(ops)
}

fn apply_override(config: &mut AnnotateConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "threshold" => config.threshold = value.parse().context("threshold must be a number")?,
        "align_word_floor" => {
            config.align_word_floor = value.parse().context("align_word_floor must be a number")?
        }
        "span_max_words" => {
            config.span_max_words = value.parse().context("span_max_words must be an integer")?
        }
        "filter_mode" => config.filter_mode = FilterMode::from_str(value).map_err(anyhow::Error::msg)?,
        "candidate_cap" => {
            config.candidate_cap = value.parse().context("candidate_cap must be an integer")?
        }
        "max_evidence" => {
            config.max_evidence = value.parse().context("max_evidence must be an integer")?
        }
        "priority" => {
            let tokens: Vec<String> = value.split(',').map(|t| t.trim().to_owned()).collect();
            config.priority = parse_priority(&tokens)?;
        }
        other => bail!("unknown configuration key {other:?}"),
    }
    Ok(())
}

fn validate_config(config: &AnnotateConfig) -> Result<()> {
    for (name, value) in [
        ("threshold", config.threshold),
        ("align_word_floor", config.align_word_floor),
    ] {
        if !(0.0..=1.0).contains(&value) {
            bail!("{name} must lie in [0, 1], got {value}");
        }
    }
    for (name, value) in [
        ("span_max_words", config.span_max_words),
        ("candidate_cap", config.candidate_cap),
        ("max_evidence", config.max_evidence),
    ] {
        if value == 0 {
            bail!("{name} must be at least 1");
        }
    }
    Ok(())
}

fn build_config(path: Option<&Path>, overrides: &[String]) -> Result<AnnotateConfig> {
    let mut config = AnnotateConfig::default();
    if let Some(path) = path {
        let text =
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let file: ConfigFile = toml::from_str(&text)
            .with_context(|| format!("invalid configuration in {}", path.display()))?;
        if let Some(v) = file.threshold {
            config.threshold = v;
        }
        if let Some(v) = file.align_word_floor {
            config.align_word_floor = v;
        }
        if let Some(v) = file.span_max_words {
            config.span_max_words = v;
        }
        if let Some(v) = file.filter_mode {
            config.filter_mode = FilterMode::from_str(&v).map_err(anyhow::Error::msg)?;
        }
        if let Some(v) = file.candidate_cap {
            config.candidate_cap = v;
        }
        if let Some(v) = file.max_evidence {
            config.max_evidence = v;
        }
        if let Some(v) = file.priority {
            config.priority = parse_priority(&v)?;
        }
    }
    for entry in overrides {
        let Some((key, value)) = entry.split_once('=') else {
            bail!("--set expects KEY=VALUE, got {entry:?}");
        };
        apply_override(&mut config, key.trim(), value.trim())?;
    }
    validate_config(&config)?;
    Ok(config)
}

fn load_kb(path: Option<&Path>) -> Result<KbStore> {
    match path {
        None => Ok(KbStore::default()),
        Some(p) => {
            let text =
                fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            KbStore::from_snapshot_json(&text)
                .with_context(|| format!("invalid snapshot {}", p.display()))
        }
    }
}

fn cmd_annotate(args: AnnotateArgs) -> Result<()> {
    let kb = load_kb(args.kb.as_deref())?;
    let config = build_config(args.config.as_deref(), &args.set)?;
    let annotator = Annotator::new(&kb, config);
    let input = open_input(args.input.as_deref())?;
    let mut output = open_output(args.output.as_deref())?;
    let summary = annotate_stream(&annotator, input, &mut output)?;
    output.flush()?;
    eprintln!("annotated: {} ok, {} failed", summary.ok, summary.failed);
    Ok(())
}

fn cmd_verify(args: IoArgs) -> Result<()> {
    let input = open_input(args.input.as_deref())?;
    let mut output = open_output(args.output.as_deref())?;
    let summary = verify_stream(input, &mut output)?;
    output.flush()?;
    eprintln!("verified: {} ok, {} failed", summary.ok, summary.failed);
    Ok(())
}

/// Read proof records from a JSONL stream. Error records produced by
/// earlier batch stages are tolerated and counted, not scored.
fn read_proof_records(path: Option<&Path>) -> Result<(Vec<ProofRecord>, usize)> {
    let mut reader = open_input(path)?;
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let mut records = Vec::new();
    let mut error_lines = 0usize;
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match serde_json::from_str::<ProofRecord>(line) {
            Ok(record) => records.push(record),
            Err(err) => {
                if serde_json::from_str::<BatchErrorRecord>(line).is_ok() {
                    error_lines += 1;
                } else {
                    bail!("line {}: not a proof record: {err}", index + 1);
                }
            }
        }
    }
    Ok((records, error_lines))
}

#[derive(Deserialize)]
struct RationaleRecord {
    id: String,
    tokens: Vec<String>,
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let denominator =
        SerDenominator::from_str(&args.ser_denominator).map_err(anyhow::Error::msg)?;
    let (records, error_lines) = read_proof_records(args.input.as_deref())?;

    let mut predictions: BTreeMap<String, Option<VeracityLabel>> = BTreeMap::new();
    let mut proofs: BTreeMap<String, Proof> = BTreeMap::new();
    let mut items = Vec::new();
    let mut inconsistent = 0usize;
    for record in &records {
        let prediction = match verify_record(record) {
            Ok(p) => p,
            Err(message) => {
                eprintln!("warning: {}: {message}", record.id);
                inconsistent += 1;
                continue;
            }
        };
        predictions.insert(record.id.clone(), prediction.predicted_label);
        if let Some(proof) = record.to_proof() {
            proofs.insert(record.id.clone(), proof);
        }
        if let Some(gold) = record.label {
            items.push(EvalItem {
                predicted_label: prediction.predicted_label,
                predicted_evidence: prediction.predicted_evidence,
                gold_label: gold,
                gold_evidence: record.gold_evidence.clone().unwrap_or_default(),
            });
        }
    }

    let mut out = io::stdout().lock();
    writeln!(out, "items {}", records.len())?;
    if error_lines > 0 {
        writeln!(out, "error_records {error_lines}")?;
    }
    if inconsistent > 0 {
        writeln!(out, "inconsistent_records {inconsistent}")?;
    }
    writeln!(out, "scored {}", items.len())?;
    writeln!(out, "label_accuracy {:.4}", label_accuracy(&items)?)?;
    writeln!(out, "fever_score {:.4}", fever_score(&items)?)?;

    if let Some(augmented_path) = args.augmented.as_deref() {
        let (augmented_records, _) = read_proof_records(Some(augmented_path))?;
        let mut augmented: BTreeMap<String, Option<VeracityLabel>> = BTreeMap::new();
        for record in &augmented_records {
            match verify_record(record) {
                Ok(p) => {
                    augmented.insert(record.id.clone(), p.predicted_label);
                }
                Err(message) => eprintln!("warning: augmented {}: {message}", record.id),
            }
        }
        let pairs: Vec<(Option<VeracityLabel>, Option<VeracityLabel>)> = records
            .iter()
            .filter_map(|record| {
                let base = predictions.get(&record.id)?;
                let aug = augmented.get(&record.id)?;
                Some((*base, *aug))
            })
            .collect();
        writeln!(out, "ser_pairs {}", pairs.len())?;
        match stability_error_rate(&pairs, denominator) {
            Ok(value) => {
                writeln!(out, "ser {value:.4}")?;
                writeln!(out, "ser_denominator {denominator}")?;
            }
            Err(err) => writeln!(out, "ser n/a ({err})")?,
        }
    }

    if let Some(rationales_path) = args.rationales.as_deref() {
        let text = fs::read_to_string(rationales_path)
            .with_context(|| format!("cannot read {}", rationales_path.display()))?;
        let mut scores = Vec::new();
        for (index, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let gold: RationaleRecord = serde_json::from_str(line)
                .with_context(|| format!("rationales line {}: invalid record", index + 1))?;
            let Some(proof) = proofs.get(&gold.id) else {
                continue;
            };
            let predicted = extract_rationale(proof);
            let gold_tokens: BTreeSet<String> =
                gold.tokens.iter().map(|t| t.to_lowercase()).collect();
            scores.push(token_f1(&predicted, &gold_tokens));
        }
        writeln!(out, "rationale_pairs {}", scores.len())?;
        if !scores.is_empty() {
            let mean = scores.iter().sum::<f64>() / scores.len() as f64;
            writeln!(out, "rationale_f1 {mean:.4}")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ExplainLine<'a> {
    id: &'a str,
    #[serde(flatten)]
    explanation: &'a Explanation,
}

#[derive(Serialize)]
struct ExplainErrorLine<'a> {
    id: &'a str,
    error: String,
}

fn unresolved_note(record: &ProofRecord) -> String {
    match record.reason {
        Some(reason) => {
            let value = serde_json::to_value(reason).expect("plain enum serializes");
            format!("unresolved ({})", value.as_str().unwrap_or("unknown"))
        }
        None => "unresolved".to_owned(),
    }
}

fn cmd_explain(args: ExplainArgs) -> Result<()> {
    let (records, error_lines) = read_proof_records(args.input.as_deref())?;
    if error_lines > 0 {
        eprintln!("warning: skipped {error_lines} error records");
    }
    let mut out = open_output(args.output.as_deref())?;
    for record in &records {
        match record.to_proof() {
            None => {
                let note = unresolved_note(record);
                if args.json {
                    let line = ExplainErrorLine { id: &record.id, error: note };
                    writeln!(out, "{}", serde_json::to_string(&line)?)?;
                } else {
                    writeln!(out, "# {}\n{note}\n", record.id)?;
                }
            }
            Some(proof) => match explain(&proof) {
                Ok(explanation) => {
                    if args.json {
                        let line = ExplainLine { id: &record.id, explanation: &explanation };
                        writeln!(out, "{}", serde_json::to_string(&line)?)?;
                    } else {
                        writeln!(out, "# {}\n{}", record.id, render_text(&explanation))?;
                    }
                }
                Err(err) => {
                    if args.json {
                        let line = ExplainErrorLine { id: &record.id, error: err.to_string() };
                        writeln!(out, "{}", serde_json::to_string(&line)?)?;
                    } else {
                        writeln!(out, "# {}\nerror: {err}\n", record.id)?;
                    }
                }
            },
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_constrain(args: ConstrainArgs) -> Result<()> {
    let sentences: Vec<EvidenceSentence> = args
        .evidence
        .iter()
        .enumerate()
        .map(|(i, text)| EvidenceSentence::new(format!("e{}", i + 1), text))
        .collect();
    let mut constrainer = Constrainer::new(&args.claim, &sentences, args.max_span_words)?;
    let stdin = io::stdin().lock();
    let stdout = io::stdout().lock();
    run_protocol(&mut constrainer, stdin, stdout)?;
    Ok(())
}

//! End-to-end tests of the command-line interface, driving the compiled
//! binary over the fixture corpus and knowledge tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_natproof")
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("RUST_BACKTRACE")
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

/// Build the fixture knowledge snapshot into `dir` and return its path.
fn build_kb(dir: &Path) -> PathBuf {
    let kb = fixtures().join("kb");
    let out = dir.join("kb.json");
    let path = |name: &str| kb.join(name).display().to_string();
    run_ok(&[
        "kb-build",
        "--paraphrases",
        &path("paraphrases.tsv"),
        "--aliases",
        &path("aliases.tsv"),
        "--relations",
        &path("relations.tsv"),
        "--hierarchy",
        &path("hierarchy.tsv"),
        "--negation",
        &path("negation.tsv"),
        "--output",
        &out.display().to_string(),
    ]);
    out
}

fn annotate_corpus(dir: &Path, kb: &Path, extra: &[&str]) -> PathBuf {
    let out = dir.join(format!("proofs-{}.jsonl", extra.len()));
    let corpus = fixtures().join("corpus.jsonl");
    let mut args = vec![
        "annotate".to_owned(),
        "--kb".to_owned(),
        kb.display().to_string(),
        "--input".to_owned(),
        corpus.display().to_string(),
        "--output".to_owned(),
        out.display().to_string(),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    run_ok(&args);
    out
}

#[test]
fn kb_build_snapshots_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = build_kb(dir.path());
    let bytes_first = fs::read(&first).unwrap();
    fs::remove_file(&first).unwrap();
    let second = build_kb(dir.path());
    assert_eq!(bytes_first, fs::read(&second).unwrap(), "rebuild changed the snapshot");
    assert!(!bytes_first.is_empty());
}

#[test]
fn kb_build_rejects_cyclic_hierarchy() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("cyclic.tsv");
    fs::write(&table, "alpha\tbeta\tsubclass_of\nbeta\talpha\tsubclass_of\n").unwrap();
    let out = run(&[
        "kb-build",
        "--hierarchy",
        &table.display().to_string(),
        "--output",
        &dir.path().join("kb.json").display().to_string(),
    ]);
    assert!(!out.status.success(), "cyclic taxonomy must fail the build");
    assert!(
        stderr(&out).contains("cycle"),
        "diagnostic names the cycle: {}",
        stderr(&out)
    );
}

#[test]
fn annotate_verify_evaluate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let kb = build_kb(dir.path());
    let proofs = annotate_corpus(dir.path(), &kb, &[]);

    // Annotation reruns are byte-identical.
    let rerun = dir.path().join("proofs-rerun.jsonl");
    run_ok(&[
        "annotate",
        "--kb",
        &kb.display().to_string(),
        "--input",
        &fixtures().join("corpus.jsonl").display().to_string(),
        "--output",
        &rerun.display().to_string(),
    ]);
    assert_eq!(
        fs::read(&proofs).unwrap(),
        fs::read(&rerun).unwrap(),
        "annotate rerun differs"
    );

    // Verification emits one prediction per record, deterministically.
    let preds = dir.path().join("preds.jsonl");
    let verify = run_ok(&[
        "verify",
        "--input",
        &proofs.display().to_string(),
        "--output",
        &preds.display().to_string(),
    ]);
    assert!(stderr(&verify).contains("23 ok, 0 failed"));
    let predictions = fs::read_to_string(&preds).unwrap();
    assert_eq!(predictions.lines().count(), 23);

    // 21 of 23 fixture items resolve and every resolved verdict is gold.
    let evaluate = run_ok(&["evaluate", "--input", &proofs.display().to_string()]);
    assert_eq!(
        stdout(&evaluate),
        "items 23\nscored 23\nlabel_accuracy 0.9130\nfever_score 0.9130\n"
    );

    // Pairing a file with itself flips nothing.
    let with_ser = run_ok(&[
        "evaluate",
        "--input",
        &proofs.display().to_string(),
        "--augmented",
        &proofs.display().to_string(),
    ]);
    let text = stdout(&with_ser);
    assert!(text.contains("ser_pairs 23\n"), "{text}");
    assert!(text.contains("ser 0.0000\n"), "{text}");
    assert!(text.contains("ser_denominator eligible\n"), "{text}");
}

#[test]
fn evaluate_scores_rationales() {
    let dir = tempfile::tempdir().unwrap();
    let kb = build_kb(dir.path());
    let proofs = annotate_corpus(dir.path(), &kb, &[]);
    // The multi-hop proof leans on {large, spanish, empire}; two of the
    // three gold tokens overlap, so F1 is exactly 2/3.
    let rationales = dir.path().join("rationales.jsonl");
    fs::write(
        &rationales,
        "{\"id\":\"citadel-multi-hop\",\"tokens\":[\"spanish\",\"empire\",\"fortress\"]}\n",
    )
    .unwrap();
    let out = run_ok(&[
        "evaluate",
        "--input",
        &proofs.display().to_string(),
        "--rationales",
        &rationales.display().to_string(),
    ]);
    let text = stdout(&out);
    assert!(text.contains("rationale_pairs 1\n"), "{text}");
    assert!(text.contains("rationale_f1 0.6667\n"), "{text}");
}

#[test]
fn config_file_and_set_overrides_control_filtering() {
    let dir = tempfile::tempdir().unwrap();
    let kb = build_kb(dir.path());

    // Strict filtering from a configuration file: transformation-tagged
    // records without a factoid can no longer resolve.
    let config = dir.path().join("strict.toml");
    fs::write(&config, "filter_mode = \"strict\"\n").unwrap();
    let strict = annotate_corpus(
        dir.path(),
        &kb,
        &["--config", &config.display().to_string()],
    );
    let strict_text = fs::read_to_string(&strict).unwrap();
    assert!(
        strict_text.contains("region_required"),
        "strict mode leaves factoid-less records unresolved"
    );

    // A --set override beats the file.
    let relaxed = annotate_corpus(
        dir.path(),
        &kb,
        &[
            "--config",
            &config.display().to_string(),
            "--set",
            "filter_mode=relaxed",
        ],
    );
    let relaxed_text = fs::read_to_string(&relaxed).unwrap();
    assert!(!relaxed_text.contains("region_required"), "{relaxed_text}");

    // Priority reordering changes which completion is materialized first.
    let reordered = annotate_corpus(dir.path(), &kb, &["--set", "priority=#,==,<,>,|,!"]);
    let line = fs::read_to_string(&reordered)
        .unwrap()
        .lines()
        .find(|l| l.contains("film-deletion-negation"))
        .expect("record present")
        .to_owned();
    assert!(
        line.contains("\"op\":\"#\""),
        "independence-first priority fills the free slot with #: {line}"
    );

    // Unknown keys are fatal.
    let bad = run(&[
        "annotate",
        "--kb",
        &kb.display().to_string(),
        "--set",
        "bogus=1",
        "--input",
        &fixtures().join("corpus.jsonl").display().to_string(),
    ]);
    assert!(!bad.status.success());
    assert!(stderr(&bad).contains("unknown configuration key"));
}

#[test]
fn verify_tolerates_malformed_lines() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("broken.jsonl");
    fs::write(&input, "this is not json\n").unwrap();
    let preds = dir.path().join("preds.jsonl");
    let out = run_ok(&[
        "verify",
        "--input",
        &input.display().to_string(),
        "--output",
        &preds.display().to_string(),
    ]);
    assert!(stderr(&out).contains("0 ok, 1 failed"));
    let text = fs::read_to_string(&preds).unwrap();
    assert!(text.contains("\"status\":\"error\""), "{text}");
    assert!(text.contains("line 1"), "{text}");
}

#[test]
fn explain_renders_fixed_phrases() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.jsonl");
    let record = concat!(
        "{\"id\":\"demo\",\"claim\":\"The Trial is a short story by Franz Kafka .\",",
        "\"status\":\"resolved\",\"predicted_label\":\"REFUTES\",\"steps\":[",
        "{\"claim\":\"The Trial\",\"evidence\":\"The Trial\",\"op\":\"≡\",\"source\":\"e1\"},",
        "{\"claim\":\"is a short story\",\"evidence\":\"is a novel\",\"op\":\"|\",\"source\":\"e1\"},",
        "{\"claim\":\"by Franz Kafka .\",\"evidence\":\"by Franz Kafka .\",\"op\":\"≡\",\"source\":\"e1\"}",
        "]}\n"
    );
    fs::write(&input, record).unwrap();

    let text = run_ok(&["explain", "--input", &input.display().to_string()]);
    let expected = "# demo\n\
        1. { The Trial } [ The Trial ] \u{2261}  Equivalent Spans\n\
        2. { is a short story } [ is a novel ] |  Evidence span contradicts the claim span\n\
        3. { by Franz Kafka . } [ by Franz Kafka . ] \u{2261}  Equivalent Spans\n\
        verdict: REFUTES\n\n";
    assert_eq!(stdout(&text), expected);

    let json = run_ok(&["explain", "--json", "--input", &input.display().to_string()]);
    let line = stdout(&json);
    assert!(line.starts_with("{\"id\":\"demo\""), "{line}");
    assert!(line.contains("\"verdict\":\"REFUTES\""), "{line}");
    assert!(line.contains("\"note\":\"Equivalent Spans\""), "{line}");

    // Unresolved records render a note instead of steps.
    let unresolved = dir.path().join("unresolved.jsonl");
    fs::write(
        &unresolved,
        "{\"id\":\"gap\",\"claim\":\"x .\",\"status\":\"unresolved\",\"reason\":\"no_candidates\"}\n",
    )
    .unwrap();
    let out = run_ok(&["explain", "--input", &unresolved.display().to_string()]);
    assert_eq!(stdout(&out), "# gap\nunresolved (no_candidates)\n\n");
}

#[test]
fn constrain_serves_the_token_protocol() {
    let mut child = Command::new(bin())
        .args([
            "constrain",
            "--claim",
            "The Trial .",
            "--evidence",
            "The Trial .",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("constrain starts");
    let script = "NEXT?\nSTEP {\nSTEP The\nSTEP Trial\nSTEP .\nSTEP }\nSTEP [\nSTEP The\n\
                  NEXT?\nSTEP Trial\nSTEP .\nSTEP ]\nSTEP ==\nNEXT?\nSTEP The\n";
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(script.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<String> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect();
    assert_eq!(lines[0], "{", "first menu offers the opening delimiter");
    assert_eq!(&lines[1..8], &["OK"; 7][..], "legal walk is accepted");
    assert_eq!(lines[8], "Trial ]", "mid-span menu offers continuation and closer");
    assert_eq!(&lines[9..12], &["OK"; 3][..]);
    assert_eq!(lines[12], "OK DONE", "ASCII operator alias closes the proof");
    assert_eq!(lines[13], "DONE");
    assert!(lines[14].starts_with("ERR "), "stepping past the end fails: {}", lines[14]);
    assert_eq!(lines.len(), 15);
}

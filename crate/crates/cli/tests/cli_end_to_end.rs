//! Full run -> annotate -> report round trips over the library entry
//! points, plus a smoke test of the installed binary.

use std::path::Path;
use std::process::Command;
use tandem_cli::commands::{
    cmd_agreement, cmd_annotate, cmd_report, cmd_run, AgreementOptions, AnnotateOptions,
    ReportOptions, RunOptions,
};

const CONFIG: &str = r#"
schema = 1
name = "smoke"
framework = "tag-team"
games = 4
master_seed = 99
workers = 1

[pool]
seed = 5
count = 2

[focal.senior]
kind = "builtin-strong"
nodes = 96

[focal.junior]
kind = "builtin-weak"

[alter.senior]
kind = "builtin-strong"
nodes = 96

[alter.junior]
kind = "builtin-weak"

[evaluator]
nodes = 48
cache_capacity = 65536
[evaluator.engine]
kind = "builtin-strong"
nodes = 48
"#;

fn run_pipeline(dir: &Path, workers: Option<usize>) -> (Vec<u8>, Vec<u8>, Vec<u8>) {
    let config_path = dir.join("config.toml");
    std::fs::write(&config_path, CONFIG).unwrap();
    let out = dir.join("out");
    cmd_run(&RunOptions {
        config: config_path.clone(),
        seed: None,
        workers,
        out: Some(out.clone()),
        pool: None,
    })
    .unwrap();
    let losses = cmd_annotate(&AnnotateOptions {
        records: out.join("records.jsonl"),
        config: config_path.clone(),
        out: None,
        workers,
    })
    .unwrap();
    let report = cmd_report(&ReportOptions {
        losses,
        summary: Some(out.join("summary.json")),
        records: Some(out.join("records.jsonl")),
        config: Some(config_path),
        out: out.join("report"),
        skip_induced: true,
        induced_cap: 0,
    })
    .unwrap();
    (
        std::fs::read(out.join("records.jsonl")).unwrap(),
        std::fs::read(out.join("losses.jsonl")).unwrap(),
        std::fs::read(report).unwrap(),
    )
}

#[test]
fn identical_seeds_give_byte_identical_artifacts() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let (rec_a, loss_a, rep_a) = run_pipeline(dir_a.path(), Some(1));
    let (rec_b, loss_b, rep_b) = run_pipeline(dir_b.path(), Some(1));
    assert_eq!(rec_a, rec_b, "records must be byte-identical");
    assert_eq!(loss_a, loss_b, "losses must be byte-identical");
    assert_eq!(rep_a, rep_b, "reports must be byte-identical");

    // Two workers must produce the same bytes as one.
    let dir_c = tempfile::tempdir().unwrap();
    let (rec_c, loss_c, rep_c) = run_pipeline(dir_c.path(), Some(2));
    assert_eq!(rec_a, rec_c);
    assert_eq!(loss_a, loss_c);
    assert_eq!(rep_a, rep_c);
}

#[test]
fn annotate_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.toml");
    std::fs::write(&config_path, CONFIG).unwrap();
    let out = dir.path().join("out");
    cmd_run(&RunOptions {
        config: config_path.clone(),
        seed: None,
        workers: Some(1),
        out: Some(out.clone()),
        pool: None,
    })
    .unwrap();
    let first = cmd_annotate(&AnnotateOptions {
        records: out.join("records.jsonl"),
        config: config_path.clone(),
        out: Some(out.join("a.jsonl")),
        workers: Some(1),
    })
    .unwrap();
    let second = cmd_annotate(&AnnotateOptions {
        records: out.join("records.jsonl"),
        config: config_path,
        out: Some(out.join("b.jsonl")),
        workers: Some(2),
    })
    .unwrap();
    assert_eq!(
        std::fs::read(first).unwrap(),
        std::fs::read(second).unwrap()
    );
}

#[test]
fn seed_override_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.toml");
    std::fs::write(&config_path, CONFIG).unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    cmd_run(&RunOptions {
        config: config_path.clone(),
        seed: Some(1),
        workers: Some(1),
        out: Some(out_a.clone()),
        pool: None,
    })
    .unwrap();
    cmd_run(&RunOptions {
        config: config_path,
        seed: Some(2),
        workers: Some(1),
        out: Some(out_b.clone()),
        pool: None,
    })
    .unwrap();
    assert_ne!(
        std::fs::read(out_a.join("records.jsonl")).unwrap(),
        std::fs::read(out_b.join("records.jsonl")).unwrap()
    );
}

#[test]
fn binary_perft_and_agreement_smoke() {
    let tandem = env!("CARGO_BIN_EXE_tandem");
    let output = Command::new(tandem)
        .args(["perft", "startpos", "3"])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8_lossy(&output.stdout).trim(), "8902");

    // Illegal FEN must fail loudly.
    let output = Command::new(tandem)
        .args(["perft", "8/8/8/8/8/8/8/8 w - - 0 1", "1"])
        .output()
        .unwrap();
    assert!(!output.status.success());

    let dir = tempfile::tempdir().unwrap();
    let agents = dir.path().join("agents.toml");
    std::fs::write(
        &agents,
        r#"
schema = 1

[[agents]]
name = "strong"
[agents.spec]
kind = "builtin-strong"
nodes = 64

[[agents]]
name = "weak"
[agents.spec]
kind = "builtin-weak"
"#,
    )
    .unwrap();
    let corpus = dir.path().join("corpus.fen");
    std::fs::write(
        &corpus,
        "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1\n\
         r1bqkbnr/pppp1ppp/2n5/4p3/2B1P3/5N2/PPPP1PPP/RNBQK2R b KQkq - 3 3\n",
    )
    .unwrap();
    let matrix_path = dir.path().join("matrix.csv");
    let csv = cmd_agreement(&AgreementOptions {
        config: agents,
        corpus,
        out: Some(matrix_path.clone()),
    })
    .unwrap();
    assert!(matrix_path.exists());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "agent,strong,weak");
    // Diagonal entries are exactly 1.
    assert!(lines[1].starts_with("strong,1.0000,"));
    assert!(lines[2].ends_with(",1.0000"));
    // Matrix is symmetric for deterministic agents.
    let off_a = lines[1].split(',').nth(2).unwrap();
    let off_b = lines[2].split(',').nth(1).unwrap();
    assert_eq!(off_a, off_b);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qcoherence::quantum::json::state_from_json;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcoherence"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const PLUS2: &str = r#"{"dims": [2], "matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}"#;

#[test]
fn measure_plus_state() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "plus2.json", PLUS2);
    let out = run(&["measure", "--state", state.to_str().unwrap(), "--kind", "rel-entropy"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((doc["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(doc["measure"], "rel-entropy");
    assert!(doc["tolerance"].is_number());

    let out = run(&["measure", "--state", state.to_str().unwrap(), "--kind", "l1", "--format", "csv"]);
    assert_eq!(stdout(&out), "measure,value\nl1,1\n");
}

#[test]
fn erasing_complete_decohering() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write(dir.path(), "erasing2.json", r#"{"name": "erasing", "dim": 2}"#);
    let out = run(&[
        "power",
        "--channel",
        ch.to_str().unwrap(),
        "--power",
        "complete-decohering",
        "--measure",
        "rel-entropy",
        "--kmax",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((doc["value"].as_f64().unwrap() - 2.0).abs() <= 1e-4);
    assert_eq!(doc["seed"], 42);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 2);
    assert_eq!(doc["reports"][1]["upper_bound"], 2.0);
}

#[test]
fn kraus_file_and_inline_spec_agree() {
    let dir = tempfile::tempdir().unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let kraus = format!(r#"{{"dim_in": 2, "dim_out": 2, "kraus": [[[[{s}, 0], [{s}, 0]], [[{s}, 0], [-{s}, 0]]]]}}"#);
    let ch = write(dir.path(), "h.json", &kraus);
    let args = ["--power", "generalized-cohering", "--restarts", "4", "--format", "csv"];
    let from_file = run(&[&["power", "--channel", ch.to_str().unwrap()][..], &args[..]].concat());
    let from_spec = run(&[&["power", "--spec", r#"{"name": "hadamard"}"#][..], &args[..]].concat());
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&from_spec));
    assert!(stdout(&from_file).starts_with("k,value,upper_bound,family,seed,passed\n"));
}

#[test]
fn json_reports_are_byte_identical() {
    let args = [
        "power",
        "--spec",
        r#"{"name":"random","dim":2,"seed":3}"#,
        "--power",
        "complete-cohering",
        "--kmax",
        "2",
        "--restarts",
        "3",
        "--seed",
        "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["seed"], 11);

    let sweep = [
        "sweep",
        "--spec",
        r#"{"name":"hadamard"}"#,
        "--power",
        "complete-cohering",
        "--measure",
        "l1",
        "--kmax",
        "2",
        "--restarts",
        "2",
        "--format",
        "json",
    ];
    assert_eq!(run(&sweep).stdout, run(&sweep).stdout);
}

#[test]
fn written_states_reread_identically() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "power",
        "--spec",
        r#"{"name": "random", "dim": 3, "env_dim": 2, "seed": 9}"#,
        "--power",
        "generalized-cohering",
        "--restarts",
        "3",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let state_text = doc["reports"][0]["optimal_input"].to_string();
    let rho = state_from_json(&state_text).unwrap();
    let again = state_from_json(&qcoherence::quantum::json::state_to_json(&rho)).unwrap();
    assert_eq!(rho.matrix(), again.matrix());

    let path = write(dir.path(), "opt.json", &state_text);
    let measured = run(&["measure", "--state", path.to_str().unwrap()]);
    assert_eq!(measured.status.code(), Some(0), "{}", stderr(&measured));
}

#[test]
fn sweep_csv_columns() {
    let out = run(&[
        "sweep",
        "--spec",
        r#"{"name":"hadamard"}"#,
        "--power",
        "complete-cohering",
        "--measure",
        "l1",
        "--kmax",
        "3",
        "--restarts",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,value,upper_bound,family,seed,wall_ms"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 3);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], (i + 1).to_string());
        let v: f64 = row[1].parse().unwrap();
        assert!(v >= (i + 1) as f64 - 1e-8, "{v}");
        assert_eq!(row[2], "inf");
        assert_eq!(row[4], "42");
        row[5].parse::<u128>().unwrap();
    }

    let bad = run(&["sweep", "--spec", r#"{"name":"hadamard"}"#, "--power", "cohering", "--kmax", "3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write(dir.path(), "typo.json", r#"{"dims": [2], "matirx": []}"#);
    let out = run(&["measure", "--state", typo.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("matirx"), "{}", stderr(&out));

    let ragged =
        write(dir.path(), "ragged.json", r#"{"dim_in": 2, "dim_out": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0]]]]}"#);
    let out = run(&["power", "--channel", ragged.to_str().unwrap(), "--power", "cohering"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("kraus[0]"), "{}", stderr(&out));

    let out = run(&["power", "--spec", r#"{"name": "erasing", "size": 2}"#, "--power", "cohering"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("size"), "{}", stderr(&out));

    let out = run(&["measure", "--state", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["power", "--power", "cohering"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "--state", typo.to_str().unwrap(), "--kind", "fidelity"]).status.code(), Some(2));
}

#[test]
fn invariant_violations_exit_3_with_residual() {
    let dir = tempfile::tempdir().unwrap();
    let non_psd =
        write(dir.path(), "neg.json", r#"{"dims": [2], "matrix": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]}"#);
    let out = run(&["measure", "--state", non_psd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("residual 5e-1"), "{}", stderr(&out));

    let incomplete = write(
        dir.path(),
        "half.json",
        r#"{"dim_in": 2, "dim_out": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]}"#,
    );
    let out = run(&["power", "--channel", incomplete.to_str().unwrap(), "--power", "cohering"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("residual"), "{}", stderr(&out));
}

#[test]
fn verify_subset_and_formats() {
    let out = run(&["verify", "--seed", "42", "--claim", "psi_phi", "--claim", "bell_marginal"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["passed"], true);
    let ids: Vec<&str> = doc["claims"].as_array().unwrap().iter().map(|c| c["claim_id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["bell_marginal", "psi_phi"]);
    for c in doc["claims"].as_array().unwrap() {
        assert!(c["seed"].is_u64() && c["tolerance"].is_number());
    }

    let table = run(&["verify", "--claim", "psi_phi", "--format", "table"]);
    let text = stdout(&table);
    assert!(text.starts_with("claim"));
    assert!(text.contains("PASS"));

    assert_eq!(run(&["verify", "--claim", "no_such_claim"]).status.code(), Some(2));
}

#[test]
fn full_verification_suite_passes() {
    let out = run(&["verify", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}\n{}", stdout(&out), stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["claims"].as_array().unwrap().len(), qcoherence::verify::CLAIMS.len());
}

//! File-format round trips and the command-line contract, exercised through
//! the real binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use minwit::state::ghz_state;
use minwit::{
    correlations_to_csv, evaluate, named_criteria, parse_angle, parse_correlations_csv,
    parse_counts_json, parse_report_json, parse_state_json, parse_witness_json,
    read_correlations_csv, read_witness_json, report_to_json, state_to_json, witness_to_json,
    CorrelationSet, Error, NamedFamily, PauliString,
};

fn op(digits: &str) -> PauliString {
    digits.parse().unwrap()
}

fn minwit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minwit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn correlation_csv_round_trips_with_metadata() {
    let mut corrs = CorrelationSet::new(4).unwrap();
    corrs.insert(op("3333"), 0.982, 0.003).unwrap();
    corrs.insert(op("1221"), -0.925, 0.006).unwrap();
    let text = correlations_to_csv(&corrs, &[("source".into(), "unit test".into())]);
    assert!(text.starts_with("# n_qubits: 4\n"));
    assert!(text.contains("# source: unit test"));
    let parsed = parse_correlations_csv(&text).unwrap();
    assert_eq!(parsed.len(), 2);
    assert_eq!(parsed.get(&op("1221")), Some((-0.925, 0.006)));
}

#[test]
fn csv_errors_carry_line_numbers() {
    let text = "# n_qubits: 4\nindex,value,stderr\n3333,0.9,0.01\n1221,not-a-number,0.01\n";
    match parse_correlations_csv(text) {
        Err(Error::Parse { line: Some(line), .. }) => assert_eq!(line, 4),
        other => panic!("expected a line-numbered parse error, got {other:?}"),
    }

    let bad_value = "# n_qubits: 4\nindex,value,stderr\n3333,1.5,0.01\n";
    assert!(matches!(
        parse_correlations_csv(bad_value),
        Err(Error::Validation(_))
    ));

    assert!(matches!(
        parse_correlations_csv(""),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn witness_json_round_trips_exact_rationals() {
    let spec = named_criteria(NamedFamily::Ghz4).combined.unwrap();
    let text = witness_to_json(&spec);
    let parsed = parse_witness_json(&text).unwrap();
    assert_eq!(parsed.g, spec.g);
    assert_eq!(parsed.g0, spec.g0);
    assert_eq!(parsed.weights, spec.weights);
    assert_eq!(parsed.operators, spec.operators);
    assert_eq!(parsed.threshold(), spec.threshold());
    assert_eq!(parsed.per_cut.len(), spec.per_cut.len());
    // Round-tripping the serialization is byte-stable.
    assert_eq!(witness_to_json(&parsed), text);
}

#[test]
fn state_json_normalizes_amplitudes() {
    let ghz = ghz_state(2).unwrap();
    let text = state_to_json(&ghz);
    let parsed = parse_state_json(&text).unwrap();
    assert!((parsed.overlap(&ghz).unwrap().norm() - 1.0).abs() < 1e-12);

    let unnormalized = r#"{"n_qubits":1,"amplitudes":[[3.0,0.0],[0.0,0.0]]}"#;
    let parsed = parse_state_json(unnormalized).unwrap();
    assert!((parsed.amplitudes()[0].re - 1.0).abs() < 1e-12);

    let zero = r#"{"n_qubits":1,"amplitudes":[[0.0,0.0],[0.0,0.0]]}"#;
    assert!(parse_state_json(zero).is_err());
}

#[test]
fn report_json_preserves_infinite_significance() {
    let witness = named_criteria(NamedFamily::Ghz4).combined.unwrap();
    let mut corrs = CorrelationSet::new(4).unwrap();
    for o in &witness.operators {
        corrs.insert(*o, 1.0, 0.0).unwrap();
    }
    let report = evaluate(&witness, &corrs).unwrap();
    assert!(report.significance.is_infinite());
    let text = report_to_json(&report);
    let parsed = parse_report_json(&text).unwrap();
    assert!(parsed.significance.is_infinite() && parsed.significance > 0.0);
    assert_eq!(parsed.verdict, report.verdict);
    assert_eq!(parsed.per_cut.len(), report.per_cut.len());
}

#[test]
fn angle_arguments_accept_pi_fractions() {
    assert_eq!(parse_angle("pi").unwrap(), std::f64::consts::PI);
    assert_eq!(parse_angle("pi/8").unwrap(), std::f64::consts::PI / 8.0);
    assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * std::f64::consts::PI / 4.0);
    assert_eq!(parse_angle("-pi/2").unwrap(), -std::f64::consts::PI / 2.0);
    assert_eq!(parse_angle("0.5").unwrap(), 0.5);
    assert!(parse_angle("pi/0").is_err());
    assert!(parse_angle("two").is_err());
}

struct CliWorkspace {
    _dir: tempfile::TempDir,
    witness: PathBuf,
}

fn build_ghz_witness() -> CliWorkspace {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("witness.json");
    let output = minwit(&[
        "build",
        "--state",
        "ghz",
        "--n",
        "4",
        "--settings",
        "3333,1221",
        "--out",
        path_str(&witness),
    ]);
    assert!(output.status.success(), "{output:?}");
    CliWorkspace { _dir: dir, witness }
}

#[test]
fn cli_build_produces_the_published_witness_file() {
    let ws = build_ghz_witness();
    let spec = read_witness_json(&ws.witness).unwrap();
    assert_eq!(spec.threshold().to_string(), "7/11");
    assert_eq!(spec.operators.len(), 8);
    assert_eq!(spec.settings.len(), 2);
}

#[test]
fn cli_eval_exit_codes_and_report() {
    let ws = build_ghz_witness();
    let dir = ws._dir.path();

    let csv = dir.join("measured.csv");
    let mut corrs = CorrelationSet::new(4).unwrap();
    for (digits, value, stderr) in [
        ("3333", 0.982, 0.003),
        ("3300", 0.993, 0.002),
        ("0033", 0.988, 0.002),
        ("3003", 0.963, 0.004),
        ("0330", 0.969, 0.004),
        ("3030", 0.972, 0.004),
        ("0303", 0.960, 0.005),
        ("1221", -0.925, 0.006),
    ] {
        corrs.insert(op(digits), value, stderr).unwrap();
    }
    std::fs::write(&csv, correlations_to_csv(&corrs, &[])).unwrap();

    let report_path = dir.join("report.json");
    let output = minwit(&[
        "eval",
        "--witness",
        path_str(&ws.witness),
        "--correlations",
        path_str(&csv),
        "--report",
        path_str(&report_path),
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let report = parse_report_json(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert!((report.value - 0.916521).abs() < 1e-6);

    // Weak data: completes, writes a report, exits 3.
    let weak_csv = dir.join("weak.csv");
    let mut weak = CorrelationSet::new(4).unwrap();
    for o in read_witness_json(&ws.witness).unwrap().operators {
        weak.insert(o, 0.3, 0.01).unwrap();
    }
    std::fs::write(&weak_csv, correlations_to_csv(&weak, &[])).unwrap();
    let output = minwit(&[
        "eval",
        "--witness",
        path_str(&ws.witness),
        "--correlations",
        path_str(&weak_csv),
        "--report",
        path_str(&report_path),
    ]);
    assert_eq!(output.status.code(), Some(3), "{output:?}");

    // Missing operator: data error, exit 4, message names the operator.
    let partial_csv = dir.join("partial.csv");
    std::fs::write(
        &partial_csv,
        "# n_qubits: 4\nindex,value,stderr\n3333,0.9,0.01\n",
    )
    .unwrap();
    let output = minwit(&[
        "eval",
        "--witness",
        path_str(&ws.witness),
        "--correlations",
        path_str(&partial_csv),
        "--report",
        path_str(&report_path),
    ]);
    assert_eq!(output.status.code(), Some(4), "{output:?}");
    let stderr_text = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr_text.contains("missing correlation for operator"),
        "error names the missing operator: {stderr_text}"
    );

    // Usage error: no data source at all.
    let output = minwit(&[
        "eval",
        "--witness",
        path_str(&ws.witness),
        "--report",
        path_str(&report_path),
    ]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}

#[test]
fn cli_usage_errors_exit_2() {
    assert_eq!(minwit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(minwit(&["build", "--state", "ghz"]).status.code(), Some(2));
    assert_eq!(
        minwit(&["build", "--state", "nosuch", "--n", "4", "--out", "/dev/null"])
            .status
            .code(),
        Some(4),
        "unknown family is caught during parsing of the value"
    );
    assert_eq!(minwit(&["--help"]).status.code(), Some(0));
}

#[test]
fn cli_simulate_is_deterministic_and_feeds_eval() {
    let ws = build_ghz_witness();
    let dir = ws._dir.path();
    let counts_a = dir.join("a.json");
    let counts_b = dir.join("b.json");
    for out in [&counts_a, &counts_b] {
        let output = minwit(&[
            "simulate",
            "--state",
            "ghz",
            "--n",
            "4",
            "--noise-p",
            "0.96",
            "--settings",
            "3333,1221",
            "--shots",
            "4000",
            "--seed",
            "11",
            "--out",
            path_str(out),
        ]);
        assert_eq!(output.status.code(), Some(0), "{output:?}");
    }
    let bytes_a = std::fs::read(&counts_a).unwrap();
    let bytes_b = std::fs::read(&counts_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "same argv and seed give identical output");

    let records = parse_counts_json(&String::from_utf8(bytes_a).unwrap()).unwrap();
    assert_eq!(records.len(), 2);
    assert!(records.iter().all(|r| r.shots() == 4000));

    let report_path = dir.join("report.json");
    let output = minwit(&[
        "eval",
        "--witness",
        path_str(&ws.witness),
        "--counts",
        path_str(&counts_a),
        "--report",
        path_str(&report_path),
    ]);
    assert_eq!(output.status.code(), Some(0), "p = 0.96 is comfortably detected");
}

#[test]
fn cli_sweep_grid_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let output = minwit(&[
        "sweep", "--phi", "pi", "--steps", "13", "--noise-p", "1.0", "--out",
        path_str(&out),
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,phi,p,w_ghz,w_cluster,fidelity");
    assert_eq!(lines.len(), 14);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
    assert!((first[3].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    let last: Vec<&str> = lines[13].split(',').collect();
    assert!((last[0].parse::<f64>().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
}

#[test]
fn cli_verify_passes_for_the_ghz_witness() {
    let ws = build_ghz_witness();
    let output = minwit(&[
        "verify",
        "--witness",
        path_str(&ws.witness),
        "--samples",
        "150",
        "--seed",
        "3",
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("witness_threshold"));
    assert!(stdout.contains("pass"));
}

#[test]
fn cli_outputs_are_reproducible() {
    let a = build_ghz_witness();
    let b = build_ghz_witness();
    assert_eq!(
        std::fs::read(&a.witness).unwrap(),
        std::fs::read(&b.witness).unwrap()
    );
}

#[test]
fn read_correlations_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corrs.csv");
    let mut corrs = CorrelationSet::new(3).unwrap();
    corrs.insert(op("123"), -0.5, 0.01).unwrap();
    corrs.insert(op("330"), 0.25, 0.0).unwrap();
    std::fs::write(&path, correlations_to_csv(&corrs, &[])).unwrap();
    let parsed = read_correlations_csv(&path).unwrap();
    assert_eq!(parsed.get(&op("123")), Some((-0.5, 0.01)));
    assert_eq!(parsed.get(&op("330")), Some((0.25, 0.0)));
}

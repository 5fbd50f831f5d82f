//! End-to-end tests for the `qsl` binary: every subcommand is exercised
//! through the real argument parser and the documented exit-code contract
//! (0 success, 2 parse, 3 validation, 4 property violation).

use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsl"))
        .args(args)
        .output()
        .expect("failed to spawn qsl binary")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process terminated by signal")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is not UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is not UTF-8")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is not valid JSON")
}

fn write_file(dir: &TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

/// Qubit |+⟩ against H = diag(0, 1): the standard fully-coherent probe.
const PLUS_PROBLEM: &str = r#"{
  "hamiltonian": [[[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],
  "state": [[[0.5,0.0],[0.5,0.0]],[[0.5,0.0],[0.5,0.0]]],
  "metadata": {"name": "plus"}
}"#;

/// Diagonal (stationary) qubit state against the same Hamiltonian.
const DIAGONAL_PROBLEM: &str = r#"{
  "hamiltonian": [[[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],
  "state": [[[0.3,0.0],[0.0,0.0]],[[0.0,0.0],[0.7,0.0]]],
  "metadata": {"name": "diag"}
}"#;

#[test]
fn measures_reports_plus_state_oracles() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let out = qsl(&["measures", "--input", &input]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));

    let v = stdout_json(&out);
    assert_eq!(v["state_id"], "plus");
    assert_eq!(v["dim"], 2);
    // Closed forms for |+⟩ with H = diag(0, 1).
    assert!((v["f_h"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((v["skew"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    assert!((v["uncertainty"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((v["average_energy"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((v["a_min"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((v["a_max"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((v["purity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    // The Dyson family at s = 1/2 equals twice the skew information.
    let dyson = v["dyson"].as_array().unwrap();
    assert_eq!(dyson.len(), 1);
    assert!((dyson[0]["order"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert!((dyson[0]["value"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    // The report must echo the effective tolerances.
    assert!(v["tolerances"]["t_tol"].as_f64().unwrap() > 0.0);
}

#[test]
fn measures_csv_emits_header_row_and_tolerance_echo() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let out = qsl(&[
        "measures", "--input", &input, "--format", "csv", "--orders", "0.3,0.7",
    ]);
    assert_eq!(exit_code(&out), 0);

    let text = stdout_str(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("state_id,dim,purity,average,dE,a_min,a_max,F_H,S_H"));
    assert!(header.contains("dyson_0.3"));
    assert!(header.contains("dyson_0.7"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("plus,2,"));
    // CSV cannot carry comments, so the tolerances go to stderr.
    assert!(stderr_str(&out).contains("t_tol"));
}

#[test]
fn measures_on_stationary_state_are_all_zero() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "diag.json", DIAGONAL_PROBLEM);
    let out = qsl(&["measures", "--input", &input]);
    assert_eq!(exit_code(&out), 0);

    let v = stdout_json(&out);
    assert!(v["f_h"].as_f64().unwrap().abs() < 1e-12);
    assert!(v["skew"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn malformed_json_exits_with_parse_code() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "broken.json", "{ this is not json");
    let out = qsl(&["measures", "--input", &input]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_str(&out).contains("parse"));
}

#[test]
fn missing_input_file_exits_with_parse_code() {
    let out = qsl(&["measures", "--input", "/nonexistent/nothing.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn invalid_state_exits_with_validation_code() {
    let dir = TempDir::new().unwrap();
    // Trace 1.4 ≠ 1: parses fine, fails density-matrix validation.
    let input = write_file(
        &dir,
        "badtrace.json",
        r#"{
  "hamiltonian": [[[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],
  "state": [[[0.7,0.0],[0.0,0.0]],[[0.0,0.0],[0.7,0.0]]]
}"#,
    );
    let out = qsl(&["measures", "--input", &input]);
    assert_eq!(exit_code(&out), 3, "stderr: {}", stderr_str(&out));
}

#[test]
fn mismatched_dimensions_exit_with_validation_code() {
    let dir = TempDir::new().unwrap();
    // 2x2 Hamiltonian with a 1x1 state.
    let input = write_file(
        &dir,
        "mismatch.json",
        r#"{
  "hamiltonian": [[[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],
  "state": [[[1.0,0.0]]]
}"#,
    );
    let out = qsl(&["measures", "--input", &input]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn tau_near_orthogonalization_epsilon_reaches_pi() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let out = qsl(&[
        "tau", "--input", &input, "--measure", "trace", "--epsilon", "1.99999999",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));

    let v = stdout_json(&out);
    assert_eq!(v["status"], "reached");
    // 2·sin(t/2) hits 2−1e-8 just below t = π.
    let t_star = v["t_star"].as_f64().unwrap();
    assert!((t_star - PI).abs() < 1e-3, "t_star = {t_star}");
    assert_eq!(v["measure"], "trace");
    assert!(v["horizon"].as_f64().unwrap() > t_star);
}

#[test]
fn tau_renyi_order_selector_is_parsed() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let out = qsl(&[
        "tau", "--input", &input, "--measure", "renyi:0.5", "--epsilon", "0.5",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "reached");
    assert!(v["t_star"].as_f64().unwrap() > 0.0);

    // Out-of-range Rényi order is a validation failure, not a parse failure.
    let bad = qsl(&[
        "tau", "--input", &input, "--measure", "renyi:3.0", "--epsilon", "0.5",
    ]);
    assert_eq!(exit_code(&bad), 3);

    // An unrecognized measure name is a parse failure.
    let unknown = qsl(&[
        "tau", "--input", &input, "--measure", "hamming", "--epsilon", "0.5",
    ]);
    assert_eq!(exit_code(&unknown), 2);
}

#[test]
fn tau_rejects_nonpositive_epsilon() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let out = qsl(&[
        "tau", "--input", &input, "--measure", "trace", "--epsilon", "0.0",
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn tau_on_stationary_state_is_unreached() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "diag.json", DIAGONAL_PROBLEM);
    let out = qsl(&[
        "tau", "--input", &input, "--measure", "trace", "--epsilon", "0.5",
    ]);
    assert_eq!(exit_code(&out), 0);

    let v = stdout_json(&out);
    assert_eq!(v["status"], "unreached_within_horizon");
    assert!(v["t_star"].is_null());
}

#[test]
fn bounds_json_on_saturating_qubit() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let out = qsl(&["bounds", "--input", &input]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));

    let v = stdout_json(&out);
    // ΔE = A_min = 1/2, so every π/(2·…) bound equals π and is saturated.
    assert!((v["mt_bound"].as_f64().unwrap() - PI).abs() < 1e-9);
    assert!((v["ml_bound"].as_f64().unwrap() - PI).abs() < 1e-9);
    assert!((v["ml_max_variant"].as_f64().unwrap() - PI).abs() < 1e-9);
    assert!((v["tau_perp"]["t_star"].as_f64().unwrap() - PI).abs() < 1e-4);
    assert!((v["tightness"]["mt"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    assert!((v["tightness"]["ml"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    // ε = 1 trace bound: ε/F_H = 1, reached at t = π/3, ratio 3/π.
    assert!((v["l1_bound"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((v["tau_l1"]["t_star"].as_f64().unwrap() - PI / 3.0).abs() < 1e-4);
    assert!((v["tightness"]["l1"].as_f64().unwrap() - 3.0 / PI).abs() < 1e-4);
}

#[test]
fn bounds_on_stationary_state_report_infinities() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "diag.json", DIAGONAL_PROBLEM);
    let out = qsl(&["bounds", "--input", &input]);
    assert_eq!(exit_code(&out), 0);

    let v = stdout_json(&out);
    // F_H = S_H = 0 for a stationary state, so the generalized bounds diverge,
    // while ΔE > 0 keeps the uncertainty-based bounds finite.
    assert_eq!(v["l1_bound"], "inf");
    assert_eq!(v["renyi_bound"], "inf");
    assert!(v["mt_bound"].as_f64().unwrap().is_finite());
    assert_eq!(v["tau_perp"]["status"], "unreached_within_horizon");
    assert!(v["tightness"]["mt"].is_null());
}

#[test]
fn bounds_csv_row_has_documented_columns() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let out = qsl(&["bounds", "--input", &input, "--format", "csv"]);
    assert_eq!(exit_code(&out), 0);

    let text = stdout_str(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "state_id,dim,purity,dE,F_H,S_H,tau_perp,tau_l1,tau_renyi,mt,ml,ml_max,l1,renyi,\
         tightness_mt,tightness_ml,tightness_ml_max,tightness_l1,tightness_renyi"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("plus,2,"));
    // 17-significant-digit scientific notation for numeric cells.
    assert!(row.contains("e0") || row.contains("e-"));
}

#[test]
fn orbit_csv_matches_the_qubit_closed_form() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let out_path = dir.path().join("orbit.csv");
    let out = qsl(&[
        "orbit",
        "--input",
        &input,
        "--measure",
        "trace",
        "--t-max",
        "3.141592653589793",
        "--steps",
        "5",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));

    let text = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,D");
    assert_eq!(lines.len(), 6); // header + 5 samples

    // Every sample must match D(t) = 2·sin(t/2) for this orbit.
    for line in &lines[1..] {
        let mut cells = line.split(',');
        let t: f64 = cells.next().unwrap().parse().unwrap();
        let d: f64 = cells.next().unwrap().parse().unwrap();
        assert!((d - 2.0 * (t / 2.0).sin()).abs() < 1e-10, "at t = {t}");
    }
    // First row is exactly t = 0, D = 0.
    assert!(lines[1].starts_with("0.000"));
}

#[test]
fn orbit_requires_at_least_two_steps() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let out = qsl(&[
        "orbit", "--input", &input, "--measure", "trace", "--t-max", "1.0", "--steps", "1",
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn channel_random_is_deterministic_and_complete() {
    let dir = TempDir::new().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out_dir in [&out_a, &out_b] {
        let out = qsl(&[
            "channel",
            "random",
            "--dims",
            "3",
            "--seed",
            "42",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
    }

    // Same seed ⇒ byte-identical artifacts.
    for name in ["channel.json", "dilation.json", "hamiltonian.json"] {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identically seeded runs");
    }

    // The emitted metadata certifies near-exact completeness and covariance.
    let channel: Value =
        serde_json::from_slice(&std::fs::read(out_a.join("channel.json")).unwrap()).unwrap();
    let meta = &channel["metadata"];
    assert!(meta["completeness_residual"].as_f64().unwrap() < 1e-9);
    assert!(meta["covariance_residual"].as_f64().unwrap() < 1e-8);
    assert!(meta["harmonic_residual"].as_f64().unwrap() < 1e-8);
    assert!(channel["omega"].as_array().is_some());
}

#[test]
fn channel_random_rejects_trivial_dimension() {
    let dir = TempDir::new().unwrap();
    let out = qsl(&[
        "channel",
        "random",
        "--dims",
        "1",
        "--seed",
        "1",
        "--out",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn channel_verify_passes_an_emitted_channel() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("gen");
    let gen = qsl(&[
        "channel",
        "random",
        "--dims",
        "2",
        "--seed",
        "9",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&gen), 0);

    let out = qsl(&[
        "channel",
        "verify",
        "--channel",
        out_dir.join("channel.json").to_str().unwrap(),
        "--hamiltonian",
        out_dir.join("hamiltonian.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));

    let v = stdout_json(&out);
    assert_eq!(v["overall"], "PASS");
    assert_eq!(v["covariance"]["pass"], true);
    assert_eq!(v["incoherence"]["pass"], true);
    assert_eq!(v["harmonic"]["pass"], true);
}

#[test]
fn channel_verify_flags_a_permutation_channel() {
    let dir = TempDir::new().unwrap();
    // Cyclic permutation |0⟩→|2⟩, |1⟩→|0⟩, |2⟩→|1⟩: maps energy eigenstates to
    // energy eigenstates (incoherent) but does not commute with the evolution.
    let channel = write_file(
        &dir,
        "perm.json",
        r#"{
  "kraus": [[
    [[0.0,0.0],[1.0,0.0],[0.0,0.0]],
    [[0.0,0.0],[0.0,0.0],[1.0,0.0]],
    [[1.0,0.0],[0.0,0.0],[0.0,0.0]]
  ]],
  "omega": [0.0]
}"#,
    );
    let hamiltonian = write_file(
        &dir,
        "h.json",
        r#"[[[0.0,0.0],[0.0,0.0],[0.0,0.0]],
  [[0.0,0.0],[1.0,0.0],[0.0,0.0]],
  [[0.0,0.0],[0.0,0.0],[2.0,0.0]]]"#,
    );
    let out = qsl(&[
        "channel", "verify", "--channel", &channel, "--hamiltonian", &hamiltonian,
    ]);
    assert_eq!(exit_code(&out), 4, "stderr: {}", stderr_str(&out));

    // The report is still written before the violation exit.
    let v = stdout_json(&out);
    assert_eq!(v["overall"], "FAIL");
    assert_eq!(v["covariance"]["pass"], false);
    assert!(v["covariance"]["residual"].as_f64().unwrap() > 0.1);
    assert_eq!(v["incoherence"]["pass"], true);
}

#[test]
fn monotone_suite_passes_and_injection_is_detected() {
    let out = qsl(&[
        "monotone-suite", "--trials", "8", "--dims", "2,3", "--seed", "11",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    assert_eq!(text.matches("PASS").count(), 4);
    assert!(text.contains("worst margin"));

    let bad = qsl(&[
        "monotone-suite", "--trials", "8", "--dims", "2,3", "--seed", "11", "--inject-non-ti",
    ]);
    assert_eq!(exit_code(&bad), 4);
    assert!(stdout_str(&bad).contains("FAIL"));
}

#[test]
fn monotone_suite_rejects_zero_trials() {
    let out = qsl(&["monotone-suite", "--trials", "0"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn config_file_overrides_are_echoed_in_reports() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let config = write_file(&dir, "config.json", r#"{"t_tol": 1e-8, "perp_predicate": 5e-7}"#);
    let out = qsl(&["--config", &config, "measures", "--input", &input]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));

    let v = stdout_json(&out);
    assert_eq!(v["tolerances"]["t_tol"].as_f64().unwrap(), 1e-8);
    assert_eq!(v["tolerances"]["perp_predicate"].as_f64().unwrap(), 5e-7);

    // Unknown keys are a parse error, not silently ignored.
    let bad_config = write_file(&dir, "bad.json", r#"{"not_a_tolerance": 1.0}"#);
    let bad = qsl(&["--config", &bad_config, "measures", "--input", &input]);
    assert_eq!(exit_code(&bad), 2);
}

#[test]
fn output_files_and_stdout_agree() {
    let dir = TempDir::new().unwrap();
    let input = write_file(&dir, "plus.json", PLUS_PROBLEM);
    let out_path = dir.path().join("report.json");
    let to_file = qsl(&[
        "measures", "--input", &input, "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&to_file), 0);
    let to_stdout = qsl(&["measures", "--input", &input]);

    let from_file: Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(from_file, stdout_json(&to_stdout));
}

#[test]
fn problem_round_trip_preserves_seventeen_digit_values(
) {
    let dir = TempDir::new().unwrap();
    // A value needing all 17 significant digits to round-trip.
    let p = 0.123_456_789_012_345_68;
    let problem = format!(
        r#"{{
  "hamiltonian": [[[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],
  "state": [[[{:.17e},0.0],[0.0,0.0]],[[0.0,0.0],[{:.17e},0.0]]]
}}"#,
        p,
        1.0 - p
    );
    let input = write_file(&dir, "rt.json", &problem);
    let out = qsl(&["measures", "--input", &input]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    // max occupied level probability mass means ⟨H⟩ = 1−p exactly here.
    assert!((v["average_energy"].as_f64().unwrap() - (1.0 - p)).abs() < 1e-16);
}

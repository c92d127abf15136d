//! End-to-end tests of the `qloop` binary: exit codes, output formats,
//! determinism across job counts, and JSON round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn qloop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qloop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn compute_a3_loop() {
    let out = qloop(&[
        "compute",
        fixture("a3_loop.json").to_str().unwrap(),
        "--cutoff",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("1 + "), "unexpected series: {text}");
    assert!(text.contains("q^(3/4)"));
}

#[test]
fn compute_json_has_delta_and_terms() {
    let out = qloop(&[
        "compute",
        fixture("a3_loop.json").to_str().unwrap(),
        "--cutoff",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["delta"], 4);
    assert_eq!(v["cutoff"], "3");
    assert_eq!(v["terms"][0], serde_json::json!([0, 1]));
    assert_eq!(v["terms"][1], serde_json::json!([3, 2]));
}

#[test]
fn exit_codes() {
    // parse errors
    assert_eq!(qloop(&["compute", fixture("garbage.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qloop(&["compute", fixture("bad_quiver.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        qloop(&["compute", fixture("a2_loop.json").to_str().unwrap(), "--cutoff", "-3"]).status.code(),
        Some(2)
    );
    // not a loop (final matrix reported on stderr)
    let out = qloop(&["compute", fixture("not_a_loop.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("final matrix"));
    // degenerate
    assert_eq!(
        qloop(&["compute", fixture("degenerate_loop.json").to_str().unwrap()]).status.code(),
        Some(4)
    );
    // positivity failed
    assert_eq!(
        qloop(&["compute", fixture("nonpositive_loop.json").to_str().unwrap()]).status.code(),
        Some(5)
    );
    // pentagon precondition (double arrow)
    assert_eq!(
        qloop(&[
            "verify-pentagon",
            fixture("nonpositive_loop.json").to_str().unwrap(),
            "--pos",
            "0",
        ])
        .status
        .code(),
        Some(6)
    );
    // lattice point limit
    assert_eq!(
        qloop(&[
            "compute",
            fixture("a3_loop.json").to_str().unwrap(),
            "--cutoff",
            "3",
            "--max-terms",
            "2",
        ])
        .status
        .code(),
        Some(7)
    );
}

#[test]
fn verify_pentagon_a2() {
    let out = qloop(&[
        "verify-pentagon",
        fixture("a2_loop.json").to_str().unwrap(),
        "--pos",
        "0",
        "--cutoff",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("original: 1 + 3 * q^(1/2)"));
    assert!(text.trim_end().ends_with("EQUAL"));
}

#[test]
fn verify_pentagon_four_vertex_example() {
    let out = qloop(&[
        "verify-pentagon",
        fixture("four_vertex_loop.json").to_str().unwrap(),
        "--pos",
        "1",
        "--cutoff",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim_end().ends_with("EQUAL"));
}

#[test]
fn dynkin_and_square_closed_forms_agree() {
    let out = qloop(&["dynkin", "d5", "--both", "--cutoff", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim_end().ends_with("EQUAL"));
    let out = qloop(&[
        "square", "A3", "A2", "--order", "minus", "--both", "--cutoff", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim_end().ends_with("EQUAL"));
}

#[test]
fn dynkin_rejects_unknown_type() {
    assert_eq!(qloop(&["dynkin", "B2"]).status.code(), Some(2));
    assert_eq!(qloop(&["square", "A1", "A2"]).status.code(), Some(2));
}

#[test]
fn check_identities_pass_and_rational_cutoff() {
    let out = qloop(&["check-identities", "--cutoff", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches(": PASS").count(), 37); // 36 q-pentagon + theta
    assert!(!text.contains("FAIL"));
    // rational and zero cutoffs parse and pass trivially
    assert_eq!(qloop(&["check-identities", "--cutoff", "25/2"]).status.code(), Some(0));
    assert_eq!(qloop(&["check-identities", "--cutoff", "0"]).status.code(), Some(0));
}

#[test]
fn info_json_schema() {
    let out = qloop(&[
        "info",
        fixture("a3_loop.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["delta"], 4);
    assert_eq!(v["positivity"], "positive-definite");
    assert_eq!(v["gram_den"], 4);
    // Gram in mutation order (2,1,3): first diagonal entry is 1 = 4/4
    assert_eq!(v["gram_num"][0][0], 4);
    assert_eq!(v["gram_num"][1][1], 3);
    assert_eq!(v["normal_form"]["mutations"], serde_json::json!([2, 1, 3]));
    assert_eq!(v["normal_form"]["phi"], serde_json::json!([1, 2, 3]));
}

#[test]
fn info_reports_failed_positivity_without_erroring() {
    let out = qloop(&[
        "info",
        fixture("nonpositive_loop.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("positivity: failed"));
    // the degenerate case has no exponent form to report
    assert_eq!(
        qloop(&["info", fixture("degenerate_loop.json").to_str().unwrap()]).status.code(),
        Some(4)
    );
}

#[test]
fn quiver_json_round_trips_bit_exactly() {
    let out = qloop(&[
        "info",
        fixture("a3_loop.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // feed the emitted quiver back through a fresh loop file
    let dir = tempdir();
    let path = dir.join("roundtrip.json");
    let doc = format!(
        "{{\"quiver\": {}, \"steps\": [{{\"mutate\": 2}}, {{\"mutate\": 1}}, {{\"mutate\": 3}}]}}",
        v["quiver"]
    );
    std::fs::write(&path, doc).unwrap();
    let again = qloop(&["info", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(out.stdout, again.stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qloop-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn output_is_stable_across_jobs_and_runs() {
    let path = fixture("four_vertex_loop.json");
    let args = [
        "compute",
        path.to_str().unwrap(),
        "--cutoff",
        "4",
        "--format",
        "json",
    ];
    let once = qloop(&args);
    let again = qloop(&args);
    assert_eq!(once.stdout, again.stdout);
    let mut with_jobs: Vec<&str> = args.to_vec();
    with_jobs.extend(["--jobs", "4"]);
    let parallel = qloop(&with_jobs);
    assert_eq!(once.stdout, parallel.stdout);
    assert_eq!(parallel.status.code(), Some(0));
}

#[test]
fn output_is_stable_across_strategies() {
    let path = fixture("a3_loop.json");
    let base = ["compute", path.to_str().unwrap(), "--cutoff", "4"];
    let mut pd: Vec<&str> = base.to_vec();
    pd.extend(["--strategy", "pd-recursive"]);
    let mut sx: Vec<&str> = base.to_vec();
    sx.extend(["--strategy", "simplex-bound"]);
    let a = qloop(&pd);
    let b = qloop(&sx);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_pentagon_position_out_of_range() {
    let out = qloop(&[
        "verify-pentagon",
        fixture("a2_loop.json").to_str().unwrap(),
        "--pos",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(6));
}

#[test]
fn verbose_diagnostics_on_stderr_only() {
    let out = qloop(&[
        "compute",
        fixture("a2_loop.json").to_str().unwrap(),
        "--cutoff",
        "2",
        "--verbose",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("delta: 2"));
    assert!(err.contains("positivity: positive-definite"));
    assert!(err.contains("gram:"));
    assert!(!stdout(&out).contains("delta"));
}

#[test]
fn series_json_round_trips() {
    let out = qloop(&[
        "dynkin",
        "A2",
        "--cutoff",
        "6",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let delta = v["delta"].as_u64().unwrap();
    let terms = v["terms"].as_array().unwrap();
    // reconstruct and compare against a fresh text run
    let text_run = qloop(&["dynkin", "A2", "--cutoff", "6"]);
    let text = stdout(&text_run);
    let rebuilt: Vec<String> = terms
        .iter()
        .map(|t| {
            let e = t[0].as_u64().unwrap();
            let c = t[1].as_u64().unwrap();
            if e == 0 {
                format!("{c}")
            } else {
                format!("{c} * q^({e}/{delta})")
            }
        })
        .collect();
    assert_eq!(text.trim_end(), rebuilt.join(" + "));
}

//! End-to-end checks of the binary: build artifacts, verify them, exercise
//! exit codes, and confirm that a built-then-loaded artifact verifies
//! identically to the in-process pipeline.

use std::path::PathBuf;
use std::process::{Command, Output};

fn xfkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xfkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("xfkit-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn build_writes_artifact_with_size_line() {
    let out = tmp("dom4.json");
    let res = xfkit(&[
        "build", "--kind", "tjoin-dominant", "--n", "4", "--t", "1,2,3,4", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("size 114"), "{stdout}");
    assert!(stdout.contains("upper bound on facet count"), "{stdout}");

    let text = std::fs::read_to_string(&out).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["inequalities"].as_array().unwrap().len(), 114);
    assert!(value["projection"]["rows"].as_array().is_some());
    std::fs::remove_file(&out).ok();
}

#[test]
fn parity_error_exits_2() {
    let out = tmp("bad.json");
    let res = xfkit(&[
        "build", "--kind", "tjoin-dominant", "--n", "4", "--t", "1,2,3", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("parity"));
}

#[test]
fn unknown_kind_exits_2() {
    let res = xfkit(&["build", "--kind", "nonsense", "--n", "4", "--out", "/dev/null"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn verify_loaded_artifact_matches_in_process_reports() {
    let out = tmp("dom4-pair.json");
    let res = xfkit(&[
        "build", "--kind", "tjoin-dominant", "--n", "4", "--t", "1,2", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());

    let report_path = tmp("report.json");
    let res = xfkit(&[
        "verify", "--extension", out.to_str().unwrap(), "--target", "tjoin-dominant", "--n",
        "4", "--t", "1,2", "--report", report_path.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("# config:"), "reports echo the parsed config: {stdout}");

    // The loaded artifact must verify exactly like the in-process pipeline.
    let space = xfkit_core::graph::EdgeSpace::new(4, [1, 2]).unwrap();
    let ext = xfkit_core::ext::tjoin_dominant_extension(&space).unwrap();
    let in_process = xfkit_core::verify::verify_extension_projects_to(
        &ext,
        &xfkit_core::poly::tjoin_dominant_h(&space).unwrap(),
        &xfkit_core::verify::tjoin_dominant_v(&space).unwrap(),
    )
    .unwrap();
    assert!(in_process.is_verified());

    let report_text = std::fs::read_to_string(&report_path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&report_text).unwrap();
    let cli_report = &report["reports"][0];
    assert_eq!(cli_report["status"], serde_json::json!("verified"));
    assert_eq!(
        cli_report["certificates"].as_array().unwrap().len(),
        in_process.certificates.len(),
        "same battery of certificates either way"
    );
    std::fs::remove_file(&out).ok();
    std::fs::remove_file(&report_path).ok();
}

#[test]
fn refuted_artifact_exits_1() {
    // The flow piece alone covers the pair dominant, but not the K4
    // all-terminals dominant: verification must refute and exit 1.
    let out = tmp("piece.json");
    let res = xfkit(&[
        "build", "--kind", "tjoin-flow-piece", "--n", "4", "--t", "1,2,3,4", "--s", "1,2",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let res = xfkit(&[
        "verify", "--extension", out.to_str().unwrap(), "--target", "tjoin-dominant", "--n",
        "4", "--t", "1,2,3,4",
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stdout).contains("REFUTED"));
    std::fs::remove_file(&out).ok();
}

#[test]
fn suites_run_and_workers_do_not_change_output() {
    let run = |workers: &str| {
        let res = xfkit(&["verify", "--suite", "fm-equals-gm", "--n", "4", "--workers", workers]);
        assert_eq!(res.status.code(), Some(0));
        String::from_utf8_lossy(&res.stdout)
            .lines()
            .filter(|l| l.contains("verified"))
            .map(|l| l.split(" [").next().unwrap().to_string())
            .collect::<Vec<_>>()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one, four);
    assert!(!one.is_empty());
}

#[test]
fn q_suite_with_u1() {
    let res = xfkit(&["verify", "--suite", "q-equals-qtilde", "--n", "6", "--t", "all", "--u1", "1,2,3"]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
}

#[test]
fn report_sizes_labels_counts() {
    let csv = tmp("sizes.csv");
    let res = xfkit(&["report-sizes", "--n-min", "3", "--n-max", "4", "--csv", csv.to_str().unwrap()]);
    assert!(res.status.success());
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("upper bound on facet count"));
    assert!(stdout.contains("114"));
    let content = std::fs::read_to_string(&csv).unwrap();
    assert!(content.lines().count() >= 3);
    assert!(content.contains("upper bound on facet count"));
    std::fs::remove_file(&csv).ok();
}

#[test]
fn export_and_inspect_round_trip() {
    let out = tmp("cut4.json");
    let res = xfkit(&[
        "export", "--what", "tcut-dominant-h", "--n", "4", "--t", "all", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let res = xfkit(&["inspect", out.to_str().unwrap()]);
    assert!(res.status.success());
    let stdout = String::from_utf8_lossy(&res.stdout);
    // 6 nonnegativity rows plus 7 minimal-join rows.
    assert!(stdout.contains("13 inequality rows"), "{stdout}");
    std::fs::remove_file(&out).ok();
}

#[test]
fn dim_cap_flag_gates_conversions() {
    // With a tiny cap, suites that need generator enumeration skip rather
    // than exceed the cap.
    let res = xfkit(&[
        "--dim-cap", "2", "verify", "--suite", "radial-cone-identity", "--n", "4", "--t",
        "1,2,3,4",
    ]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("skipped"), "{stdout}");
}

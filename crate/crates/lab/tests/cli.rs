use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn matfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matfree")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn free_check_as_assertion() {
    let f = data("c5_canonical_n7.boolfn");
    let ok = matfree(&["free", &f, &data("c3.matroid"), "--assert"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    assert_eq!(json(&ok)["results"]["free"], Value::Bool(true));

    let violated = matfree(&["free", &f, &data("c5.matroid"), "--assert"]);
    assert_eq!(code(&violated), 2);
    assert_eq!(json(&violated)["results"]["witness"].as_array().unwrap().len(), 5);

    let plain = matfree(&["free", &f, &data("c5.matroid")]);
    assert_eq!(code(&plain), 0);
}

#[test]
fn malformed_inputs_exit_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.boolfn");
    std::fs::write(&bad, "boolfn v1\nn 3\n0\n").unwrap();
    let out = matfree(&["fourier", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(code(&matfree(&["no-such-command"])), 4);
    assert_eq!(code(&matfree(&["count", &data("majority3.boolfn"), &data("c3.matroid"), "--sigma", "1x1"])), 4);
    assert_eq!(code(&matfree(&["--help"])), 0);
}

#[test]
fn missing_file_is_an_io_error() {
    assert_eq!(code(&matfree(&["oddgirth", "/nonexistent/file.matroid"])), 1);
}

#[test]
fn exhausted_budget_exits_with_3() {
    let out = matfree(&["hom", &data("c5.matroid"), &data("c3.matroid"), "--budget", "2"]);
    assert_eq!(code(&out), 3);
    let out = matfree(&["hierarchy", "cycles", "--budget", "0"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["partial"], Value::Bool(true));
}

#[test]
fn worker_override_is_validated_and_harmless() {
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_matfree"))
            .env("MATFREE_WORKERS", workers)
            .args(["test", &data("majority3.boolfn"), &data("c3.matroid"), "--samples", "9000", "--seed", "5"])
            .output()
            .unwrap()
    };
    let one = run("1");
    let three = run("3");
    assert_eq!(code(&one), 0);
    assert_eq!(json(&one)["results"], json(&three)["results"]);
    assert_eq!(code(&run("zero")), 4);
}

#[test]
fn graph_to_matroid_to_function_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("k3.matroid");
    let f = dir.path().join("canon.boolfn");
    let m_s = m.to_str().unwrap();
    assert_eq!(code(&matfree(&["graphic", &data("k3.graph"), "--out", m_s])), 0);
    assert_eq!(std::fs::read_to_string(&m).unwrap(), std::fs::read_to_string(data("c3.matroid")).unwrap());
    assert_eq!(code(&matfree(&["canonical", m_s, "--n", "4", "--out", f.to_str().unwrap()])), 0);

    let count = json(&matfree(&["count", f.to_str().unwrap(), m_s]));
    assert_eq!(count["results"]["density"]["value"], "3/32");
    let dist = json(&matfree(&["distance", f.to_str().unwrap(), m_s]));
    assert_eq!(dist["results"]["flips"]["value"], 2);
    assert_eq!(dist["results"]["hitting_number"]["value"], 2);
}

#[test]
fn cographic_k33_and_circuits() {
    let c = json(&matfree(&["complexity", &data("k33_cographic.matroid")]));
    assert_eq!(c["results"]["complexity"]["value"], 1);
    let circuits = json(&matfree(&["circuits", &data("c5.matroid")]));
    assert_eq!(circuits["results"]["count"]["value"], 1);
    let girth = json(&matfree(&["oddgirth", &data("c5.matroid")]));
    assert_eq!(girth["results"]["odd_girth"]["value"], 5);
}

#[test]
fn experiment_and_plot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cal.json");
    let report = dir.path().join("report.json");
    std::fs::write(&cfg, r#"{"experiment":"tester-calibration","n":3,"samples":2000,"trials":3,"seed":11}"#).unwrap();
    let out = matfree(&["experiment", cfg.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let first = std::fs::read_to_string(&report).unwrap();
    let plot = matfree(&["plot", report.to_str().unwrap()]);
    assert_eq!(code(&plot), 0);
    let csv = String::from_utf8(plot.stdout).unwrap();
    assert!(csv.starts_with("distance_bucket,empirical_rate,exact_density\n"));
    assert_eq!(csv.lines().count(), 4);

    matfree(&["experiment", cfg.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    let strip = |s: &str| s.lines().filter(|l| !l.contains("runtime_ms")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&first), strip(&std::fs::read_to_string(&report).unwrap()));
}

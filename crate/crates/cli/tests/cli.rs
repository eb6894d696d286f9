//! End-to-end checks of the binary: file emission, exit codes, and
//! byte-for-byte reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srcbcast"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn figure3_emits_files_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let st = run(&["figure3", "--out", &out, "--density", "21", "--tau-grid", "256"]);
    assert!(st.status.success(), "stderr: {}", String::from_utf8_lossy(&st.stderr));
    for f in ["fig3_inner1.csv", "fig3_outer1.csv", "fig3_outer2.csv", "fig3_trivial.csv", "fig3.svg", "fig3_report.json"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig3_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], serde_json::json!(true));
    let csv = fs::read_to_string(dir.path().join("fig3_inner1.csv")).unwrap();
    assert!(csv.starts_with("D1,D2\n"));
    assert!(!csv.contains('\r'));
}

#[test]
fn figure3_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let st = run(&[
        "figure3", "--out", &out, "--density", "11", "--tau-grid", "128", "--format", "json",
    ]);
    assert!(st.status.success());
    let inner: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig3_inner1.json")).unwrap())
            .unwrap();
    assert!(inner["points"].as_array().unwrap().len() > 1);
}

#[test]
fn figure4_emits_files_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let st = run(&["figure4", "--out", &out, "--density", "21", "--tau-grid", "129"]);
    assert!(st.status.success(), "stderr: {}", String::from_utf8_lossy(&st.stderr));
    for f in ["fig4_csc.csv", "fig4_separate.csv", "fig4_usc.csv", "fig4_outer1.csv", "fig4_outer2.csv", "fig4_trivial1.csv", "fig4_trivial2.csv", "fig4.svg", "fig4_report.json"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig4_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], serde_json::json!(true));
}

#[test]
fn member_verdicts() {
    // the joint per-user optimum is outside the tau-sweep outer bound
    let st = run(&[
        "member", "--bound", "gauss-outer", "--point", "0.02777777778,0.0003844675",
        "--tau-grid", "1024",
    ]);
    assert!(st.status.success());
    let text = String::from_utf8_lossy(&st.stdout);
    assert!(text.contains("not-member"), "{text}");
    assert!(text.contains("worst_tau"), "{text}");

    let st = run(&["member", "--bound", "gauss-outer", "--point", "1,1"]);
    assert!(String::from_utf8_lossy(&st.stdout).contains("verdict: member"));

    let st = run(&["member", "--bound", "bogus", "--point", "1,1"]);
    assert!(!st.status.success());
    let text = String::from_utf8_lossy(&st.stdout);
    assert!(text.contains("error"), "failure payload should be JSON: {text}");
}

#[test]
fn simulate_roundtrip_and_determinism() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let st = run(&[
            "simulate", "--config", &fixture("sim_small.json"),
            "--out", &dir.path().display().to_string(),
        ]);
        assert!(st.status.success(), "stderr: {}", String::from_utf8_lossy(&st.stderr));
    }
    let a = fs::read(dir_a.path().join("simulate_stats.json")).unwrap();
    let b = fs::read(dir_b.path().join("simulate_stats.json")).unwrap();
    assert_eq!(a, b, "same seed and config must give identical bytes");
}

#[test]
fn simulate_memory_guard_refusal() {
    let dir = tempfile::tempdir().unwrap();
    let st = run(&[
        "simulate", "--config", &fixture("sim_guard_violation.json"),
        "--out", &dir.path().display().to_string(),
    ]);
    assert!(!st.status.success());
    let text = String::from_utf8_lossy(&st.stdout);
    assert!(text.contains("error"), "expected failure JSON, got: {text}");
    assert!(text.contains("guard"), "{text}");
}

#[test]
fn lemma_ladder_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let st = run(&["lemma", "--config", &fixture("lemma_small.json"), "--out", &out]);
    assert!(st.status.success(), "stderr: {}", String::from_utf8_lossy(&st.stderr));
    let csv = fs::read_to_string(dir.path().join("lemma_ladder.csv")).unwrap();
    assert!(csv.starts_with("rate,frequency\n"));
    assert_eq!(csv.lines().count(), 4); // header + three rates
    let stats: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lemma_stats.json")).unwrap())
            .unwrap();
    // the ladder straddles the threshold: monotone frequencies
    let freqs: Vec<f64> = stats["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["frequency"].as_f64().unwrap())
        .collect();
    assert!(freqs.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{freqs:?}");
}

#[test]
fn frontier_discrete_from_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let st = run(&[
        "frontier", "--which", "discrete", "--instance", &fixture("instance_k1.json"),
        "--budget", "200", "--seed", "5", "--out", &out,
    ]);
    assert!(st.status.success(), "stderr: {}", String::from_utf8_lossy(&st.stderr));
    let csv = fs::read_to_string(dir.path().join("frontier_discrete.csv")).unwrap();
    assert!(csv.starts_with("D1\n") || csv.starts_with("D1,D2\n"), "{csv}");
}

#[test]
fn frontier_gauss_inner_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let st = run(&[
        "frontier", "--which", "gauss-inner", "--density", "31", "--svg", "--out", &out,
    ]);
    assert!(st.status.success());
    assert!(dir.path().join("frontier_gauss-inner.csv").exists());
    assert!(dir.path().join("frontier_gauss-inner.svg").exists());
}

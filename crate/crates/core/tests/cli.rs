use sinecross::io::{load_crossings, load_samples, read_signal};
use std::path::Path;
use std::process::{Command, Output};

fn sinecross(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sinecross"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = sinecross(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_detect_reconstruct_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("s.json");
    let cr = dir.path().join("c.csv");
    let rec = dir.path().join("r.csv");
    let spec = dir.path().join("spec.csv");
    let spec2 = dir.path().join("spec2.csv");

    ok(&["gen-signal", "--type", "bpsk", "--bt", "0.7", "--symbols", "80", "--seed", "4", "--out", p(&sig)]);
    let s = read_signal(&sig).unwrap();
    assert!((s.bandwidth() - 0.7).abs() < 1e-15);

    ok(&["detect", "--signal", p(&sig), "--amp", "1.5", "--semiperiod", "1", "--n-lo", "-20", "--n-hi", "120", "--out", p(&cr)]);
    let c = load_crossings(&cr).unwrap();
    assert_eq!((c.n_first(), c.n_last()), (-20, 120));
    assert_eq!(c.amplitude(), 1.5);

    ok(&["reconstruct", "--crossings", p(&cr), "--bt", "0.7", "--p", "12", "--grid", "20:0.25:40", "--out", p(&rec)]);
    let text = std::fs::read_to_string(&rec).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,value"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (t, v) = l.split_once(',').unwrap();
            (t.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 81);
    let worst = rows.iter().map(|&(t, v)| (v - s.eval(t)).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-4, "worst = {worst}");

    ok(&["spectrum", "--crossings", p(&cr), "--p", "12", "--n", "64", "--spacing", "1", "--out", p(&spec)]);
    let t = std::fs::read_to_string(&spec).unwrap();
    assert!(t.starts_with("freq_hz,amplitude_db\n"));
    assert_eq!(t.lines().count(), 1 + 33);
    // the samples mode accepts the reconstruct output
    ok(&["spectrum", "--samples", p(&rec), "--spacing", "0.25", "--out", p(&spec2)]);
    assert_eq!(load_samples(&rec).unwrap().len(), 81);
}

#[test]
fn noise_signal_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("w.json");
    ok(&["gen-signal", "--type", "noise", "--bt", "0.5", "--semiperiod", "2", "--symbols", "16", "--power", "0.01", "--seed", "9", "--out", p(&sig)]);
    let s = read_signal(&sig).unwrap();
    assert!((s.bandwidth() - 0.25).abs() < 1e-15);
}

#[test]
fn bad_input_exits_with_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    let out = sinecross(&["reconstruct", "--crossings", p(&missing), "--bt", "0.7", "--p", "4", "--grid", "0:1:4", "--out", p(&dir.path().join("x.csv"))]);
    assert_eq!(out.status.code(), Some(2));
    let out = sinecross(&["gen-signal", "--type", "bpsk", "--rolloff", "1.5", "--out", p(&dir.path().join("y.json"))]);
    assert!(!out.status.success());
}

#[test]
fn coverage_error_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("s.json");
    let cr = dir.path().join("c.csv");
    ok(&["gen-signal", "--type", "bpsk", "--symbols", "40", "--out", p(&sig)]);
    ok(&["detect", "--signal", p(&sig), "--amp", "2", "--semiperiod", "1", "--n-lo", "0", "--n-hi", "30", "--out", p(&cr)]);
    let out = sinecross(&["reconstruct", "--crossings", p(&cr), "--bt", "0.7", "--p", "6", "--grid", "0:0.5:10", "--out", p(&dir.path().join("r.csv"))]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("missing"), "{err}");
}

#[test]
fn experiment_writes_report_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = sinecross(&["experiment", "fig8_9", "--seed", "2", "--n", "256", "--out", p(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["experiment"], "fig8_9");
    assert_eq!(report["config"]["n"], 256);
    let csv = std::fs::read_to_string(dir.path().join("fig9.csv")).unwrap();
    assert!(csv.starts_with("# config {"));

    // criterion 1's P = 10 anchor is part of fig6; its verdict drives the exit code
    let dir6 = tempfile::tempdir().unwrap();
    let out = sinecross(&["experiment", "fig6", "--seed", "2", "--n", "128", "--out", p(dir6.path())]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let failed = stdout.lines().any(|l| l.starts_with("[FAIL]"));
    assert_eq!(out.status.code(), Some(if failed { 1 } else { 0 }));
}

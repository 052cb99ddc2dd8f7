use std::path::Path;
use std::process::{Command, Output};

use bandprec::harness::io::parse_data_csv;
use bandprec::{build_omega, correction_decay_report, read_records_csv, ModelSpec};

fn bandprec(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bandprec"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run bandprec")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn sweep_writes_one_row_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let out = bandprec(
        &["sweep", "--alphas", "0.5", "--ns", "250,500", "--ps", "100", "--trials", "2", "--seed", "1", "--out", "r.csv"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let records = read_records_csv(dir.path().join("r.csv")).unwrap();
    assert_eq!(records.len(), 4);
    assert_eq!(records.iter().map(|r| r.k).collect::<Vec<_>>(), [15, 15, 22, 22]);
    assert!(records.iter().all(|r| r.elapsed_ms > 0.0));
}

#[test]
fn estimate_requires_a_bandwidth() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.csv"), "1,2\n3,4\n").unwrap();
    let out = bandprec(&["estimate", "--input", "x.csv"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["sweep", "--alphas", "0.5", "--ns", "x", "--ps", "10"][..],
        &["generate-model", "--alpha", "0.5", "--p", "3", "--bogus"],
        &["frobnicate"],
        &[],
    ] {
        assert_eq!(code(&bandprec(args, dir.path())), 1, "{args:?}");
    }
    let help = bandprec(&["--help"], dir.path());
    assert_eq!(code(&help), 0);
    assert!(String::from_utf8_lossy(&help.stdout).contains("sweep"));
    let axis = bandprec(
        &["sweep", "--alphas", "0.5", "--ns", "50", "--ps", "10", "--trials", "1", "--plot-axis", "log_n"],
        dir.path(),
    );
    assert_eq!(code(&axis), 1);
}

#[test]
fn singular_window_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // second coordinate is constant, so every window containing it is singular
    std::fs::write(dir.path().join("x.csv"), "1,0,2\n-1,0,1\n0.5,0,-3\n").unwrap();
    let out = bandprec(&["estimate", "--input", "x.csv", "--k", "2"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not positive definite"));
}

#[test]
fn sample_then_estimate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = bandprec(
        &["sample", "--alpha", "0.5", "--p", "12", "--n", "300", "--seed", "4", "--out", "x.csv"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let x = parse_data_csv(&std::fs::read_to_string(dir.path().join("x.csv")).unwrap()).unwrap();
    assert_eq!((x.rows(), x.cols()), (300, 12));

    let est = bandprec(&["estimate", "--input", "x.csv", "--k", "4"], dir.path());
    assert_eq!(code(&est), 0);
    let omega_hat = parse_data_csv(&String::from_utf8(est.stdout).unwrap()).unwrap();
    assert_eq!((omega_hat.rows(), omega_hat.cols()), (12, 12));
    assert_eq!(omega_hat.row(0)[5], 0.0);
    assert!(omega_hat.row(0)[1] != 0.0);

    let by_alpha = bandprec(&["estimate", "--input", "x.csv", "--alpha", "0.5", "--mode", "naive"], dir.path());
    assert_eq!(code(&by_alpha), 0);
}

#[test]
fn generate_model_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = bandprec(&["generate-model", "--alpha", "0.5", "--p", "3"], dir.path());
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "1.0,0.6,0.21213203435596426");
    assert_eq!(lines.len(), 3);
}

#[test]
fn diagnose_reports_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = bandprec(
        &["diagnose", "--alpha", "0.5", "--p", "256", "--ms", "4,8,16,32", "--out", "d.csv", "--band-out", "b.csv"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let model = build_omega(ModelSpec::new(0.5, 256)).unwrap();
    let report = correction_decay_report(&model, &[4, 8, 16, 32]).unwrap();
    let norms: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(norms, report.max_norms);
    let band = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(band.lines().count(), 4);

    let short = bandprec(&["diagnose", "--alpha", "0.5", "--p", "100"], dir.path());
    assert_eq!(code(&short), 1);
}

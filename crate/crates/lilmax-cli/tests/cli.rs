//! End-to-end checks of the binary: formats, determinism, exit codes.

use std::process::Command;

fn lilmax() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lilmax"))
}

#[test]
fn scale_at_one_prints_value() {
    let out = lilmax().args(["scale", "--x", "1.0"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let value: f64 = text.lines().next().unwrap().parse().unwrap();
    assert!((value - 1.19496).abs() < 1e-5, "got {value}");
}

#[test]
fn scale_at_zero_is_zero() {
    let out = lilmax().args(["scale", "--x", "0"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let value: f64 = text.lines().next().unwrap().parse().unwrap();
    assert_eq!(value, 0.0);
}

#[test]
fn scale_log_domain_at_forty() {
    let out = lilmax().args(["scale", "--x", "40", "--log"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let value: f64 = text.lines().next().unwrap().parse().unwrap();
    // ln S(40) ~ 800 - ln 40 + corrections
    assert!((value - (800.0 - 40f64.ln())).abs() < 0.01, "got {value}");
}

#[test]
fn usage_errors_exit_2() {
    let out = lilmax().args(["scale"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = lilmax().args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = lilmax()
        .args(["strong-law", "--c", "0.0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gumbel_table_emits_zero_branch_and_ks_column() {
    let out = lilmax()
        .args([
            "gumbel-table",
            "--log10-ladder",
            "4",
            "--x-min",
            "-2",
            "--x-max",
            "2",
            "--steps",
            "9",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# table: u_cdf"));
    assert!(text.contains("# table: convergence"));
    // x = -2 is below -x* for n = 1e4, so the exact column starts at zero.
    let first_data = text.lines().nth(2).unwrap();
    let cells: Vec<&str> = first_data.split(',').collect();
    assert_eq!(cells[0].parse::<f64>().unwrap(), -2.0);
    assert_eq!(cells[2].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let run = || {
        lilmax()
            .args([
                "simulate",
                "iid",
                "--n",
                "1000",
                "--cut",
                "1000",
                "--replicates",
                "2000",
                "--seed",
                "42",
                "--format",
                "json",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"command\": \"simulate-iid\""));
    assert!(text.contains("ks_vs_exact"));
}

#[test]
fn cut_below_certification_exits_1() {
    let out = lilmax()
        .args([
            "simulate", "iid", "--n", "1000", "--cut", "1100", "--replicates", "100",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("certification"), "stderr: {err}");
}

#[test]
fn expectation_ladder_short() {
    let out = lilmax()
        .args(["expectation", "--log10-ladder", "4,8", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = text.lines().skip(2).take(2).map(|l| {
        let cells: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        cells
    });
    let r1 = rows.next().unwrap();
    let r2 = rows.next().unwrap();
    // Gap to gamma shrinks from 1e4 to 1e8.
    assert!(r2[2].abs() < r1[2].abs());
}

#[test]
fn strong_law_schedule_runs() {
    let out = lilmax()
        .args(["strong-law", "--c", "1.4", "--rho", "2", "--k-min", "2", "--k-max", "8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# table: schedule"));
    assert_eq!(text.lines().count(), 2 + 7);
}

#[test]
fn output_file_and_svg_written() {
    let dir = std::env::temp_dir().join(format!("lilmax-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("walk.csv");
    let out = lilmax()
        .args([
            "simulate",
            "walk",
            "--n",
            "100",
            "--horizon",
            "10000",
            "--replicates",
            "4",
            "--seed",
            "3",
            "--output",
            path.to_str().unwrap(),
            "--svg",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.contains("# table: walk_summary"));
    let svg = dir.join("walk.walk_statistics.svg");
    assert!(svg.exists(), "missing {svg:?}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_dir_env_var_resolves_relative_paths() {
    let dir = std::env::temp_dir().join(format!("lilmax-env-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = lilmax()
        .args(["scale", "--x", "1", "--output", "s.csv"])
        .env("LILMAX_OUTPUT_DIR", dir.to_str().unwrap())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.join("s.csv").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

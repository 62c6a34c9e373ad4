use std::path::Path;
use std::process::{Command, Output};

use hopfchain::chain_extract::ChainSpec;
use hopfchain::markov::Distribution;
use hopfchain::martingale::MartingaleReport;
use hopfchain::montecarlo::BoundReport;

fn hopfchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfchain"))
        .args(args)
        .env_remove("HOPFCHAIN_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn hopf_square_examples() {
    let out = hopfchain(&["hopf", "square", "E^1 K^0", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "E K + E");
    let out = hopfchain(&["hopf", "square", "E^0 K^3", "--format", "text"]);
    assert_eq!(stdout(&out).trim(), "K^6");
}

#[test]
fn hopf_verify_passes() {
    let out = hopfchain(&[
        "hopf", "verify", "--max-i", "3", "--max-l", "2", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: hopfchain::hopf::AxiomReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.all_passed());
}

#[test]
fn parse_errors_carry_positions() {
    let out = hopfchain(&["hopf", "square", "E^1 F"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("position 4"), "{}", stderr(&out));
}

#[test]
fn chain_grading_one() {
    let out = hopfchain(&["chain", "--grading", "1", "--q", "2/1", "--max-state", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let spec: ChainSpec = serde_json::from_str(&stdout(&out)).unwrap();
    let steps: Vec<String> = spec.rows.iter().map(|r| r.moves[1].p.to_string()).collect();
    assert_eq!(steps, ["1/2", "1/3", "1/5", "1/9"]);
}

#[test]
fn chain_grading_two_at_one() {
    let out = hopfchain(&[
        "chain",
        "--grading",
        "2",
        "--q",
        "1/1",
        "--max-state",
        "0",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&out), "state,target,p\n0,0,1/4\n0,1,1/2\n0,2,1/4\n");
}

#[test]
fn chain_rejects_zero_q() {
    let out = hopfchain(&["chain", "--grading", "1", "--q", "0/1", "--max-state", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--q"));
}

#[test]
fn analyze_hit() {
    let out = hopfchain(&[
        "analyze",
        "hit",
        "--q",
        "2/1",
        "--N",
        "2",
        "--format",
        "text",
        "--crosscheck",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "5");
}

#[test]
fn analyze_dist_binomial_crosscheck() {
    let out = hopfchain(&["analyze", "dist", "--q", "1/1", "--n", "5", "--crosscheck"]);
    assert_eq!(out.status.code(), Some(0));
    let d: Distribution = serde_json::from_str(&stdout(&out)).unwrap();
    let masses: Vec<String> = d.mass.iter().map(ToString::to_string).collect();
    assert_eq!(masses, ["1/32", "5/32", "5/16", "5/16", "5/32", "1/32"]);
    let out = hopfchain(&[
        "analyze", "dist", "--q", "1/2", "--n", "6", "--method", "formula", "--format", "csv",
    ]);
    assert!(stdout(&out).starts_with("n,k,p_num,p_den\n"));
}

#[test]
fn analyze_martingale_zero_residual() {
    let out = hopfchain(&["analyze", "martingale", "--q", "3/1", "--max-state", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let r: MartingaleReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(r.passed());
    assert_eq!(r.residuals.len(), 101);
}

#[test]
fn analyze_variance_and_phase() {
    let out = hopfchain(&[
        "analyze",
        "variance",
        "--q",
        "1/2",
        "--n",
        "10",
        "--crosscheck",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("i,term,partial_sum\n1,1/1,1/1\n"));
    let out = hopfchain(&[
        "analyze",
        "phase",
        "--q-list",
        "1/2,1/1,2/1",
        "--n-list",
        "8,16",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("1,1,16,1,2"));
}

#[test]
fn simulate_summary_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = hopfchain(&[
            "simulate",
            "--q",
            "1/1",
            "--n",
            "1000",
            "--traj",
            "2000",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(stdout(&out).contains("E[X_n]/n"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn bounds_report_and_threads_env() {
    let dir = tempfile::tempdir().unwrap();
    let run = |path: &Path, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hopfchain"))
            .args([
                "bounds",
                "--q",
                "2/1",
                "--n",
                "1000,10000",
                "--traj",
                "300",
                "--seed",
                "7",
            ])
            .args(["--out", path.to_str().unwrap()])
            .env("HOPFCHAIN_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = dir.path().join("one.json");
    let many = dir.path().join("many.json");
    let out = run(&one, "1");
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("violations"));
    run(&many, "4");
    let text = std::fs::read_to_string(&one).unwrap();
    assert_eq!(text, std::fs::read_to_string(&many).unwrap());
    let report: BoundReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.total_violations(), 0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "command = chain\ngrading = 1\nq = 2/1\nmax_state = 5\nformat = csv\n",
    )
    .unwrap();
    let out = hopfchain(&["--config", cfg.to_str().unwrap(), "--max-state", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "state,target,p\n0,0,1/2\n0,1,1/2\n1,1,2/3\n1,2,1/3\n"
    );
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let out = hopfchain(&[
        "--config",
        cfg.to_str().unwrap(),
        "chain",
        "--grading",
        "1",
        "--q",
        "2",
        "--max-state",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_checks_exit_one() {
    let out = hopfchain(&[
        "bounds",
        "--q",
        "2/1",
        "--n",
        "1000",
        "--traj",
        "50",
        "--multiplier",
        "0",
        "--slack",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("violations"));
}

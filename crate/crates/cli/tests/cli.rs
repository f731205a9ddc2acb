use std::path::Path;
use std::process::{Command, Output};

fn sgsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgsplit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const GAUSSIAN: [&str; 4] = ["--objective", "gaussian", "--reps", "8"];

#[test]
fn bias_sweep_writes_one_csv_per_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let mut args = vec!["bias-sweep", "--optimizer", "nag", "--strategy", "rr", "--hgrid", "0.01,0.02,0.04", "--out", out];
    args.extend(GAUSSIAN);
    let o = sgsplit(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("slope"));
    let text = std::fs::read_to_string(Path::new(out).join("nag_rr.csv")).unwrap();
    assert!(text.starts_with("# meta:"));
    assert!(text.contains("# seed=0"));
    assert!(text.lines().any(|l| l == "h,rmse,stderr,epochs,wallclock_s"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn same_seed_same_numbers() {
    let run = || {
        let mut args = vec!["bias-sweep", "--optimizer", "hb", "--strategy", "sms", "--hgrid", "0.02,0.04,0.08", "--seed", "9"];
        args.extend(GAUSSIAN);
        let o = sgsplit(&args);
        assert!(o.status.success());
        // Drop the timing column.
        stdout(&o)
            .lines()
            .map(|l| l.split_whitespace().take(3).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn schedule_writes_a_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let mut args = vec!["schedule", "--optimizer", "sgd", "--strategy", "rm", "--epochs", "30", "--out", path.to_str().unwrap()];
    args.extend(GAUSSIAN);
    let o = sgsplit(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "epoch,rmse,stderr,stepsize"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 32);
}

#[test]
fn minimize_reports_a_stationary_point() {
    let o = sgsplit(&["minimize", "--sim-n", "64", "--sim-d", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let g: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("grad_norm = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(g < 1e-10);
}

#[test]
fn model_problem_table_has_twelve_rows() {
    let o = sgsplit(&["model-problem", "--reps", "200", "--hgrid", "0.05,0.02"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 13);
}

#[test]
fn figure1_runs_on_a_custom_grid() {
    let o = sgsplit(&["figure1", "--reps", "4", "--hgrid", "0.002,0.004,0.008"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("figure1_variable_sms"));
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        vec!["bias-sweep", "--strategy", "zigzag"],
        vec!["bias-sweep", "--objective", "logreg"],
        vec!["bias-sweep", "--objective", "logreg", "--data", "/nonexistent/data.csv"],
        vec!["bias-sweep", "--objective", "gaussian", "--optimizer", "adam"],
        vec!["bias-sweep", "--objective", "gaussian", "--n", "0"],
    ] {
        let o = sgsplit(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn divergence_exits_with_three() {
    let mut args = vec!["bias-sweep", "--optimizer", "sgd", "--strategy", "rr", "--hgrid", "0.01,0.02,5.0"];
    args.extend(GAUSSIAN);
    let o = sgsplit(&args);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("diverged"));
}

#[test]
fn reads_a_csv_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("data.csv");
    let rows: String = (0..40)
        .map(|i| {
            let a = (i as f64 * 0.37).sin();
            let b = (i as f64 * 0.91).cos();
            format!("{},{a},{b}\n", (i % 3 == 0) as u8)
        })
        .collect();
    std::fs::write(&path, rows).unwrap();
    let o = sgsplit(&["minimize", "--objective", "logreg", "--data", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

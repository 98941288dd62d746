use std::path::Path;
use std::process::{Command, Output};

use stark_shell_cli::{read_record, Rows};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_stark-shell"));
    c.env_remove("STARK_SHELL_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bound_state_example() {
    let o = run(&["bound-states", "--a", "1", "--alpha", "-2.3130352855"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("# schema_version = 1"));
    assert!(out.contains("# config = {"));
    let rows = data_lines(&out);
    assert_eq!(rows.len(), 1);
    let cols: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(cols[0], "0");
    assert!((cols[1].parse::<f64>().unwrap() + 1.0).abs() < 1e-9);
    assert_eq!(cols[3], "1");
}

#[test]
fn threshold_case_binds_nothing() {
    let o = run(&["bound-states", "--a", "1", "--alpha", "-0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(data_lines(&stdout(&o)).is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no channel binds (alpha >= -1/a"));
}

#[test]
fn config_errors_exit_2() {
    for args in [
        vec!["bound-states", "--a", "1"],
        vec!["bound-states", "--a", "-1", "--alpha", "-2"],
        vec!["resonance-1d", "--alpha", "-2", "--f-grid", "0.1:0.05:4"],
        vec!["resonance-1d", "--alpha", "-2", "--f-grid", "nonsense"],
        vec!["resonance-1d", "--alpha", "-2"],
        vec!["det-scan-3d", "--alpha", "-2", "--theta", "1.5"],
        vec!["width-fit"],
        vec!["bound-states", "--alpha", "-2", "--output", "/nonexistent-dir/x.csv"],
        vec!["no-such-command"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn thread_variable() {
    let o = bin().args(["bound-states", "--alpha", "-3"]).env("STARK_SHELL_THREADS", "2").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = bin().args(["bound-states", "--alpha", "-3"]).env("STARK_SHELL_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_convergence_persists_partial_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cap.toml");
    std::fs::write(
        &cfg,
        "[params]\nalpha = -2.0\na = 0.0\n[sweep]\nstart = 0.03\nstop = 0.12\ncount = 4\n[numerics.newton]\nmax_iterations = 2\n",
    )
    .unwrap();
    let out = dir.path().join("partial.json");
    let o = run(&[
        "resonance-1d",
        "--config",
        cfg.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let rec = read_record(&out).unwrap();
    assert!(rec.provenance.failure.as_deref().unwrap().contains("did not converge"));
    assert_eq!(rec.config_echo.numerics.newton.max_iterations, 2);
}

#[test]
fn config_file_must_match_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "command = \"stark-shift\"\n[params]\nalpha = -2.0\n").unwrap();
    let o = run(&["bound-states", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&cfg, "command = \"bound-states\"\n[params]\nalpha = -2.0\n").unwrap();
    let o = run(&["bound-states", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

fn resonance_1d(dir: &Path, stem: &str, extra: &[&str]) -> Output {
    let out = dir.join(format!("{stem}.csv"));
    let mut args = vec![
        "resonance-1d",
        "--alpha",
        "-2",
        "--a",
        "0",
        "--f-grid",
        "0.03:0.12:10",
        "--fit",
        "-o",
        out.to_str().unwrap(),
        "--format",
        "both",
    ];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn width_law_run_round_trip_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let o = resonance_1d(dir.path(), "r", &["--plot", "width-loglog"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rec = read_record(&dir.path().join("r.json")).unwrap();
    let Rows::Resonance1d { trajectory, fit: Some(fit) } = &rec.rows else {
        panic!("wrong rows")
    };
    assert_eq!(trajectory.len(), 10);
    assert!((fit.c / (4.0 / 3.0) - 1.0).abs() < 0.03, "c = {}", fit.c);

    // JSON mirrors the CSV rows
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let rows = data_lines(&csv);
    assert_eq!(rows.len(), trajectory.len());
    for (line, p) in rows.iter().zip(trajectory) {
        let cols: Vec<f64> = line.split(',').take(4).map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols, vec![p.field, p.z.re, p.z.im, p.width]);
    }

    // re-ingested fit is identical to the in-process one
    let wf = dir.path().join("wf.json");
    let o = run(&[
        "width-fit",
        "--input",
        dir.path().join("r.json").to_str().unwrap(),
        "-o",
        wf.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let Rows::WidthFit { fits } = read_record(&wf).unwrap().rows else {
        panic!("wrong rows")
    };
    assert_eq!(fits[0], *fit);

    // width-loglog: (1/F, ln Γ)
    let plot = std::fs::read_to_string(dir.path().join("r.width-loglog.dat")).unwrap();
    let pts = data_lines(&plot);
    assert_eq!(pts.len(), 10);
    let first: Vec<f64> = pts[0].split(' ').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first, vec![1.0 / trajectory[0].field, trajectory[0].width.ln()]);

    // trajectory: (F, Re z, Im z, Γ)
    let traj = dir.path().join("t.dat");
    let o = resonance_1d(dir.path(), "r2", &["--plot", "trajectory", "--plot-out", traj.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let t = std::fs::read_to_string(&traj).unwrap();
    assert!(data_lines(&t).iter().all(|l| l.split(' ').count() == 4));

    // width-fit on a non-trajectory record is a usage error
    let bs = dir.path().join("bs.json");
    run(&["bound-states", "--alpha", "-3", "-o", bs.to_str().unwrap(), "--format", "json"]);
    let o = run(&["width-fit", "--input", bs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identical_config_gives_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    resonance_1d(dir.path(), "a", &[]);
    resonance_1d(dir.path(), "b", &[]);
    let a = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    // only the echoed output path differs
    assert_eq!(a.replace("a.csv", "X").replace("a.json", "X"), b.replace("b.csv", "X").replace("b.json", "X"));
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 4, "stray temporary files: {names:?}");
}

#[test]
fn det_heatmap_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = run(&[
        "det-scan-3d",
        "--alpha",
        "-2.3130352854993315",
        "--l-max",
        "2",
        "-o",
        out.to_str().unwrap(),
        "--plot",
        "det-heatmap",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let plot = std::fs::read_to_string(dir.path().join("scan.det-heatmap.dat")).unwrap();
    let rows = data_lines(&plot);
    assert_eq!(rows.len(), 41 * 41);
    let first: Vec<f64> = rows[0].split(' ').map(|c| c.parse().unwrap()).collect();
    assert_eq!(&first[..2], &[-1.5, -0.2]);
    let o = run(&["bound-states", "--alpha", "-3", "-o", out.to_str().unwrap(), "--plot", "det-heatmap"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_reports_each_check() {
    let o = run(&["validate"]);
    let out = stdout(&o);
    let rows = data_lines(&out);
    assert_eq!(rows.len(), 8);
    let failed: Vec<&str> = rows.iter().filter(|r| r.contains(",false,")).map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(o.status.code(), Some(if failed.is_empty() { 0 } else { 1 }));
    // the plain Airy Wronskian is the only check outside double precision reach
    assert!(failed.iter().all(|n| *n == "airy_wronskian"), "{failed:?}");
}

use std::path::Path;
use std::process::{Command, Output};

fn simulate(cfg: &str, dir: &Path, extra: &[&str]) -> Output {
    let path = dir.join("cfg.toml");
    std::fs::write(&path, cfg).unwrap();
    Command::new(env!("CARGO_BIN_EXE_simulate"))
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .env("DLS_LOG", "warn")
        .output()
        .unwrap()
}

fn csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn success_writes_csv_and_report() {
    let d = tempfile::tempdir().unwrap();
    let o = simulate("experiment = \"fig7\"\n", d.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(d.path().join("out/fig7_rho31.csv")).unwrap();
    assert!(text.starts_with("# dls-csv v1 table=fig7_rho31\n"));
    assert!(d.path().join("out/fig7_report.txt").exists());
}

#[test]
fn unknown_key_is_config_error() {
    let d = tempfile::tempdir().unwrap();
    let o = simulate("experiment = \"fig5\"\n[sweep]\npointz = 3\n", d.path(), &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pointz"));
}

#[test]
fn invalid_value_is_config_error() {
    let d = tempfile::tempdir().unwrap();
    let o = simulate("[physics.cavity]\nq = -1.0\n", d.path(), &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn missing_file_is_config_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_simulate")).arg("/nonexistent/cfg.toml").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_experiment_flag_is_config_error() {
    let d = tempfile::tempdir().unwrap();
    let o = simulate("", d.path(), &["--experiment", "fig99"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unreachable_rows_exit_2_and_keep_completed_rows() {
    let d = tempfile::tempdir().unwrap();
    let o = simulate("experiment = \"custom_sweep\"\n[sweep]\nng_targets = [0.5, 40.0]\ndelta_p_hz = [1.0]\n", d.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let rows = std::fs::read_to_string(d.path().join("out/custom_sweep_rows.csv")).unwrap();
    assert!(rows.contains(",ok") && rows.contains(",unreachable"));
}

#[test]
fn starved_iteration_exits_4() {
    let d = tempfile::tempdir().unwrap();
    let o = simulate("experiment = \"fig6\"\n[sweep]\noracle_points = 2\n[solver]\nmax_iter = 1\n", d.path(), &[]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn experiment_flag_overrides_config() {
    let d = tempfile::tempdir().unwrap();
    let o = simulate("experiment = \"fig5\"\n", d.path(), &["--experiment", "appendix"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("experiment appendix"));
}

#[test]
fn worker_count_does_not_change_bytes() {
    let cfg = "experiment = \"fig5\"\n[sweep]\npoints = 12\n";
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(simulate(cfg, a.path(), &["--workers", "1"]).status.code(), Some(0));
    assert_eq!(simulate(cfg, b.path(), &["--workers", "4"]).status.code(), Some(0));
    let (x, y) = (csvs(&a.path().join("out")), csvs(&b.path().join("out")));
    assert_eq!(x.len(), 5);
    assert_eq!(x, y);
}

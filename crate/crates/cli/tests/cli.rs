//! End-to-end runs of the `boussinesq` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use boussinesq_cli::calibration::{reference_config, Calibration};
use boussinesq_core::harness::{read_records_csv, CheckId, RunSummary, CSV_COLUMNS};
use boussinesq_core::spectral::snapshot::read_snapshot;
use tempfile::TempDir;

const SMALL: &str = r#"{
  "n": 32,
  "solver": { "kappa": 0.1, "dt": 0.002, "t_end": 0.1, "stride": 2 },
  "initial_data": {
    "omega": { "kind": "taylor_green", "amplitude": 0.5 },
    "rho": { "kind": "random", "beta": 3.0, "amplitude": 0.01, "kmin": 1.0, "kmax": 6.0 }
  },
  "checks": ["vorticity_transport_p0", "energy_identity", "bernstein_chain"],
  "output_dir": "small",
  "seed": 5
}"#;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str], root: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boussinesq"))
        .args(args)
        .env("BOUSSINESQ_OUTPUT_ROOT", root)
        .env_remove("BOUSSINESQ_RENDERER")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, text).unwrap();
    path
}

fn only_file(dir: &Path, prefix: &str, ext: &str) -> PathBuf {
    let mut found: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            name.starts_with(prefix) && name.ends_with(ext)
        })
        .collect();
    assert_eq!(found.len(), 1, "{prefix}*{ext} in {}", dir.display());
    found.pop().unwrap()
}

#[test]
fn verify_reference_config_applies_calibration_and_passes() {
    let out = TempDir::new().unwrap();
    let config = configs_dir().join("reference.json");
    let res = run(&["verify", "--config", config.to_str().unwrap()], out.path());
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));

    let dir = out.path().join("reference");
    let short = &reference_config().hash()[..8];
    let summary = RunSummary::read(&dir.join(format!("summary-{short}.json"))).unwrap();
    assert_eq!(summary.config_hash, Calibration::bundled().reference_hash);
    assert!(summary.calibration_applied);
    assert!(summary.passed);
    for id in CheckId::ALL {
        assert!(summary.checks.iter().any(|c| c.check_id == id.as_str()), "{id:?} missing");
    }
    let twin = summary.uniqueness.expect("twin run configured");
    assert!(twin.dominated());

    let rows = read_records_csv(&dir.join(format!("records-{short}.csv"))).unwrap();
    let ids: std::collections::BTreeSet<_> = rows.iter().map(|r| r.check_id.as_str()).collect();
    assert_eq!(ids.len(), CheckId::ALL.len());
    assert!(rows.iter().all(|r| r.grid_n == 64 && r.t.is_finite() && r.lhs >= 0.0 && r.rhs >= 0.0));
}

#[test]
fn sweep_writes_one_member_per_value_with_shared_schema() {
    let out = TempDir::new().unwrap();
    let config = configs_dir().join("kappa-sweep.json");
    let res = run(&["--workers", "3", "sweep", "--config", config.to_str().unwrap()], out.path());
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));

    let dir = out.path().join("kappa-sweep");
    let header = CSV_COLUMNS.join(",");
    let mut kappas = Vec::new();
    for i in 0..3 {
        let member = dir.join(format!("sweep-kappa-{i}"));
        let csv = only_file(&member, "records-", ".csv");
        let text = fs::read_to_string(&csv).unwrap();
        assert_eq!(text.lines().next().unwrap(), header);
        let summary = RunSummary::read(&only_file(&member, "summary-", ".json")).unwrap();
        assert!(!summary.calibration_applied);
        kappas.push(summary.kappa);
        assert_eq!(summary.sweep_point.as_ref().map(|p| p.0.as_str()), Some("kappa"));
    }
    assert_eq!(kappas, vec![0.05, 0.1, 0.2]);
    only_file(&dir, "sweep-", ".json");
}

#[test]
fn report_without_renderer_writes_text_table() {
    let out = TempDir::new().unwrap();
    let config = write_config(out.path(), SMALL);
    let res = run(&["verify", "--config", config.to_str().unwrap()], out.path());
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));

    let report_dir = out.path().join("report");
    let input = out.path().join("small");
    let res = run(
        &["report", "--input", input.to_str().unwrap(), "--out", report_dir.to_str().unwrap()],
        out.path(),
    );
    assert_eq!(res.status.code(), Some(0));
    let table = fs::read_to_string(report_dir.join("report.txt")).unwrap();
    assert!(table.contains("vorticity_transport_p0"));
    assert!(table.contains("energy_identity"));
}

#[test]
fn report_of_empty_directory_says_no_records() {
    let out = TempDir::new().unwrap();
    let res = run(&["report", "--input", out.path().to_str().unwrap()], out.path());
    assert_eq!(res.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&res.stdout).contains("no records"));
}

#[test]
fn repeated_verify_is_bit_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let config = write_config(dir.path(), SMALL);
        let res = run(&["verify", "--config", config.to_str().unwrap()], dir.path());
        assert_eq!(res.status.code(), Some(0));
    }
    let csv_a = only_file(&a.path().join("small"), "records-", ".csv");
    let csv_b = only_file(&b.path().join("small"), "records-", ".csv");
    assert_eq!(csv_a.file_name(), csv_b.file_name());
    assert_eq!(fs::read(csv_a).unwrap(), fs::read(csv_b).unwrap());
}

#[test]
fn simulate_writes_snapshots_tagged_with_config_hash() {
    let out = TempDir::new().unwrap();
    let config = write_config(out.path(), SMALL);
    let res = run(&["simulate", "--config", config.to_str().unwrap()], out.path());
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let dir = out.path().join("small");
    let summary = RunSummary::read(&only_file(&dir, "summary-", ".json")).unwrap();
    assert_eq!(summary.snapshots.len(), 4);
    for name in &summary.snapshots {
        let (field, meta) = read_snapshot(&dir.join(name)).unwrap();
        assert_eq!(meta.config_hash.as_deref(), Some(summary.config_hash.as_str()));
        assert_eq!(field.grid().n(), 32);
    }
}

#[test]
fn invalid_config_exits_with_config_code_and_names_field() {
    let out = TempDir::new().unwrap();
    let config = write_config(out.path(), &SMALL.replace("\"kappa\": 0.1", "\"kappa\": -1.0"));
    let res = run(&["verify", "--config", config.to_str().unwrap()], out.path());
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("kappa"));

    let config = write_config(out.path(), &SMALL.replace("\"seed\": 5", "\"colour\": 5"));
    let res = run(&["verify", "--config", config.to_str().unwrap()], out.path());
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("colour"));
}

#[test]
fn missing_config_file_is_a_runtime_error() {
    let out = TempDir::new().unwrap();
    let missing = out.path().join("absent.json");
    let res = run(&["verify", "--config", missing.to_str().unwrap()], out.path());
    assert_eq!(res.status.code(), Some(3));
}

use qmx::cli::run::{format_number, CSV_HEADER};
use std::path::Path;
use std::process::{Command, Output};

fn qmx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: serde_json::Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body.to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

fn zero_config(dir: &Path) -> serde_json::Value {
    serde_json::json!({
        "grid": {"nx": 8, "ny": 8, "nz": 8, "dx": 0.125, "dy": 0.125, "dz": 0.125},
        "dt": 0.01,
        "steps": 10,
        "scenario": {"kind": "zero"},
        "output": {
            "csv_path": dir.join("zero.csv"),
            "snapshot_path": dir.join("zero.qmx")
        }
    })
}

#[test]
fn zero_run_writes_ten_zero_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "zero.json", zero_config(dir.path()));
    let out = qmx(&["--quiet", "run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(dir.path().join("zero.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for (i, row) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], (i + 1).to_string());
        assert!(cols[2..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
    }

    let inspect = qmx(&["inspect", dir.path().join("zero.qmx").to_str().unwrap()]);
    assert_eq!(inspect.status.code(), Some(0));
    let text = String::from_utf8(inspect.stdout).unwrap();
    assert!(text.contains("dims: 8 x 8 x 8"), "{text}");
    assert!(text.contains("fields: T E B"), "{text}");
    assert_eq!(text.matches("l2 0.000000e0").count(), 3, "{text}");
}

#[test]
fn csv_numbers_reparse_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = serde_json::json!({
        "grid": {"nx": 32, "ny": 1, "nz": 1, "dx": std::f64::consts::TAU / 32.0, "dy": 1.0, "dz": 1.0},
        "dt": 0.05,
        "steps": 20,
        "scenario": {"kind": "transverse_wave", "amplitude": 0.7, "mode": 2},
        "output": {"csv_path": dir.path().join("w.csv")}
    });
    let cfg = write_config(dir.path(), "w.json", cfg);
    assert_eq!(qmx(&["run", "--config", &cfg]).status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("w.csv")).unwrap();
    for row in csv.lines().skip(1) {
        for v in row.split(',').skip(1) {
            assert_eq!(format_number(v.parse().unwrap()), v);
        }
    }
}

#[test]
fn unknown_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = zero_config(dir.path());
    body["grid"]["nw"] = serde_json::json!(3);
    let cfg = write_config(dir.path(), "bad.json", body);
    let out = qmx(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("nw"), "{err}");
    assert!(!dir.path().join("zero.csv").exists());
}

#[test]
fn cfl_violation_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = zero_config(dir.path());
    body["dt"] = serde_json::json!(1.0);
    let cfg = write_config(dir.path(), "cfl.json", body);
    let out = qmx(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("dt"), "{err}");
}

#[test]
fn overflow_aborts_with_partial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = serde_json::json!({
        "grid": {"nx": 16, "ny": 1, "nz": 1, "dx": std::f64::consts::TAU / 16.0, "dy": 1.0, "dz": 1.0},
        "dt": 0.2,
        "steps": 400,
        "scenario": {"kind": "scalar_mode", "epsilon": 1e306, "mode": 1},
        "output": {"csv_path": dir.path().join("blow.csv")}
    });
    let cfg = write_config(dir.path(), "blow.json", cfg);
    let out = qmx(&["--quiet", "run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("blow.csv")).unwrap();
    let rows = csv.lines().count() - 1;
    assert!(rows > 0 && rows < 400, "{rows}");
}

#[test]
fn inspect_rejects_truncated_and_foreign_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "zero.json", zero_config(dir.path()));
    assert_eq!(
        qmx(&["--quiet", "run", "--config", &cfg]).status.code(),
        Some(0)
    );
    let snap = dir.path().join("zero.qmx");
    let bytes = std::fs::read(&snap).unwrap();
    let cut = dir.path().join("cut.qmx");
    std::fs::write(&cut, &bytes[..bytes.len() - 8]).unwrap();
    let out = qmx(&["inspect", cut.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains(&format!(
            "expected {} bytes, found {}",
            bytes.len(),
            bytes.len() - 8
        )),
        "{err}"
    );

    let foreign = dir.path().join("foreign.qmx");
    std::fs::write(&foreign, b"not a snapshot at all, just text").unwrap();
    let out = qmx(&["inspect", foreign.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("magic"));
}

#[test]
fn verify_algebra_passes() {
    let out = qmx(&["verify", "--suite", "algebra"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("associativity"));
    assert!(!text.contains("FAIL"));
}

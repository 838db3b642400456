use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str], scenario: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fantappie"))
        .args(args)
        .arg("--scenario")
        .arg(scenario)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn verify_conic_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify"], &scenario("conic.json"), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&dir.path().join("conic_verify.csv"));
    assert!(rows.len() >= 10);
    let k = column(&header, "pde_residual_0");
    for row in &rows {
        assert_eq!(row.last().unwrap(), "ok");
        assert!(row[k].parse::<f64>().unwrap() <= 1e-6);
    }
}

#[test]
fn radon_kernel_class_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["radon"], &scenario("cubic_kernel.json"), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&dir.path().join("cubic_kernel_radon.csv"));
    assert_eq!(rows.len(), 10);
    for row in &rows {
        for j in 0..3 {
            let re: f64 = row[column(&header, &format!("f_re_{j}"))].parse().unwrap();
            let im: f64 = row[column(&header, &format!("f_im_{j}"))].parse().unwrap();
            assert!(re.hypot(im) <= 1e-6);
        }
    }
}

#[test]
fn missing_field_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["radon"], &scenario("missing_field.json"), dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("missing field `points`"), "{err}");
    assert!(err.contains("missing_field.json:50:1"), "{err}");
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = run(&["radon"], &scenario("cubic_kernel.json"), &blocker.join("sub"));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tolerance_flag_overrides_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["radon", "--tol", "1e-300"], &scenario("cubic_kernel.json"), dir.path());
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("cubic_kernel_radon.json")).unwrap()).unwrap();
    assert_eq!(json["metadata"]["tol"].as_f64(), Some(1e-300));
}

#[test]
fn format_flag_selects_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["radon", "--format", "csv"], &scenario("cubic_kernel.json"), dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("cubic_kernel_radon.csv").exists());
    assert!(!dir.path().join("cubic_kernel_radon.json").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = run(&["radon"], &scenario("cubic.json"), dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("cubic_radon.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn empty_point_list_writes_a_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let mut file: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(scenario("cubic_kernel.json")).unwrap()).unwrap();
    file["points"] = serde_json::json!([]);
    let path = dir.path().join("empty.json");
    fs::write(&path, file.to_string()).unwrap();
    let out = run(&["radon"], &path, dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let csv = fs::read_to_string(dir.path().join("cubic_kernel_radon.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn point_mass_contracts_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["fantappie"], &scenario("point_mass.json"), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&dir.path().join("point_mass_fantappie.csv"));
    let e = column(&header, "euler_contraction");
    for row in &rows {
        assert!((row[e].parse::<f64>().unwrap() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn subcommand_without_required_block_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["radon"], &scenario("point_mass.json"), dir.path());
    assert_eq!(out.status.code(), Some(2));
}

//! Result tables and their CSV / JSON renderings.

use std::fs;
use std::path::{Path, PathBuf};

use fantappie_core::Complex64;
use serde::Serialize;

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    SkippedNearIncidence,
    NotStabilized,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::SkippedNearIncidence => "skipped_near_incidence",
            Status::NotStabilized => "not_stabilized",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub xi: Vec<Complex64>,
    pub f: Vec<Complex64>,
    pub pde_residual: Vec<f64>,
    pub euler_contraction: f64,
    pub status: Status,
    /// Whether every check on this row met the tolerance.
    pub within_tol: bool,
    /// Extra named checks, e.g. an independent route to the same value.
    pub checks: Vec<(String, f64)>,
    pub note: Option<String>,
}

impl Row {
    pub fn skipped(xi: Vec<Complex64>, status: Status, note: String) -> Self {
        Row {
            xi,
            f: Vec::new(),
            pde_residual: Vec::new(),
            euler_contraction: f64::NAN,
            status,
            within_tol: status == Status::SkippedNearIncidence,
            checks: Vec::new(),
            note: Some(note),
        }
    }

    pub fn fails(&self) -> bool {
        !self.within_tol
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub scenario: String,
    pub subcommand: String,
    pub tol: f64,
    pub schedule: crate::config::ScheduleBlock,
    pub martineau_grid: usize,
    pub cycle_nodes: usize,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    /// Number of coordinates of ξ and of f; fixes the CSV layout even when
    /// there are no rows.
    pub dim: usize,
    pub pde_columns: usize,
    pub rows: Vec<Row>,
}

impl ResultTable {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.fails()).count()
    }
}

/// 17 significant digits.
fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.16e}")
    }
}

pub fn header(table: &ResultTable) -> Vec<String> {
    let mut h = Vec::new();
    for j in 0..table.dim {
        h.push(format!("xi_re_{j}"));
        h.push(format!("xi_im_{j}"));
    }
    for j in 0..table.dim {
        h.push(format!("f_re_{j}"));
        h.push(format!("f_im_{j}"));
    }
    for k in 0..table.pde_columns {
        h.push(format!("pde_residual_{k}"));
    }
    h.push("euler_contraction".into());
    h.push("status".into());
    h
}

fn csv_record(table: &ResultTable, row: &Row) -> Vec<String> {
    let mut rec = Vec::new();
    for j in 0..table.dim {
        let v = row.xi.get(j).copied().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        rec.push(num(v.re));
        rec.push(num(v.im));
    }
    for j in 0..table.dim {
        let v = row.f.get(j).copied().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        rec.push(num(v.re));
        rec.push(num(v.im));
    }
    for k in 0..table.pde_columns {
        rec.push(num(row.pde_residual.get(k).copied().unwrap_or(f64::NAN)));
    }
    rec.push(num(row.euler_contraction));
    rec.push(row.status.as_str().into());
    rec
}

pub fn to_csv(table: &ResultTable) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header(table)).map_err(io)?;
    for row in &table.rows {
        w.write_record(csv_record(table, row)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn to_json(table: &ResultTable) -> Result<String, CliError> {
    serde_json::to_string_pretty(table).map_err(|e| CliError::Io(e.to_string()))
}

/// Writes `{dir}/{scenario}_{subcommand}.{csv,json}` and returns the paths.
pub fn emit(table: &ResultTable, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let stem = format!("{}_{}", table.metadata.scenario, table.metadata.subcommand);
    let mut written = Vec::new();
    for format in formats {
        let (ext, body) = match format {
            Format::Csv => ("csv", to_csv(table)?),
            Format::Json => ("json", to_json(table)?),
        };
        let path = dir.join(format!("{stem}.{ext}"));
        fs::write(&path, body).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: usize) -> ResultTable {
        let row = Row {
            xi: vec![Complex64::new(1.0, 0.0), Complex64::new(0.1, -0.2)],
            f: vec![Complex64::new(0.5, 0.25), Complex64::new(0.0, 1.0 / 3.0)],
            pde_residual: vec![1e-12],
            euler_contraction: 0.0,
            status: Status::Ok,
            within_tol: true,
            checks: Vec::new(),
            note: None,
        };
        ResultTable {
            metadata: Metadata {
                scenario: "t".into(),
                subcommand: "verify".into(),
                tol: 1e-6,
                schedule: crate::config::ScheduleBlock { base: 0.1, kappa: 2, halvings: 6, tol: 1e-9 },
                martineau_grid: 48,
                cycle_nodes: 256,
                wall_time_s: 0.0,
            },
            dim: 2,
            pde_columns: 1,
            rows: vec![row; rows],
        }
    }

    #[test]
    fn csv_has_header_plus_rows() {
        let csv = to_csv(&table(5)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(
            lines[0],
            "xi_re_0,xi_im_0,xi_re_1,xi_im_1,f_re_0,f_im_0,f_re_1,f_im_1,pde_residual_0,euler_contraction,status"
        );
        assert!(lines[1].contains("3.3333333333333331e-1"));
        assert!(lines[1].ends_with(",ok"));
    }

    #[test]
    fn empty_table_is_header_only() {
        let csv = to_csv(&table(0)).unwrap();
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn both_formats_have_the_same_rows() {
        let dir = tempfile::tempdir().unwrap();
        let t = table(3);
        let paths = emit(&t, dir.path(), &[Format::Csv, Format::Json]).unwrap();
        assert_eq!(paths.len(), 2);
        let csv = fs::read_to_string(&paths[0]).unwrap();
        let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&paths[1]).unwrap()).unwrap();
        assert_eq!(csv.lines().count() - 1, json["rows"].as_array().unwrap().len());
    }
}

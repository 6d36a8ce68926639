//! Result files: CSV traces, snapshots, VTK and run summaries.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use skyrmag::stepper::TraceRecord;
use skyrmag::{snapshot, vtk, ScalarField, VectorField};

use crate::error::CliError;

pub const TRACE_HEADER: [&str; 8] = ["step", "time_ps", "energy_dimless", "energy_J", "m1", "m2", "m3", "Q"];
pub const MEP_HEADER: [&str; 6] = ["image", "a", "energy_dimless", "energy_J", "Q", "label"];

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))
}

/// Energy trace. Time is written as `step * dt_ps`.
pub struct TraceWriter {
    csv: csv::Writer<BufWriter<File>>,
    path: PathBuf,
    dt_ps: f64,
    energy_scale: f64,
}

impl TraceWriter {
    /// Create a new trace, or append to an existing one when `append` is set.
    pub fn open(path: &Path, dt_ps: f64, energy_scale: f64, append: bool) -> Result<Self, CliError> {
        let exists = append && path.exists();
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .append(exists)
            .truncate(!exists)
            .open(path)
            .map_err(CliError::io(path))?;
        let mut csv = csv::Writer::from_writer(BufWriter::new(file));
        if !exists {
            csv.write_record(TRACE_HEADER).map_err(|e| csv_err(path, e))?;
        }
        Ok(Self {
            csv,
            path: path.to_path_buf(),
            dt_ps,
            energy_scale,
        })
    }

    pub fn record(&mut self, r: &TraceRecord) -> Result<(), CliError> {
        let row = [
            r.step.to_string(),
            (r.step as f64 * self.dt_ps).to_string(),
            format!("{:e}", r.energy),
            format!("{:e}", r.energy * self.energy_scale),
            format!("{:e}", r.average[0]),
            format!("{:e}", r.average[1]),
            format!("{:e}", r.average[2]),
            format!("{:e}", r.charge),
        ];
        self.csv.write_record(&row).map_err(|e| csv_err(&self.path, e))
    }

    pub fn flush(&mut self) -> Result<(), CliError> {
        self.csv.flush().map_err(CliError::io(&self.path))
    }
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MepRow {
    pub image: usize,
    pub a: f64,
    pub energy: f64,
    pub energy_j: f64,
    pub charge: f64,
    pub label: &'static str,
}

pub fn write_mep_csv(path: &Path, rows: &[MepRow]) -> Result<(), CliError> {
    let file = File::create(path).map_err(CliError::io(path))?;
    let mut csv = csv::Writer::from_writer(BufWriter::new(file));
    csv.write_record(MEP_HEADER).map_err(|e| csv_err(path, e))?;
    for r in rows {
        csv.write_record([
            r.image.to_string(),
            r.a.to_string(),
            format!("{:e}", r.energy),
            format!("{:e}", r.energy_j),
            format!("{:e}", r.charge),
            r.label.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    csv.flush().map_err(CliError::io(path))
}

/// Write `<stem>.snap` and, if requested, `<stem>.vtk` into `dir`.
pub fn write_vector(dir: &Path, stem: &str, field: &VectorField, with_vtk: bool) -> Result<(), CliError> {
    let snap = dir.join(format!("{stem}.snap"));
    let f = File::create(&snap).map_err(CliError::io(&snap))?;
    snapshot::write_vector(BufWriter::new(f), field).map_err(CliError::io(&snap))?;
    if with_vtk {
        let path = dir.join(format!("{stem}.vtk"));
        let f = File::create(&path).map_err(CliError::io(&path))?;
        let mut w = BufWriter::new(f);
        vtk::write_vector(&mut w, field, "m").map_err(CliError::io(&path))?;
        w.flush().map_err(CliError::io(&path))?;
    }
    Ok(())
}

pub fn write_scalar(dir: &Path, stem: &str, field: &ScalarField, with_vtk: bool) -> Result<(), CliError> {
    let snap = dir.join(format!("{stem}.snap"));
    let f = File::create(&snap).map_err(CliError::io(&snap))?;
    snapshot::write_scalar(BufWriter::new(f), field).map_err(CliError::io(&snap))?;
    if with_vtk {
        let path = dir.join(format!("{stem}.vtk"));
        let f = File::create(&path).map_err(CliError::io(&path))?;
        let mut w = BufWriter::new(f);
        vtk::write_scalar(&mut w, field, stem).map_err(CliError::io(&path))?;
        w.flush().map_err(CliError::io(&path))?;
    }
    Ok(())
}

/// Final numbers of a run, written as `summary.toml`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub mode: String,
    pub steps: u64,
    pub converged: bool,
    pub time_ps: f64,
    pub energy: f64,
    pub energy_j: f64,
    pub m_average: [f64; 3],
    pub charge: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub string: Option<StringSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StringSummary {
    pub iterations: usize,
    pub maxima: Vec<usize>,
    pub minima: Vec<usize>,
    pub barrier_j: f64,
}

impl Summary {
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join("summary.toml");
        let text = toml::to_string(self).expect("summary serializes");
        std::fs::write(&path, text).map_err(CliError::io(&path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_time_is_step_times_dt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        let mut w = TraceWriter::open(&path, 0.1, 2.0, false).unwrap();
        for step in [0, 3, 30] {
            w.record(&TraceRecord {
                step,
                time: 0.0,
                energy: -1.5,
                average: [0.0, 0.0, 1.0],
                charge: 0.0,
            })
            .unwrap();
        }
        w.flush().unwrap();
        drop(w);
        let mut w = TraceWriter::open(&path, 0.1, 2.0, true).unwrap();
        w.record(&TraceRecord {
            step: 31,
            time: 0.0,
            energy: 0.0,
            average: [0.0; 3],
            charge: 0.0,
        })
        .unwrap();
        w.flush().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER.join(","));
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("3,0.30000000000000004,-1.5e0,-3e0,0e0,0e0,1e0,0e0"));
        assert!(lines[3].starts_with("30,3,"));
        assert!(lines[4].starts_with("31,"));
    }
}

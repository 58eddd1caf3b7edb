//! On-disk formats: XYZ configurations, raw field dumps with JSON sidecars,
//! trace CSVs, and the result/graph JSON documents.
//!
//! Floating-point text output uses Rust's shortest round-trip formatting, so
//! a written value reloads bit-exactly. Field dumps are raw little-endian
//! 64-bit floats, row-major.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::landscape::LandscapeGraph;
use crate::spm::{CycleRecord, RunStatus, SaddleResult};
use crate::vector::StateVector;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("malformed {format} file {path}: {reason}")]
    Malformed {
        format: &'static str,
        path: String,
        reason: String,
    },
}

fn malformed(format: &'static str, path: &Path, reason: impl Into<String>) -> IoError {
    IoError::Malformed {
        format,
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

/// Writes a 3N-dimensional configuration as an XYZ text file. All particles
/// carry the fixed element symbol "Ar".
pub fn write_xyz(path: &Path, comment: &str, positions: &StateVector<f64>) -> Result<(), IoError> {
    assert_eq!(positions.dim() % 3, 0, "XYZ needs 3N coordinates");
    let n = positions.dim() / 3;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{n}")?;
    writeln!(w, "{comment}")?;
    let s = positions.as_slice();
    for i in 0..n {
        writeln!(w, "Ar {} {} {}", s[3 * i], s[3 * i + 1], s[3 * i + 2])?;
    }
    Ok(())
}

/// Reads an XYZ file back into (comment, flattened coordinates).
pub fn read_xyz(path: &Path) -> Result<(String, StateVector<f64>), IoError> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let count_line = lines
        .next()
        .ok_or_else(|| malformed("xyz", path, "empty file"))??;
    let n: usize = count_line
        .trim()
        .parse()
        .map_err(|_| malformed("xyz", path, format!("bad atom count {count_line:?}")))?;
    let comment = lines
        .next()
        .ok_or_else(|| malformed("xyz", path, "missing comment line"))??;
    let mut coords = Vec::with_capacity(3 * n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| malformed("xyz", path, format!("missing atom line {}", i + 1)))??;
        let mut fields = line.split_whitespace();
        let _element = fields
            .next()
            .ok_or_else(|| malformed("xyz", path, format!("empty atom line {}", i + 1)))?;
        for _ in 0..3 {
            let v: f64 = fields
                .next()
                .ok_or_else(|| malformed("xyz", path, format!("short atom line {}", i + 1)))?
                .parse()
                .map_err(|_| malformed("xyz", path, format!("bad coordinate on line {}", i + 1)))?;
            coords.push(v);
        }
    }
    let vec = StateVector::new(coords)
        .map_err(|e| malformed("xyz", path, format!("invalid coordinates: {e}")))?;
    Ok((comment, vec))
}

/// Sidecar metadata for a raw field dump.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldSidecar {
    #[serde(rename = "L")]
    pub domain_length: f64,
    #[serde(rename = "N")]
    pub grid_size: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub q1: f64,
    pub q2: f64,
}

/// Writes a field as raw little-endian f64 values (row-major) plus a JSON
/// sidecar at `<path>.json`.
pub fn write_field(path: &Path, field: &StateVector<f64>, sidecar: &FieldSidecar) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path)?);
    for &v in field.as_slice() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    let sidecar_path = sidecar_path(path);
    serde_json::to_writer_pretty(BufWriter::new(File::create(sidecar_path)?), sidecar)?;
    Ok(())
}

/// Reads a raw field dump and its sidecar.
pub fn read_field(path: &Path) -> Result<(StateVector<f64>, FieldSidecar), IoError> {
    let sidecar: FieldSidecar =
        serde_json::from_reader(BufReader::new(File::open(sidecar_path(path))?))?;
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let expected = sidecar.grid_size * sidecar.grid_size * 8;
    if bytes.len() != expected {
        return Err(malformed(
            "field",
            path,
            format!("{} bytes, expected {expected}", bytes.len()),
        ));
    }
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let vec = StateVector::new(values)
        .map_err(|e| malformed("field", path, format!("invalid field: {e}")))?;
    Ok((vec, sidecar))
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    os.into()
}

/// Writes a run trace as CSV: `cycle,drift_steps,e1,e2,energy_r1,energy_r2`,
/// one row per cycle. The `e2` column is empty when no reference saddle was
/// supplied. Baseline walkers emit the same schema with `drift_steps` 0.
pub fn write_trace_csv(path: &Path, trace: &[CycleRecord<f64>]) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "cycle,drift_steps,e1,e2,energy_r1,energy_r2")?;
    for rec in trace {
        let e2 = rec.e2.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{}",
            rec.cycle_index, rec.drift_steps_taken, rec.e1, e2, rec.energy_r1, rec.energy_r2
        )?;
    }
    Ok(())
}

/// Writes a small vector as a single CSV row (2D position dumps).
pub fn write_vector_csv(path: &Path, v: &StateVector<f64>) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path)?);
    let row: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    writeln!(w, "{}", row.join(","))?;
    Ok(())
}

/// Reads a single-row CSV vector.
pub fn read_vector_csv(path: &Path) -> Result<StateVector<f64>, IoError> {
    let mut line = String::new();
    BufReader::new(File::open(path)?).read_line(&mut line)?;
    let values: Result<Vec<f64>, _> = line.trim().split(',').map(str::parse).collect();
    let values = values.map_err(|e| malformed("csv", path, format!("bad number: {e}")))?;
    StateVector::new(values).map_err(|e| malformed("csv", path, format!("invalid vector: {e}")))
}

pub fn status_str(status: RunStatus) -> &'static str {
    match status {
        RunStatus::Converged => "Converged",
        RunStatus::MaxCyclesExceeded => "MaxCyclesExceeded",
        RunStatus::TrappedNonSaddle => "TrappedNonSaddle",
    }
}

/// The result document written after every walker run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResultDocument {
    pub schema: u32,
    pub status: String,
    /// File holding the converged position (CSV, XYZ, or raw field).
    pub position_file: String,
    /// File holding the unit unstable mode, same format as the position.
    pub mode_file: String,
    pub energy: f64,
    pub e1: f64,
    pub cycles: usize,
    pub verified_index1: bool,
    pub mode_curvature: f64,
}

impl ResultDocument {
    pub fn new(result: &SaddleResult<f64>, position_file: String, mode_file: String) -> Self {
        Self {
            schema: 1,
            status: status_str(result.status).to_string(),
            position_file,
            mode_file,
            energy: result.energy,
            e1: result.residual_e1,
            cycles: result.cycles_used,
            verified_index1: result.verified_index1,
            mode_curvature: result.mode_curvature,
        }
    }
}

pub fn write_result_json(path: &Path, doc: &ResultDocument) -> Result<(), IoError> {
    serde_json::to_writer_pretty(BufWriter::new(File::create(path)?), doc)?;
    Ok(())
}

pub fn read_result_json(path: &Path) -> Result<ResultDocument, IoError> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphMinimumDocument {
    pub label: String,
    pub energy: f64,
    pub xyz_file: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphEdgeDocument {
    pub saddle_energy: f64,
    pub barrier_a: f64,
    pub barrier_b: f64,
    pub min_a: String,
    pub min_b: String,
    pub xyz_file: String,
}

/// The landscape graph document: minima nodes with energies, saddle edges
/// with forward/backward barriers, and pointers to the dumped configurations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema: u32,
    pub minima: Vec<GraphMinimumDocument>,
    pub edges: Vec<GraphEdgeDocument>,
}

impl GraphDocument {
    /// Builds the document, naming configuration files `<label>.xyz` for
    /// minima and `saddle_<k>.xyz` for edges.
    pub fn from_graph(graph: &LandscapeGraph<f64>) -> Self {
        Self {
            schema: 1,
            minima: graph
                .minima
                .iter()
                .map(|m| GraphMinimumDocument {
                    label: m.label.clone(),
                    energy: m.energy,
                    xyz_file: format!("{}.xyz", m.label),
                })
                .collect(),
            edges: graph
                .edges
                .iter()
                .enumerate()
                .map(|(k, e)| GraphEdgeDocument {
                    saddle_energy: e.saddle.energy,
                    barrier_a: e.barrier_from_a,
                    barrier_b: e.barrier_from_b,
                    min_a: e.minimum_a.clone(),
                    min_b: e.minimum_b.clone(),
                    xyz_file: format!("saddle_{}.xyz", k + 1),
                })
                .collect(),
        }
    }
}

pub fn write_graph_json(path: &Path, doc: &GraphDocument) -> Result<(), IoError> {
    serde_json::to_writer_pretty(BufWriter::new(File::create(path)?), doc)?;
    Ok(())
}

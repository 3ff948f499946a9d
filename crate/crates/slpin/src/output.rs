//! CSV and text outputs.
//!
//! Numbers are written as `{:.16e}`: 17 significant digits, enough to read
//! back every `f64` exactly.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use slpin_core::sim::{Comparison, ComparisonReport, StateKind};
use slpin_core::{Experiment, Trajectory};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, OutputError> {
    let file = File::create(path).map_err(|source| OutputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> OutputError + '_ {
    move |source| OutputError::Csv {
        path: path.display().to_string(),
        source,
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Column names of a trajectory file.
pub fn trajectory_header(kind: StateKind, nodes: usize) -> Vec<String> {
    let mut header = vec!["time".to_string()];
    match kind {
        StateKind::Full => {
            header.extend((0..nodes).map(|i| format!("x_{i}")));
            header.extend((0..nodes).map(|i| format!("y_{i}")));
        }
        StateKind::Phase => header.extend((0..nodes).map(|i| format!("theta_{i}"))),
    }
    header
}

/// `time, x_0..x_{n-1}, y_0..y_{n-1}` for full runs, `time, theta_0..` with
/// phases wrapped to `[0, 2π)` for phase runs.
pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<(), OutputError> {
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record(trajectory_header(traj.kind, traj.nodes)).map_err(&err)?;
    let mut row = Vec::with_capacity(1 + 2 * traj.nodes);
    for (k, &t) in traj.times.iter().enumerate() {
        row.clear();
        row.push(num(t));
        match traj.kind {
            StateKind::Full => {
                let s = &traj.samples[k];
                row.extend(s.iter().step_by(2).map(|&x| num(x)));
                row.extend(s.iter().skip(1).step_by(2).map(|&y| num(y)));
            }
            StateKind::Phase => {
                let phases = traj.phases_at(k).map_err(|e| OutputError::Format {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                row.extend(phases.into_iter().map(num));
            }
        }
        w.write_record(&row).map_err(&err)?;
    }
    w.flush().map_err(io_err(path))
}

/// `time, phase_divergence, state_divergence`.
pub fn write_divergence(path: &Path, report: &ComparisonReport) -> Result<(), OutputError> {
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record(["time", "phase_divergence", "state_divergence"])
        .map_err(&err)?;
    for ((&t, &p), &s) in report
        .times
        .iter()
        .zip(&report.phase_divergence)
        .zip(&report.state_divergence)
    {
        w.write_record([num(t), num(p), num(s)]).map_err(&err)?;
    }
    w.flush().map_err(io_err(path))
}

/// `key = value` lines describing a comparison.
pub fn summary_text(exp: &Experiment, cmp: &Comparison) -> String {
    let r = &cmp.report;
    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    line("model", exp.model.as_str().into());
    line("seed", exp.seed.to_string());
    line("rng_algorithm", cmp.additive.metadata.rng_algorithm.into());
    line("run_id_additive", cmp.additive.metadata.run_id.clone());
    line("run_id_parametric", cmp.parametric.metadata.run_id.clone());
    line("phase_divergence_mean", num(r.phase_summary.mean));
    line("phase_divergence_max", num(r.phase_summary.max));
    line("state_divergence_mean", num(r.state_summary.mean));
    line("state_divergence_max", num(r.state_summary.max));
    line("max_node_phase_error", num(r.max_node_phase_error));
    line("amplitude_deviation_additive", num(r.amplitude_deviation[0]));
    line("amplitude_deviation_parametric", num(r.amplitude_deviation[1]));
    line("final_order_parameter_additive", num(r.final_order_parameter[0].0));
    line("final_order_parameter_parametric", num(r.final_order_parameter[1].0));
    let sched = &cmp.parametric_schedule;
    for (&node, &w) in sched.pinned().iter().zip(sched.magnitudes()) {
        line(&format!("omega_p.{node}"), num(w));
    }
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<(), OutputError> {
    std::fs::write(path, text).map_err(io_err(path))
}

/// A trajectory file read back: header plus numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTable {
    pub kind: StateKind,
    pub nodes: usize,
    pub times: Vec<f64>,
    /// Row values after the time column, in file order.
    pub rows: Vec<Vec<f64>>,
}

impl TrajectoryTable {
    /// Column offset of `var` (`x`, `y` or `theta`) for `node` within a row.
    pub fn column(&self, var: &str, node: usize) -> Option<usize> {
        if node >= self.nodes {
            return None;
        }
        match (self.kind, var) {
            (StateKind::Full, "x") => Some(node),
            (StateKind::Full, "y") => Some(self.nodes + node),
            (StateKind::Phase, "theta") => Some(node),
            _ => None,
        }
    }
}

pub fn read_trajectory(path: &Path) -> Result<TrajectoryTable, OutputError> {
    let file = File::open(path).map_err(io_err(path))?;
    let err = csv_err(path);
    let format = |message: String| OutputError::Format {
        path: path.display().to_string(),
        message,
    };
    let mut r = csv::Reader::from_reader(std::io::BufReader::new(file));
    let header: Vec<String> = r.headers().map_err(&err)?.iter().map(str::to_string).collect();
    let width = header.len().saturating_sub(1);
    let (kind, nodes) = match header.get(1).map(String::as_str) {
        Some("theta_0") => (StateKind::Phase, width),
        Some("x_0") if width.is_multiple_of(2) => (StateKind::Full, width / 2),
        _ => {
            return Err(format(
                "not a trajectory file (expected time, x_0.. or time, theta_0..)".into(),
            ))
        }
    };
    if header != trajectory_header(kind, nodes) {
        return Err(format("unexpected column names".into()));
    }
    let mut times = Vec::new();
    let mut rows = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(&err)?;
        let values = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format(format!("row {}: {e}", k + 1)))?;
        times.push(values[0]);
        rows.push(values[1..].to_vec());
    }
    if times.is_empty() {
        return Err(format("no data rows".into()));
    }
    Ok(TrajectoryTable {
        kind,
        nodes,
        times,
        rows,
    })
}

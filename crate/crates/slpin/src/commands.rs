//! Subcommand implementations. Each returns a [`CliError`] whose
//! [`CliError::exit_code`] is what the binary exits with.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use slpin_core::sim::{
    run_full_experiment, run_paired_comparison, run_phase_model_comparison, Comparison, ExperimentError, StateKind,
};
use slpin_core::{Model, Trajectory};
use thiserror::Error;

use crate::config::{resolve, ConfigError, Overrides, RawConfig, Resolved};
use crate::output::{self, num, OutputError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Run(String),
    #[error(transparent)]
    Output(#[from] OutputError),
}

impl CliError {
    /// 1 for configuration and usage errors, 2 for failures during a run.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 1,
            CliError::Run(_) | CliError::Output(_) => 2,
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Invalid { field, message } => CliError::Config(ConfigError::Invalid {
                key: field.into(),
                message,
            }),
            ExperimentError::Schedule(s) => CliError::Config(ConfigError::Invalid {
                key: "schedule".into(),
                message: s.to_string(),
            }),
            other => CliError::Run(other.to_string()),
        }
    }
}

/// Files written into an output directory; removed again unless
/// [`OutputSet::keep`] is called.
#[derive(Debug)]
pub struct OutputSet {
    dir: PathBuf,
    created: Vec<PathBuf>,
    files: Vec<PathBuf>,
    keep: bool,
}

impl OutputSet {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        let mut created = Vec::new();
        let mut missing = Vec::new();
        let mut cur = Some(dir);
        while let Some(d) = cur.filter(|d| !d.as_os_str().is_empty() && !d.exists()) {
            missing.push(d.to_path_buf());
            cur = d.parent();
        }
        for d in missing.into_iter().rev() {
            fs::create_dir(&d).map_err(|e| CliError::Run(format!("cannot create {}: {e}", d.display())))?;
            created.push(d);
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            created,
            files: Vec::new(),
            keep: false,
        })
    }

    /// Path of `name` inside the directory, recorded for cleanup.
    pub fn file(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.files.push(p.clone());
        p
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn keep(mut self) {
        self.keep = true;
    }
}

impl Drop for OutputSet {
    fn drop(&mut self) {
        if self.keep {
            return;
        }
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        for d in self.created.iter().rev() {
            let _ = fs::remove_dir(d);
        }
    }
}

fn meta_text(resolved: &Resolved, run_ids: &[&Trajectory]) -> String {
    let mut text = String::new();
    for t in run_ids {
        text.push_str(&format!("# run_id {} = {}\n", t.metadata.label, t.metadata.run_id));
    }
    text.push_str(&resolved.to_cfg());
    text
}

/// Runs the configured model and writes `trajectory.csv` and `meta.cfg`.
pub fn simulate(resolved: &Resolved, out: &Path) -> Result<Trajectory, CliError> {
    let traj = run_full_experiment(&resolved.experiment)?;
    let mut set = OutputSet::create(out)?;
    output::write_trajectory(&set.file("trajectory.csv"), &traj)?;
    output::write_text(&set.file("meta.cfg"), &meta_text(resolved, &[&traj]))?;
    set.keep();
    Ok(traj)
}

fn run_comparison(resolved: &Resolved) -> Result<Comparison, CliError> {
    Ok(match resolved.experiment.model {
        Model::Full => run_paired_comparison(&resolved.experiment)?,
        Model::Phase => run_phase_model_comparison(&resolved.experiment)?,
    })
}

fn write_comparison(resolved: &Resolved, cmp: &Comparison, set: &mut OutputSet) -> Result<(), CliError> {
    output::write_trajectory(&set.file("trajectory_additive.csv"), &cmp.additive)?;
    output::write_trajectory(&set.file("trajectory_parametric.csv"), &cmp.parametric)?;
    output::write_divergence(&set.file("divergence.csv"), &cmp.report)?;
    output::write_text(
        &set.file("summary.txt"),
        &output::summary_text(&resolved.experiment, cmp),
    )?;
    output::write_text(
        &set.file("meta.cfg"),
        &meta_text(resolved, &[&cmp.additive, &cmp.parametric]),
    )?;
    Ok(())
}

/// Additive against matched parametric pinning: both trajectories,
/// `divergence.csv`, `summary.txt` and `meta.cfg`.
pub fn compare(resolved: &Resolved, out: &Path) -> Result<Comparison, CliError> {
    let cmp = run_comparison(resolved)?;
    let mut set = OutputSet::create(out)?;
    write_comparison(resolved, &cmp, &mut set)?;
    set.keep();
    Ok(cmp)
}

/// What `plotdata` extracts.
#[derive(Debug, Clone, PartialEq)]
pub enum PlotRequest {
    /// Every node's state at the sample nearest `time`.
    Snapshot { time: f64 },
    /// `var` of the listed nodes at every sample.
    Timeseries { nodes: Vec<usize>, var: Option<String> },
}

/// Parses `0,3,5` or `0-4` (inclusive) or a mix such as `0-2,7`.
pub fn parse_nodes(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("--nodes: cannot parse `{text}` (use e.g. 0-4 or 0,2,5)"));
    let mut nodes = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (
                    a.trim().parse().map_err(|_| bad())?,
                    b.trim().parse().map_err(|_| bad())?,
                );
                if b < a {
                    return Err(bad());
                }
                nodes.extend(a..=b);
            }
            None => nodes.push(part.parse().map_err(|_| bad())?),
        }
    }
    if nodes.is_empty() {
        return Err(bad());
    }
    Ok(nodes)
}

/// Writes figure data from a trajectory file.
///
/// Snapshots have one row per node (`node, x, y` or `node, theta`);
/// time series have one row per sample (`time, <var>_<node>...`). `var`
/// defaults to `y` for full trajectories and `theta` for phase ones.
pub fn plotdata(trajectory: &Path, request: &PlotRequest, out: &Path) -> Result<(), CliError> {
    let table = output::read_trajectory(trajectory)?;
    let mut lines: Vec<Vec<String>> = Vec::new();
    match request {
        PlotRequest::Snapshot { time } => {
            let (t0, t1) = (table.times[0], table.times[table.times.len() - 1]);
            let slack = 1e-9 * t1.abs().max(1.0);
            if !(time.is_finite() && *time >= t0 - slack && *time <= t1 + slack) {
                return Err(CliError::Usage(format!(
                    "--time {time} is outside the trajectory range [{t0}, {t1}]"
                )));
            }
            let k = table
                .times
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - time).abs().total_cmp(&(b.1 - time).abs()))
                .map(|(k, _)| k)
                .unwrap_or(0);
            let row = &table.rows[k];
            match table.kind {
                StateKind::Full => {
                    lines.push(vec!["node".into(), "x".into(), "y".into()]);
                    let (xs, ys) = row.split_at(table.nodes);
                    for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
                        lines.push(vec![i.to_string(), num(*x), num(*y)]);
                    }
                }
                StateKind::Phase => {
                    lines.push(vec!["node".into(), "theta".into()]);
                    for (i, th) in row.iter().enumerate() {
                        lines.push(vec![i.to_string(), num(*th)]);
                    }
                }
            }
        }
        PlotRequest::Timeseries { nodes, var } => {
            let var = var.clone().unwrap_or_else(|| match table.kind {
                StateKind::Full => "y".into(),
                StateKind::Phase => "theta".into(),
            });
            let cols = nodes
                .iter()
                .map(|&i| {
                    table.column(&var, i).ok_or_else(|| {
                        CliError::Usage(format!(
                            "no column `{var}_{i}` in {} ({} nodes)",
                            trajectory.display(),
                            table.nodes
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut header = vec!["time".to_string()];
            header.extend(nodes.iter().map(|i| format!("{var}_{i}")));
            lines.push(header);
            for (t, row) in table.times.iter().zip(&table.rows) {
                let mut line = vec![num(*t)];
                line.extend(cols.iter().map(|&c| num(row[c])));
                lines.push(line);
            }
        }
    }
    let mut text = String::new();
    for l in lines {
        text.push_str(&l.join(","));
        text.push('\n');
    }
    let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
    let set = match parent {
        Some(p) => Some(OutputSet::create(p)?),
        None => None,
    };
    output::write_text(out, &text)?;
    if let Some(set) = set {
        set.keep();
    }
    Ok(())
}

/// One grid axis of a sweep: a config key and the values it takes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<String>,
}

/// Parses `key=v1,v2,...`.
pub fn parse_axis(text: &str) -> Result<SweepAxis, CliError> {
    let (key, values) = text
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--param `{text}`: expected key=v1,v2,...")))?;
    let values: Vec<String> = values
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(String::from)
        .collect();
    if values.is_empty() {
        return Err(CliError::Usage(format!("--param `{text}`: no values")));
    }
    Ok(SweepAxis {
        key: key.trim().into(),
        values,
    })
}

/// Scalar results of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: usize,
    pub values: Vec<String>,
    pub phase_divergence_mean: f64,
    pub phase_divergence_max: f64,
    pub state_divergence_mean: f64,
    pub state_divergence_max: f64,
    pub amplitude_deviation: [f64; 2],
}

/// Runs `compare` at every point of the grid spanned by `axes`, in
/// parallel, writing `point_NNN/` directories and `sweep.csv`.
///
/// Every point's config is resolved before anything runs; if any run fails
/// all outputs are removed.
pub fn sweep(raw: &RawConfig, overrides: Overrides, axes: &[SweepAxis], out: &Path) -> Result<Vec<SweepRow>, CliError> {
    let mut grid: Vec<Vec<String>> = vec![Vec::new()];
    for axis in axes {
        grid = grid
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    let points = grid
        .iter()
        .map(|values| {
            let mut cfg = raw.clone();
            for (axis, v) in axes.iter().zip(values) {
                cfg.set_from_str(&axis.key, v)?;
            }
            Ok(resolve(&cfg, overrides)?)
        })
        .collect::<Result<Vec<Resolved>, CliError>>()?;

    let mut root = OutputSet::create(out)?;
    let results: Vec<Result<(OutputSet, SweepRow), CliError>> = points
        .par_iter()
        .zip(grid.par_iter())
        .enumerate()
        .map(|(point, (resolved, values))| {
            let cmp = run_comparison(resolved)?;
            let mut set = OutputSet::create(&out.join(format!("point_{point:03}")))?;
            write_comparison(resolved, &cmp, &mut set)?;
            let r = &cmp.report;
            Ok((
                set,
                SweepRow {
                    point,
                    values: values.clone(),
                    phase_divergence_mean: r.phase_summary.mean,
                    phase_divergence_max: r.phase_summary.max,
                    state_divergence_mean: r.state_summary.mean,
                    state_divergence_max: r.state_summary.max,
                    amplitude_deviation: r.amplitude_deviation,
                },
            ))
        })
        .collect();
    let mut sets = Vec::new();
    let mut rows = Vec::new();
    for res in results {
        let (set, row) = res?;
        sets.push(set);
        rows.push(row);
    }

    let mut text = String::from("point");
    for a in axes {
        text.push(',');
        text.push_str(&a.key);
    }
    text.push_str(
        ",phase_divergence_mean,phase_divergence_max,state_divergence_mean,state_divergence_max,\
         amplitude_deviation_additive,amplitude_deviation_parametric\n",
    );
    for r in &rows {
        let mut fields = vec![r.point.to_string()];
        fields.extend(r.values.iter().cloned());
        fields.extend(
            [
                r.phase_divergence_mean,
                r.phase_divergence_max,
                r.state_divergence_mean,
                r.state_divergence_max,
                r.amplitude_deviation[0],
                r.amplitude_deviation[1],
            ]
            .map(num),
        );
        text.push_str(&fields.join(","));
        text.push('\n');
    }
    output::write_text(&root.file("sweep.csv"), &text)?;
    root.keep();
    for s in sets {
        s.keep();
    }
    Ok(rows)
}

//! Synchronization and divergence diagnostics.

use alloc::vec::Vec;

use crate::dynamics::SlParams;
use crate::phase::{circular_distance, phase_of_state, wrap_phase, PhaseError};

use super::{StateKind, Trajectory};

/// Kuramoto order parameter `r e^{iψ} = (1/n) Σ_j e^{iθ_j}`, returned as
/// `(r, ψ)` with `ψ ∈ [0, 2π)`.
pub fn order_parameter(phases: &[f64]) -> (f64, f64) {
    if phases.is_empty() {
        return (0.0, 0.0);
    }
    let n = phases.len() as f64;
    let (mut c, mut s) = (0.0, 0.0);
    for &th in phases {
        c += libm::cos(th);
        s += libm::sin(th);
    }
    let (c, s) = (c / n, s / n);
    (libm::hypot(c, s), wrap_phase(libm::atan2(s, c)))
}

/// Mean period from upward zero crossings of `values`, each crossing located
/// by linear interpolation between the bracketing samples. `None` with fewer
/// than two crossings.
pub fn measure_period(times: &[f64], values: &[f64]) -> Option<f64> {
    let mut crossings = Vec::new();
    for k in 1..times.len().min(values.len()) {
        let (a, b) = (values[k - 1], values[k]);
        if a < 0.0 && b >= 0.0 {
            let frac = -a / (b - a);
            crossings.push(times[k - 1] + frac * (times[k] - times[k - 1]));
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    Some((crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64)
}

/// Max and time-mean of a nonnegative series.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SeriesSummary {
    pub max: f64,
    pub mean: f64,
}

impl SeriesSummary {
    pub fn of(series: &[f64]) -> Self {
        if series.is_empty() {
            return Self::default();
        }
        Self {
            max: series.iter().copied().fold(0.0, f64::max),
            mean: series.iter().sum::<f64>() / series.len() as f64,
        }
    }
}

/// Divergence between two runs sampled on the same time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub times: Vec<f64>,
    /// `(1/n) Σ_i d_circ(θ_i^a, θ_i^b)` per sample.
    pub phase_divergence: Vec<f64>,
    /// `(1/n) Σ_i ‖X_i^a − X_i^b‖` per sample.
    pub state_divergence: Vec<f64>,
    pub phase_summary: SeriesSummary,
    pub state_summary: SeriesSummary,
    /// Largest single-node circular phase distance over the run.
    pub max_node_phase_error: f64,
    /// `max_{i,t} |r_i(t) − √α_i|` of each run; zero for phase models.
    pub amplitude_deviation: [f64; 2],
    /// Order parameter `(r, ψ)` of each run at the final sample.
    pub final_order_parameter: [(f64, f64); 2],
}

/// Phases and on-plane positions of one sample.
fn decompose(
    kind: StateKind,
    sample: &[f64],
    params: &SlParams,
    phases: &mut Vec<f64>,
    points: &mut Vec<[f64; 2]>,
) -> Result<f64, PhaseError> {
    phases.clear();
    points.clear();
    let mut amp_dev: f64 = 0.0;
    match kind {
        StateKind::Full => {
            for (i, xy) in sample.chunks_exact(2).enumerate() {
                phases.push(phase_of_state(xy[0], xy[1])?);
                points.push([xy[0], xy[1]]);
                let r = libm::hypot(xy[0], xy[1]);
                amp_dev = amp_dev.max(libm::fabs(r - libm::sqrt(params.alpha(i))));
            }
        }
        StateKind::Phase => {
            for (i, &th) in sample.iter().enumerate() {
                phases.push(th);
                let r = libm::sqrt(params.alpha(i));
                points.push([r * libm::cos(th), r * libm::sin(th)]);
            }
        }
    }
    Ok(amp_dev)
}

/// Compares two trajectories node by node. The runs may be of different
/// kinds; phase-model states are placed on their limit cycles for the state
/// distance.
pub fn compare_trajectories(
    a: &Trajectory,
    b: &Trajectory,
    params: &SlParams,
) -> Result<ComparisonReport, CompareError> {
    if a.times.len() != b.times.len() || a.nodes != b.nodes || a.nodes != params.len() {
        return Err(CompareError::Shape);
    }
    if a.times.iter().zip(&b.times).any(|(x, y)| x != y) {
        return Err(CompareError::TimeGrid);
    }
    let n = a.nodes as f64;
    let mut phase_divergence = Vec::with_capacity(a.times.len());
    let mut state_divergence = Vec::with_capacity(a.times.len());
    let mut max_node: f64 = 0.0;
    let mut amp = [0.0f64; 2];
    let (mut pa, mut pb) = (Vec::new(), Vec::new());
    let (mut xa, mut xb) = (Vec::new(), Vec::new());
    for (k, (sa, sb)) in a.samples.iter().zip(&b.samples).enumerate() {
        let da = decompose(a.kind, sa, params, &mut pa, &mut xa).map_err(|e| CompareError::Phase(k, e))?;
        let db = decompose(b.kind, sb, params, &mut pb, &mut xb).map_err(|e| CompareError::Phase(k, e))?;
        amp[0] = amp[0].max(da);
        amp[1] = amp[1].max(db);
        let mut dphase = 0.0;
        let mut dstate = 0.0;
        for i in 0..a.nodes {
            let d = circular_distance(pa[i], pb[i]);
            max_node = max_node.max(d);
            dphase += d;
            dstate += libm::hypot(xa[i][0] - xb[i][0], xa[i][1] - xb[i][1]);
        }
        phase_divergence.push(dphase / n);
        state_divergence.push(dstate / n);
    }
    let final_order = |t: &Trajectory| -> Result<(f64, f64), CompareError> {
        let last = t.samples.len() - 1;
        Ok(order_parameter(
            &t.phases_at(last).map_err(|e| CompareError::Phase(last, e))?,
        ))
    };
    Ok(ComparisonReport {
        times: a.times.clone(),
        phase_summary: SeriesSummary::of(&phase_divergence),
        state_summary: SeriesSummary::of(&state_divergence),
        phase_divergence,
        state_divergence,
        max_node_phase_error: max_node,
        amplitude_deviation: amp,
        final_order_parameter: [final_order(a)?, final_order(b)?],
    })
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompareError {
    #[error("trajectories differ in node count or sample count")]
    Shape,
    #[error("trajectories are sampled on different time grids")]
    TimeGrid,
    #[error("sample {0}: {1}")]
    Phase(usize, PhaseError),
}

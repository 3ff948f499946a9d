//! Integration, experiment orchestration and diagnostics.

mod diagnostics;
mod experiment;
mod integrate;

use alloc::string::String;
use alloc::vec::Vec;

pub use diagnostics::{
    compare_trajectories, measure_period, order_parameter, CompareError, ComparisonReport, SeriesSummary,
};
pub use experiment::{
    draw_initial_phases, run_full_experiment, run_paired_comparison, run_phase_model_comparison,
    run_phase_reduction_comparison, Comparison, Experiment, ExperimentError, Model,
};
pub use integrate::{integrate, integrate_with, rk4_step, IntegratorConfig, IntegratorError, Rk4, Samples, StepError};

use crate::phase::{phase_of_state, wrap_phase, PhaseError};

/// What a trajectory sample holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    /// Interleaved `(x_i, y_i)` pairs.
    Full,
    /// Unwrapped phases `θ_i`.
    Phase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetadata {
    /// Which model and protocol produced the run, e.g. `full/additive`.
    pub label: String,
    pub seed: u64,
    pub rng_algorithm: &'static str,
    /// 16 hex digits identifying the exact inputs of the run.
    pub run_id: String,
}

/// Recorded states of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub kind: StateKind,
    pub nodes: usize,
    pub times: Vec<f64>,
    pub samples: Vec<Vec<f64>>,
    pub metadata: RunMetadata,
}

impl Trajectory {
    /// Wrapped phases of every node at sample `k`.
    pub fn phases_at(&self, k: usize) -> Result<Vec<f64>, PhaseError> {
        let sample = &self.samples[k];
        match self.kind {
            StateKind::Full => sample.chunks_exact(2).map(|xy| phase_of_state(xy[0], xy[1])).collect(),
            StateKind::Phase => Ok(sample.iter().map(|&t| wrap_phase(t)).collect()),
        }
    }

    /// Radii `r_i = ‖X_i‖` at sample `k`; `None` for phase trajectories.
    pub fn amplitudes_at(&self, k: usize) -> Option<Vec<f64>> {
        match self.kind {
            StateKind::Full => Some(
                self.samples[k]
                    .chunks_exact(2)
                    .map(|xy| libm::hypot(xy[0], xy[1]))
                    .collect(),
            ),
            StateKind::Phase => None,
        }
    }
}

/// 64-bit FNV-1a.
pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

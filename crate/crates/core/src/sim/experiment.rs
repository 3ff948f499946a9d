use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use thiserror::Error;

use crate::control::{MagnitudeOrigin, PinningMode, PinningSchedule, ScheduleError};
use crate::dynamics::{CouplingMatrix, FullState, RhsError, SlNetwork, SlParams};
use crate::network::Network;
use crate::phase::{equivalent_parametric_frequency, phase_of_state, KuramotoNetwork, PhaseError};
use crate::rng::{self, Stream, RNG_ALGORITHM};

use super::diagnostics::{compare_trajectories, CompareError, ComparisonReport};
use super::integrate::{integrate_with, IntegratorConfig, Samples, StepError};
use super::{fnv1a, RunMetadata, StateKind, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Two-dimensional Stuart-Landau oscillators.
    Full,
    /// Kuramoto phase oscillators.
    Phase,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Full => "full",
            Model::Phase => "phase",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("{field}: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("schedule: {0}")]
    Schedule(#[from] ScheduleError),
    #[error("{0}")]
    Rhs(#[from] RhsError),
    #[error("integration failed: {0}")]
    Step(#[from] StepError),
    #[error("phase extraction failed: {0}")]
    Phase(#[from] PhaseError),
    #[error("comparison failed: {0}")]
    Compare(#[from] CompareError),
}

impl ExperimentError {
    fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Self::Invalid {
            field,
            message: message.into(),
        }
    }
}

/// A fully resolved run: every random quantity except the initial phases is
/// already drawn. Initial phases come from the seed unless given explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub network: Network,
    pub params: SlParams,
    pub coupling: CouplingMatrix,
    pub schedule: Option<PinningSchedule>,
    pub integrator: IntegratorConfig,
    pub model: Model,
    pub seed: u64,
    pub initial_phases: Option<Vec<f64>>,
}

impl Experiment {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let n = self.network.len();
        if n == 0 {
            return Err(ExperimentError::invalid("network", "network has no nodes"));
        }
        if self.params.len() != n {
            return Err(ExperimentError::invalid(
                "oscillator",
                format!("{} parameter sets for {} nodes", self.params.len(), n),
            ));
        }
        if let Some(s) = &self.schedule {
            s.validate_for(n, self.integrator.horizon())?;
        }
        if let Some(p) = &self.initial_phases {
            if p.len() != n {
                return Err(ExperimentError::invalid(
                    "initial.phases",
                    format!("{} phases for {} nodes", p.len(), n),
                ));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(ExperimentError::invalid("initial.phases", "phases must be finite"));
            }
        }
        Ok(())
    }

    /// Explicit initial phases, or `n` draws from `Uniform[0, 2π)` on the
    /// seed's initial-phase stream.
    pub fn initial_phases(&self) -> Vec<f64> {
        match &self.initial_phases {
            Some(p) => p.clone(),
            None => draw_initial_phases(self.network.len(), self.seed),
        }
    }

    fn metadata(&self, label: &str, schedule: Option<&PinningSchedule>) -> RunMetadata {
        let fingerprint = format!(
            "{label}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{}|{:?}",
            self.network,
            self.params,
            self.coupling,
            schedule,
            self.integrator,
            self.model,
            self.seed,
            self.initial_phases
        );
        RunMetadata {
            label: label.into(),
            seed: self.seed,
            rng_algorithm: RNG_ALGORITHM,
            run_id: format!("{:016x}", fnv1a(fingerprint.as_bytes())),
        }
    }

    fn run_model(
        &self,
        model: Model,
        schedule: Option<&PinningSchedule>,
        initial_phases: &[f64],
        observe: impl FnMut(usize, f64, &[f64]),
    ) -> Result<Trajectory, ExperimentError> {
        let n = self.network.len();
        let label = format!(
            "{}/{}",
            model.as_str(),
            schedule.map_or("unpinned", |s| s.mode().as_str())
        );
        let Samples { times, states } = match model {
            Model::Full => {
                let system = SlNetwork::new(&self.network, &self.params, self.coupling, schedule)?;
                let initial = FullState::on_cycle(&self.params, initial_phases);
                let mut rhs = |t: f64, y: &[f64], out: &mut [f64]| system.eval(t, y, out);
                integrate_with(&mut rhs, initial.as_slice(), &self.integrator, observe)?
            }
            Model::Phase => {
                let system = KuramotoNetwork::new(&self.network, &self.params, self.coupling.epsilon(), schedule)?;
                let mut rhs = |t: f64, y: &[f64], out: &mut [f64]| system.eval(t, y, out);
                integrate_with(&mut rhs, initial_phases, &self.integrator, observe)?
            }
        };
        Ok(Trajectory {
            kind: match model {
                Model::Full => StateKind::Full,
                Model::Phase => StateKind::Phase,
            },
            nodes: n,
            times,
            samples: states,
            metadata: self.metadata(&label, schedule),
        })
    }
}

/// `n` phases from `Uniform[0, 2π)` on the seed's initial-phase stream.
pub fn draw_initial_phases(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng::stream_rng(seed, Stream::InitialPhases);
    (0..n).map(|_| TAU * rng::unit(&mut rng)).collect()
}

/// Integrates the selected model under the experiment's schedule (if any),
/// starting every node on its limit cycle.
pub fn run_full_experiment(exp: &Experiment) -> Result<Trajectory, ExperimentError> {
    exp.validate()?;
    exp.run_model(exp.model, exp.schedule.as_ref(), &exp.initial_phases(), |_, _, _| {})
}

/// Additive run, its parametric counterpart and their divergence.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub additive: Trajectory,
    pub parametric: Trajectory,
    /// The derived parametric schedule; its magnitudes are the `ω_p,i`.
    pub parametric_schedule: PinningSchedule,
    pub report: ComparisonReport,
}

fn additive_schedule(exp: &Experiment) -> Result<&PinningSchedule, ExperimentError> {
    match &exp.schedule {
        Some(s) if s.mode() == PinningMode::Additive => Ok(s),
        Some(_) => Err(ExperimentError::invalid(
            "schedule.mode",
            "comparisons start from an additive schedule",
        )),
        None => Err(ExperimentError::invalid(
            "schedule",
            "comparisons need a pinning schedule",
        )),
    }
}

/// Full-model comparison of additive pinning against parametric pinning with
/// frequencies matched through the PSF-averaged control term.
///
/// The additive run is integrated first; the phases of each pinned node at
/// every step in `[0, t_p]` give its `ω_p,i`. The parametric run then starts
/// from the same initial state. Always integrates the full model.
pub fn run_paired_comparison(exp: &Experiment) -> Result<Comparison, ExperimentError> {
    exp.validate()?;
    let add = additive_schedule(exp)?;
    let dt = exp.integrator.dt();
    let t_p = add.t_p();
    let window_steps = libm::round(t_p / dt);
    if libm::fabs(t_p / dt - window_steps) > 1e-9 * window_steps.max(1.0) {
        return Err(ExperimentError::invalid(
            "schedule.t_p",
            format!("t_p = {t_p} must be a whole number of steps of {dt}"),
        ));
    }
    let window_steps = window_steps as usize;

    let pinned = add.pinned();
    let mut window_times = Vec::with_capacity(window_steps + 1);
    let mut window_phases = vec![Vec::with_capacity(window_steps + 1); pinned.len()];
    let mut phase_failure = None;
    let observe = |k: usize, t: f64, state: &[f64]| {
        if k > window_steps || phase_failure.is_some() {
            return;
        }
        window_times.push(t);
        for (slot, &node) in window_phases.iter_mut().zip(pinned) {
            match phase_of_state(state[2 * node], state[2 * node + 1]) {
                Ok(th) => slot.push(th),
                Err(e) => phase_failure = Some(e),
            }
        }
    };

    let phases0 = exp.initial_phases();
    let additive = exp.run_model(Model::Full, Some(add), &phases0, observe)?;
    if let Some(e) = phase_failure {
        return Err(e.into());
    }

    let omega_p = pinned
        .iter()
        .zip(add.magnitudes())
        .zip(&window_phases)
        .map(|((&node, &lambda), phases)| {
            equivalent_parametric_frequency(
                &window_times,
                phases,
                lambda,
                exp.params.alpha(node),
                exp.params.omega(node),
                t_p,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let par = add.with_magnitudes(PinningMode::Parametric, omega_p, MagnitudeOrigin::Equivalent)?;
    let parametric = exp.run_model(Model::Full, Some(&par), &phases0, |_, _, _| {})?;
    let report = compare_trajectories(&additive, &parametric, &exp.params)?;
    Ok(Comparison {
        additive,
        parametric,
        parametric_schedule: par,
        report,
    })
}

/// Kuramoto comparison of additive pinning against parametric pinning with
/// `ω_p,i = ω_i + λ_i`.
pub fn run_phase_model_comparison(exp: &Experiment) -> Result<Comparison, ExperimentError> {
    exp.validate()?;
    let add = additive_schedule(exp)?;
    let omega_p = add
        .pinned()
        .iter()
        .zip(add.magnitudes())
        .map(|(&node, &lambda)| exp.params.omega(node) + lambda)
        .collect();
    let par = add.with_magnitudes(PinningMode::Parametric, omega_p, MagnitudeOrigin::Equivalent)?;
    let phases0 = exp.initial_phases();
    let additive = exp.run_model(Model::Phase, Some(add), &phases0, |_, _, _| {})?;
    let parametric = exp.run_model(Model::Phase, Some(&par), &phases0, |_, _, _| {})?;
    let report = compare_trajectories(&additive, &parametric, &exp.params)?;
    Ok(Comparison {
        additive,
        parametric,
        parametric_schedule: par,
        report,
    })
}

/// Unpinned full network against its Kuramoto reduction from identical
/// initial phases. Returns `(full, phase, report)`; the schedule is ignored.
pub fn run_phase_reduction_comparison(
    exp: &Experiment,
) -> Result<(Trajectory, Trajectory, ComparisonReport), ExperimentError> {
    exp.validate()?;
    let phases0 = exp.initial_phases();
    let full = exp.run_model(Model::Full, None, &phases0, |_, _, _| {})?;
    let phase = exp.run_model(Model::Phase, None, &phases0, |_, _, _| {})?;
    let report = compare_trajectories(&full, &phase, &exp.params)?;
    Ok((full, phase, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{default_pinned_set, draw_magnitudes};
    use crate::network::ring_lattice;

    fn small(model: Model, epsilon: f64, schedule: Option<PinningSchedule>) -> Experiment {
        let n = 12;
        Experiment {
            network: ring_lattice(n, 4).unwrap(),
            params: SlParams::homogeneous(n, 1.0, 1.0).unwrap(),
            coupling: CouplingMatrix::standard(epsilon).unwrap(),
            schedule,
            integrator: IntegratorConfig::new(0.01, 5.0, 10).unwrap(),
            model,
            seed: 11,
            initial_phases: None,
        }
    }

    fn additive(n_p: usize, scale: f64) -> PinningSchedule {
        PinningSchedule::new(
            default_pinned_set(n_p, 12).unwrap(),
            2.0,
            PinningMode::Additive,
            draw_magnitudes(n_p, scale, 11).unwrap(),
            11,
            MagnitudeOrigin::Drawn,
        )
        .unwrap()
    }

    #[test]
    fn decoupled_on_cycle_nodes_stay_on_cycle() {
        let traj = run_full_experiment(&small(Model::Full, 0.0, None)).unwrap();
        assert_eq!(traj.samples.len(), 51);
        for k in 0..traj.samples.len() {
            for r in traj.amplitudes_at(k).unwrap() {
                assert!((r - 1.0).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let exp = small(Model::Full, 0.05, Some(additive(4, 0.2)));
        let a = run_full_experiment(&exp).unwrap();
        let b = run_full_experiment(&exp).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.metadata.run_id.len(), 16);
    }

    #[test]
    fn zero_pin_comparison_is_identical() {
        let zero = PinningSchedule::new(
            vec![0, 3],
            2.0,
            PinningMode::Additive,
            vec![0.0, 0.0],
            11,
            MagnitudeOrigin::Explicit,
        )
        .unwrap();
        let c = run_paired_comparison(&small(Model::Full, 0.02, Some(zero))).unwrap();
        assert!(c.report.phase_summary.max <= 1e-12);
        assert!(c.report.state_summary.max <= 1e-12);
        assert_eq!(c.parametric_schedule.magnitudes(), &[1.0, 1.0]);
    }

    #[test]
    fn phase_model_comparison_is_exact() {
        let c = run_phase_model_comparison(&small(Model::Phase, 0.05, Some(additive(5, 0.3)))).unwrap();
        assert_eq!(c.additive.samples, c.parametric.samples);
        assert_eq!(c.report.max_node_phase_error, 0.0);
    }

    #[test]
    fn comparisons_need_additive_schedule() {
        assert!(matches!(
            run_paired_comparison(&small(Model::Full, 0.01, None)),
            Err(ExperimentError::Invalid { field: "schedule", .. })
        ));
        let par = additive(2, 0.1)
            .with_magnitudes(PinningMode::Parametric, vec![1.0, 1.0], MagnitudeOrigin::Explicit)
            .unwrap();
        assert!(run_phase_model_comparison(&small(Model::Phase, 0.01, Some(par))).is_err());
    }

    #[test]
    fn off_grid_window_is_rejected() {
        let s = PinningSchedule::new(
            vec![0],
            1.005,
            PinningMode::Additive,
            vec![0.1],
            1,
            MagnitudeOrigin::Explicit,
        )
        .unwrap();
        assert!(matches!(
            run_paired_comparison(&small(Model::Full, 0.01, Some(s))),
            Err(ExperimentError::Invalid {
                field: "schedule.t_p",
                ..
            })
        ));
    }

    #[test]
    fn initial_phases_are_seeded() {
        let a = draw_initial_phases(30, 4);
        assert_eq!(a, draw_initial_phases(30, 4));
        assert!(a.iter().all(|&p| (0.0..TAU).contains(&p)));
        assert_ne!(a, draw_initial_phases(30, 5));
    }
}

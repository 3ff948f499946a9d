//! Classical fixed-step Runge-Kutta integration.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::dynamics::RhsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegratorError {
    #[error("step size dt must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("horizon {horizon} must be at least one step of {dt}")]
    HorizonTooShort { horizon: f64, dt: f64 },
    #[error("horizon {horizon} is not an integer number of steps of {dt}")]
    FractionalSteps { horizon: f64, dt: f64 },
    #[error("record_every must be at least 1 and divide the {steps} steps, got {record_every}")]
    RecordEvery { record_every: usize, steps: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("vector field failed in stage {stage} of the step from t = {t}: {source}")]
    Rhs { t: f64, stage: usize, source: RhsError },
    #[error("stage {stage} of the step from t = {t} produced a non-finite value at component {index}")]
    NonFinite { t: f64, stage: usize, index: usize },
    #[error("state has {got} components, expected {expected}")]
    Dimension { expected: usize, got: usize },
}

/// Step size, horizon and recording stride.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    dt: f64,
    horizon: f64,
    record_every: usize,
    steps: usize,
}

impl IntegratorConfig {
    pub fn new(dt: f64, horizon: f64, record_every: usize) -> Result<Self, IntegratorError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(IntegratorError::InvalidStep(dt));
        }
        if !(horizon.is_finite() && horizon >= dt) {
            return Err(IntegratorError::HorizonTooShort { horizon, dt });
        }
        let ratio = horizon / dt;
        let steps = libm::round(ratio);
        if libm::fabs(ratio - steps) > 1e-9 * steps.max(1.0) {
            return Err(IntegratorError::FractionalSteps { horizon, dt });
        }
        let steps = steps as usize;
        if record_every == 0 || !steps.is_multiple_of(record_every) {
            return Err(IntegratorError::RecordEvery { record_every, steps });
        }
        Ok(Self {
            dt,
            horizon,
            record_every,
            steps,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn record_every(&self) -> usize {
        self.record_every
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Time of step `k`, computed as `k · dt` so that no error accumulates.
    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    /// Number of recorded samples, both endpoints included.
    pub fn samples(&self) -> usize {
        self.steps / self.record_every + 1
    }
}

/// Reusable stage buffers for [`Rk4::step`].
#[derive(Debug, Clone)]
pub struct Rk4 {
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Self {
            k: core::array::from_fn(|_| vec![0.0; dim]),
            tmp: vec![0.0; dim],
        }
    }

    /// Advances `state` from `t` to `t + dt` in place.
    pub fn step<F>(&mut self, rhs: &mut F, state: &mut [f64], t: f64, dt: f64) -> Result<(), StepError>
    where
        F: FnMut(f64, &[f64], &mut [f64]) -> Result<(), RhsError>,
    {
        let dim = self.tmp.len();
        if state.len() != dim {
            return Err(StepError::Dimension {
                expected: dim,
                got: state.len(),
            });
        }
        let half = 0.5 * dt;
        let stage_times = [t, t + half, t + half, t + dt];
        let stage_weights = [0.0, half, half, dt];
        for stage in 0..4 {
            let input: &[f64] = if stage == 0 {
                state
            } else {
                let prev = &self.k[stage - 1];
                let w = stage_weights[stage];
                for ((dst, &y), &kp) in self.tmp.iter_mut().zip(state.iter()).zip(prev) {
                    *dst = y + w * kp;
                }
                &self.tmp
            };
            let (ts, out) = (stage_times[stage], &mut self.k[stage]);
            rhs(ts, input, out).map_err(|source| StepError::Rhs {
                t,
                stage: stage + 1,
                source,
            })?;
            if let Some(index) = out.iter().position(|v| !v.is_finite()) {
                return Err(StepError::NonFinite {
                    t,
                    stage: stage + 1,
                    index,
                });
            }
        }
        let sixth = dt / 6.0;
        let [k1, k2, k3, k4] = &self.k;
        for (i, y) in state.iter_mut().enumerate() {
            *y += sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        Ok(())
    }
}

/// One classical RK4 step from `(t, state)`.
pub fn rk4_step<F>(rhs: &mut F, state: &[f64], t: f64, dt: f64) -> Result<Vec<f64>, StepError>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<(), RhsError>,
{
    let mut next = state.to_vec();
    Rk4::new(state.len()).step(rhs, &mut next, t, dt)?;
    Ok(next)
}

/// Recorded times and states of one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

/// Integrates over the configured horizon, calling `observe(k, t_k, state)`
/// after every step (and once for the initial state with `k = 0`).
pub fn integrate_with<F, O>(
    rhs: &mut F,
    initial: &[f64],
    config: &IntegratorConfig,
    mut observe: O,
) -> Result<Samples, StepError>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<(), RhsError>,
    O: FnMut(usize, f64, &[f64]),
{
    let mut rk = Rk4::new(initial.len());
    let mut state = initial.to_vec();
    let mut times = Vec::with_capacity(config.samples());
    let mut states = Vec::with_capacity(config.samples());
    times.push(0.0);
    states.push(state.clone());
    observe(0, 0.0, &state);
    for k in 0..config.steps() {
        rk.step(rhs, &mut state, config.time(k), config.dt())?;
        let t = config.time(k + 1);
        observe(k + 1, t, &state);
        if (k + 1) % config.record_every() == 0 {
            times.push(t);
            states.push(state.clone());
        }
    }
    Ok(Samples { times, states })
}

/// Integrates over the configured horizon and returns the recorded samples.
pub fn integrate<F>(rhs: &mut F, initial: &[f64], config: &IntegratorConfig) -> Result<Samples, StepError>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<(), RhsError>,
{
    integrate_with(rhs, initial, config, |_, _, _| {})
}

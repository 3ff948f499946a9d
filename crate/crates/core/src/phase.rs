//! Phase-reduced dynamics.
//!
//! For the Stuart-Landau field used here the polar angle of `(x, y)` is the
//! asymptotic phase: in polar form `dθ/dt = ω` independent of the radius, so
//! isochrons are radial lines. [`phase_of_state`] therefore reads phases off
//! full states with `atan2`.
//!
//! The phase sensitivity function on the limit cycle of radius `√α` is
//! `Z(θ) = (−sin θ, cos θ) / √α`. Projecting the additive pin `(λ, λ)` on it
//! gives `√(2/α) λ cos(θ + π/4)`; averaging that term over the control window
//! yields the parametric frequency that mimics the additive protocol.
//!
//! Phases are integrated unwrapped and only wrapped into `[0, 2π)` for
//! reporting.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI, TAU};

use thiserror::Error;

use crate::control::{control_window_active, PinningMode, PinningSchedule};
use crate::dynamics::{pin_table, RhsError, SlParams};
use crate::network::Network;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseError {
    #[error("bifurcation parameter alpha must be positive, got {0}")]
    NonPositiveAlpha(f64),
    #[error("phase is undefined at the origin")]
    Origin,
    #[error("need at least two trajectory samples, got {0}")]
    TooFewSamples(usize),
    #[error("{times} times but {phases} phases")]
    LengthMismatch { times: usize, phases: usize },
    #[error("control duration must be positive, got {0}")]
    InvalidDuration(f64),
    #[error("sample spacing is not uniform at index {index}")]
    NonUniformSpacing { index: usize },
    #[error("samples span [{start}, {end}] but the control window is [0, {t_p}]")]
    WindowNotCovered { start: f64, end: f64, t_p: f64 },
}

/// Phases of every node; stored unwrapped.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState(Vec<f64>);

impl PhaseState {
    pub fn new(phases: Vec<f64>) -> Self {
        Self(phases)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Phases reduced into `[0, 2π)`.
    pub fn wrapped(&self) -> Vec<f64> {
        self.0.iter().map(|&t| wrap_phase(t)).collect()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Reduces `theta` into `[0, 2π)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta - TAU * libm::floor(theta / TAU);
    if !(0.0..TAU).contains(&w) {
        0.0
    } else {
        w
    }
}

/// Circular distance in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_phase(libm::fabs(a - b));
    if d > PI {
        TAU - d
    } else {
        d
    }
}

fn check_alpha(alpha: f64) -> Result<(), PhaseError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(PhaseError::NonPositiveAlpha(alpha));
    }
    Ok(())
}

/// `Z(θ) = (−sin θ, cos θ) / √α`.
pub fn psf_eval(theta: f64, alpha: f64) -> Result<[f64; 2], PhaseError> {
    check_alpha(alpha)?;
    let s = libm::sqrt(alpha);
    Ok([-libm::sin(theta) / s, libm::cos(theta) / s])
}

/// Polar angle of `(x, y)` in `[0, 2π)`.
pub fn phase_of_state(x: f64, y: f64) -> Result<f64, PhaseError> {
    if x == 0.0 && y == 0.0 {
        return Err(PhaseError::Origin);
    }
    Ok(wrap_phase(libm::atan2(y, x)))
}

/// `√(2/α) λ cos(θ + π/4)`, the additive pin seen through the PSF.
pub fn psf_projected_pin_term(theta: f64, lambda: f64, alpha: f64) -> Result<f64, PhaseError> {
    check_alpha(alpha)?;
    Ok(libm::sqrt(2.0 / alpha) * lambda * libm::cos(theta + FRAC_PI_4))
}

/// Parametric frequency matching an additive pin of size `lambda`:
/// `ω + (1/t_p) ∫₀^{t_p} √(2/α) λ cos(θ(t) + π/4) dt`.
///
/// `times` must be uniformly spaced and span `[0, t_p]`; the integral uses
/// the trapezoid rule on the samples.
pub fn equivalent_parametric_frequency(
    times: &[f64],
    phases: &[f64],
    lambda: f64,
    alpha: f64,
    omega: f64,
    t_p: f64,
) -> Result<f64, PhaseError> {
    check_alpha(alpha)?;
    if times.len() != phases.len() {
        return Err(PhaseError::LengthMismatch {
            times: times.len(),
            phases: phases.len(),
        });
    }
    if times.len() < 2 {
        return Err(PhaseError::TooFewSamples(times.len()));
    }
    if !(t_p > 0.0 && t_p.is_finite()) {
        return Err(PhaseError::InvalidDuration(t_p));
    }
    let h = times[1] - times[0];
    let tol = 1e-9 * libm::fabs(h);
    if h.is_nan() || h <= 0.0 {
        return Err(PhaseError::NonUniformSpacing { index: 1 });
    }
    for (k, w) in times.windows(2).enumerate() {
        if libm::fabs((w[1] - w[0]) - h) > tol {
            return Err(PhaseError::NonUniformSpacing { index: k + 1 });
        }
    }
    let (start, end) = (times[0], times[times.len() - 1]);
    let span_tol = 1e-9 * t_p.max(h);
    if libm::fabs(start) > span_tol || libm::fabs(end - t_p) > span_tol {
        return Err(PhaseError::WindowNotCovered { start, end, t_p });
    }
    let amp = libm::sqrt(2.0 / alpha) * lambda;
    let values = phases.iter().map(|&th| amp * libm::cos(th + FRAC_PI_4));
    let last = values.len() - 1;
    let mut integral = 0.0;
    for (k, v) in values.enumerate() {
        integral += if k == 0 || k == last { 0.5 * v } else { v };
    }
    integral *= h;
    Ok(omega + integral / t_p)
}

/// Kuramoto network `dθ_i/dt = ω_i + ε Σ_j A_ij sin(θ_j − θ_i)`, optionally
/// pinned.
///
/// Both pinning protocols are expressed as a per-row frequency: additive
/// rows use `ω_i + λ_i` and parametric rows use `ω_p,i` while the window is
/// open. With `ω_p,i = ω_i + λ_i` the two protocols are therefore the same
/// floating-point computation.
#[derive(Debug, Clone)]
pub struct KuramotoNetwork<'a> {
    net: &'a Network,
    omega: &'a [f64],
    epsilon: f64,
    t_p: f64,
    // Frequency used by pinned rows while the window is open.
    pinned_frequency: Vec<Option<f64>>,
}

impl<'a> KuramotoNetwork<'a> {
    pub fn new(
        net: &'a Network,
        params: &'a SlParams,
        epsilon: f64,
        schedule: Option<&PinningSchedule>,
    ) -> Result<Self, RhsError> {
        let n = net.len();
        if params.len() != n {
            return Err(RhsError::DimensionMismatch {
                expected: n,
                got: params.len(),
            });
        }
        let omega = params.omegas();
        let (pin, mode, t_p) = pin_table(n, schedule)?;
        let pinned_frequency = pin
            .iter()
            .zip(omega)
            .map(|(p, &w)| {
                p.map(|value| match mode {
                    PinningMode::Additive => w + value,
                    PinningMode::Parametric => value,
                })
            })
            .collect();
        Ok(Self {
            net,
            omega,
            epsilon,
            t_p,
            pinned_frequency,
        })
    }

    pub fn dim(&self) -> usize {
        self.net.len()
    }

    #[inline]
    fn row_frequency(&self, i: usize, window: bool) -> f64 {
        match self.pinned_frequency[i] {
            Some(f) if window => f,
            _ => self.omega[i],
        }
    }

    pub fn eval(&self, t: f64, phases: &[f64], out: &mut [f64]) -> Result<(), RhsError> {
        let n = self.net.len();
        if phases.len() != n || out.len() != n {
            return Err(RhsError::DimensionMismatch {
                expected: n,
                got: if phases.len() != n { phases.len() } else { out.len() },
            });
        }
        if let Some(node) = phases.iter().position(|v| !v.is_finite()) {
            return Err(RhsError::NonFinite { node, t });
        }
        let window = control_window_active(t, self.t_p);
        for i in 0..n {
            let theta = phases[i];
            let mut sum = 0.0;
            for &(j, a) in self.net.neighbors(i) {
                sum += a * libm::sin(phases[j] - theta);
            }
            let d = self.row_frequency(i, window) + self.epsilon * sum;
            if !d.is_finite() {
                return Err(RhsError::NonFinite { node: i, t });
            }
            out[i] = d;
        }
        Ok(())
    }
}

fn eval_once(
    phases: &PhaseState,
    net: &Network,
    params: &SlParams,
    epsilon: f64,
    schedule: Option<&PinningSchedule>,
    t: f64,
) -> Result<Vec<f64>, RhsError> {
    let system = KuramotoNetwork::new(net, params, epsilon, schedule)?;
    let mut out = vec![0.0; phases.len()];
    system.eval(t, phases.as_slice(), &mut out)?;
    Ok(out)
}

fn require_mode(schedule: &PinningSchedule, expected: PinningMode) -> Result<(), RhsError> {
    if schedule.mode() != expected {
        return Err(RhsError::ModeMismatch {
            expected,
            got: schedule.mode(),
        });
    }
    Ok(())
}

pub fn kuramoto_rhs(phases: &PhaseState, net: &Network, params: &SlParams, epsilon: f64) -> Result<Vec<f64>, RhsError> {
    eval_once(phases, net, params, epsilon, None, 0.0)
}

pub fn kuramoto_additive_pinned_rhs(
    phases: &PhaseState,
    net: &Network,
    params: &SlParams,
    epsilon: f64,
    schedule: &PinningSchedule,
    t: f64,
) -> Result<Vec<f64>, RhsError> {
    require_mode(schedule, PinningMode::Additive)?;
    eval_once(phases, net, params, epsilon, Some(schedule), t)
}

pub fn kuramoto_parametric_pinned_rhs(
    phases: &PhaseState,
    net: &Network,
    params: &SlParams,
    epsilon: f64,
    schedule: &PinningSchedule,
    t: f64,
) -> Result<Vec<f64>, RhsError> {
    require_mode(schedule, PinningMode::Parametric)?;
    eval_once(phases, net, params, epsilon, Some(schedule), t)
}

//! Right-hand sides of the full two-dimensional Stuart-Landau network.
//!
//! Node `i` obeys
//!
//! ```text
//! dX_i/dt = F_i(X_i) + D Σ_j L_ij X_j + U_i(t)
//! F(x, y) = (αx − ωy − (x² + y²)x,  ωx + αy − (x² + y²)y)
//! ```
//!
//! The coupling sums the *neighbor* states `X_j` against the Laplacian row.
//! Because every Laplacian row sums to zero this is the usual diffusive form
//! `D Σ_j A_ij (X_j − X_i)`, and it vanishes on synchronized states.
//!
//! Additive pinning adds `(λ_i, λ_i)` to both components of a pinned node
//! while the control window is open. Parametric pinning replaces the pinned
//! node's frequency by `ω_p,i` during the window and restores its own `ω_i`
//! afterwards; `α_i` is left untouched.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::control::{control_window_active, PinningMode, PinningSchedule};
use crate::network::Network;
use crate::rng::{self, Stream};

/// Default bound on per-node parameter deviations, relative to the base value.
pub const DEFAULT_HETEROGENEITY_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("bifurcation parameter alpha must be positive and finite, got {0}")]
    NonPositiveAlpha(f64),
    #[error("natural frequency omega must be finite, got {0}")]
    NonFiniteOmega(f64),
    #[error("coupling strength epsilon must be nonnegative and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("coupling matrix entries must be finite")]
    NonFiniteCouplingMatrix,
    #[error("{name} deviations have {got} entries, expected {expected}")]
    DeviationLength {
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{name} deviation at node {node} is {value}, exceeding {bound}")]
    DeviationTooLarge {
        name: &'static str,
        node: usize,
        value: f64,
        bound: f64,
    },
}

/// Failure while evaluating a vector field.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RhsError {
    #[error("state has {got} entries, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value at node {node}, t = {t}")]
    NonFinite { node: usize, t: f64 },
    #[error("non-finite input")]
    NonFiniteInput,
    #[error("schedule mode {got:?} passed where {expected:?} pinning was required")]
    ModeMismatch { expected: PinningMode, got: PinningMode },
    #[error("pinned node {node} is out of range for {n} nodes")]
    PinnedOutOfRange { node: usize, n: usize },
}

/// Per-node Stuart-Landau parameters: base values plus optional deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct SlParams {
    base_alpha: f64,
    base_omega: f64,
    alpha: Vec<f64>,
    omega: Vec<f64>,
}

impl SlParams {
    pub fn homogeneous(n: usize, alpha: f64, omega: f64) -> Result<Self, ParamError> {
        Self::check_base(alpha, omega)?;
        Ok(Self {
            base_alpha: alpha,
            base_omega: omega,
            alpha: vec![alpha; n],
            omega: vec![omega; n],
        })
    }

    /// Node `i` gets `alpha + delta_alpha[i]` and `omega + delta_omega[i]`.
    ///
    /// Each deviation must satisfy `|δ| ≤ threshold · |base|`; `threshold` is
    /// a fraction, [`DEFAULT_HETEROGENEITY_THRESHOLD`] by default.
    pub fn heterogeneous(
        alpha: f64,
        omega: f64,
        delta_alpha: &[f64],
        delta_omega: &[f64],
        threshold: f64,
    ) -> Result<Self, ParamError> {
        Self::check_base(alpha, omega)?;
        let n = delta_alpha.len();
        if delta_omega.len() != n {
            return Err(ParamError::DeviationLength {
                name: "omega",
                expected: n,
                got: delta_omega.len(),
            });
        }
        let check = |name, base: f64, deltas: &[f64]| -> Result<Vec<f64>, ParamError> {
            let bound = threshold * libm::fabs(base);
            deltas
                .iter()
                .enumerate()
                .map(|(node, &d)| {
                    if !(d.is_finite() && libm::fabs(d) <= bound) {
                        Err(ParamError::DeviationTooLarge {
                            name,
                            node,
                            value: d,
                            bound,
                        })
                    } else {
                        Ok(base + d)
                    }
                })
                .collect()
        };
        let alphas = check("alpha", alpha, delta_alpha)?;
        let omegas = check("omega", omega, delta_omega)?;
        if let Some(&a) = alphas.iter().find(|&&a| a <= 0.0) {
            return Err(ParamError::NonPositiveAlpha(a));
        }
        Ok(Self {
            base_alpha: alpha,
            base_omega: omega,
            alpha: alphas,
            omega: omegas,
        })
    }

    fn check_base(alpha: f64, omega: f64) -> Result<(), ParamError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(ParamError::NonPositiveAlpha(alpha));
        }
        if !omega.is_finite() {
            return Err(ParamError::NonFiniteOmega(omega));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn base_alpha(&self) -> f64 {
        self.base_alpha
    }

    pub fn base_omega(&self) -> f64 {
        self.base_omega
    }

    pub fn alpha(&self, i: usize) -> f64 {
        self.alpha[i]
    }

    pub fn omega(&self, i: usize) -> f64 {
        self.omega[i]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omega
    }
}

/// Coupling matrix `D = ε · d_unit`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingMatrix {
    epsilon: f64,
    unit: [[f64; 2]; 2],
}

impl CouplingMatrix {
    /// `d_unit = [[1, −1], [1, 1]]`.
    pub const STANDARD_UNIT: [[f64; 2]; 2] = [[1.0, -1.0], [1.0, 1.0]];

    pub fn standard(epsilon: f64) -> Result<Self, ParamError> {
        Self::new(epsilon, Self::STANDARD_UNIT)
    }

    pub fn new(epsilon: f64, unit: [[f64; 2]; 2]) -> Result<Self, ParamError> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(ParamError::InvalidEpsilon(epsilon));
        }
        if unit.iter().flatten().any(|v| !v.is_finite()) {
            return Err(ParamError::NonFiniteCouplingMatrix);
        }
        Ok(Self { epsilon, unit })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn unit(&self) -> [[f64; 2]; 2] {
        self.unit
    }

    /// The effective matrix `ε · d_unit`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let e = self.epsilon;
        let u = self.unit;
        [[e * u[0][0], e * u[0][1]], [e * u[1][0], e * u[1][1]]]
    }

    /// `D · v`.
    #[inline]
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let d = self.matrix();
        [d[0][0] * v[0] + d[0][1] * v[1], d[1][0] * v[0] + d[1][1] * v[1]]
    }
}

/// Oscillator coordinates of every node, stored interleaved as
/// `[x_0, y_0, x_1, y_1, ...]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState(Vec<f64>);

impl FullState {
    pub fn from_pairs(pairs: &[[f64; 2]]) -> Self {
        Self(pairs.iter().flatten().copied().collect())
    }

    pub fn from_interleaved(data: Vec<f64>) -> Self {
        Self(data)
    }

    /// Every node on its limit cycle `√α_i (cos θ_i, sin θ_i)`.
    pub fn on_cycle(params: &SlParams, phases: &[f64]) -> Self {
        let mut data = Vec::with_capacity(2 * phases.len());
        for (i, &theta) in phases.iter().enumerate() {
            let r = libm::sqrt(params.alpha(i));
            data.push(r * libm::cos(theta));
            data.push(r * libm::sin(theta));
        }
        Self(data)
    }

    pub fn len(&self) -> usize {
        self.0.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn xy(&self, i: usize) -> [f64; 2] {
        [self.0[2 * i], self.0[2 * i + 1]]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Frequency and growth-rate deviations for `n` nodes, drawn from
/// `Uniform(−omega_width, omega_width)` and `Uniform(−alpha_width, alpha_width)`
/// on the seed's heterogeneity stream (all `δω` first). A zero width yields
/// zeros without consuming draws.
pub fn draw_deviations(n: usize, omega_width: f64, alpha_width: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = rng::stream_rng(seed, Stream::Heterogeneity);
    let mut draw = |w: f64| -> Vec<f64> {
        if w > 0.0 {
            (0..n).map(|_| rng::uniform(&mut rng, -w, w)).collect()
        } else {
            vec![0.0; n]
        }
    };
    let d_omega = draw(omega_width);
    let d_alpha = draw(alpha_width);
    (d_omega, d_alpha)
}

#[inline]
fn sl_field(x: f64, y: f64, alpha: f64, omega: f64) -> [f64; 2] {
    let r2 = x * x + y * y;
    [alpha * x - omega * y - r2 * x, omega * x + alpha * y - r2 * y]
}

/// Isolated Stuart-Landau vector field at `(x, y)`.
pub fn sl_vector_field(state: [f64; 2], alpha: f64, omega: f64) -> Result<[f64; 2], RhsError> {
    if !(state[0].is_finite() && state[1].is_finite() && alpha.is_finite() && omega.is_finite()) {
        return Err(RhsError::NonFiniteInput);
    }
    Ok(sl_field(state[0], state[1], alpha, omega))
}

/// `D Σ_j L_ij X_j` for node `i`.
pub fn coupling_term(state: &[f64], net: &Network, coupling: &CouplingMatrix, i: usize) -> [f64; 2] {
    let mut sum = [0.0, 0.0];
    for &(j, l) in net.laplacian_row(i) {
        sum[0] += l * state[2 * j];
        sum[1] += l * state[2 * j + 1];
    }
    coupling.apply(sum)
}

/// The full Stuart-Landau network, optionally under a pinning schedule.
#[derive(Debug, Clone)]
pub struct SlNetwork<'a> {
    net: &'a Network,
    params: &'a SlParams,
    coupling: CouplingMatrix,
    mode: PinningMode,
    t_p: f64,
    // λ_i (additive) or ω_p,i (parametric) for pinned nodes.
    pin: Vec<Option<f64>>,
}

impl<'a> SlNetwork<'a> {
    pub fn new(
        net: &'a Network,
        params: &'a SlParams,
        coupling: CouplingMatrix,
        schedule: Option<&PinningSchedule>,
    ) -> Result<Self, RhsError> {
        let n = net.len();
        if params.len() != n {
            return Err(RhsError::DimensionMismatch {
                expected: n,
                got: params.len(),
            });
        }
        let (pin, mode, t_p) = pin_table(n, schedule)?;
        Ok(Self {
            net,
            params,
            coupling,
            mode,
            t_p,
            pin,
        })
    }

    pub fn dim(&self) -> usize {
        2 * self.net.len()
    }

    /// Writes `dX/dt` at time `t` into `out`.
    pub fn eval(&self, t: f64, state: &[f64], out: &mut [f64]) -> Result<(), RhsError> {
        let dim = self.dim();
        if state.len() != dim || out.len() != dim {
            return Err(RhsError::DimensionMismatch {
                expected: dim,
                got: if state.len() != dim { state.len() } else { out.len() },
            });
        }
        if let Some(k) = state.iter().position(|v| !v.is_finite()) {
            return Err(RhsError::NonFinite { node: k / 2, t });
        }
        let window = control_window_active(t, self.t_p);
        for i in 0..self.net.len() {
            let (x, y) = (state[2 * i], state[2 * i + 1]);
            let pin = if window { self.pin[i] } else { None };
            let omega = match (self.mode, pin) {
                (PinningMode::Parametric, Some(omega_p)) => omega_p,
                _ => self.params.omega(i),
            };
            let f = sl_field(x, y, self.params.alpha(i), omega);
            let c = coupling_term(state, self.net, &self.coupling, i);
            let mut dx = f[0] + c[0];
            let mut dy = f[1] + c[1];
            if let (PinningMode::Additive, Some(lambda)) = (self.mode, pin) {
                dx += lambda;
                dy += lambda;
            }
            if !(dx.is_finite() && dy.is_finite()) {
                return Err(RhsError::NonFinite { node: i, t });
            }
            out[2 * i] = dx;
            out[2 * i + 1] = dy;
        }
        Ok(())
    }
}

/// Per-node control values, the schedule mode and its window length.
pub(crate) fn pin_table(
    n: usize,
    schedule: Option<&PinningSchedule>,
) -> Result<(Vec<Option<f64>>, PinningMode, f64), RhsError> {
    let mut pin = vec![None; n];
    let Some(s) = schedule else {
        return Ok((pin, PinningMode::Additive, f64::NEG_INFINITY));
    };
    for (&node, &value) in s.pinned().iter().zip(s.magnitudes()) {
        if node >= n {
            return Err(RhsError::PinnedOutOfRange { node, n });
        }
        pin[node] = Some(value);
    }
    Ok((pin, s.mode(), s.t_p()))
}

fn eval_once(
    state: &FullState,
    net: &Network,
    params: &SlParams,
    coupling: &CouplingMatrix,
    schedule: Option<&PinningSchedule>,
    t: f64,
) -> Result<FullState, RhsError> {
    let system = SlNetwork::new(net, params, *coupling, schedule)?;
    let mut out = vec![0.0; state.as_slice().len()];
    system.eval(t, state.as_slice(), &mut out)?;
    Ok(FullState(out))
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

/// Uncontrolled network derivative.
pub fn network_rhs(
    state: &FullState,
    net: &Network,
    params: &SlParams,
    coupling: &CouplingMatrix,
) -> Result<FullState, RhsError> {
    eval_once(state, net, params, coupling, None, 0.0)
}

/// Network derivative under additive pinning at time `t`.
pub fn additive_pinned_rhs(
    state: &FullState,
    net: &Network,
    params: &SlParams,
    coupling: &CouplingMatrix,
    schedule: &PinningSchedule,
    t: f64,
) -> Result<FullState, RhsError> {
    require_mode(schedule, PinningMode::Additive)?;
    eval_once(state, net, params, coupling, Some(schedule), t)
}

/// Network derivative under parametric (frequency) pinning at time `t`.
pub fn parametric_pinned_rhs(
    state: &FullState,
    net: &Network,
    params: &SlParams,
    coupling: &CouplingMatrix,
    schedule: &PinningSchedule,
    t: f64,
) -> Result<FullState, RhsError> {
    require_mode(schedule, PinningMode::Parametric)?;
    eval_once(state, net, params, coupling, Some(schedule), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::MagnitudeOrigin;
    use crate::network::ring_lattice;

    fn triangle() -> Network {
        ring_lattice(3, 2).unwrap()
    }

    fn sample_state(n: usize) -> FullState {
        let pairs: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let s = i as f64;
                [0.9 * libm::cos(1.7 * s + 0.3), 1.1 * libm::sin(0.8 * s - 0.2)]
            })
            .collect();
        FullState::from_pairs(&pairs)
    }

    fn schedule(mode: PinningMode, values: &[f64]) -> PinningSchedule {
        let pinned: Vec<usize> = (0..values.len()).collect();
        PinningSchedule::new(pinned, 1.0, mode, values.to_vec(), 3, MagnitudeOrigin::Explicit).unwrap()
    }

    #[test]
    fn on_cycle_velocity_is_tangential() {
        assert_eq!(sl_vector_field([1.0, 0.0], 1.0, 1.0).unwrap(), [0.0, 1.0]);
        assert_eq!(sl_vector_field([0.0, 0.0], 2.5, -3.0).unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn vector_field_term_by_term() {
        // α x − ω y − r² x and ω x + α y − r² y at (0.3, −0.7), α = 1.2, ω = 0.9:
        // r² = 0.58; dx = 0.36 + 0.63 − 0.174 = 0.816; dy = 0.27 − 0.84 + 0.406 = −0.164.
        let [dx, dy] = sl_vector_field([0.3, -0.7], 1.2, 0.9).unwrap();
        assert!((dx - 0.816).abs() < 1e-15);
        assert!((dy + 0.164).abs() < 1e-15);
    }

    #[test]
    fn vector_field_rejects_non_finite() {
        assert!(sl_vector_field([f64::NAN, 0.0], 1.0, 1.0).is_err());
        assert!(sl_vector_field([0.0, 0.0], f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn decoupled_network_is_stacked_field() {
        let net = ring_lattice(6, 2).unwrap();
        let params = SlParams::homogeneous(6, 1.3, 0.7).unwrap();
        let state = sample_state(6);
        let d = network_rhs(&state, &net, &params, &CouplingMatrix::standard(0.0).unwrap()).unwrap();
        for i in 0..6 {
            assert_eq!(d.xy(i), sl_vector_field(state.xy(i), 1.3, 0.7).unwrap());
        }
    }

    #[test]
    fn synchronized_state_feels_no_coupling() {
        let net = ring_lattice(8, 4).unwrap();
        let params = SlParams::homogeneous(8, 1.0, 1.0).unwrap();
        // Dyadic coordinates keep the Laplacian row sums free of rounding.
        let state = FullState::from_pairs(&[[0.375, -0.8125]; 8]);
        let d = network_rhs(&state, &net, &params, &CouplingMatrix::standard(0.3).unwrap()).unwrap();
        let f = sl_vector_field([0.375, -0.8125], 1.0, 1.0).unwrap();
        for i in 0..8 {
            assert_eq!(d.xy(i), f);
        }
    }

    #[test]
    fn triangle_matches_double_loop() {
        let net = triangle();
        let params = SlParams::homogeneous(3, 1.0, 1.0).unwrap();
        let state = sample_state(3);
        let eps = 0.2;
        let d = network_rhs(&state, &net, &params, &CouplingMatrix::standard(eps).unwrap()).unwrap();
        for i in 0..3 {
            let [xi, yi] = state.xy(i);
            let mut sx = 0.0;
            let mut sy = 0.0;
            for j in 0..3 {
                let [xj, yj] = state.xy(j);
                let l = net.laplacian()[i * 3 + j];
                sx += l * (xj - yj);
                sy += l * (xj + yj);
            }
            let r2 = xi * xi + yi * yi;
            let fx = xi - yi - r2 * xi + eps * sx;
            let fy = xi + yi - r2 * yi + eps * sy;
            let [dx, dy] = d.xy(i);
            assert!((dx - fx).abs() < 1e-14 && (dy - fy).abs() < 1e-14);
        }
    }

    #[test]
    fn coupling_term_is_linear_in_epsilon() {
        let net = ring_lattice(7, 4).unwrap();
        let state = sample_state(7);
        let c1 = CouplingMatrix::standard(0.013).unwrap();
        let c2 = CouplingMatrix::standard(0.026).unwrap();
        for i in 0..7 {
            let a = coupling_term(state.as_slice(), &net, &c1, i);
            let b = coupling_term(state.as_slice(), &net, &c2, i);
            assert_eq!([2.0 * a[0], 2.0 * a[1]], b);
        }
    }

    #[test]
    fn additive_pinning_only_touches_pinned_rows_in_window() {
        let net = ring_lattice(6, 2).unwrap();
        let params = SlParams::homogeneous(6, 1.0, 1.0).unwrap();
        let coupling = CouplingMatrix::standard(0.1).unwrap();
        let state = sample_state(6);
        let s = schedule(PinningMode::Additive, &[0.05, 0.08]);
        let base = network_rhs(&state, &net, &params, &coupling).unwrap();
        let inside = additive_pinned_rhs(&state, &net, &params, &coupling, &s, 0.5).unwrap();
        let after = additive_pinned_rhs(&state, &net, &params, &coupling, &s, 1.01).unwrap();
        let before = additive_pinned_rhs(&state, &net, &params, &coupling, &s, -0.01).unwrap();
        assert_eq!(after, base);
        assert_eq!(before, base);
        for i in 2..6 {
            assert_eq!(inside.xy(i), base.xy(i));
        }
        for (i, lam) in [(0, 0.05), (1, 0.08)] {
            let d = inside.xy(i);
            let b = base.xy(i);
            assert!((d[0] - b[0] - lam).abs() < 1e-15);
            assert!((d[1] - b[1] - lam).abs() < 1e-15);
        }
    }

    #[test]
    fn additive_pin_decoupled_is_exact() {
        let net = ring_lattice(4, 2).unwrap();
        let params = SlParams::homogeneous(4, 1.0, 1.0).unwrap();
        let coupling = CouplingMatrix::standard(0.0).unwrap();
        let state = sample_state(4);
        let s = schedule(PinningMode::Additive, &[0.1]);
        let d = additive_pinned_rhs(&state, &net, &params, &coupling, &s, 1.0).unwrap();
        let f = sl_vector_field(state.xy(0), 1.0, 1.0).unwrap();
        assert_eq!(d.xy(0), [f[0] + 0.1, f[1] + 0.1]);
    }

    #[test]
    fn parametric_pinning_swaps_frequency() {
        let net = ring_lattice(5, 2).unwrap();
        let params = SlParams::homogeneous(5, 1.0, 1.0).unwrap();
        let state = sample_state(5);
        let zero = CouplingMatrix::standard(0.0).unwrap();
        let s = schedule(PinningMode::Parametric, &[1.3, 0.6]);
        let d = parametric_pinned_rhs(&state, &net, &params, &zero, &s, 1.0).unwrap();
        assert_eq!(d.xy(0), sl_vector_field(state.xy(0), 1.0, 1.3).unwrap());
        assert_eq!(d.xy(1), sl_vector_field(state.xy(1), 1.0, 0.6).unwrap());

        let coupling = CouplingMatrix::standard(0.2).unwrap();
        let base = network_rhs(&state, &net, &params, &coupling).unwrap();
        let after = parametric_pinned_rhs(&state, &net, &params, &coupling, &s, 1.5).unwrap();
        assert_eq!(after, base);
        let noop = schedule(PinningMode::Parametric, &[1.0, 1.0]);
        for t in [0.0, 0.5, 1.0, 2.0] {
            let d = parametric_pinned_rhs(&state, &net, &params, &coupling, &noop, t).unwrap();
            assert_eq!(d, base);
        }
    }

    #[test]
    fn mode_and_dimension_errors() {
        let net = triangle();
        let params = SlParams::homogeneous(3, 1.0, 1.0).unwrap();
        let coupling = CouplingMatrix::standard(0.1).unwrap();
        let s = schedule(PinningMode::Parametric, &[1.1]);
        assert!(matches!(
            additive_pinned_rhs(&sample_state(3), &net, &params, &coupling, &s, 0.0),
            Err(RhsError::ModeMismatch { .. })
        ));
        assert!(matches!(
            network_rhs(&sample_state(4), &net, &params, &coupling),
            Err(RhsError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn non_finite_state_names_node() {
        let net = triangle();
        let params = SlParams::homogeneous(3, 1.0, 1.0).unwrap();
        let coupling = CouplingMatrix::standard(0.0).unwrap();
        let state = FullState::from_pairs(&[[0.1, 0.2], [f64::INFINITY, 0.0], [0.3, 0.1]]);
        assert_eq!(
            network_rhs(&state, &net, &params, &coupling),
            Err(RhsError::NonFinite { node: 1, t: 0.0 })
        );
    }

    #[test]
    fn heterogeneity_is_bounded() {
        let p = SlParams::heterogeneous(1.0, 1.0, &[0.0, 0.05], &[-0.02, 0.1], 0.1).unwrap();
        assert_eq!(p.omega(1), 1.1);
        assert_eq!(p.alpha(1), 1.05);
        assert!(matches!(
            SlParams::heterogeneous(1.0, 1.0, &[0.0], &[0.2], 0.1),
            Err(ParamError::DeviationTooLarge { name: "omega", .. })
        ));
        assert!(SlParams::homogeneous(3, 0.0, 1.0).is_err());
    }

    #[test]
    fn coupling_matrix_reconstructs() {
        let c = CouplingMatrix::standard(0.05).unwrap();
        assert_eq!(c.matrix(), [[0.05, -0.05], [0.05, 0.05]]);
        assert!(CouplingMatrix::standard(-1.0).is_err());
    }
}

//! Pinning schedules: which nodes are driven, for how long, and how hard.

use alloc::vec::Vec;

use thiserror::Error;

use crate::rng::{self, Stream};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("number of pinned nodes must be in 1..{n}, got {count}")]
    PinnedCount { count: usize, n: usize },
    #[error("pinned node {node} is out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("pinned node {0} listed twice")]
    DuplicateNode(usize),
    #[error("control duration t_p must be positive and finite, got {0}")]
    InvalidDuration(f64),
    #[error("control duration t_p = {t_p} exceeds the horizon {horizon}")]
    DurationExceedsHorizon { t_p: f64, horizon: f64 },
    #[error("{got} magnitudes given for {expected} pinned nodes")]
    MagnitudeCount { expected: usize, got: usize },
    #[error("magnitude for pinned node {node} is not finite")]
    NonFiniteMagnitude { node: usize },
    #[error("draw interval ({low}, {high}) is empty or not finite")]
    InvalidInterval { low: f64, high: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PinningMode {
    /// `λ_i` added to both state components.
    Additive,
    /// Frequency replaced by `ω_p,i`.
    Parametric,
}

impl PinningMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PinningMode::Additive => "additive",
            PinningMode::Parametric => "parametric",
        }
    }
}

/// Where the magnitudes of a schedule came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MagnitudeOrigin {
    /// Drawn from the seeded magnitude stream.
    Drawn,
    /// Supplied verbatim.
    Explicit,
    /// Parametric frequencies matched to a paired additive run.
    Equivalent,
}

impl MagnitudeOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            MagnitudeOrigin::Drawn => "drawn",
            MagnitudeOrigin::Explicit => "explicit",
            MagnitudeOrigin::Equivalent => "equivalent",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PinningSchedule {
    pinned: Vec<usize>,
    t_p: f64,
    mode: PinningMode,
    magnitudes: Vec<f64>,
    seed: u64,
    origin: MagnitudeOrigin,
}

impl PinningSchedule {
    /// `magnitudes[k]` belongs to `pinned[k]`: `λ` for additive schedules,
    /// `ω_p` for parametric ones.
    pub fn new(
        pinned: Vec<usize>,
        t_p: f64,
        mode: PinningMode,
        magnitudes: Vec<f64>,
        seed: u64,
        origin: MagnitudeOrigin,
    ) -> Result<Self, ScheduleError> {
        if pinned.is_empty() {
            return Err(ScheduleError::PinnedCount { count: 0, n: 0 });
        }
        for (k, &node) in pinned.iter().enumerate() {
            if pinned[..k].contains(&node) {
                return Err(ScheduleError::DuplicateNode(node));
            }
        }
        if !(t_p.is_finite() && t_p > 0.0) {
            return Err(ScheduleError::InvalidDuration(t_p));
        }
        if magnitudes.len() != pinned.len() {
            return Err(ScheduleError::MagnitudeCount {
                expected: pinned.len(),
                got: magnitudes.len(),
            });
        }
        if let Some(k) = magnitudes.iter().position(|m| !m.is_finite()) {
            return Err(ScheduleError::NonFiniteMagnitude { node: pinned[k] });
        }
        Ok(Self {
            pinned,
            t_p,
            mode,
            magnitudes,
            seed,
            origin,
        })
    }

    /// Checks the schedule against a network of `n` nodes integrated up to
    /// `horizon`.
    pub fn validate_for(&self, n: usize, horizon: f64) -> Result<(), ScheduleError> {
        if self.pinned.len() >= n {
            return Err(ScheduleError::PinnedCount {
                count: self.pinned.len(),
                n,
            });
        }
        if let Some(&node) = self.pinned.iter().find(|&&node| node >= n) {
            return Err(ScheduleError::NodeOutOfRange { node, n });
        }
        if self.t_p > horizon {
            return Err(ScheduleError::DurationExceedsHorizon { t_p: self.t_p, horizon });
        }
        Ok(())
    }

    /// A schedule on the same nodes, window and seed with new magnitudes.
    pub fn with_magnitudes(
        &self,
        mode: PinningMode,
        magnitudes: Vec<f64>,
        origin: MagnitudeOrigin,
    ) -> Result<Self, ScheduleError> {
        Self::new(self.pinned.clone(), self.t_p, mode, magnitudes, self.seed, origin)
    }

    pub fn pinned(&self) -> &[usize] {
        &self.pinned
    }

    pub fn t_p(&self) -> f64 {
        self.t_p
    }

    pub fn mode(&self) -> PinningMode {
        self.mode
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn origin(&self) -> MagnitudeOrigin {
        self.origin
    }

    pub fn is_active(&self, t: f64) -> bool {
        control_window_active(t, self.t_p)
    }
}

/// The first `count` node indices.
pub fn default_pinned_set(count: usize, n: usize) -> Result<Vec<usize>, ScheduleError> {
    if count == 0 || count >= n {
        return Err(ScheduleError::PinnedCount { count, n });
    }
    Ok((0..count).collect())
}

/// `count` i.i.d. draws from `Uniform(0, scale)` on the seed's magnitude
/// stream.
pub fn draw_magnitudes(count: usize, scale: f64, seed: u64) -> Result<Vec<f64>, ScheduleError> {
    draw_uniform(count, 0.0, scale, seed)
}

/// `count` i.i.d. draws from `Uniform(low, high)` on the seed's magnitude
/// stream.
pub fn draw_uniform(count: usize, low: f64, high: f64, seed: u64) -> Result<Vec<f64>, ScheduleError> {
    if !(low.is_finite() && high.is_finite() && high > low) {
        return Err(ScheduleError::InvalidInterval { low, high });
    }
    let mut rng = rng::stream_rng(seed, Stream::Magnitudes);
    Ok((0..count).map(|_| rng::uniform(&mut rng, low, high)).collect())
}

/// `Θ(t) − Θ(t − t_p)` with `Θ(0) = 1`: the closed window `[0, t_p]`.
#[inline]
pub fn control_window_active(t: f64, t_p: f64) -> bool {
    0.0 <= t && t <= t_p
}

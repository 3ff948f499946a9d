//! Seeded random streams.
//!
//! Every random quantity of an experiment comes from ChaCha20 seeded with the
//! experiment seed, on a dedicated stream per purpose. Streams are
//! independent, so adding a draw for one purpose never shifts another.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Identifier recorded in run metadata.
pub const RNG_ALGORITHM: &str = "chacha20";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    InitialPhases = 0,
    Magnitudes = 1,
    Heterogeneity = 2,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Uniform on the open interval `(0, 1)`: 52 random mantissa bits, offset by
/// half an ulp so neither endpoint is reachable.
pub fn open01(rng: &mut impl RngCore) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 52) as f64;
    ((rng.next_u64() >> 12) as f64 + 0.5) * SCALE
}

/// Uniform on `[0, 1)` with 53 random bits.
pub fn unit(rng: &mut impl RngCore) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    (rng.next_u64() >> 11) as f64 * SCALE
}

/// Uniform on `(low, high)`.
pub fn uniform(rng: &mut impl RngCore, low: f64, high: f64) -> f64 {
    low + (high - low) * open01(rng)
}

//! Networks of Stuart-Landau oscillators, their Kuramoto phase reduction,
//! and additive versus parametric pinning control.
//!
//! The crate is `no_std` with `alloc`; math goes through `libm` so results do
//! not depend on the platform's libm. IO, configuration files and the command
//! line live in the companion `slpin` crate.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`network`] | ring lattices, weighted graphs, Laplacians |
//! | [`dynamics`] | full two-dimensional network vector fields |
//! | [`phase`] | PSF, phase extraction, Kuramoto fields, matched frequencies |
//! | [`control`] | pinning schedules and seeded magnitude draws |
//! | [`sim`] | RK4, experiment runs, divergence diagnostics |
//! | [`rng`] | seeded ChaCha20 streams |

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod control;
pub mod dynamics;
pub mod network;
pub mod phase;
pub mod rng;
pub mod sim;

pub use control::{MagnitudeOrigin, PinningMode, PinningSchedule};
pub use dynamics::{CouplingMatrix, FullState, SlParams};
pub use network::Network;
pub use phase::PhaseState;
pub use sim::{Experiment, IntegratorConfig, Model, Trajectory};

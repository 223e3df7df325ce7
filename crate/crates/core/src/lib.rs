//! Repeated Jaynes-Cummings interactions followed by atomic measurements.
//!
//! A cavity field (or the motional state of a trapped ion) is driven by a
//! sequence of two-level atoms, each entangled with the field for a random
//! interaction time and then measured. Non-selective measurements lose the
//! trapping-state fixed points as soon as the interaction times fluctuate;
//! conditional measurements onto superposed atomic states, with the
//! Ramsey rotation time correlated to the transit time, recover them.
//!
//! Modules:
//! - [`fock`]: truncated field states and their moments.
//! - [`dynamics`]: one-atom entanglement, measurement maps and trapping helpers.
//! - [`stochastic`]: seeded interaction-time sampling.
//! - [`classical`]: the driven-pendulum counterpart and its return map.
//! - [`experiment`]: whole atom sequences, sampled success estimates and sweeps.

pub mod classical;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod fock;
pub mod stochastic;

pub use error::{Error, Result};

/// Decimal form with 17 significant digits, used by every CSV writer.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

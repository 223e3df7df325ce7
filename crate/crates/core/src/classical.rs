//! Classical counterpart: the parametrically driven pendulum.
//!
//! With time measured in units of `g tau`, the atomic polarization `theta`
//! and the dimensionless field `epsilon` obey
//! `theta' = epsilon`, `epsilon' = sin(theta)`. For small per-atom field
//! changes the field after each transit follows the return map
//! `epsilon -> epsilon + (2 / epsilon) sin^2(epsilon g tau / 2)`, whose fixed
//! points `epsilon g tau = 2 pi m` are only marginally stable.

use std::io::{self, Write};

use crate::dynamics::CouplingParams;
use crate::error::{Error, Result};
use crate::fmt_real;
use crate::stochastic::{derive_stream, SeedSpec, Stream, TimingModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumState {
    pub theta: f64,
    pub epsilon: f64,
}

impl PendulumState {
    pub fn new(theta: f64, epsilon: f64) -> Self {
        Self { theta, epsilon }
    }

    /// `epsilon^2 / 2 + cos(theta)`, conserved by the flow.
    pub fn first_integral(&self) -> f64 {
        0.5 * self.epsilon * self.epsilon + self.theta.cos()
    }
}

/// `(d theta, d epsilon) = (epsilon, sin theta)`.
pub fn pendulum_rhs(state: PendulumState) -> (f64, f64) {
    (state.epsilon, state.theta.sin())
}

/// Classical RK4 with fixed `step`; the last step is shortened to land on
/// `duration` exactly.
pub fn integrate_pendulum(state: PendulumState, duration: f64, step: f64) -> PendulumState {
    assert!(step > 0.0, "step must be positive");
    assert!(duration >= 0.0, "duration must be non-negative");
    let mut s = state;
    let mut t = 0.0;
    while t < duration {
        let h = step.min(duration - t);
        let add = |s: PendulumState, k: (f64, f64), f: f64| {
            PendulumState::new(s.theta + f * k.0, s.epsilon + f * k.1)
        };
        let k1 = pendulum_rhs(s);
        let k2 = pendulum_rhs(add(s, k1, 0.5 * h));
        let k3 = pendulum_rhs(add(s, k2, 0.5 * h));
        let k4 = pendulum_rhs(add(s, k3, h));
        s.theta += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        s.epsilon += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        t += h;
    }
    s
}

/// One transit of the approximate return map.
pub fn return_map_approx(epsilon: f64, g_tau: f64) -> Result<f64> {
    if epsilon == 0.0 {
        return Err(Error::SingularMap);
    }
    let s = (0.5 * epsilon * g_tau).sin();
    Ok(epsilon + 2.0 / epsilon * s * s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalRecord {
    pub k: usize,
    pub tau: f64,
    pub epsilon: f64,
}

impl ClassicalRecord {
    /// Classical counterpart of the mean photon number.
    pub fn eps_sq_over_4(&self) -> f64 {
        0.25 * self.epsilon * self.epsilon
    }
}

/// Lazily iterated return map with random transit times. Yields the field
/// after each atom, `k = 1, 2, ...`; iteration stops on a singular step.
pub struct ReturnMapIter {
    epsilon: f64,
    k: usize,
    g: f64,
    timing: TimingModel,
    rng: Stream,
}

impl ReturnMapIter {
    pub fn new(epsilon0: f64, timing: TimingModel, params: CouplingParams, seed: SeedSpec) -> Result<Self> {
        if !(epsilon0 > 0.0 && epsilon0.is_finite()) {
            return Err(Error::InvalidConfig {
                field: "epsilon0",
                reason: format!("initial field must be positive, got {epsilon0}"),
            });
        }
        timing.validate()?;
        Ok(Self {
            epsilon: epsilon0,
            k: 0,
            g: params.g(),
            timing,
            rng: derive_stream(seed),
        })
    }
}

impl Iterator for ReturnMapIter {
    type Item = ClassicalRecord;

    fn next(&mut self) -> Option<ClassicalRecord> {
        let tau = self.timing.sample(&mut self.rng).tau;
        self.epsilon = return_map_approx(self.epsilon, self.g * tau).ok()?;
        self.k += 1;
        Some(ClassicalRecord {
            k: self.k,
            tau,
            epsilon: self.epsilon,
        })
    }
}

/// `n_steps` iterations of the return map.
pub fn classical_run(
    epsilon0: f64,
    n_steps: usize,
    timing: TimingModel,
    params: CouplingParams,
    seed: SeedSpec,
) -> Result<Vec<ClassicalRecord>> {
    Ok(ReturnMapIter::new(epsilon0, timing, params, seed)?
        .take(n_steps)
        .collect())
}

/// Writes `k,tau_k,epsilon,eps_sq_over_4` rows.
pub fn write_trajectory_csv<W: Write>(mut out: W, records: &[ClassicalRecord]) -> io::Result<()> {
    writeln!(out, "k,tau_k,epsilon,eps_sq_over_4")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{}",
            r.k,
            fmt_real(r.tau),
            fmt_real(r.epsilon),
            fmt_real(r.eps_sq_over_4())
        )?;
    }
    Ok(())
}

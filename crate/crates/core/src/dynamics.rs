//! One-atom maps on the field.
//!
//! The atom enters the cavity excited. After an interaction time `tau` the
//! joint state is
//!
//! ```text
//! sum_n c_n [ cos(theta_n) |e,n> - i sin(theta_n) |g,n+1> ],   theta_n = g tau sqrt(n+1)
//! ```
//!
//! Tracing out the atom gives the non-selective population map
//! ([`nsm_step`]); projecting it onto a chosen final atomic state gives a
//! conditional measurement ([`cm_project`]).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FieldState, MIN_RENORMALIZABLE};

/// Largest amplitude allowed to flow out of the top Fock level in one
/// interaction.
pub const MAX_EDGE_AMPLITUDE: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    g: f64,
}

impl CouplingParams {
    pub fn new(g: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidConfig {
                field: "g",
                reason: format!("coupling must be positive and finite, got {g}"),
            });
        }
        Ok(Self { g })
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

impl Default for CouplingParams {
    fn default() -> Self {
        Self { g: 1.0 }
    }
}

/// Branch amplitudes after one interaction: `e_branch[n]` multiplies
/// `|e,n>` and `g_branch[n]` multiplies `|g,n+1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledState {
    pub e_branch: Vec<Complex64>,
    pub g_branch: Vec<Complex64>,
}

impl EntangledState {
    pub fn n_max(&self) -> usize {
        self.e_branch.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.e_branch
            .iter()
            .chain(&self.g_branch)
            .map(|c| c.norm_sqr())
            .sum()
    }
}

/// Post-selected final atomic state `alpha_f |e> + beta_f |g>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomRotation {
    pub alpha_f: Complex64,
    pub beta_f: Complex64,
}

impl AtomRotation {
    pub fn new(alpha_f: Complex64, beta_f: Complex64) -> Result<Self> {
        let norm = alpha_f.norm_sqr() + beta_f.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig {
                field: "rotation",
                reason: format!("|alpha_f|^2 + |beta_f|^2 = {norm}, expected 1"),
            });
        }
        Ok(Self { alpha_f, beta_f })
    }

    /// Detection in `|e>`.
    pub fn elastic() -> Self {
        Self {
            alpha_f: Complex64::new(1.0, 0.0),
            beta_f: Complex64::new(0.0, 0.0),
        }
    }

    /// Detection in `|g>`.
    pub fn inelastic() -> Self {
        Self {
            alpha_f: Complex64::new(0.0, 0.0),
            beta_f: Complex64::new(1.0, 0.0),
        }
    }

    /// The complementary outcome `(-beta_f*, alpha_f*)`.
    pub fn orthogonal(&self) -> Self {
        Self {
            alpha_f: -self.beta_f.conj(),
            beta_f: self.alpha_f.conj(),
        }
    }
}

/// Which atomic measurement follows each interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementScheme {
    /// Outcome ignored; only the field populations are tracked.
    Nsm,
    Elastic,
    Inelastic,
    /// Ramsey-rotated detection with `T_k = ramsey_ratio * tau_k`.
    Superposition {
        phi_f: f64,
        ramsey_ratio: f64,
    },
}

impl MeasurementScheme {
    /// Superposition scheme with `phi_f = -pi/2` and the Ramsey ratio that
    /// puts the stationary phase of the large-n factor at `trap_target`.
    pub fn superposition(trap_target: usize, params: CouplingParams, omega: f64) -> Self {
        MeasurementScheme::Superposition {
            phi_f: -FRAC_PI_2,
            ramsey_ratio: stationary_phase_ratio(trap_target, params, omega),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let MeasurementScheme::Superposition { phi_f, ramsey_ratio } = *self {
            if !(ramsey_ratio > 0.0 && ramsey_ratio.is_finite()) {
                return Err(Error::InvalidConfig {
                    field: "ramsey_ratio",
                    reason: format!("must be positive, got {ramsey_ratio}"),
                });
            }
            if !phi_f.is_finite() {
                return Err(Error::InvalidConfig {
                    field: "phi_f",
                    reason: "must be finite".into(),
                });
            }
        }
        Ok(())
    }

    /// Final atomic state selected at one step, `None` for NSM.
    pub fn rotation(&self, omega: f64, ramsey_time: f64) -> Option<AtomRotation> {
        match *self {
            MeasurementScheme::Nsm => None,
            MeasurementScheme::Elastic => Some(AtomRotation::elastic()),
            MeasurementScheme::Inelastic => Some(AtomRotation::inelastic()),
            MeasurementScheme::Superposition { phi_f, .. } => Some(ramsey_coeffs(omega, ramsey_time, phi_f)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MeasurementScheme::Nsm => "nsm",
            MeasurementScheme::Elastic => "elastic",
            MeasurementScheme::Inelastic => "inelastic",
            MeasurementScheme::Superposition { .. } => "superposition",
        }
    }
}

/// `Omega * ratio = 2 g sqrt(n_t + 1)`: the large-n cosine argument
/// `Omega T / 2 - g tau sqrt(n+1)` vanishes at `n_t` for every `tau`.
pub fn stationary_phase_ratio(trap_target: usize, params: CouplingParams, omega: f64) -> f64 {
    2.0 * params.g * ((trap_target + 1) as f64).sqrt() / omega
}

/// `theta_n = g tau sqrt(n+1)`.
pub fn theta(params: CouplingParams, tau: f64, n: usize) -> f64 {
    params.g * tau * ((n + 1) as f64).sqrt()
}

/// `(sin x, cos x)` with multiples of pi/2 that are within a few ulps
/// mapped onto exact values, so trapping conditions block exactly.
pub fn snapped_sin_cos(x: f64) -> (f64, f64) {
    let quarter_turns = x / FRAC_PI_2;
    let nearest = quarter_turns.round();
    if (quarter_turns - nearest).abs() <= 8.0 * f64::EPSILON * nearest.abs().max(1.0) {
        match (nearest as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        x.sin_cos()
    }
}

fn theta_sin_cos(params: CouplingParams, tau: f64, n: usize) -> (f64, f64) {
    snapped_sin_cos(theta(params, tau, n))
}

/// Joint atom-field state after one interaction, atom entering in `|e>`.
pub fn jcm_entangle(field: &FieldState, params: CouplingParams, tau: f64) -> Result<EntangledState> {
    let n_max = field.n_max();
    let mut e_branch = Vec::with_capacity(n_max + 1);
    let mut g_branch = Vec::with_capacity(n_max + 1);
    for (n, &c) in field.amplitudes().iter().enumerate() {
        let (s, co) = theta_sin_cos(params, tau, n);
        e_branch.push(c * co);
        g_branch.push(-I * c * s);
    }
    let edge = g_branch[n_max].norm();
    if edge > MAX_EDGE_AMPLITUDE {
        return Err(Error::Leakage {
            n_max,
            amount: edge * edge,
            context: "jcm_entangle",
        });
    }
    Ok(EntangledState { e_branch, g_branch })
}

/// Non-selective population map
/// `P'(n) = P(n) cos^2 theta_n + P(n-1) sin^2 theta_{n-1}`.
pub fn nsm_step(probs: &[f64], params: CouplingParams, tau: f64) -> Result<Vec<f64>> {
    let n_max = probs.len().saturating_sub(1);
    let mut out = vec![0.0; probs.len()];
    for (n, &p) in probs.iter().enumerate() {
        let (s, c) = theta_sin_cos(params, tau, n);
        let moved = p * s * s;
        out[n] += p * c * c;
        if n < n_max {
            out[n + 1] += moved;
        } else if moved > MAX_EDGE_AMPLITUDE * MAX_EDGE_AMPLITUDE {
            return Err(Error::Leakage {
                n_max,
                amount: moved,
                context: "nsm_step",
            });
        }
    }
    Ok(out)
}

/// `alpha_f = cos(Omega T / 2)`, `beta_f = sin(Omega T / 2) e^{i phi_f}`.
pub fn ramsey_coeffs(omega: f64, ramsey_time: f64, phi_f: f64) -> AtomRotation {
    let (s, c) = snapped_sin_cos(0.5 * omega * ramsey_time);
    let (sp, cp) = snapped_sin_cos(phi_f);
    AtomRotation {
        alpha_f: Complex64::new(c, 0.0),
        beta_f: Complex64::new(s * cp, s * sp),
    }
}

/// Unnormalized projected amplitudes
/// `d_n = alpha_f* e_branch[n] + beta_f* g_branch[n-1]`.
pub fn project_amplitudes(ent: &EntangledState, rot: &AtomRotation) -> Vec<Complex64> {
    let a = rot.alpha_f.conj();
    let b = rot.beta_f.conj();
    let mut d: Vec<Complex64> = ent.e_branch.iter().map(|e| a * e).collect();
    for (dn, gp) in d[1..].iter_mut().zip(&ent.g_branch) {
        *dn += b * gp;
    }
    d
}

/// Conditional measurement: projects onto `rot` and renormalizes.
/// Returns the new field and the success probability `P_k`.
pub fn cm_project(ent: &EntangledState, rot: &AtomRotation) -> Result<(FieldState, f64)> {
    let d = project_amplitudes(ent, rot);
    let prob: f64 = d.iter().map(|c| c.norm_sqr()).sum();
    if prob < MIN_RENORMALIZABLE {
        return Err(Error::OrthogonalOutcome { prob });
    }
    let inv = prob.sqrt().recip();
    let state = FieldState::from_amplitudes(d.into_iter().map(|c| c * inv).collect())?;
    Ok((state, prob.min(1.0)))
}

/// Large-n form of the superposition update without its normalization:
/// `cos(Omega T / 2 - g tau sqrt(n+1)) c_prev`.
pub fn approx_cm_coefficient(
    c_prev: Complex64,
    omega: f64,
    ramsey_time: f64,
    params: CouplingParams,
    tau: f64,
    n: usize,
) -> Complex64 {
    let (_, c) = snapped_sin_cos(0.5 * omega * ramsey_time - theta(params, tau, n));
    c_prev * c
}

/// Whole-state large-n update for the selected outcome (`selected = true`,
/// factor `cos(delta_n)`) or its complement (factor `i sin(delta_n)`), where
/// `delta_n = Omega T / 2 - theta_n`. Unnormalized.
pub fn large_n_project(
    field: &FieldState,
    omega: f64,
    ramsey_time: f64,
    params: CouplingParams,
    tau: f64,
    selected: bool,
) -> Vec<Complex64> {
    let half = 0.5 * omega * ramsey_time;
    field
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, &c)| {
            let (s, co) = snapped_sin_cos(half - theta(params, tau, n));
            if selected {
                c * co
            } else {
                I * c * s
            }
        })
        .collect()
}

/// `tau` such that `theta_{n_t} = q pi`.
pub fn trapping_time(trap_target: usize, q: u32, params: CouplingParams) -> f64 {
    q as f64 * PI / (params.g * ((trap_target + 1) as f64).sqrt())
}

/// Gap between the trapping (`theta = pi`) and anti-trapping
/// (`theta = pi/2`) interaction times at `n_t`.
pub fn critical_spread(trap_target: usize, params: CouplingParams) -> f64 {
    PI / (2.0 * params.g * ((trap_target + 1) as f64).sqrt())
}

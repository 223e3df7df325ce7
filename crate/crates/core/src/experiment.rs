//! Atom sequences.
//!
//! [`run_sequence`] sends `N` atoms through the cavity one at a time. Each
//! atom draws its transit time from the [`TimingModel`], entangles with the
//! field and is then measured according to the [`MeasurementScheme`]:
//!
//! - `Nsm`: the outcome is ignored and only populations are propagated.
//! - conditional schemes in [`RunMode::PostSelected`]: the desired outcome
//!   is imposed at every step and its probability `P_k` is booked into the
//!   running product `cum_P`.
//! - conditional schemes in [`RunMode::Sampled`]: the outcome is drawn with
//!   probability `P_k`; the first orthogonal outcome marks the trajectory as
//!   failed.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::dynamics::{
    critical_spread, jcm_entangle, large_n_project, nsm_step, project_amplitudes, trapping_time,
    AtomRotation, CouplingParams, MeasurementScheme,
};
use crate::error::{Error, Result};
use crate::fmt_real;
use crate::fock::{
    coherent_n_max, default_n_max, population_above, stats, top_population, FieldState, LEAKAGE_GUARD,
    MAX_COHERENT_LEAKAGE, MIN_RENORMALIZABLE,
};
use crate::stochastic::{derive_stream, AtomTiming, SeedSpec, Stream, TimingLaw, TimingModel};

/// A final distribution with `P(n_t)` above this counts as converged in
/// sweeps.
pub const CONVERGENCE_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialField {
    Coherent(Complex64),
    Fock(usize),
}

impl InitialField {
    pub fn prepare(&self, n_max: usize) -> Result<FieldState> {
        match *self {
            InitialField::Coherent(alpha) => FieldState::coherent(alpha, n_max).map(|(s, _)| s),
            InitialField::Fock(n) => FieldState::fock(n, n_max),
        }
    }

    /// Smallest truncation that holds this state comfortably.
    fn min_n_max(&self) -> usize {
        match *self {
            InitialField::Coherent(alpha) => coherent_n_max(alpha.norm()),
            InitialField::Fock(n) => n + 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    PostSelected,
    Sampled,
}

/// How a conditional measurement updates the amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmUpdate {
    /// Entangle, then project onto the rotated final state.
    Exact,
    /// Per-level factor `cos(Omega T / 2 - theta_n)`, the large-n limit of
    /// the superposition projection. Superposition scheme only.
    LargeN,
}

impl CmUpdate {
    pub fn default_for(scheme: &MeasurementScheme) -> Self {
        match scheme {
            MeasurementScheme::Superposition { .. } => CmUpdate::LargeN,
            _ => CmUpdate::Exact,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CmUpdate::Exact => "exact",
            CmUpdate::LargeN => "large-n",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    NonSelective,
    PostSelected,
    SampledSuccess,
    SampledFailure,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::NonSelective => "nsm",
            Outcome::PostSelected => "postselected",
            Outcome::SampledSuccess => "success",
            Outcome::SampledFailure => "failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scheme: MeasurementScheme,
    pub n_atoms: usize,
    pub trap_target: usize,
    pub q: u32,
    pub initial_field: InitialField,
    pub timing: TimingModel,
    pub coupling: CouplingParams,
    pub n_max: usize,
    pub mode: RunMode,
    pub seed: SeedSpec,
    /// Ramsey-zone Rabi frequency; only read by the superposition scheme.
    pub omega: f64,
    pub cm_update: CmUpdate,
    /// Stop a sampled trajectory at its first failed detection.
    pub halt_on_failure: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &'static str, reason: String| Err(Error::InvalidConfig { field, reason });
        self.scheme.validate()?;
        self.timing.validate()?;
        if self.q == 0 {
            return bad("q", "must be at least 1".into());
        }
        if self.trap_target + 20 >= self.n_max {
            return bad(
                "n_max",
                format!(
                    "trap target {} needs n_max > {}, got {}",
                    self.trap_target,
                    self.trap_target + 20,
                    self.n_max
                ),
            );
        }
        match self.initial_field {
            InitialField::Fock(n) if n > self.n_max => {
                return bad("fock", format!("level {n} exceeds n_max = {}", self.n_max));
            }
            InitialField::Coherent(alpha) => {
                let (_, leak) = FieldState::coherent(alpha, self.n_max)?;
                if leak > MAX_COHERENT_LEAKAGE {
                    return bad("alpha", format!("truncation leakage {leak:.3e}"));
                }
            }
            _ => {}
        }
        if let MeasurementScheme::Superposition { phi_f, ramsey_ratio } = self.scheme {
            if !(self.omega > 0.0 && self.omega.is_finite()) {
                return bad("omega", format!("must be positive, got {}", self.omega));
            }
            if self.timing.ramsey_ratio != ramsey_ratio {
                return bad(
                    "ramsey_ratio",
                    format!(
                        "timing ratio {} differs from scheme ratio {ramsey_ratio}",
                        self.timing.ramsey_ratio
                    ),
                );
            }
            if self.cm_update == CmUpdate::LargeN && phi_f != -FRAC_PI_2 {
                return bad("update", "the large-n update assumes phi_f = -pi/2".into());
            }
        } else if self.cm_update == CmUpdate::LargeN {
            return bad(
                "update",
                format!(
                    "large-n update is defined for the superposition scheme only, not {}",
                    self.scheme.name()
                ),
            );
        }
        Ok(())
    }

    /// Copy with a new timing spread, given as a multiple of the critical
    /// spread at the trap target.
    pub fn with_spread_multiplier(&self, multiplier: f64) -> Self {
        let mut cfg = self.clone();
        cfg.timing.spread = multiplier * critical_spread(self.trap_target, self.coupling);
        cfg
    }

    pub fn with_seed(&self, seed: SeedSpec) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn with_atoms(&self, n_atoms: usize) -> Self {
        Self {
            n_atoms,
            ..self.clone()
        }
    }
}

/// Scheme family without its derived parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Nsm,
    Elastic,
    Inelastic,
    Superposition,
}

impl SchemeKind {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Nsm => "nsm",
            SchemeKind::Elastic => "elastic",
            SchemeKind::Inelastic => "inelastic",
            SchemeKind::Superposition => "superposition",
        }
    }
}

/// High-level description of a run, in the units used by the figures:
/// `tau_bar` from the trapping condition, spread in units of the critical
/// spread. [`RunSetup::build`] turns it into a [`RunConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunSetup {
    pub kind: SchemeKind,
    pub trap_target: usize,
    pub q: u32,
    pub initial_field: InitialField,
    pub n_atoms: usize,
    pub spread_mult: f64,
    pub law: TimingLaw,
    pub g: f64,
    pub omega: f64,
    pub n_max: Option<usize>,
    pub mode: RunMode,
    pub seed: SeedSpec,
    pub update: Option<CmUpdate>,
    pub halt_on_failure: bool,
    pub decorrelation: f64,
}

impl RunSetup {
    pub fn new(kind: SchemeKind, trap_target: usize, initial_field: InitialField, n_atoms: usize) -> Self {
        Self {
            kind,
            trap_target,
            q: 1,
            initial_field,
            n_atoms,
            spread_mult: 0.0,
            law: TimingLaw::Uniform,
            g: 1.0,
            omega: 1.0,
            n_max: None,
            mode: RunMode::PostSelected,
            seed: SeedSpec::new(0, 0),
            update: None,
            halt_on_failure: true,
            decorrelation: 0.0,
        }
    }

    pub fn resolved_n_max(&self) -> usize {
        // small targets get n_t + 20 from the default, one short of the
        // validity bound
        self.n_max.unwrap_or_else(|| {
            default_n_max(self.trap_target)
                .max(self.trap_target + 21)
                .max(self.initial_field.min_n_max())
        })
    }

    pub fn build(&self) -> Result<RunConfig> {
        let coupling = CouplingParams::new(self.g)?;
        let scheme = match self.kind {
            SchemeKind::Nsm => MeasurementScheme::Nsm,
            SchemeKind::Elastic => MeasurementScheme::Elastic,
            SchemeKind::Inelastic => MeasurementScheme::Inelastic,
            SchemeKind::Superposition => {
                if !(self.omega > 0.0 && self.omega.is_finite()) {
                    return Err(Error::InvalidConfig {
                        field: "omega",
                        reason: format!("must be positive, got {}", self.omega),
                    });
                }
                MeasurementScheme::superposition(self.trap_target, coupling, self.omega)
            }
        };
        if self.q == 0 {
            return Err(Error::InvalidConfig {
                field: "q",
                reason: "must be at least 1".into(),
            });
        }
        if !(self.spread_mult >= 0.0 && self.spread_mult.is_finite()) {
            return Err(Error::InvalidConfig {
                field: "spread_mult",
                reason: format!("must be non-negative, got {}", self.spread_mult),
            });
        }
        let ramsey_ratio = match scheme {
            MeasurementScheme::Superposition { ramsey_ratio, .. } => ramsey_ratio,
            _ => 0.0,
        };
        let timing = TimingModel {
            tau_bar: trapping_time(self.trap_target, self.q, coupling),
            spread: self.spread_mult * critical_spread(self.trap_target, coupling),
            law: self.law,
            ramsey_ratio,
            decorrelation: self.decorrelation,
        };
        let cfg = RunConfig {
            scheme,
            n_atoms: self.n_atoms,
            trap_target: self.trap_target,
            q: self.q,
            initial_field: self.initial_field,
            timing,
            coupling,
            n_max: self.resolved_n_max(),
            mode: self.mode,
            seed: self.seed,
            omega: self.omega,
            cm_update: self.update.unwrap_or_else(|| CmUpdate::default_for(&scheme)),
            halt_on_failure: self.halt_on_failure,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub k: usize,
    pub tau: f64,
    pub ramsey_time: f64,
    /// Probability of the realized (or imposed) outcome; 1 for NSM.
    pub success_prob: f64,
    pub cum_prob: f64,
    pub log_cum_prob: f64,
    pub mean_n: f64,
    pub delta_n: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    ImpossiblePostSelection,
    SampledFailure,
}

impl TerminationReason {
    pub fn describe(&self) -> &'static str {
        match self {
            TerminationReason::ImpossiblePostSelection => "impossible post-selection",
            TerminationReason::SampledFailure => "sampled failure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Termination {
    /// Atom at which the run stopped.
    pub k: usize,
    pub reason: TerminationReason,
    /// Outcome probability that triggered the stop.
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FinalState {
    Pure(FieldState),
    Populations(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub steps: Vec<StepRecord>,
    pub initial_distribution: Vec<f64>,
    pub final_distribution: Vec<f64>,
    pub final_state: FinalState,
    pub terminated_early: Option<Termination>,
    /// First atom whose sampled detection failed.
    pub failed_at: Option<usize>,
    /// Largest `|norm - 1|` seen after any step.
    pub max_norm_error: f64,
}

impl RunResult {
    pub fn cum_prob(&self) -> f64 {
        self.steps.last().map_or(1.0, |s| s.cum_prob)
    }

    pub fn log_cum_prob(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.log_cum_prob)
    }

    pub fn final_population(&self, n: usize) -> f64 {
        self.final_distribution.get(n).copied().unwrap_or(0.0)
    }

    pub fn final_stats(&self) -> crate::fock::FieldStats {
        stats(&self.final_distribution)
    }

    pub fn succeeded(&self) -> bool {
        self.failed_at.is_none() && self.terminated_early.is_none()
    }
}

enum Register {
    Pure(FieldState),
    Populations(Vec<f64>),
}

struct Stepper<'a> {
    cfg: &'a RunConfig,
}

impl Stepper<'_> {
    /// Unnormalized amplitudes for the selected outcome and its complement.
    fn branches(
        &self,
        field: &FieldState,
        rot: &AtomRotation,
        timing: AtomTiming,
        need_complement: bool,
    ) -> Result<(Vec<Complex64>, Option<Vec<Complex64>>)> {
        let g = self.cfg.coupling;
        match self.cfg.cm_update {
            CmUpdate::Exact => {
                let ent = jcm_entangle(field, g, timing.tau)?;
                let sel = project_amplitudes(&ent, rot);
                let comp = need_complement.then(|| project_amplitudes(&ent, &rot.orthogonal()));
                Ok((sel, comp))
            }
            CmUpdate::LargeN => {
                let args = (self.cfg.omega, timing.ramsey_time, g, timing.tau);
                let sel = large_n_project(field, args.0, args.1, args.2, args.3, true);
                let comp =
                    need_complement.then(|| large_n_project(field, args.0, args.1, args.2, args.3, false));
                Ok((sel, comp))
            }
        }
    }
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|c| c.norm_sqr()).sum()
}

fn normalized(amps: Vec<Complex64>, prob: f64) -> Result<FieldState> {
    let inv = prob.sqrt().recip();
    FieldState::from_amplitudes(amps.into_iter().map(|c| c * inv).collect())
}

/// Runs one atom sequence.
pub fn run_sequence(config: &RunConfig) -> Result<RunResult> {
    run_sequence_observed(config, |_, _| {})
}

/// As [`run_sequence`], calling `observer` after every step with the step
/// record and the current photon-number distribution.
pub fn run_sequence_observed<F>(config: &RunConfig, mut observer: F) -> Result<RunResult>
where
    F: FnMut(&StepRecord, &[f64]),
{
    config.validate()?;
    let initial = config.initial_field.prepare(config.n_max)?;
    let initial_distribution = initial.probabilities();
    let mut register = match config.scheme {
        MeasurementScheme::Nsm => Register::Populations(initial_distribution.clone()),
        _ => Register::Pure(initial),
    };
    let mut rng: Stream = derive_stream(config.seed);
    let stepper = Stepper { cfg: config };
    let g = config.coupling;

    let mut steps = Vec::with_capacity(config.n_atoms);
    let mut log_cum = 0.0f64;
    let mut terminated_early = None;
    let mut failed_at = None;
    let mut max_norm_error = 0.0f64;

    for k in 1..=config.n_atoms {
        let timing = config.timing.sample(&mut rng);
        let (prob, outcome) = match &mut register {
            Register::Populations(p) => {
                *p = nsm_step(p, g, timing.tau)?;
                (1.0, Outcome::NonSelective)
            }
            Register::Pure(field) => {
                let rot = config
                    .scheme
                    .rotation(config.omega, timing.ramsey_time)
                    .expect("conditional scheme has a rotation");
                let sampled = config.mode == RunMode::Sampled;
                let (sel, comp) = stepper.branches(field, &rot, timing, sampled)?;
                let p_sel = norm_sqr(&sel);
                let take_selected = match config.mode {
                    RunMode::PostSelected => true,
                    RunMode::Sampled => rng.random::<f64>() < p_sel,
                };
                if take_selected {
                    if p_sel < MIN_RENORMALIZABLE {
                        terminated_early = Some(Termination {
                            k,
                            reason: TerminationReason::ImpossiblePostSelection,
                            prob: p_sel,
                        });
                        break;
                    }
                    *field = normalized(sel, p_sel)?;
                    let outcome = if sampled {
                        Outcome::SampledSuccess
                    } else {
                        Outcome::PostSelected
                    };
                    (p_sel.min(1.0), outcome)
                } else {
                    let comp = comp.expect("complement computed in sampled mode");
                    let p_comp = norm_sqr(&comp);
                    if p_comp < MIN_RENORMALIZABLE {
                        // rounding put u above a probability of 1
                        *field = normalized(sel, p_sel)?;
                        (p_sel.min(1.0), Outcome::SampledSuccess)
                    } else {
                        *field = normalized(comp, p_comp)?;
                        failed_at.get_or_insert(k);
                        (p_comp.min(1.0), Outcome::SampledFailure)
                    }
                }
            }
        };

        let distribution = match &register {
            Register::Populations(p) => p.clone(),
            Register::Pure(f) => f.probabilities(),
        };
        let total: f64 = distribution.iter().sum();
        max_norm_error = max_norm_error.max((total - 1.0).abs());
        let top = top_population(&distribution);
        if top > LEAKAGE_GUARD {
            return Err(Error::Leakage {
                n_max: config.n_max,
                amount: top,
                context: "run_sequence (top levels)",
            });
        }

        log_cum += prob.ln();
        let st = stats(&distribution);
        let record = StepRecord {
            k,
            tau: timing.tau,
            ramsey_time: timing.ramsey_time,
            success_prob: prob,
            cum_prob: log_cum.exp(),
            log_cum_prob: log_cum,
            mean_n: st.mean_n,
            delta_n: st.delta_n,
            outcome,
        };
        observer(&record, &distribution);
        steps.push(record);

        if outcome == Outcome::SampledFailure && config.halt_on_failure {
            terminated_early = Some(Termination {
                k,
                reason: TerminationReason::SampledFailure,
                prob,
            });
            break;
        }
    }

    let (final_distribution, final_state) = match register {
        Register::Populations(p) => (p.clone(), FinalState::Populations(p)),
        Register::Pure(f) => (f.probabilities(), FinalState::Pure(f)),
    };
    Ok(RunResult {
        steps,
        initial_distribution,
        final_distribution,
        final_state,
        terminated_early,
        failed_at,
        max_norm_error,
    })
}

/// Runs a fixed-time and a fluctuating-time NSM sequence side by side.
pub fn run_nsm_pair(fixed: &RunConfig, fluctuating: &RunConfig) -> Result<(RunResult, RunResult)> {
    for cfg in [fixed, fluctuating] {
        if cfg.scheme != MeasurementScheme::Nsm {
            return Err(Error::InvalidConfig {
                field: "scheme",
                reason: format!("NSM comparison needs the nsm scheme, got {}", cfg.scheme.name()),
            });
        }
    }
    let (a, b) = rayon::join(|| run_sequence(fixed), || run_sequence(fluctuating));
    Ok((a?, b?))
}

/// Largest population above `n` reached at any step.
pub fn max_population_above(config: &RunConfig, n: usize) -> Result<(RunResult, f64)> {
    let mut worst = 0.0f64;
    let res = run_sequence_observed(config, |_, p| worst = worst.max(population_above(p, n)))?;
    Ok((res, worst))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub multiplier: f64,
    pub cell: usize,
    pub final_p_trap: f64,
    pub cum_prob: f64,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub multiplier: f64,
    pub median_final_p_trap: f64,
    pub median_cum_prob: f64,
    pub convergence_fraction: f64,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub summaries: Vec<SweepSummary>,
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

/// Ensemble runs over spread multipliers (in units of the critical spread).
/// Ensemble member `cell` uses stream `cell` for every multiplier.
pub fn sweep(base: &RunConfig, spread_multipliers: &[f64], ensemble: usize) -> Result<SweepTable> {
    if ensemble == 0 {
        return Err(Error::InvalidConfig {
            field: "ensemble",
            reason: "must be at least 1".into(),
        });
    }
    let cells: Vec<(f64, usize)> = spread_multipliers
        .iter()
        .flat_map(|&m| (0..ensemble).map(move |c| (m, c)))
        .collect();
    let rows: Vec<SweepRow> = cells
        .par_iter()
        .map(|&(multiplier, cell)| {
            let cfg = base
                .with_spread_multiplier(multiplier)
                .with_seed(base.seed.with_stream(cell as u64));
            match run_sequence(&cfg) {
                Ok(res) => {
                    let final_p_trap = res.final_population(base.trap_target);
                    SweepRow {
                        multiplier,
                        cell,
                        final_p_trap,
                        cum_prob: res.cum_prob(),
                        converged: res.terminated_early.is_none() && final_p_trap > CONVERGENCE_THRESHOLD,
                        error: res
                            .terminated_early
                            .map(|t| format!("terminated at k = {}: {}", t.k, t.reason.describe())),
                    }
                }
                Err(e) => SweepRow {
                    multiplier,
                    cell,
                    final_p_trap: f64::NAN,
                    cum_prob: f64::NAN,
                    converged: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let summaries = spread_multipliers
        .iter()
        .enumerate()
        .map(|(i, &multiplier)| {
            let group = &rows[i * ensemble..(i + 1) * ensemble];
            let ok: Vec<&SweepRow> = group.iter().filter(|r| r.final_p_trap.is_finite()).collect();
            let mut finals: Vec<f64> = ok.iter().map(|r| r.final_p_trap).collect();
            let mut cums: Vec<f64> = ok.iter().map(|r| r.cum_prob).collect();
            SweepSummary {
                multiplier,
                median_final_p_trap: median(&mut finals),
                median_cum_prob: median(&mut cums),
                convergence_fraction: group.iter().filter(|r| r.converged).count() as f64 / ensemble as f64,
                errors: group.iter().filter(|r| r.error.is_some()).count(),
            }
        })
        .collect();
    Ok(SweepTable { rows, summaries })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessEstimate {
    pub successes: usize,
    pub trajectories: usize,
}

impl SuccessEstimate {
    pub fn fraction(&self) -> f64 {
        if self.trajectories == 0 {
            return 1.0;
        }
        self.successes as f64 / self.trajectories as f64
    }

    /// Binomial standard deviation of the fraction for a true rate `p`.
    pub fn binomial_sigma(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trajectories as f64).sqrt()
    }
}

/// Fraction of sampled trajectories in which every atom is detected in the
/// desired state. Trajectory `i` uses stream `i` of the configured master
/// seed.
pub fn sampled_success_estimate(config: &RunConfig, trajectories: usize) -> Result<SuccessEstimate> {
    let mut cfg = config.clone();
    cfg.mode = RunMode::Sampled;
    cfg.halt_on_failure = true;
    cfg.validate()?;
    let successes = (0..trajectories)
        .into_par_iter()
        .map(|i| run_sequence(&cfg.with_seed(cfg.seed.with_stream(i as u64))).map(|r| r.succeeded() as usize))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(SuccessEstimate {
        successes,
        trajectories,
    })
}

/// Writes `k,tau_k,T_k,P_k,cum_P,mean_n,delta_n,outcome` rows.
pub fn write_trajectory_csv<W: Write>(mut out: W, steps: &[StepRecord]) -> io::Result<()> {
    writeln!(out, "k,tau_k,T_k,P_k,cum_P,mean_n,delta_n,outcome")?;
    for s in steps {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.k,
            fmt_real(s.tau),
            fmt_real(s.ramsey_time),
            fmt_real(s.success_prob),
            fmt_real(s.cum_prob),
            fmt_real(s.mean_n),
            fmt_real(s.delta_n),
            s.outcome.label()
        )?;
    }
    Ok(())
}

/// Writes `multiplier,cell,final_P_nt,cum_P,converged` rows.
pub fn write_sweep_csv<W: Write>(mut out: W, table: &SweepTable) -> io::Result<()> {
    writeln!(out, "multiplier,cell,final_P_nt,cum_P,converged")?;
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_real(r.multiplier),
            r.cell,
            fmt_real(r.final_p_trap),
            fmt_real(r.cum_prob),
            r.converged
        )?;
    }
    Ok(())
}

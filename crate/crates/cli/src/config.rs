//! Flat key-value run configuration.
//!
//! Files are TOML with one key per line. Time-like quantities carry their
//! unit in the key: `spread_mult_dtau_c` is in units of the critical
//! spread, `spread_frac_tau_bar` in units of the mean interaction time,
//! `omega_per_g` and `g_tau_bar` are dimensionless. Command-line flags
//! override values read from a file.

use std::f64::consts::PI;
use std::path::Path;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use trapsim_core::dynamics::{critical_spread, trapping_time, CouplingParams};
use trapsim_core::experiment::{CmUpdate, InitialField, RunMode, RunSetup, SchemeKind};
use trapsim_core::stochastic::{SeedSpec, TimingLaw, TimingModel};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid value for `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("missing required field `{0}`")]
    Missing(&'static str),
    #[error("cannot read config file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse config file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Core(#[from] trapsim_core::Error),
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Run,
    Classical,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Nsm,
    Elastic,
    Inelastic,
    Superposition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Dist {
    Uniform,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Postselect,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Update {
    Exact,
    LargeN,
}

/// Everything needed to reproduce one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub command: Command,
    pub seed: u64,
    pub atoms: usize,
    pub dist: Dist,
    pub coupling_g: f64,
    /// Spread in units of the critical spread at the trap.
    pub spread_mult_dtau_c: Option<f64>,
    /// Spread as a fraction of the mean interaction time.
    pub spread_frac_tau_bar: Option<f64>,

    pub scheme: Option<Scheme>,
    pub trap: Option<usize>,
    pub q: u32,
    /// Real coherent amplitude; `sqrtN` or `sqrt(N)` accepted.
    pub alpha: Option<String>,
    pub alpha_phase_rad: f64,
    pub fock: Option<usize>,
    pub mode: Mode,
    pub update: Option<Update>,
    pub omega_per_g: f64,
    pub nmax: Option<usize>,
    pub halt_on_failure: bool,
    pub decorrelation: f64,

    pub sweep_mults_dtau_c: Vec<f64>,
    pub ensemble: usize,

    /// Dimensionless mean transit phase `g tau_bar` of the classical map.
    pub g_tau_bar: Option<f64>,
    pub eps_sq_over_4_initial: Option<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            command: Command::Run,
            seed: 0,
            atoms: 2000,
            dist: Dist::Uniform,
            coupling_g: 1.0,
            spread_mult_dtau_c: None,
            spread_frac_tau_bar: None,
            scheme: None,
            trap: None,
            q: 1,
            alpha: None,
            alpha_phase_rad: 0.0,
            fock: None,
            mode: Mode::Postselect,
            update: None,
            omega_per_g: 1.0,
            nmax: None,
            halt_on_failure: true,
            decorrelation: 0.0,
            sweep_mults_dtau_c: Vec::new(),
            ensemble: 1,
            g_tau_bar: None,
            eps_sq_over_4_initial: None,
        }
    }
}

/// Parameters of a classical return-map run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSetup {
    pub epsilon0: f64,
    pub n_steps: usize,
    pub timing: TimingModel,
    pub params: CouplingParams,
    pub seed: SeedSpec,
}

/// `3`, `4.5`, `sqrt21`, `sqrt(21)`.
pub fn parse_alpha(text: &str) -> Result<f64, ConfigError> {
    let t = text.trim();
    let value = if let Some(rest) = t.strip_prefix("sqrt") {
        let inner = rest.trim().trim_start_matches('(').trim_end_matches(')');
        let x: f64 = inner
            .trim()
            .parse()
            .map_err(|_| invalid("alpha", format!("cannot parse `{text}`")))?;
        if x < 0.0 {
            return Err(invalid("alpha", format!("negative radicand in `{text}`")));
        }
        x.sqrt()
    } else {
        t.parse()
            .map_err(|_| invalid("alpha", format!("cannot parse `{text}`")))?
    };
    if !value.is_finite() {
        return Err(invalid("alpha", format!("`{text}` is not finite")));
    }
    Ok(value)
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    fn coupling(&self) -> Result<CouplingParams, ConfigError> {
        CouplingParams::new(self.coupling_g).map_err(|_| invalid("coupling_g", "must be positive"))
    }

    fn initial_field(&self) -> Result<InitialField, ConfigError> {
        match (&self.alpha, self.fock) {
            (Some(_), Some(_)) => Err(invalid("fock", "give either alpha or fock, not both")),
            (None, Some(n)) => Ok(InitialField::Fock(n)),
            (Some(a), None) => {
                let modulus = parse_alpha(a)?;
                Ok(InitialField::Coherent(Complex64::from_polar(
                    modulus,
                    self.alpha_phase_rad,
                )))
            }
            (None, None) => Err(ConfigError::Missing("alpha")),
        }
    }

    /// Spread in units of the critical spread.
    fn spread_mult(&self) -> Result<f64, ConfigError> {
        match (self.spread_mult_dtau_c, self.spread_frac_tau_bar) {
            (Some(_), Some(_)) => Err(invalid(
                "spread_frac_tau_bar",
                "give either spread_mult_dtau_c or spread_frac_tau_bar, not both",
            )),
            (Some(m), None) => Ok(m),
            // tau_bar / dtau_c = 2 q
            (None, Some(f)) => Ok(f * 2.0 * self.q as f64),
            (None, None) => Ok(0.0),
        }
    }

    fn law(&self) -> TimingLaw {
        match self.dist {
            Dist::Uniform => TimingLaw::Uniform,
            Dist::Gaussian => TimingLaw::Gaussian,
        }
    }

    /// Core run description for `run` and `sweep`.
    pub fn run_setup(&self) -> Result<RunSetup, ConfigError> {
        let scheme = self.scheme.ok_or(ConfigError::Missing("scheme"))?;
        let trap = self.trap.ok_or(ConfigError::Missing("trap"))?;
        if self.q == 0 {
            return Err(invalid("q", "must be at least 1"));
        }
        let kind = match scheme {
            Scheme::Nsm => SchemeKind::Nsm,
            Scheme::Elastic => SchemeKind::Elastic,
            Scheme::Inelastic => SchemeKind::Inelastic,
            Scheme::Superposition => SchemeKind::Superposition,
        };
        let mut setup = RunSetup::new(kind, trap, self.initial_field()?, self.atoms);
        setup.q = self.q;
        setup.spread_mult = self.spread_mult()?;
        setup.law = self.law();
        setup.g = self.coupling()?.g();
        setup.omega = self.omega_per_g * self.coupling_g;
        setup.n_max = self.nmax;
        setup.mode = match self.mode {
            Mode::Postselect => RunMode::PostSelected,
            Mode::Sample => RunMode::Sampled,
        };
        setup.seed = SeedSpec::new(self.seed, 0);
        setup.update = self.update.map(|u| match u {
            Update::Exact => CmUpdate::Exact,
            Update::LargeN => CmUpdate::LargeN,
        });
        setup.halt_on_failure = self.halt_on_failure;
        setup.decorrelation = self.decorrelation;
        setup.build()?;
        Ok(setup)
    }

    pub fn classical_setup(&self) -> Result<ClassicalSetup, ConfigError> {
        let params = self.coupling()?;
        let g_tau_bar = self.g_tau_bar.ok_or(ConfigError::Missing("g_tau_bar"))?;
        if !(g_tau_bar > 0.0 && g_tau_bar.is_finite()) {
            return Err(invalid("g_tau_bar", "must be positive"));
        }
        let e4 = self
            .eps_sq_over_4_initial
            .ok_or(ConfigError::Missing("eps_sq_over_4_initial"))?;
        if !(e4 > 0.0 && e4.is_finite()) {
            return Err(invalid("eps_sq_over_4_initial", "must be positive"));
        }
        let tau_bar = g_tau_bar / params.g();
        let spread = match (self.spread_mult_dtau_c, self.spread_frac_tau_bar) {
            (Some(_), _) => {
                return Err(invalid(
                    "spread_mult_dtau_c",
                    "the classical map takes spread_frac_tau_bar",
                ))
            }
            (None, Some(f)) => f * tau_bar,
            (None, None) => 0.0,
        };
        let timing = TimingModel::new(tau_bar, spread, self.law())?;
        Ok(ClassicalSetup {
            epsilon0: 2.0 * e4.sqrt(),
            n_steps: self.atoms,
            timing,
            params,
            seed: SeedSpec::new(self.seed, 0),
        })
    }

    /// Validates the fields the command needs.
    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.command {
            Command::Run => self.run_setup().map(|_| ()),
            Command::Classical => self.classical_setup().map(|_| ()),
            Command::Sweep => {
                self.run_setup()?;
                if self.sweep_mults_dtau_c.is_empty() {
                    return Err(ConfigError::Missing("sweep_mults_dtau_c"));
                }
                if self
                    .sweep_mults_dtau_c
                    .iter()
                    .any(|m| !(*m >= 0.0 && m.is_finite()))
                {
                    return Err(invalid("sweep_mults_dtau_c", "multipliers must be non-negative"));
                }
                if self.ensemble == 0 {
                    return Err(invalid("ensemble", "must be at least 1"));
                }
                Ok(())
            }
        }
    }

    /// Mean interaction time and spread of a quantum run, in units of 1/g.
    pub fn quantum_times(&self) -> Result<(f64, f64), ConfigError> {
        let setup = self.run_setup()?;
        let g = self.coupling()?;
        Ok((
            trapping_time(setup.trap_target, setup.q, g),
            setup.spread_mult * critical_spread(setup.trap_target, g),
        ))
    }
}

/// `2 pi / sqrt(199)`, the fixed transit phase of the classical figure.
pub fn classical_fixed_point_phase() -> f64 {
    2.0 * PI / 199f64.sqrt()
}

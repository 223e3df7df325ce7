//! Running a configuration and writing its outputs.

use std::fs;
use std::path::Path;
use std::time::Instant;

use thiserror::Error;
use trapsim_core::classical::{self, ClassicalRecord, ReturnMapIter};
use trapsim_core::experiment::{self, run_sequence};
use trapsim_core::fock::write_distribution_csv;

use crate::config::{Command, Config, ConfigError};
use crate::output::{write_file, Manifest, Summary, SweepLine};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TERMINATED: i32 = 3;

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Simulation(#[from] trapsim_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => EXIT_INVALID,
            AppError::Simulation(trapsim_core::Error::InvalidConfig { .. })
            | AppError::Simulation(trapsim_core::Error::InvalidTiming(_))
            | AppError::Simulation(trapsim_core::Error::InvalidTruncation { .. }) => EXIT_INVALID,
            _ => EXIT_FAILURE,
        }
    }
}

/// Validates, runs and writes `config` into `out_dir`, including the
/// manifest. The manifest's `exit_code` is nonzero when the run stopped
/// early.
pub fn execute(config: &Config, preset: Option<&str>, out_dir: &Path) -> Result<Manifest, AppError> {
    config.validate()?;
    fs::create_dir_all(out_dir)?;
    let start = Instant::now();
    let (summary, files, status, exit_code) = match config.command {
        Command::Run => run_quantum(config, out_dir)?,
        Command::Sweep => run_sweep(config, out_dir)?,
        Command::Classical => run_classical(config, out_dir)?,
    };
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        preset: preset.map(str::to_string),
        master_seed: config.seed,
        status,
        exit_code,
        duration_s: start.elapsed().as_secs_f64(),
        summary,
        files,
        config: config.clone(),
    };
    manifest.write(out_dir)?;
    Ok(manifest)
}

type Produced = (Summary, Vec<crate::output::FileDigest>, String, i32);

fn run_quantum(config: &Config, out_dir: &Path) -> Result<Produced, AppError> {
    let cfg = config.run_setup()?.build()?;
    let result = run_sequence(&cfg)?;
    let files = vec![
        write_file(out_dir, "trajectory.csv", |w| {
            experiment::write_trajectory_csv(w, &result.steps)
        })?,
        write_file(out_dir, "initial_distribution.csv", |w| {
            write_distribution_csv(w, &result.initial_distribution)
        })?,
        write_file(out_dir, "distribution.csv", |w| {
            write_distribution_csv(w, &result.final_distribution)
        })?,
    ];
    let stats = result.final_stats();
    let summary = Summary {
        steps_completed: Some(result.steps.len()),
        n_max: Some(cfg.n_max),
        tau_bar: Some(cfg.timing.tau_bar),
        spread: Some(cfg.timing.spread),
        final_mean_n: Some(stats.mean_n),
        final_delta_n: Some(stats.delta_n),
        final_p_trap: Some(result.final_population(cfg.trap_target)),
        cum_p: Some(result.cum_prob()),
        log_cum_p: Some(result.log_cum_prob()),
        max_norm_error: Some(result.max_norm_error),
        first_failure_k: result.failed_at,
        ..Summary::default()
    };
    let (status, code) = match result.terminated_early {
        Some(t) => (
            format!(
                "terminated at k = {}: {} (P = {:e})",
                t.k,
                t.reason.describe(),
                t.prob
            ),
            EXIT_TERMINATED,
        ),
        None => ("ok".to_string(), EXIT_OK),
    };
    Ok((summary, files, status, code))
}

fn run_sweep(config: &Config, out_dir: &Path) -> Result<Produced, AppError> {
    let base = config.run_setup()?.build()?;
    let table = experiment::sweep(&base, &config.sweep_mults_dtau_c, config.ensemble)?;
    let files = vec![write_file(out_dir, "sweep.csv", |w| {
        experiment::write_sweep_csv(w, &table)
    })?];
    let errors: usize = table.summaries.iter().map(|s| s.errors).sum();
    let summary = Summary {
        n_max: Some(base.n_max),
        tau_bar: Some(base.timing.tau_bar),
        sweep: table
            .summaries
            .iter()
            .map(|s| SweepLine {
                multiplier: s.multiplier,
                median_final_p_trap: s.median_final_p_trap,
                median_cum_p: s.median_cum_prob,
                convergence_fraction: s.convergence_fraction,
                errors: s.errors,
            })
            .collect(),
        ..Summary::default()
    };
    let status = if errors == 0 {
        "ok".to_string()
    } else {
        format!("{errors} cells stopped early or failed")
    };
    Ok((summary, files, status, EXIT_OK))
}

fn run_classical(config: &Config, out_dir: &Path) -> Result<Produced, AppError> {
    let s = config.classical_setup()?;
    let records: Vec<ClassicalRecord> = ReturnMapIter::new(s.epsilon0, s.timing, s.params, s.seed)?
        .take(s.n_steps)
        .collect();
    let files = vec![write_file(out_dir, "classical.csv", |w| {
        classical::write_trajectory_csv(w, &records)
    })?];
    let summary = Summary {
        steps_completed: Some(records.len()),
        tau_bar: Some(s.timing.tau_bar),
        spread: Some(s.timing.spread),
        final_eps_sq_over_4: records.last().map(ClassicalRecord::eps_sq_over_4),
        ..Summary::default()
    };
    let (status, code) = if records.len() < s.n_steps {
        (
            format!("map singular after {} steps", records.len()),
            EXIT_TERMINATED,
        )
    } else {
        ("ok".to_string(), EXIT_OK)
    };
    Ok((summary, files, status, code))
}

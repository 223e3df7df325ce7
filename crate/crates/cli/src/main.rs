use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trapsim::app::{execute, EXIT_INVALID};
use trapsim::config::{Command, Config, Dist, Mode, Scheme, Update};
use trapsim::presets::{self, PRESETS};

#[derive(Parser)]
#[command(
    name = "trapsim",
    version,
    about = "Fock-state trapping simulator for the micromaser"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one atom sequence.
    Run(CommonArgs),
    /// Iterate the classical return map.
    Classical(CommonArgs),
    /// Median final trap population over ensembles, per spread multiplier.
    Sweep(SweepArgs),
    /// List presets, or run one.
    Preset(PresetArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Base configuration file (flat TOML); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from a named preset; flags override it.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum)]
    scheme: Option<Scheme>,
    /// Target photon number n_t.
    #[arg(long)]
    trap: Option<usize>,
    /// Trapping order: tau = q pi / (g sqrt(n_t + 1)).
    #[arg(long)]
    q: Option<u32>,
    /// Coherent amplitude, e.g. 3 or sqrt21.
    #[arg(long)]
    alpha: Option<String>,
    /// Start from a Fock state instead of a coherent state.
    #[arg(long)]
    fock: Option<usize>,
    /// Number of atoms (or return-map iterations).
    #[arg(long)]
    atoms: Option<usize>,
    /// Spread in units of the critical spread.
    #[arg(long)]
    spread_mult: Option<f64>,
    /// Spread as a fraction of the mean transit time.
    #[arg(long)]
    spread_frac: Option<f64>,
    #[arg(long, value_enum)]
    dist: Option<Dist>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    update: Option<Update>,
    /// Ramsey Rabi frequency in units of g.
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    nmax: Option<usize>,
    /// Classical mean transit phase g tau_bar.
    #[arg(long)]
    g_tau: Option<f64>,
    /// Classical initial eps^2 / 4.
    #[arg(long)]
    eps_sq_over_4: Option<f64>,
    /// Keep sampling after a failed detection.
    #[arg(long)]
    no_halt: bool,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args, Clone)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated spread multipliers.
    #[arg(long, value_delimiter = ',')]
    mults: Option<Vec<f64>>,
    #[arg(long)]
    ensemble: Option<usize>,
}

#[derive(Args, Clone)]
struct PresetArgs {
    /// Preset name.
    name: Option<String>,
    #[arg(long)]
    list: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long)]
    print_config: bool,
}

fn resolve(command: Command, a: &CommonArgs) -> anyhow::Result<Config> {
    let mut c = match (&a.preset, &a.config) {
        (Some(_), Some(_)) => anyhow::bail!("give either --preset or --config, not both"),
        (Some(name), None) => presets::preset_config(name)?,
        (None, Some(path)) => Config::load(path)?,
        (None, None) => Config::default(),
    };
    c.command = command;
    macro_rules! set {
        ($($flag:ident => $field:ident),* $(,)?) => {
            $(if let Some(v) = a.$flag.clone() { c.$field = v.into(); })*
        };
    }
    set!(seed => seed, atoms => atoms, dist => dist, q => q, mode => mode, omega => omega_per_g);
    set!(scheme => scheme, trap => trap, update => update, nmax => nmax, g_tau => g_tau_bar,
         eps_sq_over_4 => eps_sq_over_4_initial);
    if let Some(alpha) = &a.alpha {
        c.alpha = Some(alpha.clone());
        c.fock = None;
    }
    if let Some(n) = a.fock {
        c.fock = Some(n);
        c.alpha = None;
    }
    if let Some(m) = a.spread_mult {
        c.spread_mult_dtau_c = Some(m);
        c.spread_frac_tau_bar = None;
    }
    if let Some(f) = a.spread_frac {
        c.spread_frac_tau_bar = Some(f);
        c.spread_mult_dtau_c = None;
    }
    if a.no_halt {
        c.halt_on_failure = false;
    }
    Ok(c)
}

fn run(config: Config, preset: Option<&str>, out_dir: &Path, print_only: bool) -> ExitCode {
    if print_only {
        let _ = write!(std::io::stdout(), "{}", config.to_toml_string());
        return ExitCode::SUCCESS;
    }
    match execute(&config, preset, out_dir) {
        Ok(m) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}: {}", out_dir.display(), m.status);
            for f in &m.files {
                let _ = writeln!(out, "  {}  {}", f.sha256, f.name);
            }
            ExitCode::from(m.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common, extra) = match cli.command {
        Cmd::Run(a) => (Command::Run, a, None),
        Cmd::Classical(a) => (Command::Classical, a, None),
        Cmd::Sweep(s) => (Command::Sweep, s.common.clone(), Some(s)),
        Cmd::Preset(p) => {
            if p.list || p.name.is_none() {
                let mut out = std::io::stdout().lock();
                for preset in PRESETS {
                    let _ = writeln!(out, "{:<8} {}", preset.name, preset.summary);
                }
                return ExitCode::SUCCESS;
            }
            let name = p.name.as_deref().unwrap_or_default();
            let mut config = match presets::preset_config(name) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_INVALID as u8);
                }
            };
            if let Some(seed) = p.seed {
                config.seed = seed;
            }
            return run(config, Some(name), &p.out_dir, p.print_config);
        }
    };
    let mut config = match resolve(command, &common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    if let Some(s) = extra {
        if let Some(m) = s.mults {
            config.sweep_mults_dtau_c = m;
        }
        if let Some(e) = s.ensemble {
            config.ensemble = e;
        }
    }
    run(
        config,
        common.preset.as_deref(),
        &common.out_dir,
        common.print_config,
    )
}

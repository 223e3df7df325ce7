//! Named scenarios reproducing the standard figure set.

use crate::config::{classical_fixed_point_phase, Command, Config, Scheme};

/// Truncation for the n_t = 138 pumping runs; roomy enough that the
/// fluctuating run never reaches the guard band.
pub const FIG1_N_MAX: usize = 4 * (138 + 1) + 20;

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    build: fn() -> Config,
}

impl Preset {
    pub fn config(&self) -> Config {
        (self.build)()
    }
}

fn fig1a() -> Config {
    Config {
        scheme: Some(Scheme::Nsm),
        trap: Some(138),
        alpha: Some("3".into()),
        atoms: 5000,
        nmax: Some(FIG1_N_MAX),
        ..Config::default()
    }
}

fn fig1b() -> Config {
    Config {
        spread_frac_tau_bar: Some(0.01),
        ..fig1a()
    }
}

fn fig1c() -> Config {
    Config {
        command: Command::Classical,
        g_tau_bar: Some(classical_fixed_point_phase()),
        eps_sq_over_4_initial: Some(9.0),
        atoms: 10_000,
        ..Config::default()
    }
}

fn fig1d() -> Config {
    Config {
        spread_frac_tau_bar: Some(0.01),
        atoms: 20_000,
        ..fig1c()
    }
}

fn fig2(mult: f64) -> Config {
    Config {
        scheme: Some(Scheme::Elastic),
        trap: Some(20),
        alpha: Some("3".into()),
        spread_mult_dtau_c: Some(mult),
        atoms: 2000,
        ..Config::default()
    }
}

fn fig3(mult: f64) -> Config {
    Config {
        scheme: Some(Scheme::Superposition),
        trap: Some(21),
        alpha: Some("sqrt21".into()),
        spread_mult_dtau_c: Some(mult),
        atoms: 2000,
        ..Config::default()
    }
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1a",
        summary: "no-measurement pumping to n_t = 138, fixed transit time",
        build: fig1a,
    },
    Preset {
        name: "fig1b",
        summary: "no-measurement pumping to n_t = 138, 1% uniform spread",
        build: fig1b,
    },
    Preset {
        name: "fig1c",
        summary: "classical return map at g tau = 2 pi / sqrt(199), fixed transit time",
        build: fig1c,
    },
    Preset {
        name: "fig1d",
        summary: "classical return map, 1% uniform spread",
        build: fig1d,
    },
    Preset {
        name: "fig2a",
        summary: "elastic post-selection to n_t = 20, spread 0.1 critical",
        build: || fig2(0.1),
    },
    Preset {
        name: "fig2b",
        summary: "elastic post-selection to n_t = 20, spread 1.0 critical",
        build: || fig2(1.0),
    },
    Preset {
        name: "fig3ab",
        summary: "superposition post-selection to n_t = 21, spread 0.1 critical",
        build: || fig3(0.1),
    },
    Preset {
        name: "fig3cd",
        summary: "superposition post-selection to n_t = 21, spread 2 critical",
        build: || fig3(2.0),
    },
    Preset {
        name: "fig4",
        summary: "success probability of the spread-2 superposition run",
        build: || fig3(2.0),
    },
];

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[derive(Debug, thiserror::Error)]
#[error("unknown preset `{name}`; valid presets: {}", names().join(", "))]
pub struct UnknownPreset {
    pub name: String,
}

pub fn preset_config(name: &str) -> Result<Config, UnknownPreset> {
    find(name).map(Preset::config).ok_or_else(|| UnknownPreset {
        name: name.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for p in PRESETS {
            p.config()
                .validate()
                .unwrap_or_else(|e| panic!("{}: {e}", p.name));
        }
    }

    #[test]
    fn fig1b_spread_is_one_percent_of_tau_bar() {
        let cfg = preset_config("fig1b")
            .unwrap()
            .run_setup()
            .unwrap()
            .build()
            .unwrap();
        assert!((cfg.timing.spread / cfg.timing.tau_bar - 0.01).abs() < 1e-15);
        assert_eq!(cfg.n_max, FIG1_N_MAX);
    }

    #[test]
    fn unknown_name_lists_valid_ones() {
        let err = preset_config("fig9").unwrap_err().to_string();
        assert!(err.contains("fig9") && err.contains("fig3cd"), "{err}");
    }
}

use std::path::Path;
use std::process::{Command, Output};

use trapsim::output::{sha256_hex, Manifest, MANIFEST_NAME};
use trapsim::presets::names;

fn trapsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trapsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path) -> Manifest {
    Manifest::load(&dir.join(MANIFEST_NAME)).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn preset_list_names_every_preset() {
    let out = trapsim(&["preset", "--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in names() {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
}

#[test]
fn unknown_preset_is_rejected() {
    let out = trapsim(&["preset", "fig7"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("fig7") && err.contains("fig2a"), "{err}");
}

#[test]
fn missing_trap_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = trapsim(&[
        "run",
        "--scheme",
        "elastic",
        "--alpha",
        "3",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`trap`"), "{}", stderr(&out));
    assert!(!dir.path().join(MANIFEST_NAME).exists());
}

#[test]
fn manifest_digests_match_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = trapsim(&["preset", "fig2a", "--seed", "4", "--out-dir", d]);
    assert!(out.status.success(), "{}", stderr(&out));
    let m = manifest(dir.path());
    assert_eq!(m.preset.as_deref(), Some("fig2a"));
    assert_eq!(m.master_seed, 4);
    assert_eq!(m.exit_code, 0);
    let names: Vec<&str> = m.files.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(
        names,
        ["trajectory.csv", "initial_distribution.csv", "distribution.csv"]
    );
    for f in &m.files {
        let bytes = std::fs::read(dir.path().join(&f.name)).unwrap();
        assert_eq!(sha256_hex(&bytes), f.sha256);
        assert_eq!(bytes.len() as u64, f.bytes);
    }
    let traj = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(traj.starts_with("k,tau_k,T_k,P_k,cum_P,mean_n,delta_n,outcome\n"));
    assert_eq!(traj.lines().count(), 2001);
}

#[test]
fn same_seed_same_bytes_other_seed_differs() {
    let run = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let out = trapsim(&["preset", "fig2b", "--seed", seed, "--out-dir", d]);
        assert!(out.status.success());
        manifest(dir.path()).files
    };
    assert_eq!(run("17"), run("17"));
    assert_ne!(run("17")[0].sha256, run("18")[0].sha256);
}

#[test]
fn echoed_config_reproduces_the_run() {
    let first = tempfile::tempdir().unwrap();
    let out = trapsim(&[
        "run",
        "--scheme",
        "superposition",
        "--trap",
        "21",
        "--alpha",
        "sqrt21",
        "--spread-mult",
        "2",
        "--atoms",
        "300",
        "--seed",
        "5",
        "--out-dir",
        first.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let m1 = manifest(first.path());

    let cfg_path = first.path().join("echo.toml");
    std::fs::write(&cfg_path, m1.config.to_toml_string()).unwrap();
    let second = tempfile::tempdir().unwrap();
    let out = trapsim(&[
        "run",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out-dir",
        second.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let m2 = manifest(second.path());
    assert_eq!(m1.config, m2.config);
    assert_eq!(m1.files, m2.files);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("base.toml");
    std::fs::write(
        &cfg,
        "scheme = \"elastic\"\ntrap = 20\nalpha = \"3\"\natoms = 50\nspread_mult_dtau_c = 0.1\nseed = 1\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = trapsim(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--atoms",
        "20",
        "--seed",
        "9",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let m = manifest(&out_dir);
    assert_eq!(m.config.atoms, 20);
    assert_eq!(m.config.seed, 9);
    assert_eq!(m.config.trap, Some(20));
    assert_eq!(m.summary.steps_completed, Some(20));
}

#[test]
fn impossible_postselection_exits_nonzero_with_outputs() {
    // theta_0 = pi/2 at the n_t = 3 trapping time: the vacuum never stays elastic
    let dir = tempfile::tempdir().unwrap();
    let out = trapsim(&[
        "run",
        "--scheme",
        "elastic",
        "--trap",
        "3",
        "--fock",
        "0",
        "--atoms",
        "5",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    let m = manifest(dir.path());
    assert_eq!(m.exit_code, 3);
    assert!(m.status.contains("k = 1"), "{}", m.status);
}

#[test]
fn sweep_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out = trapsim(&[
        "sweep",
        "--scheme",
        "elastic",
        "--trap",
        "20",
        "--alpha",
        "3",
        "--atoms",
        "200",
        "--mults",
        "0.1,1",
        "--ensemble",
        "3",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 3);
    let m = manifest(dir.path());
    assert_eq!(m.summary.sweep.len(), 2);
}

#[test]
fn classical_preset_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = trapsim(&["preset", "fig1c", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("classical.csv")).unwrap();
    assert!(csv.starts_with("k,tau_k,epsilon,eps_sq_over_4\n"));
    assert_eq!(csv.lines().count(), 10_001);
    let e4 = manifest(dir.path()).summary.final_eps_sq_over_4.unwrap();
    assert!(e4 > 49.0 && e4 < 49.75, "{e4}");
}

#[test]
fn print_config_is_loadable() {
    let out = trapsim(&["preset", "fig3cd", "--print-config"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let cfg = trapsim::Config::from_toml_str(&text).unwrap();
    assert_eq!(cfg, trapsim::presets::preset_config("fig3cd").unwrap());
}

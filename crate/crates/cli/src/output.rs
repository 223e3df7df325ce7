//! Output files and the run manifest.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Config;

pub const MANIFEST_NAME: &str = "manifest.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepLine {
    pub multiplier: f64,
    pub median_final_p_trap: f64,
    pub median_cum_p: f64,
    pub convergence_fraction: f64,
    pub errors: usize,
}

/// Headline numbers of a run. Fields not produced by a command are absent.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub steps_completed: Option<usize>,
    pub n_max: Option<usize>,
    pub tau_bar: Option<f64>,
    pub spread: Option<f64>,
    pub final_mean_n: Option<f64>,
    pub final_delta_n: Option<f64>,
    pub final_p_trap: Option<f64>,
    pub cum_p: Option<f64>,
    pub log_cum_p: Option<f64>,
    pub max_norm_error: Option<f64>,
    pub first_failure_k: Option<usize>,
    pub final_eps_sq_over_4: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepLine>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub preset: Option<String>,
    pub master_seed: u64,
    pub status: String,
    pub exit_code: i32,
    pub duration_s: f64,
    pub summary: Summary,
    pub files: Vec<FileDigest>,
    pub config: Config,
}

impl Manifest {
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("manifest is always representable as TOML")
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        Ok(toml::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn write(&self, dir: &Path) -> io::Result<()> {
        fs::write(dir.join(MANIFEST_NAME), self.to_toml_string())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Renders a file through `render`, writes it to `dir/name` and returns its
/// digest.
pub fn write_file<F>(dir: &Path, name: &str, render: F) -> io::Result<FileDigest>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let mut buf = Vec::new();
    render(&mut buf)?;
    let mut file = BufWriter::new(fs::File::create(dir.join(name))?);
    file.write_all(&buf)?;
    file.flush()?;
    Ok(FileDigest {
        name: name.to_string(),
        bytes: buf.len() as u64,
        sha256: sha256_hex(&buf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn manifest_round_trip() {
        let m = Manifest {
            tool: "trapsim".into(),
            version: "0.1.0".into(),
            preset: Some("fig2a".into()),
            master_seed: 3,
            status: "ok".into(),
            exit_code: 0,
            duration_s: 0.25,
            summary: Summary {
                final_p_trap: Some(0.999),
                sweep: vec![SweepLine {
                    multiplier: 0.1,
                    ..SweepLine::default()
                }],
                ..Summary::default()
            },
            files: vec![FileDigest {
                name: "a.csv".into(),
                bytes: 3,
                sha256: sha256_hex(b"abc"),
            }],
            config: Config::default(),
        };
        let back: Manifest = toml::from_str(&m.to_toml_string()).unwrap();
        assert_eq!(back, m);
    }
}

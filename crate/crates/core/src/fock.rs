//! Truncated Fock-space field states.
//!
//! A [`FieldState`] stores the complex amplitudes `c_n` of a single field
//! mode over the photon numbers `0..=n_max`. States built by the
//! constructors here are normalized; [`FieldState::from_amplitudes`] keeps
//! whatever it is given so that projected (unnormalized) amplitudes can be
//! carried around until [`FieldState::renormalize`] is called.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmt_real;

/// Largest pre-normalization deficit accepted by [`FieldState::coherent`].
pub const MAX_COHERENT_LEAKAGE: f64 = 1e-6;

/// Norms at or below this value cannot be renormalized.
pub const MIN_RENORMALIZABLE: f64 = 1e-12;

/// Population allowed in the top [`GUARD_LEVELS`] Fock levels before a run
/// is aborted.
pub const LEAKAGE_GUARD: f64 = 1e-8;
pub const GUARD_LEVELS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    amplitudes: Vec<Complex64>,
}

/// Moments of a photon-number distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldStats {
    pub mean_n: f64,
    /// rms photon number, `sqrt(<n^2> - <n>^2)`.
    pub delta_n: f64,
    pub distribution: Vec<f64>,
}

impl FieldState {
    /// Wraps raw amplitudes without normalizing them.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidTruncation {
                n_max: amplitudes.len().saturating_sub(1),
            });
        }
        Ok(Self { amplitudes })
    }

    pub fn vacuum(n_max: usize) -> Result<Self> {
        Self::fock(0, n_max)
    }

    /// The number state `|n>`.
    pub fn fock(n: usize, n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidTruncation { n_max });
        }
        if n > n_max {
            return Err(Error::LevelOutOfRange { n, n_max });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_max + 1];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Truncated coherent state `|alpha>`, renormalized over `0..=n_max`.
    ///
    /// Returns the state together with the truncation leakage, the Poisson
    /// weight that lies above `n_max`. Amplitudes smaller than machine
    /// epsilon are flushed to zero.
    pub fn coherent(alpha: Complex64, n_max: usize) -> Result<(Self, f64)> {
        if n_max < 1 {
            return Err(Error::InvalidTruncation { n_max });
        }
        let modulus = alpha.norm();
        if modulus == 0.0 {
            return Ok((Self::vacuum(n_max)?, 0.0));
        }
        let phase = alpha.arg();
        let ln_mod = modulus.ln();
        let mean = modulus * modulus;

        // log|c_n| by the recurrence c_{n+1} = c_n alpha / sqrt(n+1)
        let tail_end = n_max.max((mean + 20.0 * modulus + 50.0).ceil() as usize);
        let mut log_amp = Vec::with_capacity(tail_end + 1);
        let mut current = -0.5 * mean;
        log_amp.push(current);
        for n in 0..tail_end {
            current += ln_mod - 0.5 * ((n + 1) as f64).ln();
            log_amp.push(current);
        }

        // summed from the far end so that leakage is monotone in n_max
        let leakage: f64 = log_amp[n_max + 1..]
            .iter()
            .rev()
            .fold(0.0, |acc, &l| acc + (2.0 * l).exp());
        if leakage > MAX_COHERENT_LEAKAGE {
            return Err(Error::TruncationTooSmall {
                alpha_abs: modulus,
                n_max,
                leakage,
            });
        }

        let amplitudes = log_amp[..=n_max]
            .iter()
            .enumerate()
            .map(|(n, &l)| {
                let m = l.exp();
                if m < f64::EPSILON {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::from_polar(m, phase * n as f64)
                }
            })
            .collect();
        let state = Self { amplitudes }.renormalize()?;
        Ok((state, leakage))
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amplitudes[n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn stats(&self) -> FieldStats {
        stats(&self.probabilities())
    }

    /// Rescales to unit norm, keeping relative phases.
    pub fn renormalize(&self) -> Result<Self> {
        let norm_sqr = self.norm_sqr();
        if norm_sqr.is_nan() || norm_sqr <= MIN_RENORMALIZABLE {
            return Err(Error::ZeroNorm { norm_sqr });
        }
        let inv = norm_sqr.sqrt().recip();
        Ok(Self {
            amplitudes: self.amplitudes.iter().map(|c| c * inv).collect(),
        })
    }

    /// Total population in levels strictly above `n`.
    pub fn population_above(&self, n: usize) -> f64 {
        population_above(&self.probabilities(), n)
    }
}

/// Mean and rms photon number of a population list `P(n)`.
pub fn stats(distribution: &[f64]) -> FieldStats {
    let mean_n: f64 = distribution.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let variance: f64 = distribution
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let d = n as f64 - mean_n;
            d * d * p
        })
        .sum();
    FieldStats {
        mean_n,
        delta_n: variance.max(0.0).sqrt(),
        distribution: distribution.to_vec(),
    }
}

pub fn population_above(distribution: &[f64], n: usize) -> f64 {
    distribution.iter().skip(n + 1).sum()
}

/// Population held by the top [`GUARD_LEVELS`] levels.
pub fn top_population(distribution: &[f64]) -> f64 {
    distribution.iter().rev().take(GUARD_LEVELS).sum()
}

/// Default truncation for a target trap `n_t`.
pub fn default_n_max(trap_target: usize) -> usize {
    let margin = (6.0 * ((trap_target + 1) as f64).sqrt()).ceil() as usize;
    trap_target + margin.max(20)
}

/// Truncation large enough to hold a coherent state of modulus `alpha_abs`
/// with a negligible tail.
pub fn coherent_n_max(alpha_abs: f64) -> usize {
    (alpha_abs * alpha_abs + 10.0 * alpha_abs + 10.0).ceil() as usize
}

/// Writes `n,P(n)` rows.
pub fn write_distribution_csv<W: Write>(mut out: W, distribution: &[f64]) -> io::Result<()> {
    writeln!(out, "n,P(n)")?;
    for (n, p) in distribution.iter().enumerate() {
        writeln!(out, "{},{}", n, fmt_real(*p))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Poisson moments computed in log space, independent of the
    // amplitude recurrence.
    fn poisson_moments(mean: f64, terms: usize) -> (f64, f64) {
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        let mut ln_fact = 0.0;
        for n in 0..terms {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            let p = (n as f64 * mean.ln() - mean - ln_fact).exp();
            m1 += n as f64 * p;
            m2 += (n * n) as f64 * p;
        }
        (m1, (m2 - m1 * m1).sqrt())
    }

    #[test]
    fn vacuum_coherent() {
        let (s, leak) = FieldState::coherent(c(0.0, 0.0), 10).unwrap();
        assert_eq!(leak, 0.0);
        assert_eq!(s.amplitude(0), c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == c(0.0, 0.0)));
    }

    #[test]
    fn coherent_means_match_poisson() {
        let (m9, d9) = poisson_moments(9.0, 200);
        let (s, _) = FieldState::coherent(c(3.0, 0.0), 60).unwrap();
        let st = s.stats();
        assert_abs_diff_eq!(st.mean_n, 9.0, epsilon = 1e-6);
        assert_abs_diff_eq!(st.mean_n, m9, epsilon = 1e-6);
        assert_abs_diff_eq!(st.delta_n, d9, epsilon = 1e-6);
        assert_abs_diff_eq!(st.delta_n, 3.0, epsilon = 1e-6);

        let (s, _) = FieldState::coherent(c(21f64.sqrt(), 0.0), 80).unwrap();
        assert_abs_diff_eq!(s.stats().mean_n, 21.0, epsilon = 1e-6);
    }

    #[test]
    fn coherent_phase_follows_alpha() {
        let alpha = Complex64::from_polar(2.0, 0.7);
        let (s, _) = FieldState::coherent(alpha, 40).unwrap();
        let r = s.amplitude(3) / s.amplitude(2);
        assert_abs_diff_eq!(r.arg(), 0.7, epsilon = 1e-12);
    }

    #[test]
    fn coherent_rejects_small_truncation() {
        let err = FieldState::coherent(c(3.0, 0.0), 10).unwrap_err();
        assert!(matches!(err, Error::TruncationTooSmall { n_max: 10, .. }));
    }

    #[test]
    fn coherent_leakage_monotone_in_truncation() {
        let alpha = c(21f64.sqrt(), 0.0);
        let mut last = f64::INFINITY;
        for n_max in 50..120 {
            let (_, leak) = FieldState::coherent(alpha, n_max).unwrap();
            assert!(leak <= last, "n_max = {n_max}: {leak} > {last}");
            last = leak;
        }
    }

    #[test]
    fn fock_states() {
        let v = FieldState::fock(0, 5).unwrap();
        assert_eq!(v, FieldState::vacuum(5).unwrap());
        let s = FieldState::fock(21, 40).unwrap();
        assert_eq!(s.probabilities()[21], 1.0);
        let st = s.stats();
        assert_eq!(st.mean_n, 21.0);
        assert_eq!(st.delta_n, 0.0);
        assert_eq!(
            FieldState::fock(41, 40).unwrap_err(),
            Error::LevelOutOfRange { n: 41, n_max: 40 }
        );
        assert!(FieldState::fock(0, 0).is_err());
    }

    #[test]
    fn two_point_stats() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = FieldState::from_amplitudes(vec![c(h, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        let st = s.stats();
        assert_abs_diff_eq!(st.mean_n, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(st.delta_n, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn renormalize_examples() {
        let s = FieldState::from_amplitudes(vec![c(0.5, 0.0), c(0.0, 0.0)])
            .unwrap()
            .renormalize()
            .unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);

        let s = FieldState::from_amplitudes(vec![c(0.3, 0.0), c(0.0, 0.4)])
            .unwrap()
            .renormalize()
            .unwrap();
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitude(1).arg(), std::f64::consts::FRAC_PI_2, epsilon = 1e-15);

        let zero = FieldState::from_amplitudes(vec![c(0.0, 0.0); 4]).unwrap();
        assert!(matches!(zero.renormalize(), Err(Error::ZeroNorm { .. })));
    }

    #[test]
    fn truncation_policy() {
        assert_eq!(default_n_max(20), 48);
        assert_eq!(default_n_max(0), 20);
        assert_eq!(default_n_max(138), 138 + 71);
        assert!(coherent_n_max(21f64.sqrt()) >= 67);
    }

    #[test]
    fn distribution_csv_layout() {
        let mut buf = Vec::new();
        write_distribution_csv(&mut buf, &[0.25, 0.75]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "n,P(n)");
        assert_eq!(lines[1], "0,2.5000000000000000e-1");
        assert_eq!(lines[2].split(',').nth(1).unwrap().parse::<f64>().unwrap(), 0.75);
    }

    proptest! {
        #[test]
        fn constructors_are_normalized(re in -4.0f64..4.0, im in -4.0f64..4.0, extra in 0usize..40) {
            let alpha = c(re, im);
            let n_max = coherent_n_max(alpha.norm()) + extra;
            let (s, leak) = FieldState::coherent(alpha, n_max).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
            prop_assert!(leak <= MAX_COHERENT_LEAKAGE);
        }

        #[test]
        fn renormalize_keeps_ratios(v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..30)) {
            let amps: Vec<_> = v.iter().map(|&(a, b)| c(a, b)).collect();
            let s = FieldState::from_amplitudes(amps.clone()).unwrap();
            prop_assume!(s.norm_sqr() > 1e-6);
            let r = s.renormalize().unwrap();
            prop_assert!((r.norm_sqr() - 1.0).abs() < 1e-12);
            let scale = s.norm_sqr().sqrt();
            for (a, b) in amps.iter().zip(r.amplitudes()) {
                prop_assert!((a - b * scale).norm() < 1e-12);
            }
        }

        #[test]
        fn fock_delta_is_zero(n in 0usize..300) {
            let s = FieldState::fock(n, n + 1).unwrap();
            prop_assert_eq!(s.stats().delta_n, 0.0);
        }
    }
}

//! Fluctuating interaction times.
//!
//! Each atom draws a transit time `tau_k`; the Ramsey-zone time is tied to
//! it as `T_k = r tau_k` (one velocity per atom, fixed path lengths).
//! Random streams are ChaCha8 generators keyed by a [`SeedSpec`], so every
//! trajectory is reproducible on any platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

pub type Stream = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimingLaw {
    /// Uniform on `[tau_bar - spread/2, tau_bar + spread/2]`.
    Uniform,
    /// Normal with the uniform law's rms, `spread / sqrt(12)`.
    Gaussian,
}

impl TimingLaw {
    pub fn name(&self) -> &'static str {
        match self {
            TimingLaw::Uniform => "uniform",
            TimingLaw::Gaussian => "gaussian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingModel {
    pub tau_bar: f64,
    /// Full width of the uniform law.
    pub spread: f64,
    pub law: TimingLaw,
    /// `T_k = ramsey_ratio * tau_k`; zero when there is no Ramsey zone.
    pub ramsey_ratio: f64,
    /// Fraction of `T_k` driven by an independent transit time. Zero keeps
    /// `T_k` exactly proportional to `tau_k`.
    pub decorrelation: f64,
}

/// One atom's times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomTiming {
    pub tau: f64,
    pub ramsey_time: f64,
}

impl TimingModel {
    pub fn fixed(tau_bar: f64) -> Self {
        Self {
            tau_bar,
            spread: 0.0,
            law: TimingLaw::Uniform,
            ramsey_ratio: 0.0,
            decorrelation: 0.0,
        }
    }

    pub fn new(tau_bar: f64, spread: f64, law: TimingLaw) -> Result<Self> {
        let model = Self {
            tau_bar,
            spread,
            law,
            ramsey_ratio: 0.0,
            decorrelation: 0.0,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn with_ramsey_ratio(mut self, ratio: f64) -> Self {
        self.ramsey_ratio = ratio;
        self
    }

    pub fn with_decorrelation(mut self, d: f64) -> Self {
        self.decorrelation = d;
        self
    }

    /// Standard deviation of `tau_k`, shared by both laws.
    pub fn rms(&self) -> f64 {
        self.spread / 12f64.sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTiming(msg));
        if !(self.tau_bar > 0.0 && self.tau_bar.is_finite()) {
            return bad(format!("tau_bar must be positive, got {}", self.tau_bar));
        }
        if !(self.spread >= 0.0 && self.spread.is_finite()) {
            return bad(format!("spread must be non-negative, got {}", self.spread));
        }
        if self.law == TimingLaw::Uniform && self.spread >= 2.0 * self.tau_bar {
            return bad(format!(
                "uniform spread {} must stay below 2 tau_bar = {}",
                self.spread,
                2.0 * self.tau_bar
            ));
        }
        if !(self.ramsey_ratio >= 0.0 && self.ramsey_ratio.is_finite()) {
            return bad(format!(
                "ramsey_ratio must be non-negative, got {}",
                self.ramsey_ratio
            ));
        }
        if !(0.0..=1.0).contains(&self.decorrelation) {
            return bad(format!(
                "decorrelation must lie in [0, 1], got {}",
                self.decorrelation
            ));
        }
        Ok(())
    }

    fn draw_tau<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.spread == 0.0 {
            return self.tau_bar;
        }
        match self.law {
            TimingLaw::Uniform => {
                let u: f64 = rng.random();
                self.tau_bar + self.spread * (u - 0.5)
            }
            TimingLaw::Gaussian => {
                let normal = Normal::new(self.tau_bar, self.rms()).expect("rms is finite and positive");
                loop {
                    let tau = normal.sample(rng);
                    if tau > 0.0 {
                        return tau;
                    }
                }
            }
        }
    }

    /// Draws `(tau_k, T_k)`. A model with zero spread consumes no randomness.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> AtomTiming {
        let tau = self.draw_tau(rng);
        let ramsey_time = if self.decorrelation == 0.0 {
            self.ramsey_ratio * tau
        } else {
            let other = self.draw_tau(rng);
            self.ramsey_ratio * ((1.0 - self.decorrelation) * tau + self.decorrelation * other)
        };
        AtomTiming { tau, ramsey_time }
    }
}

/// Validating wrapper around [`TimingModel::sample`].
pub fn sample_timing<R: Rng + ?Sized>(model: &TimingModel, rng: &mut R) -> Result<AtomTiming> {
    model.validate()?;
    Ok(model.sample(rng))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    pub fn with_stream(self, stream_id: u64) -> Self {
        Self { stream_id, ..self }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// ChaCha8 keyed by `splitmix64(master_seed)`, on stream `stream_id`.
pub fn derive_stream(seed: SeedSpec) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed.master_seed));
    rng.set_stream(seed.stream_id);
    rng
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation n_max = {n_max} is invalid (need n_max >= 1)")]
    InvalidTruncation { n_max: usize },

    #[error("Fock level {n} lies outside the truncated basis 0..={n_max}")]
    LevelOutOfRange { n: usize, n_max: usize },

    #[error("amplitude list of length {len} does not match n_max + 1 = {expected}")]
    LengthMismatch { len: usize, expected: usize },

    #[error("coherent state |alpha| = {alpha_abs} loses {leakage:.3e} of its norm above n_max = {n_max}")]
    TruncationTooSmall {
        alpha_abs: f64,
        n_max: usize,
        leakage: f64,
    },

    #[error("state norm {norm_sqr:.3e} is too small to renormalize")]
    ZeroNorm { norm_sqr: f64 },

    #[error("population {amount:.3e} would leave the truncated basis (n_max = {n_max}) during {context}")]
    Leakage {
        n_max: usize,
        amount: f64,
        context: &'static str,
    },

    #[error("post-selected outcome has probability {prob:.3e}; the projection is numerically impossible")]
    OrthogonalOutcome { prob: f64 },

    #[error("invalid timing model: {0}")]
    InvalidTiming(String),

    #[error("invalid configuration field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("return map is singular at epsilon = 0")]
    SingularMap,
}

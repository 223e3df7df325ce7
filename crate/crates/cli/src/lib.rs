//! Command-line front end for the trapping simulator: configuration files,
//! named presets, and reproducible output directories with a manifest.

pub mod app;
pub mod config;
pub mod output;
pub mod presets;

pub use app::{execute, AppError};
pub use config::Config;

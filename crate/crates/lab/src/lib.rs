//! Experiment harness for orbit-closeness scaling laws: builds systems and
//! samplers from flat configs, runs pairs in parallel and writes CSV/JSON.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{Config, Experiment};
pub use error::{Error, Result};

use std::path::{Path, PathBuf};

/// Run a configured experiment and write its outputs into `out`.
pub fn run(cfg: &Config, out: &Path) -> Result<Vec<PathBuf>> {
    match cfg.experiment() {
        Experiment::MapScaling => output::write_scaling(&experiments::run_map_scaling(cfg)?, out),
        Experiment::FlowScaling => output::write_scaling(&experiments::run_flow_scaling(cfg)?, out),
        Experiment::SkewScaling => output::write_scaling(&experiments::run_skew_scaling(cfg)?, out),
        Experiment::CorrDim => output::write_correlation(&experiments::run_corr_dim(cfg)?, out),
        Experiment::Gamma => output::write_gamma(&experiments::run_gamma(cfg)?, out),
    }
}

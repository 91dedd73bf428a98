//! Run configuration: command-line flags layered over an optional TOML file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use polyclust_core::catalog::MAX_CATALOG_J;
use polyclust_core::interval::DEFAULT_BITS;

use crate::Failure;

/// Keys accepted in the configuration file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub bits: Option<u32>,
    pub jobs: Option<usize>,
    pub j_max: Option<usize>,
    pub catalog_dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))
    }
}

/// Validated settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Fractional bits for certified interval arithmetic.
    pub bits: u32,
    /// Worker threads; 0 uses every available core.
    pub jobs: usize,
    /// Largest connected-graph catalogue a subcommand may build.
    pub j_max: usize,
    pub catalog_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(
        file: FileConfig,
        bits: Option<u32>,
        jobs: Option<usize>,
        j_max: Option<usize>,
        catalog_dir: Option<PathBuf>,
    ) -> Result<Self, Failure> {
        let cfg = RunConfig {
            bits: bits.or(file.bits).unwrap_or(DEFAULT_BITS),
            jobs: jobs.or(file.jobs).unwrap_or(0),
            j_max: j_max.or(file.j_max).unwrap_or(MAX_CATALOG_J),
            catalog_dir: catalog_dir.or(file.catalog_dir),
        };
        if !(32..=4096).contains(&cfg.bits) {
            return Err(Failure::usage(format!("--bits {} outside 32..=4096", cfg.bits)));
        }
        if !(2..=MAX_CATALOG_J).contains(&cfg.j_max) {
            return Err(Failure::usage(format!("--j-max {} outside 2..={MAX_CATALOG_J}", cfg.j_max)));
        }
        Ok(cfg)
    }
}

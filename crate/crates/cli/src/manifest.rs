//! Run manifest: every effective configuration value and seed behind a
//! clustering run, written alongside the outputs so the run can be
//! reproduced exactly (`cluster --manifest <file>`).

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use mixedclust_core::cluster::Membership;
use mixedclust_core::nullmodel::NullMode;
use mixedclust_core::EngineConfig64;

use crate::opts::{env_seed, EngineArgs};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub input: PathBuf,
    pub schema: PathBuf,
    pub out: PathBuf,
    pub diagnostics: Option<PathBuf>,
    pub rows: usize,
    pub bins: usize,
    pub alpha: f64,
    pub calib_replicates: usize,
    pub seed: u64,
    /// Effective (derived or overridden) stream seeds.
    pub null_seed: u64,
    pub calib_seed: u64,
    pub null_mode: NullMode,
    /// Resolved null-sample size for the initial n.
    pub null_size: usize,
    pub fixed_threshold: Option<f64>,
    pub cutoff_continuous_minus_one: bool,
    pub jump_factor: f64,
    pub membership: Membership,
    pub min_cluster_size: usize,
    pub threads: Option<usize>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read manifest `{}`", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("malformed manifest `{}`", path.display()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text + "\n")
            .with_context(|| format!("cannot write manifest `{}`", path.display()))?;
        Ok(())
    }
}

/// Resolve engine flags against optional manifest defaults:
/// explicit flag > manifest value > built-in default (seed: > env var).
pub fn resolve_engine(args: &EngineArgs, base: Option<&RunManifest>) -> Result<EngineConfig64> {
    let defaults = EngineConfig64::default();
    let seed = args
        .seed
        .or(base.map(|m| m.seed))
        .unwrap_or_else(env_seed);
    let null_mode = match &args.null_mode {
        Some(text) => NullMode::from_str(text)?,
        None => base.map(|m| m.null_mode).unwrap_or(defaults.null_mode),
    };
    let membership = match &args.membership {
        Some(text) => Membership::from_str(text)?,
        None => base.map(|m| m.membership).unwrap_or(defaults.membership),
    };
    Ok(EngineConfig64 {
        bins: args.bins.or(base.map(|m| m.bins)).unwrap_or(defaults.bins),
        alpha: args
            .alpha
            .or(base.map(|m| m.alpha))
            .unwrap_or(defaults.alpha),
        calib_replicates: args
            .calib_b
            .or(base.map(|m| m.calib_replicates))
            .unwrap_or(defaults.calib_replicates),
        seed,
        null_seed: args.null_seed.or(base.map(|m| m.null_seed)),
        calib_seed: args.calib_seed.or(base.map(|m| m.calib_seed)),
        null_mode,
        null_size: args.null_size.or(base.map(|m| m.null_size)),
        fixed_threshold: args.fixed_threshold.or(base.and_then(|m| m.fixed_threshold)),
        cutoff_continuous_minus_one: args.cutoff_continuous_minus_one
            || base.map(|m| m.cutoff_continuous_minus_one).unwrap_or(false),
        jump_factor: args
            .jump_factor
            .or(base.map(|m| m.jump_factor))
            .unwrap_or(defaults.jump_factor),
        membership,
        min_cluster_size: args
            .min_cluster_size
            .or(base.map(|m| m.min_cluster_size))
            .unwrap_or(defaults.min_cluster_size),
    })
}

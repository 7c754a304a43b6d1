//! Run configuration: JSON file and/or command-line flags, flags winning.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use bsnr_core::analysis::{default_lambda_grid, linspace, logspace};
use bsnr_core::risk::SampleConfig;
use bsnr_core::{EstimatorSpec64, Problem64};

pub const DEFAULT_SEED: u64 = 20120601;
pub const DEFAULT_REPLICATES: u64 = 200_000;

/// Optional fields as read from `--config <file>`.
#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub p: Option<u32>,
    pub k: Option<u32>,
    pub m: Option<f64>,
    pub l: Option<f64>,
    pub radius: Option<f64>,
    pub specs: Option<Vec<serde_json::Value>>,
    pub lambda_grid: Option<String>,
    pub t_grid: Option<String>,
    pub replicates: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("config file {} is not valid JSON", path.display()))
    }
}

/// Shared flags, already merged with any config file.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub problem: Problem64,
    pub specs: Vec<EstimatorSpec64>,
    pub lambda_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub sample: SampleConfig,
    pub out: PathBuf,
    pub svg: bool,
}

pub struct Inputs {
    pub config: Option<PathBuf>,
    pub p: Option<u32>,
    pub k: Option<u32>,
    pub m: Option<f64>,
    pub l: Option<f64>,
    pub radius: Option<f64>,
    pub specs: Vec<String>,
    pub lambda_grid: Option<String>,
    pub t_grid: Option<String>,
    pub replicates: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub svg: bool,
}

impl Inputs {
    /// Validates everything up front; no computation happens on a bad config.
    pub fn resolve(self) -> Result<Resolved> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let p = self.p.or(file.p).unwrap_or(5);
        let k = self.k.or(file.k).unwrap_or(20);
        let m = self.m.or(file.m).unwrap_or(2.0);
        let problem = Problem64::new(p, k, m)
            .map_err(|e| anyhow!("invalid problem (--p/--k/--m): {e}"))?;

        let l = self.l.or(file.l).unwrap_or(0.0);
        let radius = self.radius.or(file.radius).unwrap_or(m);

        let mut specs: Vec<EstimatorSpec64> = Vec::new();
        let flag_specs = if self.specs.is_empty() {
            file.specs
                .unwrap_or_default()
                .iter()
                .map(|v| v.to_string())
                .collect()
        } else {
            self.specs
        };
        for (i, text) in flag_specs.iter().enumerate() {
            let spec: EstimatorSpec64 = serde_json::from_str(text)
                .with_context(|| format!("--spec #{}: not a valid estimator JSON: {text}", i + 1))?;
            specs.push(spec);
        }
        if specs.is_empty() {
            // Default roster: the two benchmarks plus the boundary-uniform
            // Bayes rule configured by --l/--radius.
            specs = vec![
                EstimatorSpec64::Unbiased,
                EstimatorSpec64::Mle,
                EstimatorSpec64::BoundaryUniform { l, radius },
            ];
        }
        for spec in &specs {
            spec.validate(&problem)
                .map_err(|e| anyhow!("invalid spec {}: {e}", spec.label()))?;
        }

        let lambda_grid = match self.lambda_grid.or(file.lambda_grid) {
            Some(s) => parse_grid(&s, false).context("invalid --lambda-grid")?,
            None => default_lambda_grid(&problem),
        };
        for &lam in &lambda_grid {
            if !(0.0..=m).contains(&lam) {
                bail!("invalid --lambda-grid: value {lam} outside [0, m = {m}]");
            }
        }
        let t_grid = match self.t_grid.or(file.t_grid) {
            Some(s) => parse_grid(&s, true).context("invalid --t-grid")?,
            None => linspace(0.0, 20.0, 81),
        };
        for &t in &t_grid {
            if t < 0.0 {
                bail!("invalid --t-grid: value {t} is negative");
            }
        }

        let replicates = self.replicates.or(file.replicates).unwrap_or(DEFAULT_REPLICATES);
        let seed = self.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
        let sample = SampleConfig::new(replicates, seed)
            .map_err(|e| anyhow!("invalid --replicates: {e}"))?;

        Ok(Resolved {
            problem,
            specs,
            lambda_grid,
            t_grid,
            sample,
            out: self.out.or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            svg: self.svg || file.svg.unwrap_or(false),
        })
    }
}

/// Parses `lo:hi:n` or (when allowed) `lo:hi:n:log`.
pub fn parse_grid(text: &str, allow_log: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let log = match parts.len() {
        3 => false,
        4 if parts[3] == "log" => {
            if !allow_log {
                bail!("log spacing is not supported for this grid: {text}");
            }
            true
        }
        _ => bail!("expected lo:hi:n{}, got {text}", if allow_log { "[:log]" } else { "" }),
    };
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| anyhow!("bad grid lower bound: {}", parts[0]))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| anyhow!("bad grid upper bound: {}", parts[1]))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| anyhow!("bad grid point count: {}", parts[2]))?;
    if n < 2 {
        bail!("grid needs at least 2 points, got {n}");
    }
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN bounds
    if !(lo < hi) {
        bail!("grid bounds must satisfy lo < hi, got {lo}:{hi}");
    }
    if log {
        if lo <= 0.0 {
            bail!("log-spaced grid needs lo > 0, got {lo}");
        }
        Ok(logspace(lo, hi, n))
    } else {
        Ok(linspace(lo, hi, n))
    }
}

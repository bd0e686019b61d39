//! Scenario files.
//!
//! ```json
//! {
//!   "n": 2,
//!   "nu_grid": { "lo": 0.5, "hi": 5.0, "step": 0.5 },
//!   "distribution": { "kind": "uniform", "a": 1.0, "b": 2.0 },
//!   "technology": { "kind": "power", "alpha": 0.5 },
//!   "seed": 20240601
//! }
//! ```
//!
//! A single `"nu"` may replace `"nu_grid"`. Optional `"benchmark"` and
//! `"trials"` override the prize sweep and Monte-Carlo sizes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contest::{ContestConfig, CostDistribution, EffortTechnology};
use crate::error::{Error, Result};
use crate::fixed_prize::OptimizerSettings;

pub const DEFAULT_TRIALS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NuGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DistributionSpec {
    Uniform { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TechnologySpec {
    Power { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSpec {
    pub v0_lo: Option<f64>,
    pub v0_hi: Option<f64>,
    pub v0_step: Option<f64>,
    pub m: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_grid: Option<NuGrid>,
    pub distribution: DistributionSpec,
    pub technology: TechnologySpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benchmark: Option<BenchmarkSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Uniform costs on `[1, 2]`, `g(b) = √b`, two players, `ν = 0.5, 1, …, 5`.
    pub fn paper() -> Self {
        Scenario {
            n: 2,
            nu: None,
            nu_grid: Some(NuGrid {
                lo: 0.5,
                hi: 5.0,
                step: 0.5,
            }),
            distribution: DistributionSpec::Uniform { a: 1.0, b: 2.0 },
            technology: TechnologySpec::Power { alpha: 0.5 },
            seed: 20240601,
            benchmark: None,
            trials: None,
        }
    }

    fn validate(&self) -> Result<()> {
        match (self.nu, self.nu_grid) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig(
                    "give either nu or nu_grid, not both".into(),
                ))
            }
            (None, None) => return Err(Error::InvalidConfig("missing nu or nu_grid".into())),
            (None, Some(g)) if !(g.lo > 0.0 && g.hi >= g.lo && g.step > 0.0) => {
                return Err(Error::InvalidConfig(format!(
                    "bad nu_grid {{lo: {}, hi: {}, step: {}}}",
                    g.lo, g.hi, g.step
                )))
            }
            _ => {}
        }
        if self.trials == Some(0) {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        for nu in self.nu_values() {
            self.config(nu)?;
        }
        self.optimizer_settings(None)?;
        Ok(())
    }

    /// The valuations to run, in increasing order.
    pub fn nu_values(&self) -> Vec<f64> {
        match (self.nu, self.nu_grid) {
            (Some(nu), _) => vec![nu],
            (None, Some(g)) => {
                let count = ((g.hi - g.lo) / g.step + 1e-9).floor() as usize + 1;
                (0..count).map(|k| g.lo + k as f64 * g.step).collect()
            }
            (None, None) => Vec::new(),
        }
    }

    pub fn config(&self, nu: f64) -> Result<ContestConfig> {
        let dist = match self.distribution {
            DistributionSpec::Uniform { a, b } => CostDistribution::uniform(a, b)?,
        };
        let tech = match self.technology {
            TechnologySpec::Power { alpha } => EffortTechnology::power(alpha)?,
        };
        ContestConfig::new(self.n, nu, dist, tech, self.seed)
    }

    /// Prize-sweep settings with an optional quadrature-size override.
    pub fn optimizer_settings(&self, m: Option<usize>) -> Result<OptimizerSettings> {
        let mut s = OptimizerSettings::default();
        if let Some(b) = self.benchmark {
            s.v0_lo = b.v0_lo.unwrap_or(s.v0_lo);
            s.v0_hi = b.v0_hi.unwrap_or(s.v0_hi);
            s.v0_step = b.v0_step.unwrap_or(s.v0_step);
            s.m = b.m.unwrap_or(s.m);
        }
        if let Some(m) = m {
            s.m = m;
        }
        if !(s.v0_lo > 0.0 && s.v0_hi > s.v0_lo && s.v0_step > 0.0) || s.m < 2 {
            return Err(Error::InvalidConfig(format!(
                "bad benchmark settings: V0 in [{}, {}] step {}, m = {}",
                s.v0_lo, s.v0_hi, s.v0_step, s.m
            )));
        }
        Ok(s)
    }

    pub fn trials(&self) -> u64 {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }
}

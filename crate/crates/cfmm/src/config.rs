//! TOML experiment configuration.
//!
//! ```toml
//! kernel = "helmholtz2d"
//! kappa = 1.0
//! orders = [2, 4, 6]
//! seed = 7
//! grid = 50
//! output = "m2m.csv"
//!
//! [sweep]
//! radius = { pow2 = [-10, -2] }
//! kappa = { log = [1.0, 50.0], count = 12 }
//! ```
//!
//! A sweep range is one of `values = [..]`, `pow2 = [lo, hi]` (every power
//! of two between the exponents) or `log = [lo, hi]` with `count` points.

use std::path::{Path, PathBuf};

use cfmm_core::Kernel;
use serde::Deserialize;

use crate::error::{HarnessError, Result};

fn default_grid() -> usize {
    50
}

fn default_radius() -> f64 {
    1e-2
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kernel: String,
    pub kappa: Option<f64>,
    pub orders: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Grid points per axis for sources and targets.
    #[serde(default = "default_grid")]
    pub grid: usize,
    pub output: Option<PathBuf>,
    /// Fixed geometry parameter of the wavenumber sweep.
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Operators reported by `opcount`; all of them when absent.
    pub ops: Option<Vec<String>>,
    #[serde(default)]
    pub sweep: Sweep,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub radius: Option<Range>,
    pub kappa: Option<Range>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub values: Option<Vec<f64>>,
    pub pow2: Option<[i32; 2]>,
    pub log: Option<[f64; 2]>,
    pub count: Option<usize>,
}

impl Range {
    pub fn values(values: &[f64]) -> Self {
        Range { values: Some(values.to_vec()), ..Default::default() }
    }

    pub fn pow2(lo: i32, hi: i32) -> Self {
        Range { pow2: Some([lo, hi]), ..Default::default() }
    }

    pub fn log(lo: f64, hi: f64, count: usize) -> Self {
        Range { log: Some([lo, hi]), count: Some(count), ..Default::default() }
    }

    pub fn resolve(&self, name: &str) -> Result<Vec<f64>> {
        let bad = |msg: &str| HarnessError::Config(format!("sweep.{name}: {msg}"));
        let given = [self.values.is_some(), self.pow2.is_some(), self.log.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(bad("give exactly one of `values`, `pow2`, `log`"));
        }
        let out: Vec<f64> = if let Some(v) = &self.values {
            v.clone()
        } else if let Some([lo, hi]) = self.pow2 {
            (lo..=hi).map(|e| 2f64.powi(e)).collect()
        } else {
            let [lo, hi] = self.log.unwrap();
            let n = self.count.ok_or_else(|| bad("`log` needs `count`"))?;
            if !(lo > 0.0 && hi >= lo) {
                return Err(bad("`log` needs 0 < lo <= hi"));
            }
            match n {
                0 => Vec::new(),
                1 => vec![lo],
                _ => (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect(),
            }
        };
        if out.is_empty() {
            return Err(bad("sweep is empty"));
        }
        if out.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(bad("values must be positive and finite"));
        }
        Ok(out)
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn new(kernel: &Kernel, orders: &[usize]) -> Self {
        ExperimentConfig {
            kernel: kernel.id().to_string(),
            kappa: kernel.kappa(),
            orders: orders.to_vec(),
            seed: 0,
            grid: default_grid(),
            output: None,
            radius: default_radius(),
            ops: None,
            sweep: Sweep::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel_with(self.kappa.or(Some(1.0)))?;
        if self.orders.is_empty() {
            return Err(HarnessError::Config("`orders` is empty".into()));
        }
        if self.grid < 2 {
            return Err(HarnessError::Config("`grid` must be at least 2".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(HarnessError::Config("`radius` must be positive".into()));
        }
        if let Some(r) = &self.sweep.radius {
            r.resolve("radius")?;
        }
        if let Some(k) = &self.sweep.kappa {
            k.resolve("kappa")?;
        }
        Ok(())
    }

    /// Kernel with the configured wavenumber.
    pub fn kernel(&self) -> Result<Kernel> {
        self.kernel_with(self.kappa)
    }

    /// Kernel with the wavenumber replaced by `kappa`.
    pub fn kernel_with(&self, kappa: Option<f64>) -> Result<Kernel> {
        Kernel::from_id(&self.kernel, kappa)
            .map_err(|e| HarnessError::Config(format!("kernel `{}`: {e}", self.kernel)))
    }

    pub fn radii(&self) -> Result<Vec<f64>> {
        self.sweep
            .radius
            .as_ref()
            .ok_or_else(|| HarnessError::Config("missing `sweep.radius`".into()))?
            .resolve("radius")
    }

    pub fn kappas(&self) -> Result<Vec<f64>> {
        self.sweep
            .kappa
            .as_ref()
            .ok_or_else(|| HarnessError::Config("missing `sweep.kappa`".into()))?
            .resolve("kappa")
    }
}

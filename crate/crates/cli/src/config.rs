use std::path::{Path, PathBuf};

use abint_core::abelian::OvalConfig;
use abint_core::analytic::{BoundMode, CountConfig, QuasiMode};
use abint_core::slits::SlitConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming a TOML configuration file.
pub const CONFIG_ENV: &str = "ABINT_CONFIG";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Continuation tolerance.
    pub tol: f64,
    /// Distance from a root of unity accepted as equal.
    pub qu_tol: f64,
    pub qu_mode: QuasiMode,
    pub max_order: u32,
    pub bound_mode: BoundMode,
    pub c_var: f64,
    /// Cluster separation parameter.
    pub theta: f64,
    pub seed: u64,
    /// Möbius samples for the invariant slope.
    pub samples: usize,
    /// Significant digits of emitted floating values.
    pub precision: usize,
    /// Default output paths; command line flags take precedence.
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = CountConfig::default();
        RunConfig {
            tol: c.tol,
            qu_tol: c.qu_tol,
            qu_mode: c.qu_mode,
            max_order: c.max_order,
            bound_mode: c.bound_mode,
            c_var: c.c_var,
            theta: SlitConfig::default().theta,
            seed: 1,
            samples: 16,
            precision: 12,
            out: None,
            svg: None,
            csv: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let c: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// The file named by `--config`, else by `ABINT_CONFIG`, else defaults.
    pub fn resolve(flag: Option<&Path>) -> Result<Self, CliError> {
        match flag {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [("tol", self.tol), ("qu_tol", self.qu_tol), ("c_var", self.c_var), ("theta", self.theta)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.theta >= 1.0 {
            return Err(CliError::Config(format!("theta must be below 1, got {}", self.theta)));
        }
        if self.max_order == 0 {
            return Err(CliError::Config("max_order must be positive".into()));
        }
        if !(1..=17).contains(&self.precision) {
            return Err(CliError::Config("precision must lie in 1..=17".into()));
        }
        Ok(())
    }

    pub fn count_config(&self) -> CountConfig {
        CountConfig {
            tol: self.tol,
            qu_tol: self.qu_tol,
            max_order: self.max_order,
            qu_mode: self.qu_mode,
            bound_mode: self.bound_mode,
            c_var: self.c_var,
            ..CountConfig::default()
        }
    }

    pub fn slit_config(&self) -> SlitConfig {
        SlitConfig { theta: self.theta, ..SlitConfig::default() }
    }

    pub fn oval_config(&self) -> OvalConfig {
        OvalConfig::default()
    }
}

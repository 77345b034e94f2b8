//! Run configuration: JSON file plus flag overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::e2::MetricParams;
use crate::error::{Error, Result};
use crate::numerics::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Helicoid,
    Catenoid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            lambda1: 1.0,
            lambda2: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Parameters {
    #[serde(rename = "K", alias = "k", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Overrides the solved `θ̃_c` for catenoids.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

/// Parameter rectangle and resolution. Missing bounds are filled per family
/// from the solved profile: `u ∈ [−2, 2]`, `v ∈ [−2W, 2W]` for helicoids and
/// `u ∈ [−U, U]`, `v ∈ [−1, 1]` for catenoids.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_max: Option<f64>,
    pub nu: usize,
    pub nv: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            u_min: None,
            u_max: None,
            v_min: None,
            v_max: None,
            nu: 50,
            nv: 50,
        }
    }
}

impl GridConfig {
    pub fn u_range(&self, default: (f64, f64)) -> (f64, f64) {
        (self.u_min.unwrap_or(default.0), self.u_max.unwrap_or(default.1))
    }

    pub fn v_range(&self, default: (f64, f64)) -> (f64, f64) {
        (self.v_min.unwrap_or(default.0), self.v_max.unwrap_or(default.1))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub metric: MetricConfig,
    pub family: Family,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub outputs: Outputs,
}

/// Values given on the command line; each `Some` replaces the file value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub family: Option<Family>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub k: Option<f64>,
    pub c: Option<f64>,
    pub theta: Option<f64>,
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    pub v_min: Option<f64>,
    pub v_max: Option<f64>,
    pub nu: Option<usize>,
    pub nv: Option<usize>,
    pub ode_tol: Option<f64>,
    pub quad_tol: Option<f64>,
    pub root_tol: Option<f64>,
    pub mesh: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn set_opt<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

impl RunConfig {
    pub fn new(family: Family) -> Self {
        RunConfig {
            metric: MetricConfig::default(),
            family,
            parameters: Parameters::default(),
            grid: GridConfig::default(),
            tolerances: Tolerances::default(),
            outputs: Outputs::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Reads `file` if given, applies `flags` on top and validates the result.
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self> {
        let mut cfg = match file {
            Some(p) => Self::from_file(p)?,
            None => {
                let family = flags
                    .family
                    .ok_or_else(|| Error::config("family", "no family selected"))?;
                Self::new(family)
            }
        };
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        set(&mut self.family, o.family);
        set(&mut self.metric.lambda1, o.lambda1);
        set(&mut self.metric.lambda2, o.lambda2);
        set_opt(&mut self.parameters.k, o.k);
        set_opt(&mut self.parameters.c, o.c);
        set_opt(&mut self.parameters.theta, o.theta);
        set_opt(&mut self.grid.u_min, o.u_min);
        set_opt(&mut self.grid.u_max, o.u_max);
        set_opt(&mut self.grid.v_min, o.v_min);
        set_opt(&mut self.grid.v_max, o.v_max);
        set(&mut self.grid.nu, o.nu);
        set(&mut self.grid.nv, o.nv);
        set(&mut self.tolerances.ode, o.ode_tol);
        set(&mut self.tolerances.quad, o.quad_tol);
        set(&mut self.tolerances.root, o.root_tol);
        set_opt(&mut self.outputs.mesh, o.mesh.clone());
        set_opt(&mut self.outputs.csv, o.csv.clone());
        set_opt(&mut self.outputs.report, o.report.clone());
    }

    pub fn metric_params(&self) -> Result<MetricParams> {
        MetricParams::new(self.metric.lambda1, self.metric.lambda2).map_err(|e| Error::config("metric", e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.metric_params()?;
        self.tolerances.validate()?;
        let g = &self.grid;
        if g.nu < 2 || g.nv < 2 {
            return Err(Error::config(
                "grid",
                format!("nu and nv must be at least 2, got {} x {}", g.nu, g.nv),
            ));
        }
        for (name, lo, hi) in [("u", g.u_min, g.u_max), ("v", g.v_min, g.v_max)] {
            for x in [lo, hi].into_iter().flatten() {
                if !x.is_finite() {
                    return Err(Error::config(format!("grid.{name}"), "bounds must be finite"));
                }
            }
            if let (Some(a), Some(b)) = (lo, hi) {
                if !(a < b) {
                    return Err(Error::config(format!("grid.{name}"), format!("empty range [{a}, {b}]")));
                }
            }
        }
        let p = &self.parameters;
        match self.family {
            Family::Helicoid => {
                if p.k.is_none() {
                    return Err(Error::config("parameters.K", "required for the helicoid family"));
                }
                if p.c.is_some() || p.theta.is_some() {
                    return Err(Error::config("parameters", "c and theta belong to the catenoid family"));
                }
            }
            Family::Catenoid => {
                if p.c.is_none() {
                    return Err(Error::config("parameters.c", "required for the catenoid family"));
                }
                if p.k.is_some() {
                    return Err(Error::config("parameters.K", "belongs to the helicoid family"));
                }
            }
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_filled() {
        let cfg = RunConfig::resolve(
            None,
            &Overrides {
                family: Some(Family::Helicoid),
                k: Some(0.5),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(
            cfg.metric,
            MetricConfig {
                lambda1: 1.0,
                lambda2: 1.0
            }
        );
        assert_eq!(cfg.tolerances, Tolerances::default());
        assert_eq!((cfg.grid.nu, cfg.grid.nv), (50, 50));
    }

    #[test]
    fn order_violation_is_reported() {
        let e = RunConfig::resolve(
            None,
            &Overrides {
                family: Some(Family::Helicoid),
                k: Some(0.5),
                lambda1: Some(1.0),
                lambda2: Some(2.0),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(e, Error::Config { ref field, .. } if field == "metric"));
    }

    #[test]
    fn flags_override_file_values() {
        let mut cfg =
            RunConfig::from_json(r#"{"family": "helicoid", "parameters": {"K": 0.3}, "grid": {"nu": 7, "nv": 9}}"#)
                .unwrap();
        cfg.apply(&Overrides {
            k: Some(0.7),
            ..Default::default()
        });
        cfg.validate().unwrap();
        assert_eq!(cfg.parameters.k, Some(0.7));
        assert_eq!((cfg.grid.nu, cfg.grid.nv), (7, 9));
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            r#"{"family": "helicoid", "parameters": {"K": 0.5}, "grid": {"nu": 1, "nv": 5}}"#,
            r#"{"family": "helicoid", "parameters": {"K": 0.5}, "tolerances": {"ode": 0}}"#,
            r#"{"family": "helicoid"}"#,
            r#"{"family": "catenoid", "parameters": {"c": 2, "K": 0.5}}"#,
            r#"{"family": "catenoid", "parameters": {"c": 2}, "grid": {"u_min": 1, "u_max": 0}}"#,
        ];
        for text in bad {
            let cfg = RunConfig::from_json(text).unwrap();
            assert!(matches!(cfg.validate(), Err(Error::Config { .. })), "{text}");
        }
        assert!(RunConfig::from_json(r#"{"family": "torus"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"family": "helicoid", "colour": 1}"#).is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = RunConfig::from_json(r#"{"family": "catenoid", "parameters": {"c": 2}}"#).unwrap();
        let b = RunConfig::from_json(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        let mut c = a.clone();
        c.parameters.c = Some(2.5);
        assert_ne!(a.hash(), c.hash());
    }
}

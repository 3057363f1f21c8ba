//! Run configuration: a single JSON document describing the physical
//! parameters (in units of the mean decay rate), the initial state, the
//! time grid, the recorded observables and the output options.

use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use serde::Deserialize;
use subrad_core::hilbert::{named_state, DensityMatrix, NamedState};
use subrad_core::spectral::collective_states;
use subrad_core::SystemParams;

use crate::error::{CliError, Result};

fn default_horizon() -> f64 {
    10.0
}

fn default_dt() -> f64 {
    0.01
}

fn default_t_star() -> f64 {
    5.0
}

fn default_window() -> f64 {
    2.0
}

/// One swept parameter: `n` evenly spaced values on `[min, max]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxis {
    pub field: String,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl GridAxis {
    pub fn value(&self, k: usize) -> f64 {
        if self.n == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * (k as f64 / (self.n - 1) as f64)
        }
    }

    pub fn validate(&self) -> Result<()> {
        const FIELDS: [&str; 11] = [
            "gamma1", "gamma2", "gamma12", "s12", "delta", "omega0", "s1", "s2", "dep11",
            "dep22", "dep12",
        ];
        if !FIELDS.contains(&self.field.as_str()) {
            return Err(CliError::input(format!(
                "unknown sweep field `{}` (expected one of {})",
                self.field,
                FIELDS.join(", ")
            )));
        }
        if self.n == 0 {
            return Err(CliError::input(format!(
                "sweep axis `{}` must have at least one point",
                self.field
            )));
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(CliError::input(format!(
                "sweep axis `{}` has a non-finite bound",
                self.field
            )));
        }
        if self.max < self.min {
            return Err(CliError::input(format!(
                "sweep axis `{}` has max < min",
                self.field
            )));
        }
        Ok(())
    }
}

/// Grid specification plus the scalar diagnostics to tabulate per point.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub grid: Vec<GridAxis>,
    pub diagnostics: Vec<String>,
    #[serde(default = "default_t_star")]
    pub t_star: f64,
    #[serde(default = "default_window")]
    pub window: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() || self.grid.len() > 2 {
            return Err(CliError::input(
                "sweep grid must name one or two fields".to_string(),
            ));
        }
        for axis in &self.grid {
            axis.validate()?;
        }
        if self.grid.len() == 2 && self.grid[0].field == self.grid[1].field {
            return Err(CliError::input(format!(
                "sweep grid names `{}` twice",
                self.grid[0].field
            )));
        }
        const DIAGNOSTICS: [&str; 5] = ["kappaS", "nuS", "C_delayed", "delay", "R_I"];
        if self.diagnostics.is_empty() {
            return Err(CliError::input("sweep requests no diagnostics".to_string()));
        }
        for d in &self.diagnostics {
            if !DIAGNOSTICS.contains(&d.as_str()) {
                return Err(CliError::input(format!(
                    "unknown diagnostic `{d}` (expected one of {})",
                    DIAGNOSTICS.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn wants_sync(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d == "C_delayed" || d == "delay" || d == "R_I")
    }
}

/// The full run configuration. Unknown keys are rejected so that typos are
/// surfaced instead of silently ignored; every run with the same document
/// produces byte-identical output files.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma12: f64,
    pub s12: f64,
    pub delta: f64,
    pub omega0: f64,
    #[serde(default)]
    pub s1: f64,
    #[serde(default)]
    pub s2: f64,
    #[serde(default)]
    pub dep11: f64,
    #[serde(default)]
    pub dep22: f64,
    #[serde(default)]
    pub dep12: f64,
    #[serde(default)]
    pub state: Option<String>,
    #[serde(default)]
    pub state_matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub observables: Vec<String>,
    #[serde(default)]
    pub out_dir: Option<String>,
    #[serde(default)]
    pub emit_svg: bool,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("invalid config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.state.is_some() && self.state_matrix.is_some() {
            return Err(CliError::input(
                "config gives both `state` and `state_matrix`".to_string(),
            ));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(CliError::input("`horizon` must be positive".to_string()));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(CliError::input("`dt` must be positive".to_string()));
        }
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
        }
        Ok(())
    }

    /// Physical parameters with the listed field overridden per sweep point.
    pub fn params_with(&self, overrides: &[(&str, f64)]) -> Result<SystemParams> {
        let mut v = [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma12", self.gamma12),
            ("s12", self.s12),
            ("delta", self.delta),
            ("omega0", self.omega0),
            ("s1", self.s1),
            ("s2", self.s2),
            ("dep11", self.dep11),
            ("dep22", self.dep22),
            ("dep12", self.dep12),
        ];
        for (field, value) in overrides {
            let slot = v
                .iter_mut()
                .find(|(name, _)| name == field)
                .expect("override names are validated before use");
            slot.1 = *value;
        }
        let p = SystemParams::new(v[0].1, v[1].1, v[2].1, v[3].1, v[4].1, v[5].1)?
            .with_local_shifts(v[6].1, v[7].1)?
            .with_dephasing(v[8].1, v[9].1, v[10].1)?;
        Ok(p)
    }

    pub fn params(&self) -> Result<SystemParams> {
        self.params_with(&[])
    }

    /// The configured initial state, or an error if none was given.
    pub fn initial_state(&self, p: &SystemParams) -> Result<DensityMatrix> {
        if let Some(name) = &self.state {
            let tag = NamedState::ALL
                .iter()
                .copied()
                .find(|s| s.name() == name)
                .ok_or_else(|| {
                    CliError::input(format!(
                        "unknown state `{name}` (expected one of {})",
                        NamedState::ALL
                            .iter()
                            .map(|s| s.name())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ))
                })?;
            let cs = collective_states(p).ok();
            return Ok(named_state(tag, cs.as_ref(), Some(p))?);
        }
        if let Some(rows) = &self.state_matrix {
            if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                return Err(CliError::input(
                    "`state_matrix` must be a 4x4 array of [re, im] pairs".to_string(),
                ));
            }
            let m = Array2::from_shape_fn((4, 4), |(i, j)| {
                Complex64::new(rows[i][j][0], rows[i][j][1])
            });
            return Ok(DensityMatrix::new(m)?);
        }
        Err(CliError::input(
            "no initial state: set `state` or `state_matrix` in the config".to_string(),
        ))
    }

    /// A short token describing the initial state for the CSV header.
    pub fn state_label(&self) -> String {
        match (&self.state, &self.state_matrix) {
            (Some(name), _) => name.clone(),
            (None, Some(_)) => "matrix".to_string(),
            (None, None) => "none".to_string(),
        }
    }

    /// `key=value` pairs for the CSV header comment. Swept fields show the
    /// grid instead of the (ignored) scalar so that a figure command and the
    /// equivalent sweep emit identical headers.
    pub fn header_pairs(&self, sweep: Option<&SweepSpec>) -> Vec<(String, String)> {
        let scalars = [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma12", self.gamma12),
            ("s12", self.s12),
            ("delta", self.delta),
            ("omega0", self.omega0),
            ("s1", self.s1),
            ("s2", self.s2),
            ("dep11", self.dep11),
            ("dep22", self.dep22),
            ("dep12", self.dep12),
        ];
        let mut out = Vec::new();
        for (name, value) in scalars {
            let swept = sweep.and_then(|s| s.grid.iter().find(|a| a.field == name));
            match swept {
                Some(axis) => out.push((
                    name.to_string(),
                    format!("grid({},{},{})", axis.min, axis.max, axis.n),
                )),
                None => out.push((name.to_string(), format!("{value}"))),
            }
        }
        out
    }
}

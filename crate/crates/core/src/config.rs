//! Run parameters and the flat `key = value` file that overrides them.
//!
//! ```text
//! # fiducial cosmology
//! h0_km_s_mpc = 70
//! omega_m = 0.3
//! omega_lambda = 0.7
//! lab_volume_m3 = 1000
//! ```

use std::num::NonZeroU32;

use serde::Serialize;

use crate::bounds::{LabGeometry, Scenario, DEFAULT_INPUTS_PER_OP};
use crate::cosmology::{CosmologyParams, TableSettings, DEFAULT_GRID_POINTS, DEFAULT_REL_TOL};
use crate::error::{Error, Result};
use crate::quantities::SECONDS_PER_YEAR;

/// Flatness tolerance accepted from user input.
pub const CONFIG_FLATNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub h0_km_s_mpc: f64,
    pub omega_m: f64,
    pub omega_lambda: f64,
    pub lab_volume_m3: f64,
    pub lab_duration_s: f64,
    pub inputs_per_op: u32,
    pub quad_rel_tol: f64,
    pub grid_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            h0_km_s_mpc: 70.0,
            omega_m: 0.3,
            omega_lambda: 0.7,
            lab_volume_m3: 1000.0,
            lab_duration_s: SECONDS_PER_YEAR,
            inputs_per_op: DEFAULT_INPUTS_PER_OP,
            quad_rel_tol: DEFAULT_REL_TOL,
            grid_points: DEFAULT_GRID_POINTS,
        }
    }
}

/// Values set explicitly by a config file or command line.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConfigOverrides {
    pub h0_km_s_mpc: Option<f64>,
    pub omega_m: Option<f64>,
    pub omega_lambda: Option<f64>,
    pub lab_volume_m3: Option<f64>,
    pub lab_duration_s: Option<f64>,
    pub inputs_per_op: Option<u32>,
    pub quad_rel_tol: Option<f64>,
    pub grid_points: Option<usize>,
}

impl ConfigOverrides {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped;
    /// unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ConfigOverrides::default();
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let real = || {
                value
                    .parse::<f64>()
                    .map_err(|_| err(format!("`{key}` needs a number, got `{value}`")))
            };
            let integer = || {
                value.parse::<u64>().map_err(|_| {
                    err(format!(
                        "`{key}` needs a non-negative integer, got `{value}`"
                    ))
                })
            };
            let duplicate = || err(format!("`{key}` is set more than once"));
            macro_rules! set {
                ($field:ident, $value:expr) => {{
                    if out.$field.is_some() {
                        return Err(duplicate());
                    }
                    out.$field = Some($value);
                }};
            }
            match key {
                "h0_km_s_mpc" | "h0" => set!(h0_km_s_mpc, real()?),
                "omega_m" => set!(omega_m, real()?),
                "omega_lambda" => set!(omega_lambda, real()?),
                "lab_volume_m3" | "lab_volume" => set!(lab_volume_m3, real()?),
                "lab_duration_s" | "lab_duration" => set!(lab_duration_s, real()?),
                "inputs_per_op" => {
                    let n = u32::try_from(integer()?)
                        .map_err(|_| err(format!("`{key}` is out of range")))?;
                    set!(inputs_per_op, n)
                }
                "quad_rel_tol" => set!(quad_rel_tol, real()?),
                "grid_points" => {
                    let n = usize::try_from(integer()?)
                        .map_err(|_| err(format!("`{key}` is out of range")))?;
                    set!(grid_points, n)
                }
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        Ok(out)
    }

    /// Fields set in `other` win.
    pub fn merge(self, other: ConfigOverrides) -> Self {
        ConfigOverrides {
            h0_km_s_mpc: other.h0_km_s_mpc.or(self.h0_km_s_mpc),
            omega_m: other.omega_m.or(self.omega_m),
            omega_lambda: other.omega_lambda.or(self.omega_lambda),
            lab_volume_m3: other.lab_volume_m3.or(self.lab_volume_m3),
            lab_duration_s: other.lab_duration_s.or(self.lab_duration_s),
            inputs_per_op: other.inputs_per_op.or(self.inputs_per_op),
            quad_rel_tol: other.quad_rel_tol.or(self.quad_rel_tol),
            grid_points: other.grid_points.or(self.grid_points),
        }
    }
}

impl RunConfig {
    /// Defaults with `overrides` applied, validated.
    pub fn resolve(overrides: &ConfigOverrides) -> Result<Self> {
        let d = RunConfig::default();
        let config = RunConfig {
            h0_km_s_mpc: overrides.h0_km_s_mpc.unwrap_or(d.h0_km_s_mpc),
            omega_m: overrides.omega_m.unwrap_or(d.omega_m),
            omega_lambda: overrides.omega_lambda.unwrap_or(d.omega_lambda),
            lab_volume_m3: overrides.lab_volume_m3.unwrap_or(d.lab_volume_m3),
            lab_duration_s: overrides.lab_duration_s.unwrap_or(d.lab_duration_s),
            inputs_per_op: overrides.inputs_per_op.unwrap_or(d.inputs_per_op),
            quad_rel_tol: overrides.quad_rel_tol.unwrap_or(d.quad_rel_tol),
            grid_points: overrides.grid_points.unwrap_or(d.grid_points),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |what: &'static str, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain { what, value })
            }
        };
        positive("h0_km_s_mpc", self.h0_km_s_mpc)?;
        positive("omega_m", self.omega_m)?;
        positive("lab_volume_m3", self.lab_volume_m3)?;
        positive("lab_duration_s", self.lab_duration_s)?;
        positive("quad_rel_tol", self.quad_rel_tol)?;
        if !(self.omega_lambda >= 0.0 && self.omega_lambda.is_finite()) {
            return Err(Error::Domain {
                what: "omega_lambda",
                value: self.omega_lambda,
            });
        }
        let sum = self.omega_m + self.omega_lambda;
        if (sum - 1.0).abs() > CONFIG_FLATNESS_TOL {
            return Err(Error::Flatness {
                omega_m: self.omega_m,
                omega_lambda: self.omega_lambda,
                sum,
            });
        }
        if self.inputs_per_op == 0 {
            return Err(Error::Domain {
                what: "inputs_per_op",
                value: 0.0,
            });
        }
        if self.quad_rel_tol > 1e-2 {
            return Err(Error::Domain {
                what: "quad_rel_tol (at most 1e-2)",
                value: self.quad_rel_tol,
            });
        }
        if self.grid_points < 8 {
            return Err(Error::Domain {
                what: "grid_points (at least 8)",
                value: self.grid_points as f64,
            });
        }
        Ok(())
    }

    /// `omega_lambda` is snapped to `1 - omega_m` so that sums within the
    /// looser input tolerance still satisfy the model's flatness check.
    pub fn cosmology(&self) -> Result<CosmologyParams> {
        self.validate()?;
        CosmologyParams::new(self.h0_km_s_mpc, self.omega_m, 1.0 - self.omega_m)
    }

    pub fn lab(&self) -> Result<LabGeometry> {
        LabGeometry::new(self.lab_volume_m3, self.lab_duration_s)
    }

    pub fn inputs_per_op(&self) -> Result<NonZeroU32> {
        NonZeroU32::new(self.inputs_per_op).ok_or(Error::Domain {
            what: "inputs_per_op",
            value: 0.0,
        })
    }

    pub fn table_settings(&self) -> TableSettings {
        TableSettings {
            rel_tol: self.quad_rel_tol,
            grid_points: self.grid_points,
        }
    }

    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        Ok(Scenario::all(
            self.lab()?,
            self.inputs_per_op()?,
            self.cosmology()?,
        ))
    }
}

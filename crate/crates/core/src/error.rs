use std::path::PathBuf;

use thiserror::Error;

use crate::bounds::ScenarioKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} must be positive and finite, got {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("factor {index} has non-positive base {base}")]
    NonPositiveFactor { index: usize, base: f64 },

    #[error(
        "quadrature did not converge after {panels} panels: estimate {estimate:e}, \
         achieved relative error {achieved:e}"
    )]
    NonConvergence {
        estimate: f64,
        achieved: f64,
        panels: usize,
    },

    #[error("panel {panel} of cumulative table: {source}")]
    Panel {
        panel: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{x} is outside the table range [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },

    #[error("invalid grid: {0}")]
    Grid(&'static str),

    #[error("cosmology is not flat: omega_m + omega_lambda = {sum} (omega_m = {omega_m}, omega_lambda = {omega_lambda})")]
    Flatness {
        omega_m: f64,
        omega_lambda: f64,
        sum: f64,
    },

    #[error("scenario {0} needs light-cone tables built from its cosmology")]
    MissingTables(ScenarioKind),

    #[error("scenario {0} was given tables built from a different cosmology")]
    MismatchedTables(ScenarioKind),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("figure json: {0}")]
    Json(#[from] serde_json::Error),
}

pub(crate) fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}

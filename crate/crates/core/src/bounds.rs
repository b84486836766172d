//! Operation-count bounds for a hidden classical substrate of spacing `l`.
//!
//! Every scenario is a pure power law `N_ops = K · l^(-p)`, so each one is
//! reduced to its `(log2 K, p)` pair and both directions (length → count,
//! count → length) are exact in log space.

use std::fmt;
use std::num::NonZeroU32;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cosmology::{CosmologyParams, LightconeTables};
use crate::error::{positive, Error, Result};
use crate::quantities::{LogQuantity, PhysicalConstants, ELEMENTARY_CHARGE, HBAR, SPEED_OF_LIGHT};

pub const DEFAULT_INPUTS_PER_OP: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Lab,
    LabNearestNeighbor,
    LabFullyConnected,
    LabBroadcast,
    Universe,
    UniverseFullyConnected,
    UniverseBroadcast,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        ScenarioKind::Lab,
        ScenarioKind::LabNearestNeighbor,
        ScenarioKind::LabFullyConnected,
        ScenarioKind::LabBroadcast,
        ScenarioKind::Universe,
        ScenarioKind::UniverseFullyConnected,
        ScenarioKind::UniverseBroadcast,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Lab => "lab",
            ScenarioKind::LabNearestNeighbor => "lab-nearest-neighbor",
            ScenarioKind::LabFullyConnected => "lab-fully-connected",
            ScenarioKind::LabBroadcast => "lab-broadcast",
            ScenarioKind::Universe => "universe",
            ScenarioKind::UniverseFullyConnected => "universe-fully-connected",
            ScenarioKind::UniverseBroadcast => "universe-broadcast",
        }
    }

    /// Power of `1/l` in the operation count.
    pub fn exponent(self) -> u32 {
        match self {
            ScenarioKind::Lab | ScenarioKind::LabNearestNeighbor | ScenarioKind::Universe => 4,
            ScenarioKind::LabFullyConnected | ScenarioKind::UniverseFullyConnected => 8,
            ScenarioKind::LabBroadcast | ScenarioKind::UniverseBroadcast => 7,
        }
    }

    pub fn is_universe(self) -> bool {
        matches!(
            self,
            ScenarioKind::Universe
                | ScenarioKind::UniverseFullyConnected
                | ScenarioKind::UniverseBroadcast
        )
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().to_ascii_lowercase().replace('_', "-");
        let kind = match normalized.as_str() {
            "lab" => ScenarioKind::Lab,
            "lab-nearest-neighbor" | "lab-nn" => ScenarioKind::LabNearestNeighbor,
            "lab-fully-connected" | "lab-fc" => ScenarioKind::LabFullyConnected,
            "lab-broadcast" => ScenarioKind::LabBroadcast,
            "universe" => ScenarioKind::Universe,
            "universe-fully-connected" | "universe-fc" => ScenarioKind::UniverseFullyConnected,
            "universe-broadcast" => ScenarioKind::UniverseBroadcast,
            _ => return Err(Error::UnknownScenario(s.to_owned())),
        };
        Ok(kind)
    }
}

/// A computer of volume `V3` (m³) that ran for `T` (s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabGeometry {
    volume: f64,
    duration: f64,
}

impl LabGeometry {
    pub fn new(volume_m3: f64, duration_s: f64) -> Result<Self> {
        Ok(LabGeometry {
            volume: positive("lab volume", volume_m3)?,
            duration: positive("lab duration", duration_s)?,
        })
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// `log2(V3 c T)`, the lab's light-limited 4-volume in m⁴.
    fn log2_four_volume(&self) -> f64 {
        self.volume.log2() + SPEED_OF_LIGHT.log2() + self.duration.log2()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    Lab {
        lab: LabGeometry,
    },
    LabNearestNeighbor {
        lab: LabGeometry,
        inputs_per_op: NonZeroU32,
    },
    LabFullyConnected {
        lab: LabGeometry,
    },
    /// Broadcast every `τ = l/c`, integrating only the last step's signals.
    LabBroadcast {
        lab: LabGeometry,
    },
    Universe {
        params: CosmologyParams,
    },
    UniverseFullyConnected {
        params: CosmologyParams,
    },
    UniverseBroadcast {
        params: CosmologyParams,
    },
}

impl Scenario {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            Scenario::Lab { .. } => ScenarioKind::Lab,
            Scenario::LabNearestNeighbor { .. } => ScenarioKind::LabNearestNeighbor,
            Scenario::LabFullyConnected { .. } => ScenarioKind::LabFullyConnected,
            Scenario::LabBroadcast { .. } => ScenarioKind::LabBroadcast,
            Scenario::Universe { .. } => ScenarioKind::Universe,
            Scenario::UniverseFullyConnected { .. } => ScenarioKind::UniverseFullyConnected,
            Scenario::UniverseBroadcast { .. } => ScenarioKind::UniverseBroadcast,
        }
    }

    /// Builds the scenario of `kind`, taking the fields it needs.
    pub fn of_kind(
        kind: ScenarioKind,
        lab: LabGeometry,
        inputs_per_op: NonZeroU32,
        params: CosmologyParams,
    ) -> Self {
        match kind {
            ScenarioKind::Lab => Scenario::Lab { lab },
            ScenarioKind::LabNearestNeighbor => Scenario::LabNearestNeighbor { lab, inputs_per_op },
            ScenarioKind::LabFullyConnected => Scenario::LabFullyConnected { lab },
            ScenarioKind::LabBroadcast => Scenario::LabBroadcast { lab },
            ScenarioKind::Universe => Scenario::Universe { params },
            ScenarioKind::UniverseFullyConnected => Scenario::UniverseFullyConnected { params },
            ScenarioKind::UniverseBroadcast => Scenario::UniverseBroadcast { params },
        }
    }

    /// All seven scenarios in [`ScenarioKind::ALL`] order.
    pub fn all(lab: LabGeometry, inputs_per_op: NonZeroU32, params: CosmologyParams) -> Vec<Self> {
        ScenarioKind::ALL
            .iter()
            .map(|&kind| Scenario::of_kind(kind, lab, inputs_per_op, params))
            .collect()
    }

    pub fn cosmology(&self) -> Option<&CosmologyParams> {
        match self {
            Scenario::Universe { params }
            | Scenario::UniverseFullyConnected { params }
            | Scenario::UniverseBroadcast { params } => Some(params),
            _ => None,
        }
    }

    pub fn lab(&self) -> Option<&LabGeometry> {
        match self {
            Scenario::Lab { lab }
            | Scenario::LabNearestNeighbor { lab, .. }
            | Scenario::LabFullyConnected { lab }
            | Scenario::LabBroadcast { lab } => Some(lab),
            _ => None,
        }
    }

    /// The scenario's `N_ops = K · l^(-p)` law.
    pub fn power_law(&self, tables: Option<&LightconeTables>) -> Result<PowerLaw> {
        let kind = self.kind();
        let log2_coefficient = match self {
            Scenario::Lab { lab } => lab.log2_four_volume(),
            Scenario::LabNearestNeighbor { lab, inputs_per_op } => {
                f64::from(inputs_per_op.get()).log2() + lab.log2_four_volume()
            }
            // Every pair of events once: ½ (V3 c T / l⁴)².
            Scenario::LabFullyConnected { lab } => 2.0 * lab.log2_four_volume() - 1.0,
            // (V3/l³)² T/τ with τ = l/c.
            Scenario::LabBroadcast { lab } => {
                2.0 * lab.volume.log2() + lab.duration.log2() + SPEED_OF_LIGHT.log2()
            }
            Scenario::Universe { params }
            | Scenario::UniverseFullyConnected { params }
            | Scenario::UniverseBroadcast { params } => {
                let tables = tables.ok_or(Error::MissingTables(kind))?;
                if tables.params() != params {
                    return Err(Error::MismatchedTables(kind));
                }
                let k = tables.k_factors()?;
                let prefactor = match kind {
                    ScenarioKind::Universe => k.k4u,
                    ScenarioKind::UniverseFullyConnected => k.k8u,
                    _ => k.k7u,
                };
                prefactor.log2() + f64::from(kind.exponent()) * params.hubble_length().log2()
            }
        };
        Ok(PowerLaw {
            log2_coefficient,
            exponent: kind.exponent(),
        })
    }
}

/// `N_ops = 2^log2_coefficient · l^(-exponent)`, `l` in m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLaw {
    pub log2_coefficient: f64,
    pub exponent: u32,
}

impl PowerLaw {
    pub fn log2_n_ops(&self, log2_length: f64) -> f64 {
        self.log2_coefficient - f64::from(self.exponent) * log2_length
    }

    pub fn log2_length(&self, log2_n_ops: f64) -> f64 {
        (self.log2_coefficient - log2_n_ops) / f64::from(self.exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    pub n_ops: LogQuantity,
    /// m.
    pub length: f64,
    /// Substrate rate density `1/(l³τ)` at `τ = l/c`, ops m⁻³ s⁻¹.
    pub crd: LogQuantity,
}

/// `l ≤ (V3 c T / N_ops)^(1/4)`, m.
pub fn max_length(volume_m3: f64, duration_s: f64, n_ops: LogQuantity) -> Result<f64> {
    let lab = LabGeometry::new(volume_m3, duration_s)?;
    Ok(((lab.log2_four_volume() - n_ops.log2()) / 4.0).exp2())
}

/// `N_ops / (V3 T)`, ops m⁻³ s⁻¹.
pub fn crd(n_ops: LogQuantity, volume_m3: f64, duration_s: f64) -> Result<LogQuantity> {
    let lab = LabGeometry::new(volume_m3, duration_s)?;
    LogQuantity::from_log2(n_ops.log2() - lab.volume.log2() - lab.duration.log2())
}

/// `1/(l_P³ t_P)`.
pub fn planck_crd(constants: &PhysicalConstants) -> LogQuantity {
    LogQuantity::from_log2(-(3.0 * constants.planck_length.log2() + constants.planck_time.log2()))
        .expect("Planck units are positive")
}

/// `2^n` equivalent classical operations for `n` logical qubits.
pub fn neo_from_qubits(n: u32) -> Result<LogQuantity> {
    if n == 0 {
        return Err(Error::Domain {
            what: "logical qubit count",
            value: 0.0,
        });
    }
    Ok(LogQuantity::power_of_two(i64::from(n)))
}

pub fn n_ops_for_scenario(
    scenario: &Scenario,
    length: f64,
    tables: Option<&LightconeTables>,
) -> Result<LogQuantity> {
    let length = positive("length", length)?;
    let law = scenario.power_law(tables)?;
    LogQuantity::from_log2(law.log2_n_ops(length.log2()))
}

pub fn length_for_scenario(
    scenario: &Scenario,
    n_ops: LogQuantity,
    tables: Option<&LightconeTables>,
) -> Result<f64> {
    let law = scenario.power_law(tables)?;
    Ok(law.log2_length(n_ops.log2()).exp2())
}

pub fn bound_at_length(
    scenario: &Scenario,
    length: f64,
    tables: Option<&LightconeTables>,
) -> Result<BoundResult> {
    let n_ops = n_ops_for_scenario(scenario, length, tables)?;
    let crd = LogQuantity::from_log2(SPEED_OF_LIGHT.log2() - 4.0 * length.log2())?;
    Ok(BoundResult { n_ops, length, crd })
}

/// `E = ħc/l` in eV; `l` must be positive.
pub fn energy_from_length(length: f64) -> f64 {
    HBAR * SPEED_OF_LIGHT / length / ELEMENTARY_CHARGE
}

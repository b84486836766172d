//! Logical-qubit counts at which each scenario is pushed to the Planck length.

use serde::Serialize;

use crate::bounds::{
    energy_from_length, length_for_scenario, n_ops_for_scenario, Scenario, ScenarioKind,
};
use crate::cosmology::LightconeTables;
use crate::error::Result;
use crate::quantities::{LogQuantity, PhysicalConstants};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub scenario_kind: ScenarioKind,
    pub log2_nops_exact: f64,
    pub qubits: u32,
    /// m; the Planck length by construction.
    pub length_at_threshold: f64,
}

/// Nearest integer, ties up.
pub fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

pub fn planck_threshold(
    scenario: &Scenario,
    tables: Option<&LightconeTables>,
    constants: &PhysicalConstants,
) -> Result<ThresholdResult> {
    let n_ops = n_ops_for_scenario(scenario, constants.planck_length, tables)?;
    let log2_nops_exact = n_ops.log2();
    Ok(ThresholdResult {
        scenario_kind: scenario.kind(),
        log2_nops_exact,
        qubits: round_half_up(log2_nops_exact).max(1.0) as u32,
        length_at_threshold: constants.planck_length,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioVerdict {
    pub scenario_kind: ScenarioKind,
    /// Largest substrate spacing still compatible with `2^n` operations, m.
    pub length: f64,
    /// eV.
    pub energy: f64,
    pub sub_planckian: bool,
    pub threshold: ThresholdResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MachineReport {
    pub qubits: u32,
    /// Ascending by threshold.
    pub verdicts: Vec<ScenarioVerdict>,
}

impl MachineReport {
    pub fn sub_planckian(&self) -> impl Iterator<Item = ScenarioKind> + '_ {
        self.verdicts
            .iter()
            .filter(|v| v.sub_planckian)
            .map(|v| v.scenario_kind)
    }
}

/// Probed length of an `n`-qubit machine under every scenario.
pub fn classify_machine(
    qubits: u32,
    scenarios: &[Scenario],
    tables: Option<&LightconeTables>,
    constants: &PhysicalConstants,
) -> Result<MachineReport> {
    let n_ops = crate::bounds::neo_from_qubits(qubits)?;
    classify_operations(qubits, n_ops, scenarios, tables, constants)
}

fn classify_operations(
    qubits: u32,
    n_ops: LogQuantity,
    scenarios: &[Scenario],
    tables: Option<&LightconeTables>,
    constants: &PhysicalConstants,
) -> Result<MachineReport> {
    let mut verdicts = scenarios
        .iter()
        .map(|s| {
            let length = length_for_scenario(s, n_ops, tables)?;
            Ok(ScenarioVerdict {
                scenario_kind: s.kind(),
                length,
                energy: energy_from_length(length),
                sub_planckian: length < constants.planck_length,
                threshold: planck_threshold(s, tables, constants)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    verdicts.sort_by(|a, b| {
        a.threshold
            .log2_nops_exact
            .total_cmp(&b.threshold.log2_nops_exact)
    });
    Ok(MachineReport { qubits, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{LabGeometry, DEFAULT_INPUTS_PER_OP};
    use crate::cosmology::{build_tables, CosmologyParams};
    use crate::quantities::SECONDS_PER_YEAR;
    use std::num::NonZeroU32;
    use std::sync::LazyLock;

    static TABLES: LazyLock<LightconeTables> =
        LazyLock::new(|| build_tables(&CosmologyParams::fiducial()).unwrap());

    fn scenarios() -> Vec<Scenario> {
        Scenario::all(
            LabGeometry::new(1000.0, SECONDS_PER_YEAR).unwrap(),
            NonZeroU32::new(DEFAULT_INPUTS_PER_OP).unwrap(),
            CosmologyParams::fiducial(),
        )
    }

    #[test]
    fn rounding() {
        assert_eq!(round_half_up(1049.5), 1050.0);
        assert_eq!(round_half_up(1049.49), 1049.0);
        assert_eq!(round_half_up(525.3), 525.0);
        assert_eq!(round_half_up(881.5), 882.0);
    }

    #[test]
    fn seven_thresholds() {
        let k = PhysicalConstants::codata2018();
        let got: Vec<u32> = scenarios()
            .iter()
            .map(|s| planck_threshold(s, Some(&TABLES), &k).unwrap().qubits)
            .collect();
        assert_eq!(got, vec![525, 528, 1050, 882, 806, 1609, 1409]);
    }

    #[test]
    fn threshold_consistency() {
        let k = PhysicalConstants::codata2018();
        for s in scenarios() {
            let t = planck_threshold(&s, Some(&TABLES), &k).unwrap();
            assert!((t.log2_nops_exact - f64::from(t.qubits)).abs() <= 0.5);
            let l = length_for_scenario(
                &s,
                LogQuantity::power_of_two(t.qubits.into()),
                Some(&TABLES),
            )
            .unwrap();
            let slack = (0.5 / f64::from(s.kind().exponent())).exp2();
            let ratio = l / k.planck_length;
            assert!(
                ratio < slack && ratio > 1.0 / slack,
                "{:?}: {ratio}",
                s.kind()
            );
        }
    }

    #[test]
    fn classify_extremes() {
        let k = PhysicalConstants::codata2018();
        let scenarios = scenarios();
        let big = classify_machine(2048, &scenarios, Some(&TABLES), &k).unwrap();
        assert_eq!(big.sub_planckian().count(), 7);
        let small = classify_machine(1, &scenarios, Some(&TABLES), &k).unwrap();
        assert_eq!(small.sub_planckian().count(), 0);
        let thresholds: Vec<f64> = big
            .verdicts
            .iter()
            .map(|v| v.threshold.log2_nops_exact)
            .collect();
        assert!(thresholds.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn classify_nine_hundred() {
        let k = PhysicalConstants::codata2018();
        let report = classify_machine(900, &scenarios(), Some(&TABLES), &k).unwrap();
        let mut sub: Vec<ScenarioKind> = report.sub_planckian().collect();
        sub.sort();
        assert_eq!(
            sub,
            vec![
                ScenarioKind::Lab,
                ScenarioKind::LabNearestNeighbor,
                ScenarioKind::LabBroadcast,
                ScenarioKind::Universe,
            ]
        );
    }

    #[test]
    fn more_qubits_never_un_rule_out() {
        let k = PhysicalConstants::codata2018();
        let scenarios = scenarios();
        let mut seen = std::collections::BTreeSet::new();
        for n in (1..=2100).step_by(7) {
            let report = classify_machine(n, &scenarios, Some(&TABLES), &k).unwrap();
            let now: std::collections::BTreeSet<_> = report.sub_planckian().collect();
            assert!(seen.is_subset(&now), "n = {n}");
            seen = now;
        }
    }
}

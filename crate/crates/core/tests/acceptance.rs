//! One line per acceptance criterion; exits nonzero if any fails.

mod support;

use std::fmt::Write as _;
use std::num::NonZeroU32;
use std::process::ExitCode;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use planckbound::bounds::{
    length_for_scenario, max_length, n_ops_for_scenario, planck_crd, LabGeometry, Scenario,
    ScenarioKind,
};
use planckbound::cosmology::{build_tables, scale_factor, CosmologyParams, LightconeTables};
use planckbound::figure::{
    build_figure, format_g17, write_series, FigureConfig, Format, StyleHint, CSV_HEADER,
};
use planckbound::quantities::{LogQuantity, PhysicalConstants, SECONDS_PER_GYR, SECONDS_PER_YEAR};
use planckbound::thresholds::planck_threshold;
use support::Oracle;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

type Check = fn(&Ctx) -> Outcome;

struct Ctx {
    constants: PhysicalConstants,
    params: CosmologyParams,
    tables: LightconeTables,
    scenarios: Vec<Scenario>,
}

fn k4(ctx: &Ctx) -> Outcome {
    let k = ctx.tables.k_factors().unwrap().k4u;
    outcome(
        (k - 0.13).abs() <= 0.005,
        format!("k4U = {k:.6} (0.13 +/- 0.005)"),
    )
}

fn k8(ctx: &Ctx) -> Outcome {
    let k = ctx.tables.k_factors().unwrap().k8u;
    outcome(
        rel(k, 8.6e-4) <= 0.01,
        format!("k8U = {k:.6e} (8.6e-4 +/- 1%)"),
    )
}

fn k7(ctx: &Ctx) -> Outcome {
    let k = ctx.tables.k_factors().unwrap().k7u;
    outcome(
        rel(k, 6.2e-3) <= 0.01,
        format!("k7U = {k:.6e} (6.2e-3 +/- 1%)"),
    )
}

fn age(ctx: &Ctx) -> Outcome {
    let gyr = ctx.params.age() / SECONDS_PER_GYR;
    outcome(
        (gyr - 13.5).abs() <= 0.05,
        format!("T_U = {gyr:.4} Gyr (13.5 +/- 0.05)"),
    )
}

fn planck_rate(ctx: &Ctx) -> Outcome {
    let c = planck_crd(&ctx.constants);
    let mantissa = (c.log2() - 490.0).exp2();
    outcome(
        rel(mantissa, 1.37) <= 0.01,
        format!(
            "C_P = {} ops m^-3 s^-1 (1.37 x 2^490 +/- 1%)",
            c.to_binary_string()
        ),
    )
}

fn thresholds(ctx: &Ctx) -> Outcome {
    let expected = [
        (ScenarioKind::Lab, 525),
        (ScenarioKind::LabNearestNeighbor, 528),
        (ScenarioKind::Universe, 806),
        (ScenarioKind::LabBroadcast, 882),
        (ScenarioKind::LabFullyConnected, 1050),
        (ScenarioKind::UniverseFullyConnected, 1609),
        (ScenarioKind::UniverseBroadcast, 1409),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (kind, want) in expected {
        let s = ctx.scenarios.iter().find(|s| s.kind() == kind).unwrap();
        let got = planck_threshold(s, Some(&ctx.tables), &ctx.constants).unwrap();
        pass &= got.qubits == want;
        let _ = write!(detail, "{}={} ", kind.as_str(), got.qubits);
    }
    outcome(pass, format!("{}(exact)", detail))
}

fn gpu(_: &Ctx) -> Outcome {
    let ops = LogQuantity::from_real(3.352e15).unwrap();
    let l = max_length(744e-9, 1.0, ops).unwrap();
    outcome(
        (4.8e-4..=5.3e-4).contains(&l),
        format!("l = {l:.4e} m (in [4.8e-4, 5.3e-4])"),
    )
}

fn eds_suite(_: &Ctx) -> Outcome {
    let params = CosmologyParams::einstein_de_sitter(70.0).unwrap();
    let tables = build_tables(&params).unwrap();
    let o = Oracle { age: params.age() };
    let mut worst: f64 = 0.0;
    for i in 1..=20 {
        let t = o.age * f64::from(i) / 20.0;
        let errs = [
            rel(scale_factor(t, &params).unwrap(), o.a(t)),
            rel(tables.comoving_distance(0.0, t).unwrap(), o.d(0.0, t)),
            rel(
                tables.comoving_distance(t / 2.0, t).unwrap(),
                o.d(t / 2.0, t),
            ),
            rel(tables.v4(t).unwrap(), o.v4(t)),
            rel(tables.v4_rate(t).unwrap(), o.v4_rate(t)),
        ];
        worst = errs.iter().copied().fold(worst, f64::max);
    }
    outcome(
        worst <= 1e-6,
        format!("worst rel error {worst:.2e} over 20 times (<= 1e-6)"),
    )
}

fn finite_differences(ctx: &Ctx) -> Outcome {
    let age = ctx.params.age();
    let mut worst: f64 = 0.0;
    for i in 1..=20 {
        let t = age * f64::from(i) / 21.0;
        let h = 1e-4 * t;
        let fd = (ctx.tables.v4(t + h).unwrap() - ctx.tables.v4(t - h).unwrap()) / (2.0 * h);
        worst = worst.max(rel(fd, ctx.tables.v4_rate(t).unwrap()));
    }
    outcome(
        worst <= 1e-5,
        format!("worst rel error {worst:.2e} over 20 times (<= 1e-5)"),
    )
}

fn log_slopes(ctx: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut slopes = Vec::new();
    for s in &ctx.scenarios {
        let (l1, l2) = (1e-35, 1e-10);
        let n1 = n_ops_for_scenario(s, l1, Some(&ctx.tables)).unwrap().log2();
        let n2 = n_ops_for_scenario(s, l2, Some(&ctx.tables)).unwrap().log2();
        let slope = (n1 - n2) / ((1.0 / l1).log2() - (1.0 / l2).log2());
        worst = worst.max((slope - f64::from(s.kind().exponent())).abs());
        slopes.push(format!("{:.0}", slope));
    }
    outcome(
        worst <= 1e-9,
        format!(
            "slopes {{{}}}, worst deviation {worst:.1e} (<= 1e-9)",
            slopes.join(",")
        ),
    )
}

fn round_trip(ctx: &Ctx) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let l = 10f64.powf(rng.gen_range(-40.0..=-3.0));
        for s in &ctx.scenarios {
            let n = n_ops_for_scenario(s, l, Some(&ctx.tables)).unwrap();
            let back = length_for_scenario(s, n, Some(&ctx.tables)).unwrap();
            worst = worst.max(((back.log2() - l.log2()) / l.log2()).abs());
        }
    }
    outcome(
        worst <= 1e-10,
        format!("worst log-space rel error {worst:.1e} on 50 lengths (<= 1e-10)"),
    )
}

fn figure_file(ctx: &Ctx) -> Outcome {
    let config = FigureConfig::default();
    let figure = build_figure((0.0, 2000.0), 1.0, &ctx.tables, &ctx.constants, &config).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("figure.csv");
    write_series(
        &figure.series,
        &figure.annotations,
        &serde_json::Value::Null,
        &path,
        Format::Csv,
    )
    .unwrap();
    let bytes = std::fs::read(&path).unwrap();
    let text = String::from_utf8(bytes).unwrap();

    let mut problems = Vec::new();
    if !text.starts_with(CSV_HEADER) {
        problems.push("header".to_owned());
    }
    if text.contains('\r') || !text.ends_with('\n') {
        problems.push("line endings".to_owned());
    }

    let mut rows: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.rsplitn(4, ',').collect();
        let [energy, length, neo, head] = fields[..] else {
            problems.push(format!("row `{line}`"));
            continue;
        };
        let hint = head.split(',').next().unwrap().to_owned();
        for field in [energy, length, neo] {
            if format_g17(field.parse().unwrap_or(f64::NAN)) != field {
                problems.push(format!("number `{field}`"));
            }
        }
        let point = (neo.parse().unwrap(), length.parse().unwrap());
        match rows.last_mut() {
            Some((h, points)) if *h == hint => points.push(point),
            _ => rows.push((hint, vec![point])),
        }
    }
    if rows.len() != 5 {
        problems.push(format!("{} series", rows.len()));
    }

    let small = LabGeometry::new(1.0, 1.0).unwrap();
    let large = LabGeometry::new(1000.0, SECONDS_PER_YEAR).unwrap();
    let expected = [
        (StyleHint::Dotted, Scenario::Lab { lab: small }),
        (StyleHint::SolidLower, Scenario::Lab { lab: large }),
        (
            StyleHint::SolidUpper,
            Scenario::Universe { params: ctx.params },
        ),
        (
            StyleHint::Dashed,
            Scenario::LabFullyConnected { lab: large },
        ),
        (
            StyleHint::Dashdot,
            Scenario::UniverseFullyConnected { params: ctx.params },
        ),
    ];
    let lp = ctx.constants.planck_length.log2();
    let mut worst: f64 = 0.0;
    for (hint, scenario) in &expected {
        let Some((_, points)) = rows.iter().find(|(h, _)| h == hint.as_str()) else {
            problems.push(format!("missing {}", hint.as_str()));
            continue;
        };
        if points
            .windows(2)
            .any(|w| !(w[1].0 > w[0].0 && w[1].1 < w[0].1))
        {
            problems.push(format!("{} not monotone", hint.as_str()));
        }
        let want = planck_threshold(scenario, Some(&ctx.tables), &ctx.constants)
            .unwrap()
            .log2_nops_exact;
        let crossing = points.windows(2).find_map(|w| {
            let (y0, y1) = (w[0].1.log2(), w[1].1.log2());
            ((y0 - lp) * (y1 - lp) <= 0.0)
                .then(|| w[0].0 + (lp - y0) / (y1 - y0) * (w[1].0 - w[0].0))
        });
        match crossing {
            Some(x) => worst = worst.max((x - want).abs()),
            None => problems.push(format!("{} never crosses", hint.as_str())),
        }
    }
    if worst > 0.01 {
        problems.push(format!("crossing off by {worst:.3}"));
    }
    let detail = if problems.is_empty() {
        format!("5 series, monotone, worst crossing offset {worst:.1e} (<= 0.01), schema exact")
    } else {
        problems.join("; ")
    };
    outcome(problems.is_empty(), detail)
}

fn main() -> ExitCode {
    let constants = PhysicalConstants::codata2018();
    let params = CosmologyParams::fiducial();
    let tables = build_tables(&params).expect("fiducial tables");
    let scenarios = Scenario::all(
        LabGeometry::new(1000.0, SECONDS_PER_YEAR).unwrap(),
        NonZeroU32::new(8).unwrap(),
        params,
    );
    let ctx = Ctx {
        constants,
        params,
        tables,
        scenarios,
    };

    let criteria: [(&str, Check); 12] = [
        ("k4U", k4),
        ("k8U", k8),
        ("k7U", k7),
        ("age of the universe", age),
        ("planck rate density", planck_rate),
        ("qubit thresholds", thresholds),
        ("gpu example", gpu),
        ("einstein-de sitter oracle", eds_suite),
        ("v4 rate vs finite differences", finite_differences),
        ("log-slope exponents", log_slopes),
        ("length round trip", round_trip),
        ("figure file", figure_file),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check(&ctx);
        if !o.pass {
            failures += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

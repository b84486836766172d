//! Data behind the length-versus-NEO figure: five scenario lines sampled on a
//! log2(NEO) grid, plus the markers drawn over them. Rendering is left to
//! external tools; this module only emits CSV and JSON.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{energy_from_length, LabGeometry, Scenario, ScenarioKind};
use crate::cosmology::LightconeTables;
use crate::error::{Error, Result};
use crate::quantities::{PhysicalConstants, SECONDS_PER_YEAR};

pub const CSV_HEADER: &str = "series,label,log2_neo,length_m,energy_ev\n";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StyleHint {
    Dotted,
    SolidLower,
    SolidUpper,
    Dashed,
    Dashdot,
}

impl StyleHint {
    pub fn as_str(self) -> &'static str {
        match self {
            StyleHint::Dotted => "dotted",
            StyleHint::SolidLower => "solid_lower",
            StyleHint::SolidUpper => "solid_upper",
            StyleHint::Dashed => "dashed",
            StyleHint::Dashdot => "dashdot",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigurePoint {
    pub log2_neo: f64,
    pub length_m: f64,
    pub energy_ev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureSeries {
    pub label: String,
    pub kind: ScenarioKind,
    pub style_hint: StyleHint,
    pub points: Vec<FigurePoint>,
}

impl FigureSeries {
    /// `log2_neo` at which the series reaches `length`, interpolating
    /// linearly in (log2 NEO, log2 length), which is exact for a power law.
    pub fn crossing(&self, length: f64) -> Option<f64> {
        let target = length.log2();
        self.points.windows(2).find_map(|w| {
            let (y0, y1) = (w[0].length_m.log2(), w[1].length_m.log2());
            if (y0 - target) * (y1 - target) > 0.0 || y0 == y1 {
                return None;
            }
            let s = (target - y0) / (y1 - y0);
            Some(w[0].log2_neo + s * (w[1].log2_neo - w[0].log2_neo))
        })
    }

    /// Ascending NEO, strictly decreasing length, finite values.
    pub fn validate(&self) -> Result<()> {
        let finite = self
            .points
            .iter()
            .all(|p| p.log2_neo.is_finite() && p.length_m.is_finite() && p.energy_ev.is_finite());
        if !finite {
            return Err(Error::Grid("figure point is not finite"));
        }
        for w in self.points.windows(2) {
            if w[1].log2_neo <= w[0].log2_neo {
                return Err(Error::Grid("series must be sorted by log2_neo"));
            }
            if w[1].length_m >= w[0].length_m {
                return Err(Error::Grid("series length must strictly decrease"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationAxis {
    Log2Neo,
    EnergyEv,
    LengthM,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub label: String,
    pub axis: AnnotationAxis,
    pub value: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyMarker {
    pub year: u16,
    pub energy_ev: f64,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureConfig {
    pub small_lab: LabGeometry,
    pub large_lab: LabGeometry,
    /// Qubit band for breaking RSA; endpoints are placeholders.
    pub rsa_qubits: (f64, f64),
    pub energy_markers: Vec<EnergyMarker>,
}

impl Default for FigureConfig {
    fn default() -> Self {
        FigureConfig {
            small_lab: LabGeometry::new(1.0, 1.0).expect("positive"),
            large_lab: LabGeometry::new(1000.0, SECONDS_PER_YEAR).expect("positive"),
            rsa_qubits: (1000.0, 10_000.0),
            energy_markers: vec![
                EnergyMarker {
                    year: 1900,
                    energy_ev: 5e6,
                    source: "radioactivity (few MeV)".into(),
                },
                EnergyMarker {
                    year: 1960,
                    energy_ev: 3e10,
                    source: "Alternating Gradient Synchrotron".into(),
                },
                EnergyMarker {
                    year: 2026,
                    energy_ev: 1e13,
                    source: "Large Hadron Collider".into(),
                },
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Figure {
    pub series: Vec<FigureSeries>,
    pub annotations: Vec<Annotation>,
}

/// On-disk JSON layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureFile {
    pub metadata: serde_json::Value,
    pub series: Vec<FigureSeries>,
    pub annotations: Vec<Annotation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// `min, min + step, …` up to `max` inclusive.
pub fn neo_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(Error::Domain {
            what: "log2(NEO) range width",
            value: max - min,
        });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain {
            what: "log2(NEO) step",
            value: step,
        });
    }
    let count = ((max - min) / step * (1.0 + 1e-12)).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(Error::Domain {
            what: "log2(NEO) grid size",
            value: count as f64,
        });
    }
    Ok((0..count).map(|i| min + step * i as f64).collect())
}

fn lab_label(prefix: &str, lab: &LabGeometry) -> String {
    format!("{prefix} {} m^3 for {} s", lab.volume(), lab.duration())
}

pub fn build_figure(
    qubit_range: (f64, f64),
    step: f64,
    tables: &LightconeTables,
    constants: &PhysicalConstants,
    config: &FigureConfig,
) -> Result<Figure> {
    let grid = neo_grid(qubit_range.0, qubit_range.1, step)?;
    let params = *tables.params();
    let lines = [
        (
            StyleHint::Dotted,
            lab_label("lab", &config.small_lab),
            Scenario::Lab {
                lab: config.small_lab,
            },
        ),
        (
            StyleHint::SolidLower,
            lab_label("lab", &config.large_lab),
            Scenario::Lab {
                lab: config.large_lab,
            },
        ),
        (
            StyleHint::SolidUpper,
            "universe past light cone".to_owned(),
            Scenario::Universe { params },
        ),
        (
            StyleHint::Dashed,
            lab_label("fully connected lab", &config.large_lab),
            Scenario::LabFullyConnected {
                lab: config.large_lab,
            },
        ),
        (
            StyleHint::Dashdot,
            "fully connected universe".to_owned(),
            Scenario::UniverseFullyConnected { params },
        ),
    ];

    let series = lines
        .into_iter()
        .map(|(style_hint, label, scenario)| {
            let law = scenario.power_law(Some(tables))?;
            let points = grid
                .iter()
                .map(|&log2_neo| {
                    let length_m = law.log2_length(log2_neo).exp2();
                    FigurePoint {
                        log2_neo,
                        length_m,
                        energy_ev: energy_from_length(length_m),
                    }
                })
                .collect();
            Ok(FigureSeries {
                label,
                kind: scenario.kind(),
                style_hint,
                points,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut annotations = vec![
        Annotation {
            label: "planck length".into(),
            axis: AnnotationAxis::LengthM,
            value: constants.planck_length,
            note: "horizontal marker".into(),
        },
        Annotation {
            label: "planck energy".into(),
            axis: AnnotationAxis::EnergyEv,
            value: constants.planck_energy,
            note: "right-hand axis at the planck length".into(),
        },
        Annotation {
            label: "rsa band start".into(),
            axis: AnnotationAxis::Log2Neo,
            value: config.rsa_qubits.0,
            note: "configurable default, logical qubits to factor RSA moduli".into(),
        },
        Annotation {
            label: "rsa band end".into(),
            axis: AnnotationAxis::Log2Neo,
            value: config.rsa_qubits.1,
            note: "configurable default, logical qubits to factor RSA moduli".into(),
        },
    ];
    annotations.extend(config.energy_markers.iter().map(|m| Annotation {
        label: m.year.to_string(),
        axis: AnnotationAxis::EnergyEv,
        value: m.energy_ev,
        note: m.source.clone(),
    }));

    Ok(Figure {
        series,
        annotations,
    })
}

/// `printf("%.17g")`.
pub fn format_g17(x: f64) -> String {
    const PRECISION: i32 = 17;
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exponent) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (PRECISION - 1 - exponent) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_field(out: &mut String, field: &str) {
    if field.contains([',', '"', '\n', '\r']) {
        out.push('"');
        out.push_str(&field.replace('"', "\"\""));
        out.push('"');
    } else {
        out.push_str(field);
    }
}

pub fn render_csv(series: &[FigureSeries]) -> String {
    let mut out = String::from(CSV_HEADER);
    for s in series {
        for p in &s.points {
            out.push_str(s.style_hint.as_str());
            out.push(',');
            csv_field(&mut out, &s.label);
            let _ = writeln!(
                out,
                ",{},{},{}",
                format_g17(p.log2_neo),
                format_g17(p.length_m),
                format_g17(p.energy_ev)
            );
        }
    }
    out
}

pub fn render_json(
    series: &[FigureSeries],
    annotations: &[Annotation],
    metadata: &serde_json::Value,
) -> Result<String> {
    #[derive(Serialize)]
    struct Borrowed<'a> {
        metadata: &'a serde_json::Value,
        series: &'a [FigureSeries],
        annotations: &'a [Annotation],
    }
    let mut text = serde_json::to_string_pretty(&Borrowed {
        metadata,
        series,
        annotations,
    })?;
    text.push('\n');
    Ok(text)
}

/// Writes the figure; `metadata` only lands in the JSON form, since the CSV
/// layout is fixed.
pub fn write_series(
    series: &[FigureSeries],
    annotations: &[Annotation],
    metadata: &serde_json::Value,
    path: &Path,
    format: Format,
) -> Result<()> {
    let text = match format {
        Format::Csv => render_csv(series),
        Format::Json => render_json(series, annotations, metadata)?,
    };
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Parses and validates a JSON figure file.
pub fn read_json(bytes: &[u8]) -> Result<FigureFile> {
    let file: FigureFile = serde_json::from_slice(bytes)?;
    for s in &file.series {
        s.validate()?;
    }
    if file.annotations.iter().any(|a| !a.value.is_finite()) {
        return Err(Error::Grid("annotation value is not finite"));
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosmology::{build_tables, CosmologyParams};
    use std::sync::LazyLock;

    static TABLES: LazyLock<LightconeTables> =
        LazyLock::new(|| build_tables(&CosmologyParams::fiducial()).unwrap());

    fn figure() -> Figure {
        build_figure(
            (0.0, 2000.0),
            1.0,
            &TABLES,
            &PhysicalConstants::codata2018(),
            &FigureConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn g17_matches_printf() {
        // Expected strings from Python's '%.17g' %.
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (1.616255e-35, "1.6162550000000001e-35"),
            (525.3359711540882, "525.33597115408816"),
            (1.2345678901234568e17, "1.2345678901234568e+17"),
            (1e17, "1e+17"),
            (1e16, "10000000000000000"),
            (0.0001, "0.0001"),
            (0.00001, "1.0000000000000001e-05"),
            (2.5, "2.5"),
            (1e300, "1.0000000000000001e+300"),
            (5.07893e-4, "0.00050789300000000004"),
            (100.0, "100"),
            (-2.5, "-2.5"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g17(x), want, "{x:e}");
        }
    }

    #[test]
    fn g17_round_trips() {
        for x in [1.0 / 3.0, 2.0f64.sqrt() * 1e-40, 6.02214076e23, 123.456] {
            assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn empty_figure_is_header_only() {
        assert_eq!(
            render_csv(&[]),
            "series,label,log2_neo,length_m,energy_ev\n"
        );
    }

    #[test]
    fn five_series_monotone() {
        let fig = figure();
        assert_eq!(fig.series.len(), 5);
        let labels: std::collections::HashSet<_> =
            fig.series.iter().map(|s| s.label.clone()).collect();
        assert_eq!(labels.len(), 5);
        for s in &fig.series {
            s.validate().unwrap();
        }
    }

    #[test]
    fn crossings() {
        let fig = figure();
        let lp = PhysicalConstants::codata2018().planck_length;
        let lower = fig
            .series
            .iter()
            .find(|s| s.style_hint == StyleHint::SolidLower)
            .unwrap();
        assert!((lower.crossing(lp).unwrap() - 525.336).abs() < 0.01);
        let dashdot = fig
            .series
            .iter()
            .find(|s| s.style_hint == StyleHint::Dashdot)
            .unwrap();
        assert!((dashdot.crossing(lp).unwrap() - 1608.593).abs() < 0.01);
    }

    #[test]
    fn slopes() {
        let fig = figure();
        for s in &fig.series {
            let (p, q) = (&s.points[100], &s.points[1700]);
            let slope = (q.length_m.log2() - p.length_m.log2()) / (q.log2_neo - p.log2_neo);
            let want = -1.0 / f64::from(s.kind.exponent());
            assert!((slope - want).abs() < 1e-12, "{}: {slope}", s.label);
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let fig = figure();
        let meta = serde_json::json!({"version": "test"});
        let text = render_json(&fig.series, &fig.annotations, &meta).unwrap();
        let back = read_json(text.as_bytes()).unwrap();
        assert_eq!(back.series, fig.series);
        assert_eq!(back.annotations, fig.annotations);
        for (a, b) in back.series.iter().zip(&fig.series) {
            for (p, q) in a.points.iter().zip(&b.points) {
                assert_eq!(p.length_m.to_bits(), q.length_m.to_bits());
                assert_eq!(p.energy_ev.to_bits(), q.energy_ev.to_bits());
            }
        }
    }

    #[test]
    fn read_json_rejects_unsorted_series() {
        let bad = r#"{"metadata":{},"annotations":[],"series":[{"label":"x","kind":"lab",
            "style_hint":"dotted","points":[{"log2_neo":2,"length_m":1,"energy_ev":1},
            {"log2_neo":1,"length_m":0.5,"energy_ev":2}]}]}"#;
        assert!(read_json(bad.as_bytes()).is_err());
        assert!(read_json(b"{").is_err());
    }

    #[test]
    fn grid_rules() {
        assert_eq!(
            neo_grid(0.0, 2.0, 0.5).unwrap(),
            vec![0.0, 0.5, 1.0, 1.5, 2.0]
        );
        assert_eq!(neo_grid(0.0, 1.0, 0.3).unwrap().len(), 4);
        assert!(neo_grid(1.0, 1.0, 0.1).is_err());
        assert!(neo_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn write_reports_path() {
        let err = write_series(
            &[],
            &[],
            &serde_json::Value::Null,
            Path::new("/nonexistent-dir/figure.csv"),
            Format::Csv,
        )
        .unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/figure.csv"));
    }

    #[test]
    fn csv_quotes_awkward_labels() {
        let s = FigureSeries {
            label: "a, \"b\"".into(),
            kind: ScenarioKind::Lab,
            style_hint: StyleHint::Dotted,
            points: vec![FigurePoint {
                log2_neo: 1.0,
                length_m: 2.0,
                energy_ev: 3.0,
            }],
        };
        assert_eq!(
            render_csv(&[s]),
            format!("{CSV_HEADER}dotted,\"a, \"\"b\"\"\",1,2,3\n")
        );
    }
}

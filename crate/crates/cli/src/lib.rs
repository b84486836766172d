//! Command-line front end for the `planckbound` library.
//!
//! Data goes to stdout, diagnostics to stderr. Exit status is 0 on success,
//! 1 on runtime or I/O failure and 2 on usage or configuration errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use planckbound::bounds::{
    crd, energy_from_length, max_length, planck_crd, Scenario, ScenarioKind,
};
use planckbound::config::{ConfigOverrides, RunConfig};
use planckbound::cosmology::LightconeTables;
use planckbound::figure::{build_figure, write_series, Figure, FigureConfig, Format};
use planckbound::quantities::{LogQuantity, PhysicalConstants};
use planckbound::thresholds::{classify_machine, planck_threshold, ThresholdResult};
use planckbound::Error;

pub const CONFIG_ENV: &str = "PLANCKBOUND_CONFIG";

#[derive(Debug, Parser)]
#[command(
    name = "planckbound",
    version,
    about = "Planck-scale bounds on quantum computation"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Hubble constant, km/s/Mpc.
    #[arg(long, global = true)]
    pub h0: Option<f64>,
    #[arg(long, global = true)]
    pub omega_m: Option<f64>,
    #[arg(long, global = true)]
    pub omega_lambda: Option<f64>,
    /// Lab volume, m^3.
    #[arg(long, global = true)]
    pub lab_volume: Option<f64>,
    /// Lab duration, s.
    #[arg(long, global = true)]
    pub lab_duration: Option<f64>,
    #[arg(long, global = true)]
    pub inputs_per_op: Option<u32>,
    /// Relative tolerance for the cosmology integrals.
    #[arg(long, global = true)]
    pub quad_rel_tol: Option<f64>,
    /// Nodes in the cumulative light-cone tables.
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// key = value file; flags take precedence over it.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Planck units and the Planck rate density.
    Constants,
    /// Light-cone constants of the cosmology.
    Kfactors,
    /// Qubit counts at which each scenario reaches the Planck length.
    Threshold {
        /// Scenario name, or `all`.
        #[arg(long, default_value = "all")]
        scenario: String,
    },
    /// Length and energy probed by a machine.
    Scale {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..), required_unless_present = "ops", conflicts_with = "ops")]
        qubits: Option<u32>,
        /// Scenario name, or `all`.
        #[arg(long, default_value = "all")]
        scenario: String,
        /// Total operation count, for a classical machine.
        #[arg(long)]
        ops: Option<f64>,
        /// Volume of the classical machine, m^3; defaults to the lab volume.
        #[arg(long, requires = "ops")]
        volume: Option<f64>,
        /// Run time of the classical machine, s; defaults to the lab duration.
        #[arg(long, requires = "ops")]
        duration: Option<f64>,
    },
    /// Writes the data behind the length-versus-qubits figure.
    Figure {
        #[arg(long, default_value_t = 0.0)]
        min: f64,
        #[arg(long, default_value_t = 2000.0)]
        max: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, value_enum, default_value_t = FileFormat::Csv)]
        format: FileFormat,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FileFormat {
    Csv,
    Json,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. }
            | Error::Flatness { .. }
            | Error::UnknownScenario(_)
            | Error::Config { .. }
            | Error::NonPositiveFactor { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                2
            } else {
                let _ = write!(stdout, "{}", e.render());
                0
            };
            return code;
        }
    };
    match execute(&cli, stderr) {
        Ok(text) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: writing output: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn resolve_config(common: &Common) -> CliResult<RunConfig> {
    let file = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            ConfigOverrides::parse(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => ConfigOverrides::default(),
    };
    let flags = ConfigOverrides {
        h0_km_s_mpc: common.h0,
        omega_m: common.omega_m,
        omega_lambda: common.omega_lambda,
        lab_volume_m3: common.lab_volume,
        lab_duration_s: common.lab_duration,
        inputs_per_op: common.inputs_per_op,
        quad_rel_tol: common.quad_rel_tol,
        grid_points: common.grid_points,
    };
    Ok(RunConfig::resolve(&file.merge(flags))?)
}

fn metadata(config: &RunConfig) -> serde_json::Value {
    json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
    })
}

fn metadata_text(config: &RunConfig) -> String {
    format!(
        "# {} {}: h0={} km/s/Mpc omega_m={} omega_lambda={} lab_volume={} m^3 lab_duration={} s \
         inputs_per_op={} quad_rel_tol={:e} grid_points={}\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        config.h0_km_s_mpc,
        config.omega_m,
        config.omega_lambda,
        config.lab_volume_m3,
        config.lab_duration_s,
        config.inputs_per_op,
        config.quad_rel_tol,
        config.grid_points,
    )
}

fn json_document(config: &RunConfig, result: impl Serialize) -> CliResult<String> {
    let doc = json!({ "metadata": metadata(config), "result": result });
    let mut text =
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::Runtime(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn select(config: &RunConfig, name: &str) -> CliResult<Vec<Scenario>> {
    let all = config.scenarios()?;
    if name.eq_ignore_ascii_case("all") {
        return Ok(all);
    }
    let kind: ScenarioKind = name.parse()?;
    Ok(all.into_iter().filter(|s| s.kind() == kind).collect())
}

fn tables_for(config: &RunConfig, scenarios: &[Scenario]) -> CliResult<Option<LightconeTables>> {
    if scenarios.iter().any(|s| s.kind().is_universe()) {
        Ok(Some(LightconeTables::build(
            &config.cosmology()?,
            config.table_settings(),
        )?))
    } else {
        Ok(None)
    }
}

pub fn execute(cli: &Cli, stderr: &mut dyn Write) -> CliResult<String> {
    let config = resolve_config(&cli.common)?;
    let constants = PhysicalConstants::codata2018();
    let json = cli.common.json;
    match &cli.command {
        Command::Constants => constants_cmd(&config, &constants, json),
        Command::Kfactors => kfactors_cmd(&config, json),
        Command::Threshold { scenario } => threshold_cmd(&config, &constants, scenario, json),
        Command::Scale {
            qubits: Some(n),
            scenario,
            ..
        } => scale_cmd(&config, &constants, *n, scenario, json),
        Command::Scale {
            ops: Some(ops),
            volume,
            duration,
            ..
        } => {
            let volume = volume.unwrap_or(config.lab_volume_m3);
            let duration = duration.unwrap_or(config.lab_duration_s);
            machine_cmd(&config, &constants, *ops, volume, duration, json)
        }
        Command::Scale { .. } => Err(CliError::Usage("scale needs --qubits or --ops".into())),
        Command::Figure {
            min,
            max,
            step,
            format,
            out,
        } => figure_cmd(
            &config,
            &constants,
            (*min, *max),
            *step,
            *format,
            out,
            json,
            stderr,
        ),
    }
}

fn constants_cmd(config: &RunConfig, k: &PhysicalConstants, json: bool) -> CliResult<String> {
    let c_p = planck_crd(k);
    if json {
        return json_document(
            config,
            json!({
                "planck_length_m": k.planck_length,
                "planck_time_s": k.planck_time,
                "planck_energy_ev": k.planck_energy,
                "planck_crd": {
                    "log2_value": c_p.log2(),
                    "binary": c_p.to_binary_string(),
                    "decimal": c_p.to_decimal_string(),
                    "unit": "ops m^-3 s^-1",
                },
            }),
        );
    }
    let mut out = metadata_text(config);
    let _ = writeln!(out, "planck length  l_P = {:.6e} m", k.planck_length);
    let _ = writeln!(out, "planck time    t_P = {:.6e} s", k.planck_time);
    let _ = writeln!(out, "planck energy  E_P = {:.6e} eV", k.planck_energy);
    let _ = writeln!(
        out,
        "planck rate    C_P = {} = {} ops m^-3 s^-1",
        c_p.to_binary_string(),
        c_p.to_decimal_string()
    );
    Ok(out)
}

fn kfactors_cmd(config: &RunConfig, json: bool) -> CliResult<String> {
    let tables = LightconeTables::build(&config.cosmology()?, config.table_settings())?;
    let k = tables.k_factors()?;
    if json {
        return json_document(
            config,
            json!({
                "k4u": k.k4u,
                "k7u": k.k7u,
                "k8u": k.k8u,
                "requested_rel_tol": config.quad_rel_tol,
                "achieved_rel_error": k.achieved_rel_error,
                "age_s": tables.params().age(),
            }),
        );
    }
    let mut out = metadata_text(config);
    let _ = writeln!(out, "k4U = {:.10e}", k.k4u);
    let _ = writeln!(out, "k7U = {:.10e}", k.k7u);
    let _ = writeln!(out, "k8U = {:.10e}", k.k8u);
    let _ = writeln!(
        out,
        "achieved relative error {:.2e} (requested {:.2e})",
        k.achieved_rel_error, config.quad_rel_tol
    );
    Ok(out)
}

fn threshold_rows(
    scenarios: &[Scenario],
    tables: Option<&LightconeTables>,
    k: &PhysicalConstants,
) -> CliResult<Vec<ThresholdResult>> {
    Ok(scenarios
        .iter()
        .map(|s| planck_threshold(s, tables, k))
        .collect::<planckbound::Result<Vec<_>>>()?)
}

fn threshold_cmd(
    config: &RunConfig,
    k: &PhysicalConstants,
    name: &str,
    json: bool,
) -> CliResult<String> {
    let scenarios = select(config, name)?;
    let tables = tables_for(config, &scenarios)?;
    let rows = threshold_rows(&scenarios, tables.as_ref(), k)?;
    if json {
        return json_document(config, &rows);
    }
    let mut out = metadata_text(config);
    let _ = writeln!(
        out,
        "{:<26} {:>8} {:>20} {:>7}",
        "scenario", "exponent", "log2_nops_exact", "qubits"
    );
    for r in &rows {
        let _ = writeln!(
            out,
            "{:<26} {:>8} {:>20.10} {:>7}",
            r.scenario_kind.as_str(),
            r.scenario_kind.exponent(),
            r.log2_nops_exact,
            r.qubits
        );
    }
    Ok(out)
}

fn scale_cmd(
    config: &RunConfig,
    k: &PhysicalConstants,
    qubits: u32,
    name: &str,
    json: bool,
) -> CliResult<String> {
    let scenarios = select(config, name)?;
    let tables = tables_for(config, &scenarios)?;
    let report = classify_machine(qubits, &scenarios, tables.as_ref(), k)?;
    if json {
        return json_document(config, &report);
    }
    let mut out = metadata_text(config);
    let _ = writeln!(out, "{qubits} logical qubits, NEO = 2^{qubits}");
    let _ = writeln!(
        out,
        "{:<26} {:>14} {:>14} {:>8} {:>14}",
        "scenario", "length_m", "energy_ev", "qubits_P", "sub_planckian"
    );
    for v in &report.verdicts {
        let _ = writeln!(
            out,
            "{:<26} {:>14.6e} {:>14.6e} {:>8} {:>14}",
            v.scenario_kind.as_str(),
            v.length,
            v.energy,
            v.threshold.qubits,
            if v.sub_planckian { "yes" } else { "no" }
        );
    }
    Ok(out)
}

fn machine_cmd(
    config: &RunConfig,
    k: &PhysicalConstants,
    ops: f64,
    volume: f64,
    duration: f64,
    json: bool,
) -> CliResult<String> {
    let n_ops = LogQuantity::from_real(ops)?;
    let length = max_length(volume, duration, n_ops)?;
    let rate = crd(n_ops, volume, duration)?;
    let energy = energy_from_length(length);
    let sub_planckian = length < k.planck_length;
    if json {
        return json_document(
            config,
            json!({
                "ops": ops,
                "volume_m3": volume,
                "duration_s": duration,
                "length_m": length,
                "energy_ev": energy,
                "crd": rate.to_real(),
                "sub_planckian": sub_planckian,
            }),
        );
    }
    let mut out = metadata_text(config);
    let _ = writeln!(
        out,
        "{ops:e} operations in {volume:e} m^3 over {duration:e} s"
    );
    let _ = writeln!(out, "rate density {:.6e} ops m^-3 s^-1", rate.to_real());
    let _ = writeln!(out, "length <= {length:.6e} m, energy >= {energy:.6e} eV");
    let _ = writeln!(
        out,
        "sub-planckian: {}",
        if sub_planckian { "yes" } else { "no" }
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn figure_cmd(
    config: &RunConfig,
    k: &PhysicalConstants,
    range: (f64, f64),
    step: f64,
    format: FileFormat,
    out_path: &PathBuf,
    json: bool,
    stderr: &mut dyn Write,
) -> CliResult<String> {
    let cosmology = config.cosmology()?;
    let tables = LightconeTables::build(&cosmology, config.table_settings())?;
    let figure_config = FigureConfig {
        large_lab: config.lab()?,
        ..FigureConfig::default()
    };
    let figure = if range.0 < range.1 {
        build_figure(range, step, &tables, k, &figure_config)?
    } else {
        let _ = writeln!(
            stderr,
            "warning: empty range [{}, {}], writing a file without data rows",
            range.0, range.1
        );
        Figure::default()
    };
    let format = match format {
        FileFormat::Csv => Format::Csv,
        FileFormat::Json => Format::Json,
    };
    let mut meta = metadata(config);
    meta["rsa_band"] = json!({
        "qubits": [figure_config.rsa_qubits.0, figure_config.rsa_qubits.1],
        "status": "configurable default, endpoints not taken from a measurement",
    });
    write_series(&figure.series, &figure.annotations, &meta, out_path, format)?;

    let crossings: Vec<_> = figure
        .series
        .iter()
        .map(|s| {
            json!({
                "label": s.label,
                "style_hint": s.style_hint.as_str(),
                "planck_crossing_log2_neo": s.crossing(k.planck_length),
            })
        })
        .collect();
    if json {
        return json_document(
            config,
            json!({
                "path": out_path,
                "series": figure.series.len(),
                "crossings": crossings,
            }),
        );
    }
    let mut out = metadata_text(config);
    let _ = writeln!(
        out,
        "wrote {} series to {}",
        figure.series.len(),
        out_path.display()
    );
    for s in &figure.series {
        match s.crossing(k.planck_length) {
            Some(x) => {
                let _ = writeln!(
                    out,
                    "{:<11} {:<44} crosses l_P at log2 NEO = {x:.1}",
                    s.style_hint.as_str(),
                    s.label
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{:<11} {:<44} does not cross l_P in range",
                    s.style_hint.as_str(),
                    s.label
                );
            }
        }
    }
    Ok(out)
}

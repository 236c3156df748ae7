//! Command-line front end: one subcommand per experiment, JSON or CSV reports.
//!
//! Exit status: 0 on success, 2 on invalid input, 3 when a numerical
//! procedure did not converge (the report is still written).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::capacity::{capacity_with, OffDiagonalRule};
use crate::constructions::{counterexample, radial_potential_gap, scheme_from_gauge, potential_certificate, Mode};
use crate::embedding::{embedding_report, one_box_sup, onearc_necessity_profile, potential, potential_sup};
use crate::error::{Error, Result};
use crate::gauges::Gauge;
use crate::geometry::{ArcSet, DiskPoint};
use crate::measures::AtomicMeasure;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "carleson", version, about = "Potential-theory experiments for Carleson measures of the Dirichlet space")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// File of `key=value` lines supplying flags; command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    CellAverage,
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Literal,
    Surrogate,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Logarithmic capacity of an arc set.
    Capacity(CapacityArgs),
    /// One-box supremum over the dyadic family.
    Onebox(OneboxArgs),
    /// Potential supremum over a polar grid.
    Potential(PotentialArgs),
    /// Perron, Schur and dual-norm embedding constants.
    Embed(MeasureArgs),
    /// Cantor scheme lengths for a gauge.
    Cantor(CantorArgs),
    /// Counterexample measure and its Stegenga growth report.
    Counterexample(CounterexampleArgs),
    /// Potential of the radial example at w = 1 - 10^-k.
    #[command(alias = "radial")]
    Remark(RemarkArgs),
    /// Potential certificate from the one-box condition.
    Cert(CertArgs),
    /// Level-set profile t -> mu(|1 - conj(w) z| <= t).
    Fubini(FubiniArgs),
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Arc set JSON: {"arcs":[{"center":..,"length":..}]}.
    #[arg(long)]
    pub arcs: PathBuf,
    #[arg(long, default_value_t = 512)]
    pub resolution: usize,
    #[arg(long, value_enum, default_value_t = RuleArg::CellAverage)]
    pub rule: RuleArg,
    /// Also write the equilibrium weights (angle, weight) as CSV here.
    #[arg(long)]
    pub weights_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Measure JSON: {"atoms":[{"x":..,"y":..,"mass":..}]}.
    #[arg(long)]
    pub measure: PathBuf,
}

#[derive(Debug, Args)]
pub struct OneboxArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long, default_value = "power:1")]
    pub gauge: String,
    #[arg(long, default_value_t = 16)]
    pub depth: u32,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct CantorArgs {
    #[arg(long, default_value = "log:e")]
    pub gauge: String,
    #[arg(long, default_value_t = 6)]
    pub generations: usize,
    /// Emit the literal arcs of this generation instead of the lengths.
    #[arg(long)]
    pub literal: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, default_value = "log:e")]
    pub gauge: String,
    #[arg(long, default_value_t = 6)]
    pub generations: usize,
    #[arg(long, default_value_t = 4)]
    pub atoms_per_arc: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Surrogate)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct RemarkArgs {
    /// Exponents k (w = 1 - 10^-k); defaults to 2..=12.
    #[arg(long, value_delimiter = ',')]
    pub wexp: Vec<u32>,
}

#[derive(Debug, Args)]
pub struct CertArgs {
    #[arg(long)]
    pub measure: PathBuf,
    #[arg(long, default_value = "loglog:a=10,alpha=2")]
    pub gauge: String,
    #[arg(long, default_value_t = 16)]
    pub depth: u32,
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct FubiniArgs {
    #[arg(long)]
    pub measure: PathBuf,
    /// Base point `x,y` of the level sets.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.0], allow_negative_numbers = true)]
    pub w: Vec<f64>,
}

/// A finished report.
struct Report {
    json: String,
    csv: Vec<u8>,
    converged: bool,
}

impl Report {
    fn new(value: &impl Serialize, csv: Vec<u8>, converged: bool) -> Result<Self> {
        Ok(Report { json: serde_json::to_string_pretty(value)? + "\n", csv, converged })
    }
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))
}

fn load_measure(path: &Path) -> Result<AtomicMeasure> {
    AtomicMeasure::from_json(&read(path)?)
        .map_err(|e| Error::validation(format!("{}: {e}", path.display())))
}

fn load_arcs(path: &Path) -> Result<ArcSet> {
    ArcSet::from_json(&read(path)?).map_err(|e| Error::validation(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct OneboxOut<'a> {
    gauge: String,
    depth: u32,
    value: f64,
    witness: Option<crate::geometry::Arc>,
    profile: &'a [crate::embedding::ProfilePoint],
}

#[derive(Serialize)]
struct CantorOut {
    gauge: String,
    generations: usize,
    base: crate::geometry::Arc,
    log_lambdas: Vec<f64>,
    lambdas: Vec<f64>,
}

#[derive(Serialize)]
struct RemarkOut {
    k: u32,
    w: f64,
    potential: f64,
    error_estimate: f64,
    converged: bool,
}

#[derive(Serialize)]
struct FubiniOut {
    w: DiskPoint,
    thresholds: Vec<f64>,
    masses: Vec<f64>,
    integral: f64,
    potential: f64,
}

fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::Capacity(a) => {
            let set = load_arcs(&a.arcs)?;
            let rule = match a.rule {
                RuleArg::CellAverage => OffDiagonalRule::CellAverage,
                RuleArg::Midpoint => OffDiagonalRule::Midpoint,
            };
            let est = capacity_with(&set, a.resolution, rule)?;
            let mut weights = Vec::new();
            est.weights.write_csv(&mut weights)?;
            if let Some(path) = &a.weights_csv {
                fs::write(path, &weights)?;
            }
            Report::new(&est, weights, est.converged)
        }
        Command::Onebox(a) => {
            let mu = load_measure(&a.measure)?;
            let phi: Gauge = a.gauge.parse()?;
            let sup = one_box_sup(&mu, &phi, a.depth)?;
            let profile = onearc_necessity_profile(&mu, a.depth.max(2))?;
            let csv = csv_rows(
                &["length", "value"],
                profile.iter().map(|p| vec![p.length.to_string(), p.value.to_string()]),
            )?;
            let out =
                OneboxOut { gauge: phi.to_string(), depth: a.depth, value: sup.value, witness: sup.witness, profile: &profile };
            Report::new(&out, csv, true)
        }
        Command::Potential(a) => {
            let mu = load_measure(&a.measure)?;
            let sup = potential_sup(&mu, a.grid)?;
            let csv = csv_rows(
                &["x", "y", "value"],
                [vec![sup.argmax.x.to_string(), sup.argmax.y.to_string(), sup.value.to_string()]],
            )?;
            Report::new(&sup, csv, true)
        }
        Command::Embed(a) => {
            let mu = load_measure(&a.measure)?;
            let r = embedding_report(&mu)?;
            let csv = csv_rows(
                &["perron_bound", "schur_bound", "dual_norm", "iterations", "converged"],
                [vec![
                    r.perron_bound.to_string(),
                    r.schur_bound.to_string(),
                    r.dual_norm.to_string(),
                    r.iterations.to_string(),
                    r.converged.to_string(),
                ]],
            )?;
            Report::new(&r, csv, r.converged)
        }
        Command::Cantor(a) => {
            let phi: Gauge = a.gauge.parse()?;
            let scheme = scheme_from_gauge(&phi, a.generations)?;
            if let Some(m) = a.literal {
                let arcs = scheme.literal_arcs(m)?;
                let csv = csv_rows(
                    &["center", "length"],
                    arcs.arcs().iter().map(|x| vec![x.center().to_string(), x.length().to_string()]),
                )?;
                return Report::new(&arcs, csv, true);
            }
            let lambdas = scheme.lambdas();
            let csv = csv_rows(
                &["n", "lambda", "log_lambda"],
                lambdas
                    .iter()
                    .zip(&scheme.log_lambdas)
                    .enumerate()
                    .map(|(n, (l, nu))| vec![n.to_string(), l.to_string(), nu.to_string()]),
            )?;
            let out = CantorOut {
                gauge: phi.to_string(),
                generations: scheme.generations(),
                base: scheme.base,
                log_lambdas: scheme.log_lambdas.clone(),
                lambdas,
            };
            Report::new(&out, csv, true)
        }
        Command::Counterexample(a) => {
            let phi: Gauge = a.gauge.parse()?;
            let mode = match a.mode {
                ModeArg::Literal => Mode::Literal,
                ModeArg::Surrogate => Mode::Surrogate,
            };
            let report = counterexample(&phi, a.generations, a.atoms_per_arc, mode)?;
            for notice in &report.notices {
                eprintln!("{notice}");
            }
            let mut csv = Vec::new();
            report.write_csv(&mut csv)?;
            let converged = report.generations.iter().all(|g| g.stegenga.map_or(true, |s| s.converged));
            Report::new(&report, csv, converged)
        }
        Command::Remark(a) => {
            let ks: Vec<u32> = if a.wexp.is_empty() { (2..=12).collect() } else { a.wexp.clone() };
            let rows = ks
                .iter()
                .map(|&k| {
                    let p = radial_potential_gap(10f64.powi(-(k as i32)))?;
                    Ok(RemarkOut { k, w: p.w, potential: p.value, error_estimate: p.error_estimate, converged: p.converged })
                })
                .collect::<Result<Vec<_>>>()?;
            let csv = csv_rows(&["k", "potential"], rows.iter().map(|r| vec![r.k.to_string(), r.potential.to_string()]))?;
            let converged = rows.iter().all(|r| r.converged);
            Report::new(&rows, csv, converged)
        }
        Command::Cert(a) => {
            let mu = load_measure(&a.measure)?;
            let phi: Gauge = a.gauge.parse()?;
            let r = potential_certificate(&mu, &phi, a.depth, a.grid)?;
            let csv = csv_rows(
                &["c_box", "gauge_integral", "bound", "potential_sup", "pass"],
                [vec![
                    r.c_box.to_string(),
                    r.gauge_integral.to_string(),
                    r.bound.to_string(),
                    r.potential_sup.to_string(),
                    r.pass.to_string(),
                ]],
            )?;
            Report::new(&r, csv, true)
        }
        Command::Fubini(a) => {
            let mu = load_measure(&a.measure)?;
            let [x, y] = a.w[..] else {
                return Err(Error::validation(format!("--w needs two coordinates x,y, got {}", a.w.len())));
            };
            let w = DiskPoint::new(x, y)?;
            let profile = mu.fubini_profile(w);
            let mut csv = Vec::new();
            profile.write_csv(&mut csv)?;
            let out = FubiniOut {
                w,
                integral: profile.integral(),
                potential: potential(&mu, w),
                thresholds: profile.thresholds,
                masses: profile.masses,
            };
            Report::new(&out, csv, true)
        }
    }
}

/// Flags from a `key=value` config file; `key=true` becomes a bare flag.
pub fn config_flags(text: &str) -> Result<Vec<OsString>> {
    let mut flags = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::validation(format!("config line {}: expected key=value", i + 1)))?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || key == "config" {
            return Err(Error::validation(format!("config line {}: invalid key '{key}'", i + 1)));
        }
        match value {
            "true" => flags.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                flags.push(format!("--{key}").into());
                flags.push(value.into());
            }
        }
    }
    Ok(flags)
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut iter = args.iter();
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return iter.next().map(PathBuf::from);
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(rest));
        }
    }
    None
}

const SUBCOMMANDS: [&str; 10] =
    ["capacity", "onebox", "potential", "embed", "cantor", "counterexample", "remark", "cert", "fubini", "radial"];

/// Inserts config-file flags right after the subcommand so later (command-line) flags override them.
fn merged_args(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    let flags = config_flags(&read(&path)?)?;
    let pos = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .map_or(args.len(), |p| p + 1);
    let mut merged = args[..pos].to_vec();
    merged.extend(flags);
    merged.extend_from_slice(&args[pos..]);
    Ok(merged)
}

fn configure_threads() {
    if let Some(n) = std::env::var("CARLESON_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // an already-initialized pool keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn write_report(cli: &Cli, report: &Report) -> Result<()> {
    let bytes = match cli.format {
        Format::Json => report.json.as_bytes(),
        Format::Csv => &report.csv,
    };
    match &cli.output {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

/// Parses `args` (including the program name), runs, and returns the exit status.
pub fn run(args: impl IntoIterator<Item = impl Into<OsString>>) -> i32 {
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let merged = match merged_args(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let cli = match Cli::try_parse_from(merged) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    configure_threads();
    match execute(&cli.command).and_then(|r| write_report(&cli, &r).map(|_| r.converged)) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("warning: numerical procedure did not converge; report written with converged = false");
            EXIT_NONCONVERGENCE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

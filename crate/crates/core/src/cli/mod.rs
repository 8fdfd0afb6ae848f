//! Sweeps, bound verification and single-state reports behind the `qmed`
//! binary.

mod args;
pub mod suite;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

pub use args::{run, Cli};

use crate::dynamics::{initial_state, run_monitored, uniform_grid, EvolutionParams, MonitoringSchedule};
use crate::error::{Error, Result};
use crate::measures::{
    measure_state, verify_localisation_bound, write_csv, CorrelationReport, MeasureOptions, ReeOptions,
    TrajectoryPoint, ViolationKind,
};
use crate::nmr_sim::{
    compile_sequence, embed_pseudopure, extract_deviation, simulate_sequence, MoleculeSpec, PseudopureModel, RfiModel,
};
use crate::state_engine::{read_state, DensityMatrix, QubitBasis};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BOUND_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping the worker pool size.
pub const WORKERS_ENV: &str = "QMED_NUM_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exact evolution under the ideal coupling.
    #[default]
    Ideal,
    /// Compiled pulse sequence on the NMR molecule.
    Pulse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ReportFormat {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// The initial probe–mediator state under the coupling.
    #[default]
    Default,
    /// No coupling: the state never changes.
    Static,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    /// Coupling ω in rad/s.
    pub omega: f64,
    pub max_omega_t: f64,
    pub points: usize,
    pub dephase: bool,
    pub rfi: Option<RfiModel>,
    pub molecule: MoleculeSpec,
    pub epsilon: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Ideal,
            omega: 1.0,
            max_omega_t: std::f64::consts::FRAC_PI_2,
            points: 33,
            dephase: false,
            rfi: None,
            molecule: MoleculeSpec::default(),
            epsilon: 1e-5,
            seed: 0,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        EvolutionParams::new(self.omega, 0.0)?;
        uniform_grid(self.max_omega_t, self.points)?;
        self.molecule.validate()?;
        PseudopureModel::new(self.epsilon)?;
        if self.mode == Mode::Ideal && self.rfi.is_some() {
            return Err(Error::InvalidParameter("RF inhomogeneity applies to pulse mode only".into()));
        }
        if self.mode == Mode::Pulse && self.max_omega_t > std::f64::consts::PI {
            return Err(Error::InvalidParameter("pulse mode reaches at most ωt = π".into()));
        }
        Ok(())
    }

    /// Sample points in units of `ωt`.
    pub fn grid(&self) -> Result<Vec<f64>> {
        uniform_grid(self.max_omega_t, self.points)
    }

    pub fn measure_options(&self) -> MeasureOptions {
        MeasureOptions {
            ree: ReeOptions {
                seed: self.seed,
                ..ReeOptions::default()
            },
            ..MeasureOptions::default()
        }
    }
}

/// States `(ωt, ρ)` along the configured sweep starting from the initial
/// probe–mediator state.
pub fn trajectory(cfg: &RunConfig) -> Result<Vec<(f64, DensityMatrix)>> {
    let grid = cfg.grid()?;
    let rho0 = initial_state();
    match cfg.mode {
        Mode::Ideal => {
            let schedule = if cfg.dephase {
                MonitoringSchedule::stroboscopic(&grid)?
            } else {
                MonitoringSchedule::free(&grid)?
            };
            run_monitored(&schedule, &rho0)
        }
        Mode::Pulse => {
            let pp = PseudopureModel::new(cfg.epsilon)?;
            let full = embed_pseudopure(&rho0, &pp)?;
            grid.par_iter()
                .map(|&wt| {
                    let p = EvolutionParams::new(cfg.omega, wt / cfg.omega)?;
                    let seq = compile_sequence(&p, cfg.dephase, &cfg.molecule)?;
                    let out = simulate_sequence(&seq, &full, cfg.rfi.as_ref())?;
                    Ok((wt, extract_deviation(&out, &pp)?))
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub program: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub mode: Mode,
    pub omega: f64,
    pub max_omega_t: f64,
    pub points: usize,
    pub dephase: bool,
    pub rfi: Option<String>,
    pub molecule: MoleculeSpec,
    pub epsilon: f64,
    /// Row indices whose REE optimization did not meet its stopping rule.
    pub unconverged_rows: Vec<usize>,
}

impl Metadata {
    fn new(cfg: &RunConfig) -> Self {
        Self {
            program: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            seed: cfg.seed,
            mode: cfg.mode,
            omega: cfg.omega,
            max_omega_t: cfg.max_omega_t,
            points: cfg.points,
            dephase: cfg.dephase,
            rfi: cfg.rfi.as_ref().map(|r| r.to_string()),
            molecule: cfg.molecule,
            epsilon: cfg.epsilon,
            unconverged_rows: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationOutput {
    pub metadata: Metadata,
    pub rows: Vec<CorrelationReport>,
}

/// One report per grid point, in grid order. `time` is `ωt / ω` seconds.
pub fn simulate(cfg: &RunConfig) -> Result<SimulationOutput> {
    cfg.validate()?;
    let opts = cfg.measure_options();
    let states = trajectory(cfg)?;
    let measured = states
        .par_iter()
        .map(|(wt, rho)| measure_state(rho, wt / cfg.omega, &opts))
        .collect::<Result<Vec<_>>>()?;
    let mut metadata = Metadata::new(cfg);
    metadata.unconverged_rows = measured
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.ree_converged)
        .map(|(i, _)| i)
        .collect();
    Ok(SimulationOutput {
        metadata,
        rows: measured.into_iter().map(|m| m.report).collect(),
    })
}

/// Sidecar path for CSV metadata: `<out>.meta.json`.
pub fn metadata_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn write_simulation(output: &SimulationOutput, cfg: &RunConfig) -> Result<()> {
    match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_simulation_to(&mut w, output, cfg.format)?;
            w.flush()?;
            if cfg.format == OutputFormat::Csv {
                let mut meta = serde_json::to_string_pretty(&output.metadata)?;
                meta.push('\n');
                std::fs::write(metadata_path(path), meta)?;
            }
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_simulation_to(&mut lock, output, cfg.format)
        }
    }
}

fn write_simulation_to<W: Write>(w: &mut W, output: &SimulationOutput, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(w, &output.rows),
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *w, output)?;
            writeln!(w)?;
            Ok(())
        }
    }
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidParameter(_)
            | Error::InvalidSequence(_)
            | Error::UnknownLabel(_)
            | Error::UnknownName(_)
            | Error::InvalidBipartition(_)
            | Error::Format(_)
            | Error::Json(_)
            | Error::Io(_)
    )
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    if usage_error(e) {
        EXIT_USAGE
    } else {
        EXIT_NUMERICAL
    }
}

pub fn cmd_simulate(cfg: &RunConfig) -> i32 {
    if let Err(e) = cfg.validate() {
        return report_error(&e);
    }
    let output = match simulate(cfg) {
        Ok(o) => o,
        Err(e) => return report_error(&e),
    };
    if let Err(e) = write_simulation(&output, cfg) {
        return report_error(&e);
    }
    if output.metadata.unconverged_rows.is_empty() {
        EXIT_OK
    } else {
        eprintln!(
            "warning: REE optimizer did not converge on rows {:?}",
            output.metadata.unconverged_rows
        );
        EXIT_NUMERICAL
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub run: RunConfig,
    pub scenario: Scenario,
    /// Number of random classical-mediator instances in the property suite.
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            run: RunConfig::default(),
            scenario: Scenario::Default,
            samples: 100,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub samples: usize,
    pub first_seed: u64,
    pub flags_failures: Vec<u64>,
    pub inequality_failures: Vec<u64>,
    pub chain_failures: Vec<u64>,
    pub discord_failures: Vec<u64>,
    pub max_flags_error: f64,
    pub max_inequality_excess: f64,
    /// Informational: `[agreeing, total]` two-qubit states for which PPT
    /// coincides with REE below 1e-3.
    pub ppt_ree_agreement: [usize; 2],
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub scenario: Scenario,
    pub seed: u64,
    pub bound: f64,
    pub initial_ree_a_b: f64,
    pub initial_ree_a_bm: f64,
    pub max_gain: f64,
    pub max_gain_time: f64,
    pub min_slack: f64,
    pub saturated: bool,
    pub violations: Vec<String>,
    pub max_discord_on_m: f64,
    pub classical_at_all_times: bool,
    pub optimizer_converged: bool,
    pub suite: Option<SuiteSummary>,
    pub passed: bool,
}

impl VerifySummary {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut line = |l: String| {
            s.push_str(&l);
            s.push('\n');
        };
        line(format!("scenario            : {:?}", self.scenario));
        line(format!("bound I_AB:M(0)     : {:.6} bit", self.bound));
        line(format!("max gain            : {:.6} bit at t = {:.6}", self.max_gain, self.max_gain_time));
        line(format!("min slack           : {:.3e} bit", self.min_slack));
        line(format!("saturated           : {}", self.saturated));
        line(format!("E_A:BM(0)           : {:.6} bit", self.initial_ree_a_bm));
        line(format!("max discord on M    : {:.3e} bit", self.max_discord_on_m));
        line(format!("optimizer converged : {}", self.optimizer_converged));
        for v in &self.violations {
            line(format!("violation           : {v}"));
        }
        if let Some(suite) = &self.suite {
            line(format!(
                "property suite      : {} seeds from {}: flags {} / inequality {} / chain {} / discord {} failures",
                suite.samples,
                suite.first_seed,
                suite.flags_failures.len(),
                suite.inequality_failures.len(),
                suite.chain_failures.len(),
                suite.discord_failures.len()
            ));
            line(format!(
                "PPT vs REE (info)   : {}/{} agree",
                suite.ppt_ree_agreement[0], suite.ppt_ree_agreement[1]
            ));
        }
        line((if self.passed { "PASS" } else { "FAIL" }).to_string());
        s
    }
}

pub fn verify(cfg: &VerifyConfig) -> Result<VerifySummary> {
    cfg.run.validate()?;
    let opts = cfg.run.measure_options();
    let rho0 = initial_state();
    let states = match cfg.scenario {
        Scenario::Default => trajectory(&cfg.run)?,
        Scenario::Static => cfg.run.grid()?.into_iter().map(|wt| (wt, rho0.clone())).collect(),
    };
    let points = states
        .into_par_iter()
        .map(|(wt, rho)| {
            let m = measure_state(&rho, wt / cfg.run.omega, &opts)?;
            Ok((
                TrajectoryPoint {
                    report: m.report,
                    state: rho,
                },
                m.ree_converged,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let ree_converged = points.iter().all(|p| p.1);
    let points: Vec<TrajectoryPoint> = points.into_iter().map(|p| p.0).collect();
    let bound = verify_localisation_bound(&points, &rho0, &QubitBasis::x(), &opts.ree)?;
    let max_discord = points
        .iter()
        .map(|p| p.report.discord_AB_given_M)
        .fold(0.0, f64::max);
    let classical = max_discord <= suite::DISCORD_TOLERANCE;

    let suite = if cfg.samples > 0 {
        let r = suite::property_suite(cfg.run.seed, cfg.samples, &opts)?;
        let (agree, total) = r.ppt_agreement();
        Some(SuiteSummary {
            samples: cfg.samples,
            first_seed: cfg.run.seed,
            flags_failures: r.flags_failures(),
            inequality_failures: r.inequality_failures(),
            chain_failures: r.chain_failures(),
            discord_failures: r.discord_failures(),
            max_flags_error: r.instances.iter().map(|i| i.flags_error).fold(0.0, f64::max),
            max_inequality_excess: r.instances.iter().map(|i| i.inequality_excess).fold(f64::NEG_INFINITY, f64::max),
            ppt_ree_agreement: [agree, total],
            passed: r.passed(),
        })
    } else {
        None
    };

    let passed = bound.passed() && classical && suite.as_ref().is_none_or(|s| s.passed);
    Ok(VerifySummary {
        scenario: cfg.scenario,
        seed: cfg.run.seed,
        bound: bound.bound,
        initial_ree_a_b: bound.initial_ree_a_b,
        initial_ree_a_bm: bound.initial_ree_a_bm,
        max_gain: bound.max_gain,
        max_gain_time: bound.max_gain_time,
        min_slack: bound.min_slack,
        saturated: bound.saturated,
        violations: bound
            .violations
            .iter()
            .map(|v| format!("{} at t = {:.6} by {:.3e}", violation_name(v.kind), v.time, v.excess))
            .collect(),
        max_discord_on_m: max_discord,
        classical_at_all_times: classical,
        optimizer_converged: bound.optimizer_converged && ree_converged,
        suite,
        passed,
    })
}

fn violation_name(kind: ViolationKind) -> &'static str {
    match kind {
        ViolationKind::Bound => "bound",
        ViolationKind::TraceOutMonotonicity => "E_A:B > E_A:BM",
        ViolationKind::ProbeRestGrowth => "E_A:BM(t) > E_A:BM(0)",
        ViolationKind::MediatorNotClassical => "mediator not classical",
    }
}

pub fn cmd_verify(cfg: &VerifyConfig) -> i32 {
    let summary = match verify(cfg) {
        Ok(s) => s,
        Err(e) => return report_error(&e),
    };
    print!("{}", summary.render());
    if let Some(path) = &cfg.run.out {
        let written = serde_json::to_string_pretty(&summary)
            .map_err(Error::from)
            .and_then(|mut text| {
                text.push('\n');
                std::fs::write(path, text).map_err(Error::from)
            });
        if let Err(e) = written {
            return report_error(&e);
        }
    }
    if summary.passed {
        EXIT_OK
    } else {
        EXIT_BOUND_FAILED
    }
}

/// Full report of one stored state (labels `A`, `B`, `M` in any order).
pub fn measure_file(path: &Path, seed: u64) -> Result<CorrelationReport> {
    let rho = read_state(path)?;
    let mut labels: Vec<&str> = rho.labels().iter().map(String::as_str).collect();
    labels.sort_unstable();
    if labels != ["A", "B", "M"] {
        return Err(Error::Format(format!(
            "expected a state on A, B, M; found labels {:?}",
            rho.labels()
        )));
    }
    let cfg = RunConfig {
        seed,
        ..RunConfig::default()
    };
    Ok(measure_state(&rho, 0.0, &cfg.measure_options())?.report)
}

pub fn render_report<W: Write>(w: &mut W, r: &CorrelationReport, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Text => {
            for (name, v) in crate::measures::CSV_HEADER.iter().zip(r.values()).skip(1) {
                writeln!(w, "{name:<20} {v:.10}")?;
            }
        }
        ReportFormat::Csv => write_csv(&mut *w, std::slice::from_ref(r))?,
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *w, r)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

pub fn cmd_measure(path: &Path, format: ReportFormat, seed: u64) -> i32 {
    let report = match read_state(path) {
        Err(e) => {
            eprintln!("error: cannot read state from {}: {e}", path.display());
            return EXIT_USAGE;
        }
        Ok(_) => match measure_file(path, seed) {
            Ok(r) => r,
            Err(e) => return report_error(&e),
        },
    };
    let stdout = io::stdout();
    match render_report(&mut stdout.lock(), &report, format) {
        Ok(()) => EXIT_OK,
        Err(e) => report_error(&e),
    }
}

/// Thread pool sized by [`WORKERS_ENV`] when set, otherwise by rayon's
/// default.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(Error::InvalidParameter(format!("{WORKERS_ENV} = `{v}` is not a positive integer"))),
        },
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))
}

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::{
    cmd_measure, cmd_simulate, cmd_verify, worker_pool, Mode, OutputFormat, ReportFormat, RunConfig, Scenario,
    VerifyConfig, EXIT_OK, EXIT_USAGE,
};
use crate::error::Result;
use crate::nmr_sim::{MoleculeSpec, RfiModel};

#[derive(Debug, Parser)]
#[command(name = "qmed", version, about = "Entanglement localisation through a classical mediator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep ωt and write one correlation report per grid point.
    Simulate(RunArgs),
    /// Check the localisation bound and the random-instance property suite.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Scenario::Default)]
        scenario: Scenario,
        /// Random classical-mediator instances (0 skips the suite).
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Print the correlation report of a stored three-qubit state.
    Measure {
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = Mode::Ideal)]
    mode: Mode,
    /// Coupling in rad/s.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    max_omega_t: f64,
    #[arg(long, default_value_t = 33)]
    points: usize,
    /// Dephase the mediator in the σx basis during the evolution.
    #[arg(long)]
    dephase: bool,
    /// RF amplitude distribution `kappa:weight,...`, `default` or `none`.
    #[arg(long)]
    rfi: Option<String>,
    /// A–M coupling in Hz.
    #[arg(long, default_value_t = MoleculeSpec::default().j_am, allow_negative_numbers = true)]
    j_am: f64,
    /// B–M coupling in Hz.
    #[arg(long, default_value_t = MoleculeSpec::default().j_bm, allow_negative_numbers = true)]
    j_bm: f64,
    /// A–B coupling in Hz.
    #[arg(long, default_value_t = MoleculeSpec::default().j_ab, allow_negative_numbers = true)]
    j_ab: f64,
    /// Pseudopure purity factor.
    #[arg(long, default_value_t = 1e-5)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

fn parse_rfi(text: Option<&str>) -> Result<Option<RfiModel>> {
    match text.map(str::trim) {
        None | Some("none") => Ok(None),
        Some("default") => Ok(Some(RfiModel::default())),
        Some(s) => Ok(Some(s.parse()?)),
    }
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig> {
        Ok(RunConfig {
            mode: self.mode,
            omega: self.omega,
            max_omega_t: self.max_omega_t,
            points: self.points,
            dephase: self.dephase,
            rfi: parse_rfi(self.rfi.as_deref())?,
            molecule: MoleculeSpec::new(self.j_am, self.j_bm, self.j_ab)?,
            epsilon: self.epsilon,
            seed: self.seed,
            out: self.out,
            format: self.format,
        })
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match worker_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> i32 {
    let config = |run: RunArgs| {
        run.into_config().map_err(|e| {
            eprintln!("error: {e}");
            EXIT_USAGE
        })
    };
    match command {
        Command::Simulate(run) => match config(run) {
            Ok(cfg) => cmd_simulate(&cfg),
            Err(code) => code,
        },
        Command::Verify { run, scenario, samples } => match config(run) {
            Ok(run) => cmd_verify(&VerifyConfig { run, scenario, samples }),
            Err(code) => code,
        },
        Command::Measure { state, format, seed } => cmd_measure(&state, format, seed),
    }
}

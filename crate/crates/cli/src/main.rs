use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qho_phase::phase1d::EdgeMode;
use qho_phase_cli::commands::{self, CommandError, CommandOutput};
use qho_phase_cli::config::{load_config_file, parse_n_max_list, ConfigOverrides, RunConfig};

#[derive(Parser)]
#[command(
    version,
    about = "Phase and time operators of the 3D harmonic oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every operator identity check and print one line per check
    Verify(RunArgs),
    /// Phase trajectory of a state as CSV
    Trajectory(RunArgs),
    /// Shell energies and degeneracies
    Spectrum(RunArgs),
    /// Unitarity defect of the phase exponential for several n_max
    UnitarityScan(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key = value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    /// open | cyclic
    #[arg(long)]
    mode: Option<EdgeMode>,
    /// n,l,m,sign:re+imj;...
    #[arg(long, allow_hyphen_values = true)]
    state: Option<String>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated n_max values for unitarity-scan
    #[arg(long)]
    n_max_list: Option<String>,
}

impl RunArgs {
    fn resolve(self) -> Result<RunConfig, String> {
        let file = match &self.config {
            Some(p) => load_config_file(p).map_err(|e| e.to_string())?,
            None => ConfigOverrides::default(),
        };
        let n_max_list = match &self.n_max_list {
            Some(s) => Some(parse_n_max_list(s).map_err(|e| format!("field 'n_max_list': {e}"))?),
            None => None,
        };
        let flags = ConfigOverrides {
            n_max: self.n_max,
            mass: self.mass,
            omega: self.omega,
            mode: self.mode,
            state: self.state,
            t_max: self.t_max,
            dt: self.dt,
            out: self.out,
            n_max_list,
        };
        RunConfig::resolve(file.merge(flags)).map_err(|e| e.to_string())
    }
}

type Runner = fn(&RunConfig) -> Result<CommandOutput, CommandError>;

fn emit(cfg: &RunConfig, output: &CommandOutput) -> std::io::Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, &output.text),
        None => std::io::stdout().lock().write_all(output.text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (RunArgs, Runner) = match cli.command {
        Command::Verify(a) => (a, commands::verify),
        Command::Trajectory(a) => (a, commands::trajectory),
        Command::Spectrum(a) => (a, commands::spectrum),
        Command::UnitarityScan(a) => (a, commands::unitarity_scan),
    };
    let cfg = match args.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let output = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Err(e) = emit(&cfg, &output) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skyrmag_cli::config::ScenarioConfig;
use skyrmag_cli::error::CliError;
use skyrmag_cli::output::Summary;
use skyrmag_cli::run::{self, Mode, Overrides};

#[derive(Parser)]
#[command(name = "skyrmag", version, about = "Micromagnetic scenarios with DMI")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long, short)]
    config: PathBuf,
    /// Output directory, overriding `[output].directory`.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Snapshot stride in steps.
    #[arg(long)]
    stride: Option<u64>,
    /// Trace stride in steps.
    #[arg(long)]
    trace_stride: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Heat-flow relaxation to a steady state.
    Relax {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Time evolution, Landau-Lifshitz by default, with drives.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Minimum energy path by the string method.
    String {
        #[command(flatten)]
        common: Common,
    },
    /// Energy, charge and density maps of a snapshot.
    Postprocess {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
}

fn load(common: &Common) -> Result<ScenarioConfig, CliError> {
    let mut cfg = ScenarioConfig::load(&common.config)?;
    Overrides {
        output: common.output.clone(),
        seed: common.seed,
        snapshot_stride: common.stride,
        trace_stride: common.trace_stride,
    }
    .apply(&mut cfg);
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<Summary, CliError> {
    match cli.command {
        Command::Relax { common, resume } => {
            let cfg = load(&common)?;
            run::run_dynamics(&cfg, Mode::Relax, resume.as_deref())
        }
        Command::Evolve { common, resume } => {
            let cfg = load(&common)?;
            run::run_dynamics(&cfg, Mode::Evolve, resume.as_deref())
        }
        Command::String { common } => run::run_mep(&load(&common)?),
        Command::Postprocess { common, snapshot } => run::postprocess(&load(&common)?, snapshot.as_deref()),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(s) => {
            println!(
                "{}: {} steps, converged {}, E = {:.6e} J, <m> = ({:.4}, {:.4}, {:.4}), Q = {:.4}",
                s.mode, s.steps, s.converged, s.energy_j, s.m_average[0], s.m_average[1], s.m_average[2], s.charge
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

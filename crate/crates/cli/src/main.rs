use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperam_cli::Command;

#[derive(Parser)]
#[command(
    name = "hyperam",
    version,
    about = "Hypercomplex recurrent correlation network experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Experiment config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// State-transition graphs of a small network (DOT and attractor CSV).
    Dynamics(Common),
    /// Energy traces of random networks in both update modes.
    EnergyTrace(Common),
    /// Recall rate of noisy images per codec, mode and noise level.
    ImageRecall(Common),
    /// Algebraic and activation property checks.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Run a single named check.
        #[arg(long)]
        check: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, config, out, seed, check) = match cli.command {
        Cmd::Dynamics(c) => (Command::Dynamics, Some(c.config), c.out, c.seed, None),
        Cmd::EnergyTrace(c) => (Command::EnergyTrace, Some(c.config), c.out, c.seed, None),
        Cmd::ImageRecall(c) => (Command::ImageRecall, Some(c.config), c.out, c.seed, None),
        Cmd::Verify {
            config,
            out,
            seed,
            check,
        } => (Command::Verify, config, out, seed, check),
    };
    match hyperam_cli::run(command, config.as_deref(), &out, seed, check.as_deref()) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            for path in &outcome.artifacts {
                eprintln!("wrote {}", path.display());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

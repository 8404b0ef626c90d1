//! Config-driven experiment runner for hypercomplex recurrent correlation
//! networks.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;

use std::path::Path;

pub use commands::{execute, Outcome};
pub use config::ConfigFile;
pub use error::{CliError, Result};
pub use experiment::{Command, Experiment};

/// Reads `config`, applies the overrides and runs `command`.
pub fn run(
    command: Command,
    config: Option<&Path>,
    out: &Path,
    seed: Option<u64>,
    check: Option<&str>,
) -> Result<Outcome> {
    let file = match config {
        Some(path) => ConfigFile::read(path)?,
        None if command == Command::Verify => ConfigFile::default(),
        None => return Err(CliError::Usage(format!("`{command}` requires --config"))),
    };
    let mut exp = Experiment::resolve(command, &file, seed)?;
    if let (Some(name), experiment::Body::Verify(spec)) = (check, &mut exp.body) {
        spec.checks = vec![name.to_string()];
    }
    execute(&exp, out)
}

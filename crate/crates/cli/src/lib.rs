//! Command-line front end for `ftchain-core`: run configuration, geometry
//! presets and CSV/JSON output.

mod args;
pub mod config;
mod error;
pub mod format;
pub mod presets;
mod run;

use std::io::Write;

pub use args::{execute, Cli};
pub use config::RunConfig;
pub use error::CliError;
pub use run::{k_grid, k_max_for_levels, resolve, run, scan, spectral_problem, Outcome, Setup};

/// Writes the document to the configured path, or to standard output.
pub fn write_output(config: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => std::fs::write(path, &outcome.document)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.document.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}"))),
    }
}

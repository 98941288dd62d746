//! Command-line front end: configuration, dispatch, result records and
//! plot data.

pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod record;
pub mod run;

pub use config::{Axis, Command, ConfigFile, FGrid, Format, Numerics, OutputSpec, PartialParams, PlotKind, RunConfig};
pub use error::{CliError, EXIT_CHECKS_FAILED, EXIT_CONFIG, EXIT_NO_CONVERGENCE};
pub use output::{read_record, to_csv, to_json, write_atomic, write_record};
pub use plot::{emit_plotdata, plotdata};
pub use record::{Provenance, Resonance3dRow, ResultRecord, Rows, SCHEMA_VERSION};
pub use run::{run, Outcome};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "STARK_SHELL_THREADS";

/// Sizes the global thread pool from [`THREADS_ENV`] if set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} = '{v}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size thread pool: {e}")))
}

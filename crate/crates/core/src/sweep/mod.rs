//! Batch front end: flags or a TOML file in, CSV files, heatmaps and a
//! manifest out.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 partial
//! results under `--keep-going`.

pub mod config;
pub mod heatmap;
pub mod output;
pub mod run;

use clap::Parser as _;

pub use config::{parse_config, Command, RunConfig, Settings, Strength};
pub use heatmap::{emit_heatmap, render_heatmap, ColorScale, HeatmapOptions, Orientation, RasterFormat};
pub use output::{write_atomic, RunStatus, MANIFEST_NAME};
pub use run::{run_sweep, RunOutcome};

/// Parses `argv`, runs, reports to stderr and returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match config::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    let cfg = match config::resolve_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match run_sweep(&cfg) {
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("failed: {f}");
            }
            eprintln!(
                "{}: {} file(s) in {}, status {:?}",
                cfg.command.name(),
                outcome.outputs.len(),
                cfg.out.display(),
                outcome.status
            );
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code().max(2)
        }
    }
}

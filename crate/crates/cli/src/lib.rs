//! Experiment runner for the pa-fbl library: configuration parsing, preset
//! figure sweeps, parallel evaluation and CSV/gnuplot output.

pub mod config;
pub mod output;
pub mod presets;
pub mod sweep;

pub use config::{parse_config, Command, ConfigError, Param, Regime, SweepSpec};
pub use output::{write_csv, write_gnuplot, HEADER};
pub use sweep::{run_sweep, RunOptions, SweepResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

/// Exit status for a completed run: 3 when any row carries an error.
pub fn exit_status(results: &[SweepResult]) -> i32 {
    if results.iter().any(|r| r.error.is_some()) {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    }
}

//! Deterministic simulator and analysis toolkit for the linear-drift
//! memristor model.
//!
//! The crate integrates the coupled voltage/state equations of a TiO₂-style
//! memristor under a sinusoidal write voltage, extracts the RRAM figures of
//! merit (pinched-hysteresis loop area, LRS/HRS, memory window, peak current,
//! lifetime margin, charge–flux linearity), and runs the full
//! amplitude × frequency experiment grid. Every numeric path is checked
//! against an exact closed-form solution of the unclipped model.
//!
//! Modules:
//! - [`device`]: physical parameters and the two governing equations
//! - [`waveform`]: sinusoidal drive and its analytic flux
//! - [`integrator`]: fixed-step RK4 producing uniformly sampled traces
//! - [`analytic`]: closed-form charge-of-flux oracle and trace comparison
//! - [`metrics`]: per-cycle figure-of-merit extraction
//! - [`sweep`]: cartesian (amplitude × frequency) experiment harness
//! - [`cli`] / [`output`]: command line front end and CSV serialization

pub mod analytic;
pub mod cli;
pub mod device;
pub mod integrator;
pub mod metrics;
pub mod output;
pub mod sweep;
pub mod waveform;

pub use analytic::{
    analytic_trace, charge_of_flux, clip_flux_threshold, compare_traces, OracleReport,
};
pub use device::{DeviceParams, DeviceState};
pub use integrator::{simulate, Sample, SimConfig, SimTrace};
pub use metrics::{cycle_metrics, CycleMetrics, MetricsConfig};
pub use sweep::{build_grid, rank_lifetime, run_sweep, SweepGrid, SweepResult};
pub use waveform::DriveWaveform;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// One or more device/drive/config invariants are violated. Each entry
    /// names the field and the offending value.
    #[error("invalid parameters: {}", violations.join("; "))]
    InvalidParams { violations: Vec<String> },

    /// An argument fell outside its contractual domain.
    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// The closed-form solution does not apply (state would leave [0, D]
    /// or the quadratic branch turns over).
    #[error("analytic solution invalid (clipping/turnover regime): {reason}")]
    AnalyticInvalid { reason: String },

    /// Two traces passed to a comparison do not share a time grid.
    #[error("trace grids do not match: {0}")]
    GridMismatch(String),

    /// A trace is empty or too short for the requested measurement.
    #[error("degenerate trace: {0}")]
    DegenerateTrace(&'static str),

    /// Config file syntax or key error.
    #[error("{path}:{line}: {msg}")]
    Config {
        path: String,
        line: usize,
        msg: String,
    },

    /// Command-line usage error (exit status 2).
    #[error("{0}")]
    Usage(String),

    /// A sweep cell failed; the sweep aborts with the failing coordinates.
    #[error("sweep cell (v0 = {v0} V, f = {freq} Hz) failed: {source}")]
    SweepCell {
        v0: f64,
        freq: f64,
        #[source]
        source: Box<Error>,
    },

    /// Oracle comparison exceeded its tolerances (exit status 3).
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit status for the CLI: 0 success, 2 usage, 3 verification,
    /// 1 everything else.
    pub fn exit_status(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Config { .. } => 2,
            Error::AnalyticInvalid { .. } | Error::VerificationFailed(_) => 3,
            _ => 1,
        }
    }
}

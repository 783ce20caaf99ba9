//! Command-line front end: argument parsing, config-file loading with
//! defaults < config < flags precedence, and subcommand orchestration.
//!
//! Flags and config keys use bench-friendly units (nanometers, volts,
//! hertz); everything is converted to strict SI before it reaches the
//! physics. Exit statuses: 0 success, 2 usage or config error,
//! 3 verification failure, 1 anything else.

use crate::analytic::{analytic_trace, compare_traces};
use crate::device::DeviceParams;
use crate::integrator::{simulate, SimConfig};
use crate::metrics::MetricsConfig;
use crate::output::{
    emit_run_plot_data, emit_sweep_plot_data, write_metrics_csv, write_trace_csv,
};
use crate::sweep::{build_grid, run_sweep, SweepGrid};
use crate::waveform::DriveWaveform;
use crate::Error;
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

/// Linear-drift memristor simulator: single writes, write-voltage and
/// frequency sweeps, and integrator verification against the closed form.
#[derive(Debug, Parser)]
#[command(name = "memdrift", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one sinusoidal write and save the trace as CSV
    Run(RunArgs),
    /// Run the amplitude x frequency grid and save the metrics table
    Sweep(SweepArgs),
    /// Compare the integrator against the closed-form solution
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Key-value config file (device/sim/metrics/grid settings)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// RK4 steps per drive period
    #[arg(long, value_name = "N")]
    steps_per_period: Option<u32>,
    /// Sense-amplifier threshold for the lifetime margin, amps
    #[arg(long, value_name = "A", allow_negative_numbers = true)]
    i_sense: Option<f64>,
}

#[derive(Debug, Args)]
struct DriveArgs {
    /// Write amplitude, volts
    #[arg(long, value_name = "V", allow_negative_numbers = true)]
    amplitude: Option<f64>,
    /// Drive frequency, hertz
    #[arg(long, value_name = "HZ", allow_negative_numbers = true)]
    frequency: Option<f64>,
    /// Recorded drive periods
    #[arg(long, value_name = "N")]
    periods: Option<u32>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    drive: DriveArgs,
    /// Output CSV path
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Also write per-figure plot data next to the output file
    #[arg(long)]
    emit_plot_data: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated amplitudes, volts (default 0.2 to 1.2 in 0.2 steps)
    #[arg(long, value_name = "LIST", value_delimiter = ',', allow_negative_numbers = true)]
    amplitudes: Option<Vec<f64>>,
    /// Comma-separated frequencies, hertz (default 1,2,4,10,100,200)
    #[arg(long, value_name = "LIST", value_delimiter = ',', allow_negative_numbers = true)]
    frequencies: Option<Vec<f64>>,
    /// Output CSV path
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Also write per-figure plot data next to the output file
    #[arg(long)]
    emit_plot_data: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    drive: DriveArgs,
}

/// Which subcommand a resolved invocation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Run,
    Sweep,
    Verify,
}

/// A fully resolved invocation: defaults, config file and flags merged,
/// everything validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: CommandKind,
    pub device: DeviceParams,
    /// Drive for run/verify; sweep builds its own drives from the grid.
    pub drive: DriveWaveform,
    /// Grid for sweep; unused by run/verify.
    pub grid: SweepGrid,
    pub sim: SimConfig,
    pub metrics_cfg: MetricsConfig,
    /// Present for run/sweep (they write files), absent for verify.
    pub out_path: Option<PathBuf>,
    pub emit_plot_data: bool,
}

/// Values a config file may override. All fields optional; unset fields
/// leave the defaults in place.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub d_nm: Option<f64>,
    pub w0_nm: Option<f64>,
    pub r_on_ohm: Option<f64>,
    pub r_off_ohm: Option<f64>,
    pub mu_v: Option<f64>,
    pub eta: Option<f64>,
    pub steps_per_period: Option<u32>,
    pub settle_periods: Option<u32>,
    pub i_sense_amp: Option<f64>,
    pub amplitudes_v: Option<Vec<f64>>,
    pub frequencies_hz: Option<Vec<f64>>,
}

fn config_err(path: &Path, line: usize, msg: String) -> Error {
    Error::Config {
        path: path.display().to_string(),
        line,
        msg,
    }
}

fn config_f64(path: &Path, line: usize, key: &str, value: &str) -> Result<f64, Error> {
    value
        .parse()
        .map_err(|_| config_err(path, line, format!("{key}: malformed number `{value}`")))
}

fn config_u32(path: &Path, line: usize, key: &str, value: &str) -> Result<u32, Error> {
    value
        .parse()
        .map_err(|_| config_err(path, line, format!("{key}: malformed integer `{value}`")))
}

fn config_list(path: &Path, line: usize, key: &str, value: &str) -> Result<Vec<f64>, Error> {
    value
        .split(',')
        .map(|item| {
            item.trim().parse().map_err(|_| {
                config_err(
                    path,
                    line,
                    format!("{key}: malformed number `{}` in list", item.trim()),
                )
            })
        })
        .collect()
}

/// Parses a flat `key = value` document. Blank lines and lines starting
/// with `#` are skipped. Unknown keys and malformed values are rejected
/// with the offending line number.
pub fn load_config(path: &Path) -> Result<ConfigOverrides, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut cfg = ConfigOverrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(config_err(path, line, format!("expected `key = value`, got `{trimmed}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "device.D_nm" => cfg.d_nm = Some(config_f64(path, line, key, value)?),
            "device.w0_nm" => cfg.w0_nm = Some(config_f64(path, line, key, value)?),
            "device.r_on_ohm" => cfg.r_on_ohm = Some(config_f64(path, line, key, value)?),
            "device.r_off_ohm" => cfg.r_off_ohm = Some(config_f64(path, line, key, value)?),
            "device.mu_v" => cfg.mu_v = Some(config_f64(path, line, key, value)?),
            "device.eta" => {
                let eta = config_f64(path, line, key, value)?;
                if eta != 1.0 && eta != -1.0 {
                    return Err(config_err(
                        path,
                        line,
                        format!("eta must be +1 or -1 (got {value})"),
                    ));
                }
                cfg.eta = Some(eta);
            }
            "sim.steps_per_period" => {
                cfg.steps_per_period = Some(config_u32(path, line, key, value)?)
            }
            "sim.settle_periods" => cfg.settle_periods = Some(config_u32(path, line, key, value)?),
            "metrics.i_sense_amp" => cfg.i_sense_amp = Some(config_f64(path, line, key, value)?),
            "grid.amplitudes_v" => cfg.amplitudes_v = Some(config_list(path, line, key, value)?),
            "grid.frequencies_hz" => {
                cfg.frequencies_hz = Some(config_list(path, line, key, value)?)
            }
            other => {
                return Err(config_err(path, line, format!("unknown key `{other}`")));
            }
        }
    }
    Ok(cfg)
}

fn usage(err: Error) -> Error {
    Error::Usage(err.to_string())
}

/// Merges defaults, the config file and command-line flags (in that
/// precedence order) into a validated RunSpec.
pub fn resolve_spec(cli: Cli) -> Result<RunSpec, Error> {
    struct Parts {
        kind: CommandKind,
        common: CommonArgs,
        drive: Option<DriveArgs>,
        axes: Option<(Option<Vec<f64>>, Option<Vec<f64>>)>,
        out: Option<PathBuf>,
        emit: bool,
    }
    let parts = match cli.command {
        Command::Run(a) => Parts {
            kind: CommandKind::Run,
            common: a.common,
            drive: Some(a.drive),
            axes: None,
            out: Some(a.out),
            emit: a.emit_plot_data,
        },
        Command::Sweep(a) => Parts {
            kind: CommandKind::Sweep,
            common: a.common,
            drive: None,
            axes: Some((a.amplitudes, a.frequencies)),
            out: Some(a.out),
            emit: a.emit_plot_data,
        },
        Command::Verify(a) => Parts {
            kind: CommandKind::Verify,
            common: a.common,
            drive: Some(a.drive),
            axes: None,
            out: None,
            emit: false,
        },
    };

    let mut device = DeviceParams::default();
    let mut sim = SimConfig::default();
    let mut mcfg = MetricsConfig::default();
    let mut amplitudes = Vec::new();
    let mut frequencies = Vec::new();
    let mut drive = DriveWaveform::new(0.2, 1.0);

    if let Some(path) = &parts.common.config {
        let cfg = load_config(path)?;
        if let Some(x) = cfg.d_nm {
            device.thickness = x * 1e-9;
        }
        if let Some(x) = cfg.w0_nm {
            device.init_width = x * 1e-9;
        }
        if let Some(x) = cfg.r_on_ohm {
            device.r_on = x;
        }
        if let Some(x) = cfg.r_off_ohm {
            device.r_off = x;
        }
        if let Some(x) = cfg.mu_v {
            device.mobility = x;
        }
        if let Some(x) = cfg.eta {
            device.polarity = x;
        }
        if let Some(x) = cfg.steps_per_period {
            sim.steps_per_period = x;
        }
        if let Some(x) = cfg.settle_periods {
            sim.settle_periods = x;
        }
        if let Some(x) = cfg.i_sense_amp {
            mcfg.i_sense = x;
        }
        if let Some(x) = cfg.amplitudes_v {
            amplitudes = x;
        }
        if let Some(x) = cfg.frequencies_hz {
            frequencies = x;
        }
    }

    if let Some(x) = parts.common.steps_per_period {
        sim.steps_per_period = x;
    }
    if let Some(x) = parts.common.i_sense {
        mcfg.i_sense = x;
    }
    if let Some(d) = parts.drive {
        if let Some(x) = d.amplitude {
            drive.amplitude = x;
        }
        if let Some(x) = d.frequency {
            drive.frequency = x;
        }
        if let Some(x) = d.periods {
            drive.periods = x;
        }
    }
    if let Some((amps, freqs)) = parts.axes {
        if let Some(x) = amps {
            amplitudes = x;
        }
        if let Some(x) = freqs {
            frequencies = x;
        }
    }

    if !drive.amplitude.is_finite() || drive.amplitude < 0.0 {
        return Err(Error::Usage(format!(
            "amplitude must be nonnegative (got {})",
            drive.amplitude
        )));
    }
    if !drive.frequency.is_finite() || drive.frequency <= 0.0 {
        return Err(Error::Usage(format!(
            "frequency must be positive (got {})",
            drive.frequency
        )));
    }
    if drive.periods == 0 {
        return Err(Error::Usage("periods must be at least 1".into()));
    }
    if sim.steps_per_period < 2 {
        return Err(Error::Usage(format!(
            "steps-per-period must be at least 2 (got {})",
            sim.steps_per_period
        )));
    }
    if !mcfg.i_sense.is_finite() || mcfg.i_sense <= 0.0 {
        return Err(Error::Usage(format!(
            "i-sense must be positive (got {})",
            mcfg.i_sense
        )));
    }
    device.validate().map_err(usage)?;
    let grid = build_grid(amplitudes, frequencies).map_err(usage)?;

    Ok(RunSpec {
        command: parts.kind,
        device,
        drive,
        grid,
        sim,
        metrics_cfg: mcfg,
        out_path: parts.out,
        emit_plot_data: parts.emit,
    })
}

/// Parses an argv and resolves it into a RunSpec. Clap-level failures
/// (unknown flags, malformed values, and also --help/--version when driven
/// programmatically) are reported as usage errors.
pub fn parse_cli<I, T>(argv: I) -> Result<RunSpec, Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    resolve_spec(cli)
}

fn parent_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

/// Tolerances the verify subcommand holds the integrator to: |w| error
/// below this fraction of D, relative current error below I_TOL.
pub const VERIFY_W_TOL_FRAC: f64 = 1e-6;
pub const VERIFY_I_TOL: f64 = 1e-6;

/// Runs a resolved invocation to completion.
pub fn execute(spec: &RunSpec) -> Result<(), Error> {
    match spec.command {
        CommandKind::Run => {
            let trace = simulate(&spec.device, &spec.drive, &spec.sim)?;
            let out = spec.out_path.as_deref().expect("run always has an output path");
            write_trace_csv(&trace, out)?;
            println!("wrote {} samples to {}", trace.samples.len(), out.display());
            if spec.emit_plot_data {
                for path in emit_run_plot_data(&trace, parent_dir(out))? {
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        CommandKind::Sweep => {
            let result = run_sweep(&spec.device, &spec.grid, &spec.sim, &spec.metrics_cfg)?;
            let out = spec.out_path.as_deref().expect("sweep always has an output path");
            write_metrics_csv(&result, out)?;
            println!(
                "wrote {} metric rows to {}",
                result.grid.amplitudes.len() * result.grid.frequencies.len(),
                out.display()
            );
            if spec.emit_plot_data {
                for path in emit_sweep_plot_data(&result, parent_dir(out))? {
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        CommandKind::Verify => {
            let numeric = simulate(&spec.device, &spec.drive, &spec.sim)?;
            let exact = analytic_trace(&spec.device, &spec.drive, &spec.sim)?;
            let report = compare_traces(&numeric, &exact)?;
            println!("{report}");
            let w_tol = VERIFY_W_TOL_FRAC * spec.device.thickness;
            if report.max_w_err < w_tol && report.max_i_rel_err < VERIFY_I_TOL {
                println!("PASS: |w| error < {w_tol:e} m, rel i error < {VERIFY_I_TOL:e}");
                Ok(())
            } else {
                Err(Error::VerificationFailed(format!(
                    "max |w| error {:e} m (tolerance {:e} m), max rel i error {:e} (tolerance {:e})",
                    report.max_w_err, w_tol, report.max_i_rel_err, VERIFY_I_TOL
                )))
            }
        }
    }
}

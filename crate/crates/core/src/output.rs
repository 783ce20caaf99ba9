//! Bit-exact CSV serialization of traces, sweep tables and figure data.
//!
//! Numbers are written in Rust's shortest round-trip decimal form, so files
//! are lossless (`parse` recovers the exact f64) and rewriting the same
//! data is byte-identical. Column names carry SI unit suffixes.

use crate::integrator::SimTrace;
use crate::sweep::SweepResult;
use crate::Error;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Header of a trace CSV.
pub const TRACE_HEADER: &str = "t_s,v_V,i_A,w_m,m_ohm,q_C,phi_Vs";

/// Header of a sweep metrics CSV.
pub const METRICS_HEADER: &str = "v0_V,freq_Hz,lrs_ohm,hrs_ohm,window_ratio,window_diff_ohm,\
                                  loop_area_VA,peak_current_A,tau,qphi_nonlinearity,clipped";

fn save(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes one row per sample, in time order, with a trailing newline.
pub fn write_trace_csv(trace: &SimTrace, path: &Path) -> Result<(), Error> {
    let mut out = String::with_capacity(64 * (trace.samples.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for s in &trace.samples {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.t, s.v, s.i, s.w, s.m, s.q, s.phi
        )
        .expect("string write cannot fail");
    }
    save(path, &out)
}

/// Writes the sweep table in row-major grid order: amplitude outer,
/// frequency inner.
pub fn write_metrics_csv(result: &SweepResult, path: &Path) -> Result<(), Error> {
    save(path, &metrics_csv_string(result))
}

/// The exact bytes `write_metrics_csv` persists; exposed so callers can
/// compare sweep outputs without going through the filesystem.
pub fn metrics_csv_string(result: &SweepResult) -> String {
    let mut out = String::new();
    out.push_str(METRICS_HEADER);
    out.push('\n');
    for row in &result.cells {
        for c in row {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                c.v0,
                c.freq,
                c.lrs,
                c.hrs,
                c.window_ratio,
                c.window_diff,
                c.loop_area,
                c.peak_current,
                c.tau,
                c.qphi_nonlinearity,
                c.clipped
            )
            .expect("string write cannot fail");
        }
    }
    out
}

fn two_column(rows: impl Iterator<Item = (f64, f64)>, header: &str) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for (a, b) in rows {
        writeln!(out, "{a},{b}").expect("string write cannot fail");
    }
    out
}

/// Figure data for a single run, written into `dir`:
/// the I-V loop (`fig1_phl_*`), the charge-flux curve (`fig2_qphi_*`) and
/// the |I|-V curve for semi-log plotting (`fig3_logiv_*`) over the final
/// period, plus the full current-vs-time record (`fig6_it_*`). Returns the
/// created paths.
pub fn emit_run_plot_data(trace: &SimTrace, dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let tag = format!(
        "v0={}_f={}",
        trace.drive.amplitude, trace.drive.frequency
    );
    let window = trace.final_period();
    let files = [
        (
            format!("fig1_phl_{tag}.csv"),
            two_column(window.iter().map(|s| (s.v, s.i)), "v_V,i_A"),
        ),
        (
            format!("fig2_qphi_{tag}.csv"),
            two_column(window.iter().map(|s| (s.phi, s.q)), "phi_Vs,q_C"),
        ),
        (
            format!("fig3_logiv_{tag}.csv"),
            two_column(window.iter().map(|s| (s.v, s.i.abs())), "v_V,abs_i_A"),
        ),
        (
            format!("fig6_it_{tag}.csv"),
            two_column(trace.samples.iter().map(|s| (s.t, s.i)), "t_s,i_A"),
        ),
    ];
    let mut paths = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        save(&path, &contents)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Figure data for a sweep, written into `dir`: the memory window per
/// frequency series (`fig4_window_vs_freq.csv`) and the resistance states
/// per frequency series (`fig5_states_vs_amplitude.csv`), each series
/// listing one point per amplitude. Returns the created paths.
pub fn emit_sweep_plot_data(result: &SweepResult, dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let mut fig4 = String::from("freq_Hz,v0_V,window_ratio\n");
    let mut fig5 = String::from("freq_Hz,v0_V,lrs_ohm,hrs_ohm\n");
    for (ifr, &freq) in result.grid.frequencies.iter().enumerate() {
        for (ia, &v0) in result.grid.amplitudes.iter().enumerate() {
            let c = &result.cells[ia][ifr];
            writeln!(fig4, "{freq},{v0},{}", c.window_ratio).expect("string write cannot fail");
            writeln!(fig5, "{freq},{v0},{},{}", c.lrs, c.hrs).expect("string write cannot fail");
        }
    }
    let files = [
        ("fig4_window_vs_freq.csv", fig4),
        ("fig5_states_vs_amplitude.csv", fig5),
    ];
    let mut paths = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        save(&path, &contents)?;
        paths.push(path);
    }
    Ok(paths)
}

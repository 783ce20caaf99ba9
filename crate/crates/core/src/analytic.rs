//! Closed-form solution of the linear-drift model, used as an independent
//! reference for the numerical integrator.
//!
//! While the state stays inside (0, D) the model integrates exactly. With
//! M0 = M(w0), beta = mu_v·r_on/D and k = mu_v·r_on·(r_off − r_on)/D², the
//! charge delivered by a flux φ satisfies
//!
//!   φ = M0·q − eta·k·q²/2
//!
//! and the state follows as w = w0 + eta·beta·q. Inverting the quadratic on
//! the physical branch gives q(φ) in closed form, so a whole trace can be
//! produced without stepping an ODE.

use crate::device::DeviceParams;
use crate::integrator::{Sample, SimConfig, SimTrace};
use crate::waveform::DriveWaveform;
use crate::Error;

/// Charge q(φ) that the device passes while accumulating flux `flux`,
/// starting from the initial state.
///
/// Uses the subtraction-free branch q = 2φ/(M0 + √(M0² − 2·eta·k·φ)),
/// which is exact at φ = 0, stable for either sign of φ, and degrades
/// gracefully to φ/M0 as r_off → r_on. Fails if the flux lies beyond the
/// range the unclipped model can absorb.
pub fn charge_of_flux(params: &DeviceParams, flux: f64) -> Result<f64, Error> {
    params.validate()?;
    let m0 = params.memristance(params.init_width)?;
    let k = params.memristance_slope();
    let disc = m0 * m0 - 2.0 * params.polarity * k * flux;
    if disc < 0.0 {
        return Err(Error::AnalyticInvalid {
            reason: format!(
                "flux {flux} V·s lies beyond the invertible range of the charge-flux curve"
            ),
        });
    }
    Ok(2.0 * flux / (m0 + disc.sqrt()))
}

/// Signed flux interval (φ_lo, φ_hi) within which the state stays in
/// [0, D]. Outside it the device saturates and the closed form no longer
/// applies. For the default device this is (−0.3602, 0.6448) V·s.
pub fn clip_flux_threshold(params: &DeviceParams) -> Result<(f64, f64), Error> {
    params.validate()?;
    let m0 = params.memristance(params.init_width)?;
    let k = params.memristance_slope();
    let beta = params.charge_coefficient();
    let eta = params.polarity;
    // charge at which w reaches D, and at which it reaches 0
    let q_full = (params.thickness - params.init_width) / (eta * beta);
    let q_empty = -params.init_width / (eta * beta);
    let flux_of = |q: f64| m0 * q - eta * k * q * q / 2.0;
    let (a, b) = (flux_of(q_empty), flux_of(q_full));
    Ok((a.min(b), a.max(b)))
}

/// Exact trace on the same uniform time grid `simulate` uses, so the two
/// can be compared node by node. Fails with the saturating flux value if
/// the drive would clip the device, since the closed form only covers the
/// unclipped regime.
pub fn analytic_trace(
    params: &DeviceParams,
    drive: &DriveWaveform,
    config: &SimConfig,
) -> Result<SimTrace, Error> {
    params.validate()?;
    drive.validate()?;
    config.validate(drive)?;
    let (phi_lo, phi_hi) = clip_flux_threshold(params)?;

    let m0 = params.memristance(params.init_width)?;
    let k = params.memristance_slope();
    let beta = params.charge_coefficient();
    let eta = params.polarity;

    let n = config.steps_per_period as u64 * (config.settle_periods as u64 + drive.periods as u64);
    let h = drive.period() / config.steps_per_period as f64;
    let mut samples = Vec::with_capacity(n as usize + 1);
    for kk in 0..=n {
        let t = kk as f64 * h;
        let phi = drive.flux_at(t);
        if phi < phi_lo || phi > phi_hi {
            return Err(Error::AnalyticInvalid {
                reason: format!(
                    "flux {phi} V·s at t = {t} s leaves the unclipped window \
                     [{phi_lo}, {phi_hi}]; the closed form stops at saturation"
                ),
            });
        }
        let q = 2.0 * phi / (m0 + (m0 * m0 - 2.0 * eta * k * phi).sqrt());
        let w = params.init_width + eta * beta * q;
        let m = m0 - eta * k * q;
        let v = drive.voltage(t);
        samples.push(Sample {
            t,
            v,
            i: v / m,
            w,
            m,
            q,
            phi,
        });
    }
    Ok(SimTrace {
        device: *params,
        drive: *drive,
        config: *config,
        samples,
        clipped: false,
    })
}

/// Node-by-node discrepancy between a numerical trace and a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    /// Nodes compared.
    pub samples: usize,
    /// Largest |Δw|, meters.
    pub max_w_err: f64,
    /// Largest relative current mismatch, |Δi| / max(|i_a|, |i_b|);
    /// nodes where both currents are zero contribute zero.
    pub max_i_rel_err: f64,
    /// Largest |Δq|, coulombs.
    pub max_q_err: f64,
    /// Largest |Δφ|, volt-seconds.
    pub max_phi_err: f64,
    /// False if either trace clipped, in which case the closed form does
    /// not apply and the errors are not meaningful.
    pub valid: bool,
}

impl std::fmt::Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "samples compared: {}", self.samples)?;
        writeln!(f, "max |w| error:    {:.3e} m", self.max_w_err)?;
        writeln!(f, "max rel i error:  {:.3e}", self.max_i_rel_err)?;
        writeln!(f, "max |q| error:    {:.3e} C", self.max_q_err)?;
        writeln!(f, "max |phi| error:  {:.3e} V·s", self.max_phi_err)?;
        write!(f, "valid:            {}", self.valid)
    }
}

/// Compares two traces on identical time grids. Errors if the grids differ
/// in length or in any node time.
pub fn compare_traces(a: &SimTrace, b: &SimTrace) -> Result<OracleReport, Error> {
    if a.samples.len() != b.samples.len() {
        return Err(Error::GridMismatch(format!(
            "traces have {} and {} samples",
            a.samples.len(),
            b.samples.len()
        )));
    }
    let mut report = OracleReport {
        samples: a.samples.len(),
        max_w_err: 0.0,
        max_i_rel_err: 0.0,
        max_q_err: 0.0,
        max_phi_err: 0.0,
        valid: !a.clipped && !b.clipped,
    };
    for (sa, sb) in a.samples.iter().zip(&b.samples) {
        if sa.t != sb.t {
            return Err(Error::GridMismatch(format!(
                "node times diverge: {} vs {}",
                sa.t, sb.t
            )));
        }
        report.max_w_err = report.max_w_err.max((sa.w - sb.w).abs());
        let i_scale = sa.i.abs().max(sb.i.abs());
        if i_scale > 0.0 {
            report.max_i_rel_err = report.max_i_rel_err.max((sa.i - sb.i).abs() / i_scale);
        }
        report.max_q_err = report.max_q_err.max((sa.q - sb.q).abs());
        report.max_phi_err = report.max_phi_err.max((sa.phi - sb.phi).abs());
    }
    Ok(report)
}

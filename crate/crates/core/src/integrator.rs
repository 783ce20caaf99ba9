//! Fixed-step fourth-order Runge-Kutta integration of the drift equation.
//!
//! The state ODE is dw/dt = eta·mu_v·r_on·v(t)/(D·M(w)). Steps are uniform
//! (`steps_per_period` per drive period) so runs are bit-for-bit
//! reproducible and traces from different settings share time grids where
//! the step counts align. Charge and flux are accumulated alongside by the
//! trapezoid rule on the same grid.

use crate::device::{DeviceParams, DeviceState};
use crate::waveform::DriveWaveform;
use crate::Error;

/// Largest node count a single run may allocate (`steps + 1` samples).
const MAX_TOTAL_STEPS: u64 = 100_000_000;

/// Discretization settings for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// RK4 steps per drive period.
    pub steps_per_period: u32,
    /// Periods integrated before the recorded drive periods, letting the
    /// device approach its cyclic orbit first. The trace keeps these
    /// samples; metrics look only at the final period.
    pub settle_periods: u32,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            steps_per_period: 10_000,
            settle_periods: 0,
        }
    }
}

impl SimConfig {
    /// Checks discretization invariants for the given drive.
    pub fn validate(&self, drive: &DriveWaveform) -> Result<(), Error> {
        let mut violations = Vec::new();
        if self.steps_per_period < 2 {
            violations.push(format!(
                "steps_per_period = {}: must be at least 2",
                self.steps_per_period
            ));
        }
        let total = self.total_steps(drive);
        if total > MAX_TOTAL_STEPS {
            violations.push(format!(
                "run would take {total} steps; the limit is {MAX_TOTAL_STEPS}"
            ));
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams { violations })
        }
    }

    fn total_steps(&self, drive: &DriveWaveform) -> u64 {
        self.steps_per_period as u64 * (self.settle_periods as u64 + drive.periods as u64)
    }
}

/// One node of a simulated trace. All fields are SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// Time, seconds.
    pub t: f64,
    /// Applied voltage, volts.
    pub v: f64,
    /// Current v/M(w), amps.
    pub i: f64,
    /// Doped-region width, meters.
    pub w: f64,
    /// Memristance M(w), ohms.
    pub m: f64,
    /// Accumulated charge ∫i dt, coulombs.
    pub q: f64,
    /// Accumulated flux ∫v dt, volt-seconds.
    pub phi: f64,
}

/// A completed run: the sample sequence plus the inputs that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub device: DeviceParams,
    pub drive: DriveWaveform,
    pub config: SimConfig,
    /// `steps_per_period · (settle_periods + drive.periods) + 1` nodes,
    /// starting at t = 0.
    pub samples: Vec<Sample>,
    /// True iff the state hit a boundary of [0, D] at any committed step.
    pub clipped: bool,
}

impl SimTrace {
    /// Nodes of the last full drive period, both endpoints included
    /// (`steps_per_period + 1` samples). Metrics are evaluated on this
    /// window so settle periods never leak into them.
    pub fn final_period(&self) -> &[Sample] {
        let spp = self.config.steps_per_period as usize;
        &self.samples[self.samples.len() - 1 - spp..]
    }
}

/// Integrates the device response to `drive` from the initial state in
/// `params`. The drive runs for `settle_periods + drive.periods` full
/// periods; every node is recorded.
///
/// Stage evaluations leave the intermediate width unclamped but saturate
/// the memristance to [r_on, r_off], so a stage that oversteps a boundary
/// sees the boundary resistance instead of an unphysical one. Committed
/// states are clamped to [0, D] and the trace remembers whether that ever
/// happened.
pub fn simulate(
    params: &DeviceParams,
    drive: &DriveWaveform,
    config: &SimConfig,
) -> Result<SimTrace, Error> {
    params.validate()?;
    drive.validate()?;
    config.validate(drive)?;

    let n = config.total_steps(drive) as usize;
    let h = drive.period() / config.steps_per_period as f64;
    let coeff = params.polarity * params.charge_coefficient();
    // dw/dt at an unclamped stage width
    let deriv = |t: f64, w: f64| coeff * drive.voltage(t) / params.memristance_saturated(w);

    let mut state = DeviceState::initial(params);
    let mut samples = Vec::with_capacity(n + 1);
    let mut q = 0.0;
    let mut phi = 0.0;
    let node = |state: &DeviceState, t: f64, q: f64, phi: f64| {
        let v = drive.voltage(t);
        let m = params.memristance_saturated(state.w);
        Sample {
            t,
            v,
            i: v / m,
            w: state.w,
            m,
            q,
            phi,
        }
    };
    let mut prev = node(&state, 0.0, q, phi);
    samples.push(prev);

    for k in 0..n {
        let t = k as f64 * h;
        let w = state.w;
        let k1 = deriv(t, w);
        let k2 = deriv(t + 0.5 * h, w + 0.5 * h * k1);
        let k3 = deriv(t + 0.5 * h, w + 0.5 * h * k2);
        let k4 = deriv(t + h, w + h * k3);
        let raw = w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let (clamped, hit) = params.clip_state(raw);
        state.w = clamped;
        state.clipped |= hit;

        let t_next = (k + 1) as f64 * h;
        let next = node(&state, t_next, q, phi);
        q += 0.5 * h * (prev.i + next.i);
        phi += 0.5 * h * (prev.v + next.v);
        let next = Sample { q, phi, ..next };
        samples.push(next);
        prev = next;
    }

    Ok(SimTrace {
        device: *params,
        drive: *drive,
        config: *config,
        samples,
        clipped: state.clipped,
    })
}

//! Physical parameters and governing equations of the linear-drift memristor.
//!
//! The device is a stack of total thickness `D` whose doped (low-resistance)
//! region has instantaneous width `w`. The terminal resistance is the affine
//! blend of the fully-doped and fully-undoped resistances, and the doped
//! boundary drifts with a velocity proportional to the current through the
//! device. All quantities are strict SI (meters, ohms, amps, seconds).

use crate::Error;

/// Physical constants of one memristor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    /// Total device thickness D, meters.
    pub thickness: f64,
    /// Initial doped-region width w0, meters. Must lie in [0, D].
    pub init_width: f64,
    /// Fully-doped (low) resistance R_ON, ohms.
    pub r_on: f64,
    /// Fully-undoped (high) resistance R_OFF, ohms.
    pub r_off: f64,
    /// Average dopant drift mobility mu_v, m²·V⁻¹·s⁻¹.
    pub mobility: f64,
    /// Device orientation eta, exactly +1 or -1. Positive current grows the
    /// doped region when eta = +1.
    pub polarity: f64,
}

impl Default for DeviceParams {
    /// 10 nm device with a 2 nm doped region, R_OFF/R_ON = 200
    /// (r_on = 100 Ω, r_off = 20 kΩ), mu_v = 1e-14 m²/V/s, eta = +1.
    fn default() -> Self {
        DeviceParams {
            thickness: 10e-9,
            init_width: 2e-9,
            r_on: 100.0,
            r_off: 20_000.0,
            mobility: 1e-14,
            polarity: 1.0,
        }
    }
}

impl DeviceParams {
    /// Checks every invariant, returning an itemized list of violations on
    /// failure. Each entry names the field and the offending value.
    pub fn validate(&self) -> Result<(), Error> {
        let mut violations = Vec::new();
        if !(self.thickness > 0.0) {
            violations.push(format!("D = {} m: must be positive", self.thickness));
        }
        if !(self.init_width >= 0.0) {
            violations.push(format!("w0 = {} m: must be nonnegative", self.init_width));
        }
        if self.thickness > 0.0 && !(self.init_width <= self.thickness) {
            violations.push(format!(
                "w0 = {} m exceeds D = {} m",
                self.init_width, self.thickness
            ));
        }
        if !(self.r_on > 0.0) {
            violations.push(format!("r_on = {} ohm: must be positive", self.r_on));
        }
        if !(self.r_on < self.r_off) {
            violations.push(format!(
                "r_on must be strictly less than r_off (r_on = {}, r_off = {})",
                self.r_on, self.r_off
            ));
        }
        if !(self.mobility > 0.0) {
            violations.push(format!("mu_v = {}: must be positive", self.mobility));
        }
        if self.polarity != 1.0 && self.polarity != -1.0 {
            violations.push(format!("eta must be +1 or -1 (got {})", self.polarity));
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams { violations })
        }
    }

    /// Memristance M(w) = r_on·(w/D) + r_off·(1 − w/D), ohms.
    ///
    /// Rejects `w` outside [0, D]; the result always lies in [r_on, r_off].
    pub fn memristance(&self, w: f64) -> Result<f64, Error> {
        if !(0.0..=self.thickness).contains(&w) {
            return Err(Error::OutOfRange {
                what: "w",
                value: w,
                lo: 0.0,
                hi: self.thickness,
            });
        }
        Ok(self.memristance_saturated(w))
    }

    /// Memristance with the doped fraction saturated to [0, 1]. Used by the
    /// integrator on unclamped intermediate states, where `w` may briefly
    /// leave [0, D]; a fully doped device stays at r_on, fully undoped at
    /// r_off.
    pub(crate) fn memristance_saturated(&self, w: f64) -> f64 {
        let frac = (w / self.thickness).clamp(0.0, 1.0);
        self.r_on * frac + self.r_off * (1.0 - frac)
    }

    /// Boundary drift velocity dw/dt = eta·mu_v·r_on·i/D, m/s.
    ///
    /// Linear in the current; the sign flips with the polarity.
    pub fn state_derivative(&self, current: f64) -> f64 {
        self.polarity * self.mobility * self.r_on * current / self.thickness
    }

    /// Clamps `w` to the physical range [0, D]. The flag is true iff
    /// clamping occurred.
    pub fn clip_state(&self, w: f64) -> (f64, bool) {
        if w < 0.0 {
            (0.0, true)
        } else if w > self.thickness {
            (self.thickness, true)
        } else {
            (w, false)
        }
    }

    /// Charge-to-width coefficient beta = mu_v·r_on/D, m/C. The unclipped
    /// state is w0 + eta·beta·q.
    pub(crate) fn charge_coefficient(&self) -> f64 {
        self.mobility * self.r_on / self.thickness
    }

    /// Charge-to-memristance slope k = mu_v·r_on·(r_off − r_on)/D², ohm/C.
    /// The unclipped memristance is M(w0) − eta·k·q.
    pub(crate) fn memristance_slope(&self) -> f64 {
        self.mobility * self.r_on * (self.r_off - self.r_on) / (self.thickness * self.thickness)
    }
}

/// Instantaneous device state: the doped-region width plus a sticky flag
/// recording whether the width has touched a boundary so far in the run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceState {
    /// Doped-region width, meters, in [0, D].
    pub w: f64,
    /// True iff clamping has occurred at any point so far.
    pub clipped: bool,
}

impl DeviceState {
    /// State at the start of a run: w0, no clipping yet.
    pub fn initial(params: &DeviceParams) -> Self {
        DeviceState {
            w: params.init_width,
            clipped: false,
        }
    }
}

//! Sinusoidal write waveform and its exact flux integral.

use crate::Error;
use std::f64::consts::PI;

/// Sinusoidal voltage drive v(t) = v0·sin(2πft + φ0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveWaveform {
    /// Peak amplitude v0, volts. Zero is allowed (null drive).
    pub amplitude: f64,
    /// Frequency f, hertz. Must be positive.
    pub frequency: f64,
    /// Phase offset φ0, radians.
    pub phase: f64,
    /// Number of full periods the drive is applied for.
    pub periods: u32,
}

impl DriveWaveform {
    /// Zero-phase sine over a single period.
    pub fn new(amplitude: f64, frequency: f64) -> Self {
        DriveWaveform {
            amplitude,
            frequency,
            phase: 0.0,
            periods: 1,
        }
    }

    /// Checks field invariants, itemizing every violation.
    pub fn validate(&self) -> Result<(), Error> {
        let mut violations = Vec::new();
        if !(self.amplitude >= 0.0) || !self.amplitude.is_finite() {
            violations.push(format!(
                "amplitude = {} V: must be finite and nonnegative",
                self.amplitude
            ));
        }
        if !(self.frequency > 0.0) || !self.frequency.is_finite() {
            violations.push(format!(
                "frequency = {} Hz: must be finite and positive",
                self.frequency
            ));
        }
        if !self.phase.is_finite() {
            violations.push(format!("phase = {} rad: must be finite", self.phase));
        }
        if self.periods == 0 {
            violations.push("periods = 0: must be at least 1".to_string());
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams { violations })
        }
    }

    /// Period T = 1/f, seconds.
    pub fn period(&self) -> f64 {
        1.0 / self.frequency
    }

    /// Instantaneous voltage v(t), volts.
    pub fn voltage(&self, t: f64) -> f64 {
        self.amplitude * (2.0 * PI * self.frequency * t + self.phase).sin()
    }

    /// Exact flux φ(t) = ∫₀ᵗ v dτ = v0·[cos(φ0) − cos(2πft + φ0)]/(2πf),
    /// volt-seconds. For φ0 = 0 this peaks at v0/(πf) half way through each
    /// period and returns to zero at every full period.
    pub fn flux_at(&self, t: f64) -> f64 {
        let omega = 2.0 * PI * self.frequency;
        self.amplitude * (self.phase.cos() - (omega * t + self.phase).cos()) / omega
    }

    /// Largest flux reached over a period for the zero-phase drive,
    /// v0/(πf). Used to decide up front whether a run can saturate the
    /// device.
    pub fn peak_flux(&self) -> f64 {
        self.amplitude / (PI * self.frequency)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn voltage_landmarks() {
        let d = DriveWaveform::new(0.2, 1.0);
        assert_eq!(d.voltage(0.0), 0.0);
        assert_relative_eq!(d.voltage(0.25), 0.2, max_relative = 1e-12);
        assert_relative_eq!(d.voltage(0.75), -0.2, max_relative = 1e-12);
    }

    #[test]
    fn flux_landmarks() {
        let d = DriveWaveform::new(0.2, 1.0);
        // v0/(πf) at the half period
        assert_relative_eq!(d.flux_at(0.5), 0.063_661_977_236_758_13, max_relative = 1e-14);
        assert_relative_eq!(d.peak_flux(), d.flux_at(0.5), max_relative = 1e-14);
        // back to zero after a full period
        assert!(d.flux_at(1.0).abs() < 1e-18 * d.peak_flux().max(1.0));
        assert_eq!(d.flux_at(0.0), 0.0);
    }

    #[test]
    fn quarter_phase_shifts_the_peak() {
        let d = DriveWaveform {
            phase: std::f64::consts::FRAC_PI_2,
            ..DriveWaveform::new(1.0, 2.0)
        };
        assert_relative_eq!(d.voltage(0.0), 1.0, max_relative = 1e-12);
        // flux(t) = v0·sin(2πft)/(2πf): zero at t = 0 and each half period
        assert_eq!(d.flux_at(0.0), 0.0);
        assert!(d.flux_at(0.25).abs() < 1e-16);
    }

    #[test]
    fn zero_frequency_is_rejected() {
        let d = DriveWaveform::new(0.2, 0.0);
        assert!(d.validate().is_err());
    }

    #[test]
    fn negative_amplitude_is_rejected() {
        let d = DriveWaveform::new(-0.2, 1.0);
        assert!(d.validate().is_err());
    }

    proptest! {
        /// flux_at must agree with a composite-Simpson quadrature of the
        /// voltage, which ties the closed form to the waveform it claims to
        /// integrate.
        #[test]
        fn flux_matches_quadrature(
            v0 in 0.05f64..2.0,
            f in 0.5f64..500.0,
            phase in -3.0f64..3.0,
            frac in 0.01f64..1.0,
        ) {
            let d = DriveWaveform { amplitude: v0, frequency: f, phase, periods: 1 };
            let t_end = frac * d.period();
            let n = 2000usize; // even
            let h = t_end / n as f64;
            let mut acc = d.voltage(0.0) + d.voltage(t_end);
            for k in 1..n {
                let wgt = if k % 2 == 1 { 4.0 } else { 2.0 };
                acc += wgt * d.voltage(k as f64 * h);
            }
            let quad = acc * h / 3.0;
            let exact = d.flux_at(t_end);
            prop_assert!((quad - exact).abs() < 1e-9 * d.peak_flux().max(1e-12),
                "quad {} vs exact {}", quad, exact);
        }

        /// Flux is periodic: after any whole number of periods it returns to
        /// the start (zero for zero phase).
        #[test]
        fn flux_returns_each_period(v0 in 0.05f64..2.0, f in 0.5f64..500.0, k in 1u32..6) {
            let d = DriveWaveform::new(v0, f);
            let t = k as f64 * d.period();
            prop_assert!(d.flux_at(t).abs() < 1e-12 * d.peak_flux());
        }
    }
}

//! Per-cycle figures of merit extracted from a simulated trace.
//!
//! All metrics are evaluated on the final full drive period so that settle
//! periods never contaminate them. Resistance states come from the
//! state-based memristance M(w), never from V/I, which is undefined at the
//! loop pinch points.

use crate::integrator::{Sample, SimTrace};
use crate::Error;

/// Measurement settings that are not part of the physics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsConfig {
    /// Sense-amplifier current threshold, amps. The lifetime margin tau is
    /// the peak read current divided by this.
    pub i_sense: f64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        MetricsConfig { i_sense: 1e-6 }
    }
}

impl MetricsConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.i_sense > 0.0 && self.i_sense.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParams {
                violations: vec![format!(
                    "i_sense = {} A: must be finite and positive",
                    self.i_sense
                )],
            })
        }
    }
}

/// Figures of merit of one drive cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleMetrics {
    /// Drive amplitude, volts.
    pub v0: f64,
    /// Drive frequency, hertz.
    pub freq: f64,
    /// Low resistance state: smallest M(w) reached, ohms.
    pub lrs: f64,
    /// High resistance state: largest M(w) reached, ohms.
    pub hrs: f64,
    /// Memory window as a ratio, hrs/lrs. 1 means no switching.
    pub window_ratio: f64,
    /// Memory window as a difference, hrs − lrs, ohms.
    pub window_diff: f64,
    /// Area enclosed by the pinched I-V hysteresis loop, volt-amps.
    pub loop_area: f64,
    /// Largest |i| over the cycle, amps.
    pub peak_current: f64,
    /// Lifetime margin: peak_current / i_sense.
    pub tau: f64,
    /// Departure of the charge-flux curve from a straight line, as
    /// 1 − R² of an ordinary least-squares fit of q against φ.
    pub qphi_nonlinearity: f64,
    /// True iff the state hit a boundary during the run.
    pub clipped: bool,
}

/// Extracts all figures of merit from the final period of `trace`.
pub fn cycle_metrics(trace: &SimTrace, cfg: &MetricsConfig) -> Result<CycleMetrics, Error> {
    cfg.validate()?;
    let window = trace.final_period();
    if window.len() < 3 {
        return Err(Error::DegenerateTrace(
            "cycle metrics need at least 3 samples in the final period",
        ));
    }
    let lrs = window.iter().map(|s| s.m).fold(f64::INFINITY, f64::min);
    let hrs = window.iter().map(|s| s.m).fold(f64::NEG_INFINITY, f64::max);
    let peak_current = window.iter().map(|s| s.i.abs()).fold(0.0, f64::max);
    Ok(CycleMetrics {
        v0: trace.drive.amplitude,
        freq: trace.drive.frequency,
        lrs,
        hrs,
        window_ratio: hrs / lrs,
        window_diff: hrs - lrs,
        loop_area: loop_area(window)?,
        peak_current,
        tau: peak_current / cfg.i_sense,
        qphi_nonlinearity: qphi_nonlinearity(window),
        clipped: trace.clipped,
    })
}

/// Area enclosed by the I-V loop traced by `samples`, volt-amps.
///
/// The path is split at every strict voltage sign change, with the crossing
/// point interpolated linearly onto v = 0. Each resulting segment is closed
/// by the edge back to its first point and measured by the shoelace rule;
/// the total is the sum of absolute segment areas, so the two lobes of a
/// pinched loop add instead of cancelling. Segments too short to enclose
/// area contribute zero.
pub fn loop_area(samples: &[Sample]) -> Result<f64, Error> {
    if samples.len() < 3 {
        return Err(Error::DegenerateTrace("loop area needs at least 3 samples"));
    }
    let shoelace = |poly: &[(f64, f64)]| -> f64 {
        let mut acc = 0.0;
        for idx in 0..poly.len() {
            let (x1, y1) = poly[idx];
            let (x2, y2) = poly[(idx + 1) % poly.len()];
            acc += x1 * y2 - x2 * y1;
        }
        acc / 2.0
    };
    let mut total = 0.0;
    let mut lobe: Vec<(f64, f64)> = vec![(samples[0].v, samples[0].i)];
    for pair in samples.windows(2) {
        let (v1, i1) = (pair[0].v, pair[0].i);
        let (v2, i2) = (pair[1].v, pair[1].i);
        if v1 != 0.0 && v2 != 0.0 && (v1 > 0.0) != (v2 > 0.0) {
            let frac = v1 / (v1 - v2);
            let cross = (0.0, i1 + (i2 - i1) * frac);
            lobe.push(cross);
            total += shoelace(&lobe).abs();
            lobe = vec![cross, (v2, i2)];
        } else {
            lobe.push((v2, i2));
        }
    }
    total += shoelace(&lobe).abs();
    Ok(total)
}

/// Interpolated currents where the drive voltage crosses zero: one value
/// per strict sign change (linear interpolation onto v = 0) and one per
/// sample whose voltage is exactly zero. For an ideal pinched loop these
/// all vanish.
pub fn pinch_currents(samples: &[Sample]) -> Vec<f64> {
    let mut out = Vec::new();
    for (idx, s) in samples.iter().enumerate() {
        if s.v == 0.0 {
            out.push(s.i);
        }
        if idx + 1 < samples.len() {
            let (v1, i1) = (s.v, s.i);
            let (v2, i2) = (samples[idx + 1].v, samples[idx + 1].i);
            if v1 != 0.0 && v2 != 0.0 && (v1 > 0.0) != (v2 > 0.0) {
                let frac = v1 / (v1 - v2);
                out.push(i1 + (i2 - i1) * frac);
            }
        }
    }
    out
}

/// 1 − R² of the ordinary least-squares line through (φ, q). Zero for a
/// perfectly linear charge-flux relation; degenerate windows (no spread in
/// φ or q, e.g. a null drive) also report zero.
pub fn qphi_nonlinearity(samples: &[Sample]) -> f64 {
    let n = samples.len() as f64;
    let mean_phi = samples.iter().map(|s| s.phi).sum::<f64>() / n;
    let mean_q = samples.iter().map(|s| s.q).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for s in samples {
        let dx = s.phi - mean_phi;
        let dy = s.q - mean_q;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (1.0 - sxy * sxy / (sxx * syy)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::DeviceParams;
    use crate::integrator::{simulate, SimConfig};
    use crate::waveform::DriveWaveform;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn run(v0: f64, f: f64, spp: u32) -> SimTrace {
        simulate(
            &DeviceParams::default(),
            &DriveWaveform::new(v0, f),
            &SimConfig {
                steps_per_period: spp,
                settle_periods: 0,
            },
        )
        .unwrap()
    }

    fn point(v: f64, i: f64) -> Sample {
        Sample {
            t: 0.0,
            v,
            i,
            w: 0.0,
            m: 0.0,
            q: 0.0,
            phi: 0.0,
        }
    }

    #[test]
    fn resistance_states_of_the_small_slow_write() {
        let m = cycle_metrics(&run(0.2, 1.0, 10_000), &MetricsConfig::default()).unwrap();
        assert_relative_eq!(m.lrs, 15_208.646_654_445_3, max_relative = 1e-8);
        assert_relative_eq!(m.hrs, 16_020.0, max_relative = 1e-9);
        assert_eq!(m.window_ratio, m.hrs / m.lrs);
        assert_eq!(m.window_diff, m.hrs - m.lrs);
        assert!(!m.clipped);
        assert_eq!(m.v0, 0.2);
        assert_eq!(m.freq, 1.0);
    }

    #[test]
    fn peak_current_and_lifetime_margin() {
        let m = cycle_metrics(&run(0.2, 1.0, 10_000), &MetricsConfig::default()).unwrap();
        assert_relative_eq!(m.peak_current, 1.280_875_231_085e-5, max_relative = 1e-6);
        assert_relative_eq!(m.tau, 12.808_752_310_85, max_relative = 1e-6);
        assert_eq!(m.tau, m.peak_current / 1e-6);
    }

    #[test]
    fn lifetime_margin_scales_with_the_threshold() {
        let trace = run(0.2, 1.0, 2000);
        let a = cycle_metrics(&trace, &MetricsConfig { i_sense: 1e-6 }).unwrap();
        let b = cycle_metrics(&trace, &MetricsConfig { i_sense: 2e-6 }).unwrap();
        assert_relative_eq!(a.tau, 2.0 * b.tau, max_relative = 1e-12);
    }

    #[test]
    fn loop_area_of_the_small_slow_write() {
        let m = cycle_metrics(&run(0.2, 1.0, 10_000), &MetricsConfig::default()).unwrap();
        assert_relative_eq!(m.loop_area, 8.874e-8, max_relative = 2e-3);
    }

    #[test]
    fn charge_flux_nonlinearity_frozen_values() {
        let small = cycle_metrics(&run(0.2, 1.0, 10_000), &MetricsConfig::default()).unwrap();
        let large = cycle_metrics(&run(1.2, 1.0, 10_000), &MetricsConfig::default()).unwrap();
        assert_relative_eq!(small.qphi_nonlinearity, 4.218_657_77e-5, max_relative = 1e-3);
        assert_relative_eq!(large.qphi_nonlinearity, 3.033_348_40e-3, max_relative = 1e-3);
        assert!(small.qphi_nonlinearity < large.qphi_nonlinearity);
    }

    #[test]
    fn null_drive_degenerates_cleanly() {
        let m = cycle_metrics(&run(0.0, 1.0, 500), &MetricsConfig::default()).unwrap();
        assert_eq!(m.lrs, m.hrs);
        assert_eq!(m.window_ratio, 1.0);
        assert_eq!(m.loop_area, 0.0);
        assert_eq!(m.peak_current, 0.0);
        assert_eq!(m.tau, 0.0);
        assert_eq!(m.qphi_nonlinearity, 0.0);
    }

    #[test]
    fn clipped_run_swings_rail_to_rail() {
        // w saturates at D mid-period; the reverse half-cycle then runs
        // through r_on with enormous current and drags w down to 0, so both
        // resistance bounds are reached exactly
        let m = cycle_metrics(&run(1.2, 0.05, 4000), &MetricsConfig::default()).unwrap();
        assert!(m.clipped);
        assert_eq!(m.lrs, 100.0);
        assert_eq!(m.hrs, 20_000.0);
    }

    #[test]
    fn shoelace_recovers_a_circle() {
        // unit circle entered at its lower pinch (v = 0), like a drive loop
        let n = 2000;
        let samples: Vec<Sample> = (0..=n)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / n as f64;
                point(th.sin(), -th.cos())
            })
            .collect();
        let area = loop_area(&samples).unwrap();
        assert_relative_eq!(area, PI, max_relative = 1e-4);
    }

    #[test]
    fn ohmic_line_encloses_nothing() {
        let n = 400;
        let samples: Vec<Sample> = (0..=n)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / n as f64;
                let v = th.sin();
                point(v, v / 1000.0)
            })
            .collect();
        assert!(loop_area(&samples).unwrap() < 1e-18);
    }

    #[test]
    fn short_windows_are_rejected() {
        let samples = vec![point(0.0, 0.0), point(1.0, 1e-3)];
        assert!(matches!(
            loop_area(&samples),
            Err(Error::DegenerateTrace(_))
        ));
    }

    #[test]
    fn pinch_currents_vanish_at_the_crossings() {
        let trace = run(0.2, 1.0, 10_000);
        let crossings = pinch_currents(trace.final_period());
        assert!(!crossings.is_empty());
        let peak = trace
            .final_period()
            .iter()
            .map(|s| s.i.abs())
            .fold(0.0, f64::max);
        for i in crossings {
            assert!(i.abs() < 1e-9 * peak, "crossing current {i} vs peak {peak}");
        }
    }

    #[test]
    fn metrics_use_only_the_final_period() {
        // identical physics, one settle period: metrics must agree with the
        // plain run because the cycle repeats
        let plain = cycle_metrics(&run(0.6, 2.0, 2000), &MetricsConfig::default()).unwrap();
        let settled = simulate(
            &DeviceParams::default(),
            &DriveWaveform::new(0.6, 2.0),
            &SimConfig {
                steps_per_period: 2000,
                settle_periods: 2,
            },
        )
        .unwrap();
        let settled = cycle_metrics(&settled, &MetricsConfig::default()).unwrap();
        assert_relative_eq!(plain.lrs, settled.lrs, max_relative = 1e-9);
        assert_relative_eq!(plain.hrs, settled.hrs, max_relative = 1e-9);
        assert_relative_eq!(plain.loop_area, settled.loop_area, max_relative = 1e-6);
        assert_relative_eq!(plain.peak_current, settled.peak_current, max_relative = 1e-9);
    }

    #[test]
    fn invalid_sense_current_is_rejected() {
        let trace = run(0.2, 1.0, 100);
        assert!(cycle_metrics(&trace, &MetricsConfig { i_sense: 0.0 }).is_err());
        assert!(cycle_metrics(&trace, &MetricsConfig { i_sense: -1e-6 }).is_err());
    }
}

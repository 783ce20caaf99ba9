//! Cartesian amplitude × frequency experiment over a grid of drives.
//!
//! Cells are independent pure computations, so they run in parallel; the
//! result matrix is assembled by grid index, making both content and order
//! independent of scheduling and worker count.

use crate::device::DeviceParams;
use crate::integrator::{simulate, SimConfig};
use crate::metrics::{cycle_metrics, CycleMetrics, MetricsConfig};
use crate::waveform::DriveWaveform;
use crate::Error;
use rayon::prelude::*;

/// Write amplitudes swept by default, volts: 0.2 V steps up to 1.2 V.
pub const DEFAULT_AMPLITUDES: [f64; 6] = [0.2, 0.4, 0.6, 0.8, 1.0, 1.2];

/// Drive frequencies swept by default, hertz.
pub const DEFAULT_FREQUENCIES: [f64; 6] = [1.0, 2.0, 4.0, 10.0, 100.0, 200.0];

/// The experiment grid: every amplitude is paired with every frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    /// Strictly increasing, positive, volts.
    pub amplitudes: Vec<f64>,
    /// Strictly increasing, positive, hertz.
    pub frequencies: Vec<f64>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            amplitudes: DEFAULT_AMPLITUDES.to_vec(),
            frequencies: DEFAULT_FREQUENCIES.to_vec(),
        }
    }
}

/// Validates and builds a grid. Empty lists take the default axes, so a
/// config that omits one axis still gets the standard sweep along it.
pub fn build_grid(amplitudes: Vec<f64>, frequencies: Vec<f64>) -> Result<SweepGrid, Error> {
    let mut violations = Vec::new();
    let mut check = |name: &str, values: &[f64]| {
        for (idx, &x) in values.iter().enumerate() {
            if !x.is_finite() || !(x > 0.0) {
                violations.push(format!("{name}: must be positive at index {idx} (got {x})"));
            } else if idx > 0 && !(values[idx - 1] < x) {
                violations.push(format!("{name}: not strictly increasing at index {idx}"));
            }
        }
    };
    let amplitudes = if amplitudes.is_empty() {
        DEFAULT_AMPLITUDES.to_vec()
    } else {
        amplitudes
    };
    let frequencies = if frequencies.is_empty() {
        DEFAULT_FREQUENCIES.to_vec()
    } else {
        frequencies
    };
    check("amplitudes", &amplitudes);
    check("frequencies", &frequencies);
    if violations.is_empty() {
        Ok(SweepGrid {
            amplitudes,
            frequencies,
        })
    } else {
        Err(Error::InvalidParams { violations })
    }
}

/// A completed sweep: the inputs plus one metrics cell per grid point,
/// `cells[amplitude index][frequency index]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: SweepGrid,
    pub device: DeviceParams,
    pub sim: SimConfig,
    pub metrics_cfg: MetricsConfig,
    pub cells: Vec<Vec<CycleMetrics>>,
}

/// Runs every grid cell: a zero-phase sine at (v0, f) for one recorded
/// period (after `sim.settle_periods` settle periods), metrics on the final
/// period. Any cell failure aborts the whole sweep, reporting the first
/// failing coordinates in grid order; no partial tables are produced.
pub fn run_sweep(
    device: &DeviceParams,
    grid: &SweepGrid,
    sim: &SimConfig,
    mcfg: &MetricsConfig,
) -> Result<SweepResult, Error> {
    device.validate()?;
    mcfg.validate()?;
    let nf = grid.frequencies.len();
    let outcomes: Vec<Result<CycleMetrics, Error>> = (0..grid.amplitudes.len() * nf)
        .into_par_iter()
        .map(|idx| {
            let v0 = grid.amplitudes[idx / nf];
            let freq = grid.frequencies[idx % nf];
            let drive = DriveWaveform::new(v0, freq);
            simulate(device, &drive, sim)
                .and_then(|trace| cycle_metrics(&trace, mcfg))
                .map_err(|source| Error::SweepCell {
                    v0,
                    freq,
                    source: Box::new(source),
                })
        })
        .collect();

    let mut flat = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        flat.push(outcome?);
    }
    let cells = flat.chunks(nf).map(|row| row.to_vec()).collect();
    Ok(SweepResult {
        grid: grid.clone(),
        device: *device,
        sim: *sim,
        metrics_cfg: *mcfg,
        cells,
    })
}

/// Grid points ordered best-first by lifetime margin tau. Ties favor the
/// higher amplitude, then the lower frequency, so the order is total and
/// deterministic.
pub fn rank_lifetime(result: &SweepResult) -> Vec<(f64, f64, f64)> {
    let mut entries: Vec<(f64, f64, f64)> = result
        .cells
        .iter()
        .flatten()
        .map(|c| (c.v0, c.freq, c.tau))
        .collect();
    entries.sort_by(|a, b| {
        b.2.total_cmp(&a.2)
            .then(b.0.total_cmp(&a.0))
            .then(a.1.total_cmp(&b.1))
    });
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quick_sim() -> SimConfig {
        SimConfig {
            steps_per_period: 600,
            settle_periods: 0,
        }
    }

    fn quick_sweep(grid: &SweepGrid) -> SweepResult {
        run_sweep(
            &DeviceParams::default(),
            grid,
            &quick_sim(),
            &MetricsConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn default_grid_is_six_by_six() {
        let g = SweepGrid::default();
        assert_eq!(g.amplitudes, vec![0.2, 0.4, 0.6, 0.8, 1.0, 1.2]);
        assert_eq!(g.frequencies, vec![1.0, 2.0, 4.0, 10.0, 100.0, 200.0]);
    }

    #[test]
    fn empty_axes_take_defaults() {
        let g = build_grid(vec![], vec![50.0]).unwrap();
        assert_eq!(g.amplitudes, DEFAULT_AMPLITUDES.to_vec());
        assert_eq!(g.frequencies, vec![50.0]);
        assert_eq!(build_grid(vec![], vec![]).unwrap(), SweepGrid::default());
    }

    #[test]
    fn unordered_axes_are_rejected_with_index() {
        let err = build_grid(vec![0.4, 0.2], vec![1.0]).unwrap_err();
        assert!(
            err.to_string().contains("not strictly increasing at index 1"),
            "{err}"
        );
        let err = build_grid(vec![0.2, 0.2], vec![1.0]).unwrap_err();
        assert!(err.to_string().contains("at index 1"), "{err}");
        let err = build_grid(vec![0.5], vec![-1.0, 1.0]).unwrap_err();
        assert!(
            err.to_string().contains("must be positive at index 0"),
            "{err}"
        );
    }

    #[test]
    fn cells_carry_their_grid_coordinates() {
        let grid = build_grid(vec![0.2, 0.8], vec![1.0, 10.0, 200.0]).unwrap();
        let result = quick_sweep(&grid);
        assert_eq!(result.cells.len(), 2);
        for (ia, row) in result.cells.iter().enumerate() {
            assert_eq!(row.len(), 3);
            for (ifr, cell) in row.iter().enumerate() {
                assert_eq!(cell.v0, grid.amplitudes[ia]);
                assert_eq!(cell.freq, grid.frequencies[ifr]);
            }
        }
    }

    #[test]
    fn high_resistance_state_is_grid_invariant() {
        let result = quick_sweep(&SweepGrid::default());
        for cell in result.cells.iter().flatten() {
            assert_relative_eq!(cell.hrs, 16_020.0, max_relative = 1e-6);
            assert!(!cell.clipped);
        }
    }

    #[test]
    fn extreme_cells_bound_the_low_resistance_state() {
        let result = quick_sweep(&SweepGrid::default());
        let lrs_min = result
            .cells
            .iter()
            .flatten()
            .map(|c| c.lrs)
            .fold(f64::INFINITY, f64::min);
        let lrs_max = result
            .cells
            .iter()
            .flatten()
            .map(|c| c.lrs)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(result.cells[5][0].lrs, lrs_min); // strongest write: 1.2 V, 1 Hz
        assert_eq!(result.cells[0][5].lrs, lrs_max); // weakest write: 0.2 V, 200 Hz
    }

    #[test]
    fn single_cell_matches_a_direct_run() {
        let grid = build_grid(vec![0.5], vec![50.0]).unwrap();
        let result = quick_sweep(&grid);
        let trace = simulate(
            &DeviceParams::default(),
            &DriveWaveform::new(0.5, 50.0),
            &quick_sim(),
        )
        .unwrap();
        let direct = cycle_metrics(&trace, &MetricsConfig::default()).unwrap();
        assert_eq!(result.cells, vec![vec![direct]]);
    }

    #[test]
    fn worker_count_does_not_change_the_result() {
        let grid = SweepGrid::default();
        let runs: Vec<SweepResult> = [1usize, 4]
            .iter()
            .map(|&threads| {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .unwrap();
                pool.install(|| quick_sweep(&grid))
            })
            .collect();
        assert_eq!(runs[0], runs[1]);
    }

    #[test]
    fn removing_a_row_leaves_other_cells_bit_identical() {
        let full = quick_sweep(&build_grid(vec![0.2, 1.2], vec![1.0, 200.0]).unwrap());
        let part = quick_sweep(&build_grid(vec![1.2], vec![1.0, 200.0]).unwrap());
        assert_eq!(full.cells[1], part.cells[0]);
    }

    #[test]
    fn failing_cell_aborts_with_coordinates() {
        // every cell fails (step count too low); the reported coordinates
        // must be the first cell in grid order regardless of scheduling
        let grid = build_grid(vec![0.2, 0.4], vec![1.0, 2.0]).unwrap();
        let err = run_sweep(
            &DeviceParams::default(),
            &grid,
            &SimConfig {
                steps_per_period: 1, // rejected by the integrator
                settle_periods: 0,
            },
            &MetricsConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::SweepCell { v0, freq, .. } => {
                assert_eq!((v0, freq), (0.2, 1.0));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn lifetime_ranking_extremes() {
        let result = quick_sweep(&SweepGrid::default());
        let ranking = rank_lifetime(&result);
        assert_eq!(ranking.len(), 36);
        assert_eq!((ranking[0].0, ranking[0].1), (1.2, 1.0));
        assert_eq!((ranking[35].0, ranking[35].1), (0.2, 200.0));
        // tau column is non-increasing
        for pair in ranking.windows(2) {
            assert!(pair[0].2 >= pair[1].2);
        }
    }

    #[test]
    fn lifetime_ranking_breaks_ties_deterministically() {
        let mut result = quick_sweep(&build_grid(vec![0.5, 1.0], vec![1.0, 2.0]).unwrap());
        for row in &mut result.cells {
            for cell in row.iter_mut() {
                cell.tau = 7.0;
            }
        }
        let ranking = rank_lifetime(&result);
        let order: Vec<(f64, f64)> = ranking.iter().map(|e| (e.0, e.1)).collect();
        assert_eq!(
            order,
            vec![(1.0, 1.0), (1.0, 2.0), (0.5, 1.0), (0.5, 2.0)]
        );
    }

    #[test]
    fn window_ratio_orders_with_drive_strength() {
        let result = quick_sweep(&SweepGrid::default());
        for row in &result.cells {
            for pair in row.windows(2) {
                assert!(pair[0].window_ratio >= pair[1].window_ratio);
            }
        }
        for col in 0..result.grid.frequencies.len() {
            for ia in 1..result.grid.amplitudes.len() {
                assert!(result.cells[ia][col].window_ratio >= result.cells[ia - 1][col].window_ratio);
            }
        }
    }
}

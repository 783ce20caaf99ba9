//! Python bindings for the memdrift simulator.
//!
//! Wrapper classes mirror the Rust types one-to-one and validate their
//! inputs at construction, so a bad parameter raises ValueError right where
//! the Python caller made it. Trace data is exposed as per-column lists,
//! which is what plotting and numpy want anyway.

use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py_err(err: memdrift::Error) -> PyErr {
    match err {
        memdrift::Error::Io { .. } => PyIOError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Linear-drift device parameters.
#[pyclass(name = "DeviceParams", module = "memdrift_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyDeviceParams {
    inner: memdrift::DeviceParams,
}

#[pymethods]
impl PyDeviceParams {
    #[new]
    #[pyo3(signature = (thickness=10e-9, init_width=2e-9, r_on=100.0, r_off=20_000.0, mobility=1e-14, polarity=1.0))]
    fn new(
        thickness: f64,
        init_width: f64,
        r_on: f64,
        r_off: f64,
        mobility: f64,
        polarity: f64,
    ) -> PyResult<Self> {
        let inner = memdrift::DeviceParams {
            thickness,
            init_width,
            r_on,
            r_off,
            mobility,
            polarity,
        };
        inner.validate().map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn thickness(&self) -> f64 {
        self.inner.thickness
    }

    #[getter]
    fn init_width(&self) -> f64 {
        self.inner.init_width
    }

    #[getter]
    fn r_on(&self) -> f64 {
        self.inner.r_on
    }

    #[getter]
    fn r_off(&self) -> f64 {
        self.inner.r_off
    }

    #[getter]
    fn mobility(&self) -> f64 {
        self.inner.mobility
    }

    #[getter]
    fn polarity(&self) -> f64 {
        self.inner.polarity
    }

    /// Memristance at doped-region width `w` (meters, within [0, D]).
    fn memristance(&self, w: f64) -> PyResult<f64> {
        self.inner.memristance(w).map_err(to_py_err)
    }

    /// dw/dt for a given instantaneous current, m/s.
    fn state_derivative(&self, current: f64) -> f64 {
        self.inner.state_derivative(current)
    }

    fn __repr__(&self) -> String {
        format!(
            "DeviceParams(thickness={:.3e}, init_width={:.3e}, r_on={}, r_off={}, \
             mobility={:.3e}, polarity={})",
            self.inner.thickness,
            self.inner.init_width,
            self.inner.r_on,
            self.inner.r_off,
            self.inner.mobility,
            self.inner.polarity
        )
    }
}

/// Sinusoidal drive: v(t) = amplitude * sin(2*pi*frequency*t + phase).
#[pyclass(name = "DriveWaveform", module = "memdrift_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyDriveWaveform {
    inner: memdrift::DriveWaveform,
}

#[pymethods]
impl PyDriveWaveform {
    #[new]
    #[pyo3(signature = (amplitude, frequency, phase=0.0, periods=1))]
    fn new(amplitude: f64, frequency: f64, phase: f64, periods: u32) -> PyResult<Self> {
        let inner = memdrift::DriveWaveform {
            amplitude,
            frequency,
            phase,
            periods,
        };
        inner.validate().map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn amplitude(&self) -> f64 {
        self.inner.amplitude
    }

    #[getter]
    fn frequency(&self) -> f64 {
        self.inner.frequency
    }

    #[getter]
    fn phase(&self) -> f64 {
        self.inner.phase
    }

    #[getter]
    fn periods(&self) -> u32 {
        self.inner.periods
    }

    fn period(&self) -> f64 {
        self.inner.period()
    }

    fn voltage(&self, t: f64) -> f64 {
        self.inner.voltage(t)
    }

    /// Integral of the voltage from 0 to t, volt-seconds.
    fn flux_at(&self, t: f64) -> f64 {
        self.inner.flux_at(t)
    }

    fn peak_flux(&self) -> f64 {
        self.inner.peak_flux()
    }

    fn __repr__(&self) -> String {
        format!(
            "DriveWaveform(amplitude={}, frequency={}, phase={}, periods={})",
            self.inner.amplitude, self.inner.frequency, self.inner.phase, self.inner.periods
        )
    }
}

/// Integrator discretization.
#[pyclass(name = "SimConfig", module = "memdrift_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PySimConfig {
    inner: memdrift::SimConfig,
}

#[pymethods]
impl PySimConfig {
    #[new]
    #[pyo3(signature = (steps_per_period=10_000, settle_periods=0))]
    fn new(steps_per_period: u32, settle_periods: u32) -> PyResult<Self> {
        let inner = memdrift::SimConfig {
            steps_per_period,
            settle_periods,
        };
        // A one-period null drive puts the lowest possible demand on the
        // step budget, so anything rejected here fails for every drive.
        inner
            .validate(&memdrift::DriveWaveform::new(0.0, 1.0))
            .map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn steps_per_period(&self) -> u32 {
        self.inner.steps_per_period
    }

    #[getter]
    fn settle_periods(&self) -> u32 {
        self.inner.settle_periods
    }

    fn __repr__(&self) -> String {
        format!(
            "SimConfig(steps_per_period={}, settle_periods={})",
            self.inner.steps_per_period, self.inner.settle_periods
        )
    }
}

/// Metric extraction parameters.
#[pyclass(name = "MetricsConfig", module = "memdrift_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyMetricsConfig {
    inner: memdrift::MetricsConfig,
}

#[pymethods]
impl PyMetricsConfig {
    #[new]
    #[pyo3(signature = (i_sense=1e-6))]
    fn new(i_sense: f64) -> PyResult<Self> {
        let inner = memdrift::MetricsConfig { i_sense };
        inner.validate().map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn i_sense(&self) -> f64 {
        self.inner.i_sense
    }

    fn __repr__(&self) -> String {
        format!("MetricsConfig(i_sense={:e})", self.inner.i_sense)
    }
}

/// Amplitude x frequency grid. Omitted axes take the default sweep.
#[pyclass(name = "SweepGrid", module = "memdrift_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PySweepGrid {
    inner: memdrift::SweepGrid,
}

#[pymethods]
impl PySweepGrid {
    #[new]
    #[pyo3(signature = (amplitudes=None, frequencies=None))]
    fn new(amplitudes: Option<Vec<f64>>, frequencies: Option<Vec<f64>>) -> PyResult<Self> {
        let inner = memdrift::build_grid(
            amplitudes.unwrap_or_default(),
            frequencies.unwrap_or_default(),
        )
        .map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn amplitudes(&self) -> Vec<f64> {
        self.inner.amplitudes.clone()
    }

    #[getter]
    fn frequencies(&self) -> Vec<f64> {
        self.inner.frequencies.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "SweepGrid(amplitudes={:?}, frequencies={:?})",
            self.inner.amplitudes, self.inner.frequencies
        )
    }
}

/// A completed run: per-node columns plus the inputs that produced them.
#[pyclass(name = "SimTrace", module = "memdrift_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PySimTrace {
    inner: memdrift::SimTrace,
}

#[pymethods]
impl PySimTrace {
    #[getter]
    fn device(&self) -> PyDeviceParams {
        PyDeviceParams {
            inner: self.inner.device,
        }
    }

    #[getter]
    fn drive(&self) -> PyDriveWaveform {
        PyDriveWaveform {
            inner: self.inner.drive,
        }
    }

    #[getter]
    fn config(&self) -> PySimConfig {
        PySimConfig {
            inner: self.inner.config,
        }
    }

    /// True iff the state hit a boundary of [0, D] during the run.
    #[getter]
    fn clipped(&self) -> bool {
        self.inner.clipped
    }

    /// Index of the first node of the final drive period; slice any column
    /// with it to get the window the metrics are computed on.
    #[getter]
    fn final_period_start(&self) -> usize {
        self.inner.samples.len() - 1 - self.inner.config.steps_per_period as usize
    }

    fn times(&self) -> Vec<f64> {
        self.inner.samples.iter().map(|s| s.t).collect()
    }

    fn voltages(&self) -> Vec<f64> {
        self.inner.samples.iter().map(|s| s.v).collect()
    }

    fn currents(&self) -> Vec<f64> {
        self.inner.samples.iter().map(|s| s.i).collect()
    }

    fn widths(&self) -> Vec<f64> {
        self.inner.samples.iter().map(|s| s.w).collect()
    }

    fn memristances(&self) -> Vec<f64> {
        self.inner.samples.iter().map(|s| s.m).collect()
    }

    fn charges(&self) -> Vec<f64> {
        self.inner.samples.iter().map(|s| s.q).collect()
    }

    fn fluxes(&self) -> Vec<f64> {
        self.inner.samples.iter().map(|s| s.phi).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.samples.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "SimTrace({} samples, v0={} V, f={} Hz, clipped={})",
            self.inner.samples.len(),
            self.inner.drive.amplitude,
            self.inner.drive.frequency,
            self.inner.clipped
        )
    }
}

/// Figures of merit for one drive period.
#[pyclass(name = "CycleMetrics", module = "memdrift_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyCycleMetrics {
    inner: memdrift::CycleMetrics,
}

#[pymethods]
impl PyCycleMetrics {
    #[getter]
    fn v0(&self) -> f64 {
        self.inner.v0
    }

    #[getter]
    fn freq(&self) -> f64 {
        self.inner.freq
    }

    #[getter]
    fn lrs(&self) -> f64 {
        self.inner.lrs
    }

    #[getter]
    fn hrs(&self) -> f64 {
        self.inner.hrs
    }

    #[getter]
    fn window_ratio(&self) -> f64 {
        self.inner.window_ratio
    }

    #[getter]
    fn window_diff(&self) -> f64 {
        self.inner.window_diff
    }

    #[getter]
    fn loop_area(&self) -> f64 {
        self.inner.loop_area
    }

    #[getter]
    fn peak_current(&self) -> f64 {
        self.inner.peak_current
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.inner.tau
    }

    #[getter]
    fn qphi_nonlinearity(&self) -> f64 {
        self.inner.qphi_nonlinearity
    }

    #[getter]
    fn clipped(&self) -> bool {
        self.inner.clipped
    }

    fn as_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("v0", self.inner.v0)?;
        d.set_item("freq", self.inner.freq)?;
        d.set_item("lrs", self.inner.lrs)?;
        d.set_item("hrs", self.inner.hrs)?;
        d.set_item("window_ratio", self.inner.window_ratio)?;
        d.set_item("window_diff", self.inner.window_diff)?;
        d.set_item("loop_area", self.inner.loop_area)?;
        d.set_item("peak_current", self.inner.peak_current)?;
        d.set_item("tau", self.inner.tau)?;
        d.set_item("qphi_nonlinearity", self.inner.qphi_nonlinearity)?;
        d.set_item("clipped", self.inner.clipped)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "CycleMetrics(v0={}, freq={}, lrs={:.4}, hrs={:.4}, window_ratio={:.6}, \
             tau={:.4}, clipped={})",
            self.inner.v0,
            self.inner.freq,
            self.inner.lrs,
            self.inner.hrs,
            self.inner.window_ratio,
            self.inner.tau,
            self.inner.clipped
        )
    }
}

/// Node-by-node comparison of two traces on the same grid.
#[pyclass(name = "OracleReport", module = "memdrift_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyOracleReport {
    inner: memdrift::OracleReport,
}

#[pymethods]
impl PyOracleReport {
    #[getter]
    fn samples(&self) -> usize {
        self.inner.samples
    }

    #[getter]
    fn max_w_err(&self) -> f64 {
        self.inner.max_w_err
    }

    #[getter]
    fn max_i_rel_err(&self) -> f64 {
        self.inner.max_i_rel_err
    }

    #[getter]
    fn max_q_err(&self) -> f64 {
        self.inner.max_q_err
    }

    #[getter]
    fn max_phi_err(&self) -> f64 {
        self.inner.max_phi_err
    }

    #[getter]
    fn valid(&self) -> bool {
        self.inner.valid
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "OracleReport(samples={}, max_w_err={:e}, max_i_rel_err={:e}, valid={})",
            self.inner.samples, self.inner.max_w_err, self.inner.max_i_rel_err, self.inner.valid
        )
    }
}

/// Metrics for every grid cell, row-major over (amplitude, frequency).
#[pyclass(name = "SweepResult", module = "memdrift_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PySweepResult {
    inner: memdrift::SweepResult,
}

#[pymethods]
impl PySweepResult {
    #[getter]
    fn amplitudes(&self) -> Vec<f64> {
        self.inner.grid.amplitudes.clone()
    }

    #[getter]
    fn frequencies(&self) -> Vec<f64> {
        self.inner.grid.frequencies.clone()
    }

    fn cell(&self, amplitude_idx: usize, frequency_idx: usize) -> PyResult<PyCycleMetrics> {
        let inner = self
            .inner
            .cells
            .get(amplitude_idx)
            .and_then(|row| row.get(frequency_idx))
            .copied()
            .ok_or_else(|| {
                PyIndexError::new_err(format!(
                    "cell ({amplitude_idx}, {frequency_idx}) outside {}x{} grid",
                    self.inner.grid.amplitudes.len(),
                    self.inner.grid.frequencies.len()
                ))
            })?;
        Ok(PyCycleMetrics { inner })
    }

    fn cells(&self) -> Vec<Vec<PyCycleMetrics>> {
        self.inner
            .cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&inner| PyCycleMetrics { inner })
                    .collect()
            })
            .collect()
    }

    /// The metrics table in the same CSV form the CLI writes.
    fn to_csv(&self) -> String {
        memdrift::output::metrics_csv_string(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "SweepResult({} amplitudes x {} frequencies)",
            self.inner.grid.amplitudes.len(),
            self.inner.grid.frequencies.len()
        )
    }
}

/// Integrates the device under the drive with fixed-step RK4.
#[pyfunction]
#[pyo3(signature = (device, drive, config=None))]
fn simulate(
    device: &PyDeviceParams,
    drive: &PyDriveWaveform,
    config: Option<&PySimConfig>,
) -> PyResult<PySimTrace> {
    let cfg = config.map_or_else(memdrift::SimConfig::default, |c| c.inner);
    let inner = memdrift::simulate(&device.inner, &drive.inner, &cfg).map_err(to_py_err)?;
    Ok(PySimTrace { inner })
}

/// Closed-form trace on the same grid as `simulate`; raises ValueError for
/// drives that would push the state into a boundary.
#[pyfunction]
#[pyo3(signature = (device, drive, config=None))]
fn analytic_trace(
    device: &PyDeviceParams,
    drive: &PyDriveWaveform,
    config: Option<&PySimConfig>,
) -> PyResult<PySimTrace> {
    let cfg = config.map_or_else(memdrift::SimConfig::default, |c| c.inner);
    let inner = memdrift::analytic_trace(&device.inner, &drive.inner, &cfg).map_err(to_py_err)?;
    Ok(PySimTrace { inner })
}

/// Node-by-node error report between two traces on identical grids.
#[pyfunction]
fn compare_traces(a: &PySimTrace, b: &PySimTrace) -> PyResult<PyOracleReport> {
    let inner = memdrift::compare_traces(&a.inner, &b.inner).map_err(to_py_err)?;
    Ok(PyOracleReport { inner })
}

/// Figures of merit from the final period of a trace.
#[pyfunction]
#[pyo3(signature = (trace, config=None))]
fn cycle_metrics(trace: &PySimTrace, config: Option<&PyMetricsConfig>) -> PyResult<PyCycleMetrics> {
    let cfg = config.map_or_else(memdrift::MetricsConfig::default, |c| c.inner);
    let inner = memdrift::cycle_metrics(&trace.inner, &cfg).map_err(to_py_err)?;
    Ok(PyCycleMetrics { inner })
}

/// Runs every cell of the grid in parallel and collects the metrics table.
#[pyfunction]
#[pyo3(signature = (device=None, grid=None, sim=None, metrics=None))]
fn run_sweep(
    device: Option<&PyDeviceParams>,
    grid: Option<&PySweepGrid>,
    sim: Option<&PySimConfig>,
    metrics: Option<&PyMetricsConfig>,
) -> PyResult<PySweepResult> {
    let device = device.map_or_else(memdrift::DeviceParams::default, |d| d.inner);
    let grid = grid.map_or_else(memdrift::SweepGrid::default, |g| g.inner.clone());
    let sim = sim.map_or_else(memdrift::SimConfig::default, |s| s.inner);
    let metrics = metrics.map_or_else(memdrift::MetricsConfig::default, |m| m.inner);
    let inner = memdrift::run_sweep(&device, &grid, &sim, &metrics).map_err(to_py_err)?;
    Ok(PySweepResult { inner })
}

/// (amplitude, frequency, tau) triples, best retention margin first.
#[pyfunction]
fn rank_lifetime(result: &PySweepResult) -> Vec<(f64, f64, f64)> {
    memdrift::rank_lifetime(&result.inner)
}

/// Charge delivered once the flux reaches `flux`, from the closed form.
#[pyfunction]
fn charge_of_flux(device: &PyDeviceParams, flux: f64) -> PyResult<f64> {
    memdrift::charge_of_flux(&device.inner, flux).map_err(to_py_err)
}

/// Flux window (lo, hi) within which the state stays strictly inside [0, D].
#[pyfunction]
fn clip_flux_threshold(device: &PyDeviceParams) -> PyResult<(f64, f64)> {
    memdrift::clip_flux_threshold(&device.inner).map_err(to_py_err)
}

#[pymodule]
fn memdrift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDeviceParams>()?;
    m.add_class::<PyDriveWaveform>()?;
    m.add_class::<PySimConfig>()?;
    m.add_class::<PyMetricsConfig>()?;
    m.add_class::<PySweepGrid>()?;
    m.add_class::<PySimTrace>()?;
    m.add_class::<PyCycleMetrics>()?;
    m.add_class::<PyOracleReport>()?;
    m.add_class::<PySweepResult>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_trace, m)?)?;
    m.add_function(wrap_pyfunction!(compare_traces, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(rank_lifetime, m)?)?;
    m.add_function(wrap_pyfunction!(charge_of_flux, m)?)?;
    m.add_function(wrap_pyfunction!(clip_flux_threshold, m)?)?;
    Ok(())
}

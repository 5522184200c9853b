use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;

use super::integrator::{History, MethodOfSteps};
use super::trajectory::Trajectory;

/// Smallest number of upward crossings a period measurement needs.
pub const MIN_CROSSINGS: usize = 7;
/// Number of trailing cycles the period is averaged over.
pub const CYCLES: usize = 5;
/// Oscillations below this amplitude are treated as absent.
pub const CROSSING_THRESHOLD: f64 = 1e-12;
/// Relative drift required for a converged orbit.
pub const CONVERGENCE_TOL: f64 = 1e-5;

/// Result of [`measure_period`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodMeasurement {
    pub period: f64,
    /// `max |x|` over the last full period.
    pub amplitude: f64,
    /// Largest relative deviation of the last five crossing spacings from
    /// their mean.
    pub convergence: f64,
    /// Largest relative deviation of the per-cycle amplitudes over the last
    /// five cycles.
    pub amplitude_drift: f64,
    /// Second-to-last upward crossing: `[cycle_start, cycle_start + period]`
    /// is the last full cycle.
    pub cycle_start: f64,
}

/// Measures period and amplitude from upward zero crossings in the last
/// `tail` time units of `traj`.
pub fn measure_period(traj: &Trajectory, tail: f64) -> Result<PeriodMeasurement> {
    let t_end = traj.t_end();
    let t_start = (t_end - tail).max(traj.t_start());
    let envelope = traj.max_abs(t_start, t_end);
    if !(envelope > CROSSING_THRESHOLD) {
        return Err(Error::NoOscillation(format!(
            "max |x| = {envelope:e} over the last {tail} time units"
        )));
    }
    let crossings = traj.upward_crossings(t_start, t_end);
    if crossings.len() < MIN_CROSSINGS {
        return Err(Error::NoOscillation(format!(
            "{} upward zero crossings in the last {tail} time units, need {MIN_CROSSINGS}",
            crossings.len()
        )));
    }
    let last = &crossings[crossings.len() - CYCLES - 1..];
    let spacings: Vec<f64> = last.windows(2).map(|w| w[1] - w[0]).collect();
    let period = spacings.iter().sum::<f64>() / CYCLES as f64;
    let convergence = spacings
        .iter()
        .map(|s| (s - period).abs() / period)
        .fold(0.0, f64::max);
    let amplitudes: Vec<f64> = last.windows(2).map(|w| traj.max_abs(w[0], w[1])).collect();
    let mean_amp = amplitudes.iter().sum::<f64>() / CYCLES as f64;
    let amplitude_drift = amplitudes
        .iter()
        .map(|a| (a - mean_amp).abs() / mean_amp)
        .fold(0.0, f64::max);
    Ok(PeriodMeasurement {
        period,
        amplitude: *amplitudes.last().expect("five cycles"),
        convergence,
        amplitude_drift,
        cycle_start: last[CYCLES - 1],
    })
}

/// A numerically converged periodic solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit {
    pub mu: f64,
    pub period: f64,
    pub amplitude: f64,
    /// Trailing window of the integration, several periods plus the delay.
    pub trajectory: Trajectory,
    pub convergence: f64,
    pub amplitude_drift: f64,
    /// `[cycle_start, cycle_start + period]` is the last complete cycle.
    pub cycle_start: f64,
}

impl PeriodicOrbit {
    /// Sample times of the last cycle used by the residual checks.
    pub fn cycle_samples(&self, count: usize) -> impl Iterator<Item = f64> + '_ {
        (0..count).map(move |j| self.cycle_start + self.period * j as f64 / count as f64)
    }

    /// `max |p'(t) + mu f(p(t-1))|` over `count` points of the last cycle,
    /// with `p'` taken from the interpolant.
    pub fn equation_residual(&self, f: &Nonlinearity, count: usize) -> Result<f64> {
        self.trajectory
            .require_coverage(self.cycle_start - 1.0, self.cycle_start + self.period)?;
        let mut worst: f64 = 0.0;
        for t in self.cycle_samples(count) {
            let dx = self.trajectory.derivative(t).expect("covered");
            let lag = self.trajectory.eval(t - 1.0).expect("covered");
            worst = worst.max((dx + self.mu * f.eval(lag)).abs());
        }
        Ok(worst)
    }
}

/// Settings for [`find_periodic_orbit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOptions {
    pub step: f64,
    /// First integration horizon; doubled until convergence.
    pub initial_horizon: f64,
    pub horizon_cap: f64,
    /// Relative drift of both period and amplitude required to stop.
    pub tolerance: f64,
    /// Periods kept in the returned trajectory window.
    pub keep_periods: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            step: 1.0 / 64.0,
            initial_horizon: 100.0,
            horizon_cap: 1e4,
            tolerance: CONVERGENCE_TOL,
            keep_periods: 12.0,
        }
    }
}

/// Finds an attracting periodic orbit by forward integration from the
/// constant history `initial_amplitude`, doubling the horizon until the
/// trailing cycles agree to within the tolerance.
pub fn find_periodic_orbit(
    f: &Nonlinearity,
    mu: f64,
    initial_amplitude: f64,
    options: &OrbitOptions,
) -> Result<PeriodicOrbit> {
    if !(options.tolerance > 0.0 && options.initial_horizon > 0.0) {
        return Err(Error::InvalidArgument("invalid orbit options".into()));
    }
    let mut solver = MethodOfSteps::new(f, mu, History::Constant(initial_amplitude), options.step)?;
    let mut horizon = options.initial_horizon.min(options.horizon_cap);
    let mut last_drift = f64::INFINITY;
    loop {
        solver.advance_to(horizon)?;
        let traj = solver.trajectory();
        let mut tail = 80.0_f64.min(horizon);
        let measured = loop {
            match measure_period(traj, tail) {
                Err(Error::NoOscillation(_)) if tail < horizon / 2.0 => {
                    tail = (2.0 * tail).min(horizon / 2.0);
                }
                other => break other,
            }
        }?;
        let drift = measured.convergence.max(measured.amplitude_drift);
        last_drift = last_drift.min(drift);
        if drift <= options.tolerance {
            let keep = options.keep_periods * measured.period + 1.0;
            let end = traj.t_end();
            let window = traj.window((end - keep).max(traj.t_start()), end)?;
            return Ok(PeriodicOrbit {
                mu,
                period: measured.period,
                amplitude: measured.amplitude,
                trajectory: window,
                convergence: measured.convergence,
                amplitude_drift: measured.amplitude_drift,
                cycle_start: measured.cycle_start,
            });
        }
        if horizon >= options.horizon_cap {
            return Err(Error::NotConverged {
                horizon,
                drift: last_drift,
            });
        }
        horizon = (2.0 * horizon).min(options.horizon_cap);
    }
}

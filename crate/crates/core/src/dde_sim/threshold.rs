//! Basin-boundary bisection for the unstable cycle of a subcritical
//! bifurcation: constant histories below the threshold decay to zero,
//! those above escape.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;

use super::integrator::{History, MethodOfSteps, Stop};
use super::orbit::MIN_CROSSINGS;

/// `|x|` above this counts as escape.
pub const ESCAPE_LEVEL: f64 = 1e6;
/// Relative bracket width at which bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Fate {
    Decay,
    Escape,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdOptions {
    pub step: f64,
    /// Integration cap for a single trial.
    pub horizon: f64,
    /// Length of the sliding window whose `max |x|` is tracked.
    pub window: f64,
    /// Decay is declared once the window amplitude falls below this fraction
    /// of the largest window amplitude seen so far.
    pub decay_fraction: f64,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            step: 1.0 / 64.0,
            horizon: 2e4,
            window: 6.0,
            decay_fraction: 0.2,
        }
    }
}

/// Per-cycle record of a trial run.
#[derive(Debug, Clone, Default)]
struct Transient {
    crossings: Vec<f64>,
    /// `max |x|` between consecutive crossings
    amplitudes: Vec<f64>,
}

fn run_trial(
    f: &Nonlinearity,
    mu: f64,
    amplitude: f64,
    options: &ThresholdOptions,
    record: bool,
) -> Result<(Fate, Transient)> {
    let mut solver = MethodOfSteps::new(f, mu, History::Constant(amplitude), options.step)?;
    let m = (1.0 / solver.step()).round() as usize;
    let per_window = (options.window * m as f64).round() as usize;

    let mut fate = Fate::Undecided;
    let mut transient = Transient::default();
    let mut window_max = Vec::<f64>::new(); // block maxima of length `per_window`
    let mut block_max: f64 = 0.0;
    let mut block_len = 0usize;
    let mut peak_window: f64 = 0.0;
    let mut cycle_max: f64 = 0.0;
    let mut prev_x = amplitude;
    let mut prev_t = 0.0;

    let result = solver.advance_until(options.horizon, |k| {
        if !(k.x.abs() < ESCAPE_LEVEL) {
            fate = Fate::Escape;
            return true;
        }
        if record {
            cycle_max = cycle_max.max(k.x.abs());
            if prev_x < 0.0 && k.x >= 0.0 {
                // linear guess, refined on the interpolant afterwards
                let s = -prev_x / (k.x - prev_x);
                transient.crossings.push(prev_t + s * (k.t - prev_t));
                transient.amplitudes.push(cycle_max);
                cycle_max = 0.0;
            }
            prev_x = k.x;
            prev_t = k.t;
        }
        block_max = block_max.max(k.x.abs());
        block_len += 1;
        if block_len == per_window {
            window_max.push(block_max);
            // skip the first window: it still carries the initial segment
            if window_max.len() >= 2 {
                peak_window = peak_window.max(block_max);
                if window_max.len() >= 3 && block_max < options.decay_fraction * peak_window {
                    fate = Fate::Decay;
                    return true;
                }
            }
            block_max = 0.0;
            block_len = 0;
        }
        false
    });
    match result {
        Ok(Stop::Requested) | Ok(Stop::Reached) => {}
        Err(Error::Divergence { .. }) => fate = Fate::Escape,
        Err(e) => return Err(e),
    }
    if record {
        // refine crossings on the interpolant
        let traj = solver.trajectory();
        let refined = traj.upward_crossings(0.0, traj.t_end());
        if refined.len() == transient.crossings.len() {
            transient.crossings = refined;
        }
    }
    Ok((fate, transient))
}

/// Fate of the solution from the constant history `amplitude`.
pub fn trial_fate(
    f: &Nonlinearity,
    mu: f64,
    amplitude: f64,
    options: &ThresholdOptions,
) -> Result<Fate> {
    run_trial(f, mu, amplitude, options, false).map(|(fate, _)| fate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    /// Midpoint of the final bracket.
    pub amplitude: f64,
    pub low: f64,
    pub high: f64,
    /// Period of the transient oscillation shadowing the unstable cycle.
    pub period_estimate: f64,
    /// `max |x|` over the shadowing cycles.
    pub cycle_amplitude: f64,
    pub cycles_observed: usize,
    pub bisection_steps: usize,
}

/// Locates the decay/escape threshold of constant initial histories by
/// bisection and measures the period of the transient near it.
pub fn unstable_orbit_threshold(
    f: &Nonlinearity,
    mu: f64,
    bracket: (f64, f64),
    options: &ThresholdOptions,
) -> Result<ThresholdResult> {
    let (mut low, mut high) = bracket;
    if !(low > 0.0 && high > low && high.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bracket ({low}, {high}) must satisfy 0 < low < high"
        )));
    }
    let straddle_err = |reason: String| Error::BracketNotStraddling {
        low: bracket.0,
        high: bracket.1,
        reason,
    };
    match trial_fate(f, mu, low, options)? {
        Fate::Decay => {}
        other => return Err(straddle_err(format!("low end: {other:?}"))),
    }
    match trial_fate(f, mu, high, options)? {
        Fate::Escape => {}
        other => return Err(straddle_err(format!("high end: {other:?}"))),
    }

    let mut steps = 0;
    while (high - low) / high > BISECTION_WIDTH {
        let mid = 0.5 * (low + high);
        match trial_fate(f, mu, mid, options)? {
            Fate::Decay => low = mid,
            Fate::Escape => high = mid,
            Fate::Undecided => {
                return Err(Error::NotConverged {
                    horizon: options.horizon,
                    drift: (high - low) / high,
                })
            }
        }
        steps += 1;
    }

    let amplitude = 0.5 * (low + high);
    let (_, transient) = run_trial(f, mu, amplitude, options, true)?;
    let (period_estimate, cycle_amplitude, cycles) = shadowing_period(&transient)?;
    Ok(ThresholdResult {
        amplitude,
        low,
        high,
        period_estimate,
        cycle_amplitude,
        cycles_observed: cycles,
        bisection_steps: steps,
    })
}

/// Mean crossing spacing around the cycle where the amplitude changes least,
/// i.e. where the transient passes closest to the unstable cycle.
fn shadowing_period(t: &Transient) -> Result<(f64, f64, usize)> {
    let n = t.crossings.len();
    if n < MIN_CROSSINGS {
        return Err(Error::NoOscillation(format!(
            "{n} transient cycles near the threshold, need {MIN_CROSSINGS}"
        )));
    }
    // amplitudes[i] is the max over [crossings[i-1], crossings[i]]
    let amps = &t.amplitudes[1..n];
    let half = 2usize;
    let mut best = (f64::INFINITY, half);
    for i in half..amps.len().saturating_sub(half) {
        let change = (amps[i + 1] - amps[i - 1]).abs() / amps[i];
        if change < best.0 {
            best = (change, i);
        }
    }
    let centre = best.1;
    // cycles centre-half ..= centre+half correspond to crossings offsets
    let lo = centre - half;
    let hi = (centre + half + 1).min(n - 1);
    let period = (t.crossings[hi] - t.crossings[lo]) / (hi - lo) as f64;
    Ok((period, amps[centre], n - 1))
}

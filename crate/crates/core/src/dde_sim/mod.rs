//! Simulation of `x'(t) = -mu f(x(t-1))` by the method of steps, periodic
//! orbit measurement and basin-boundary location of unstable cycles.

mod integrator;
mod orbit;
mod sweep;
mod threshold;
mod trajectory;

pub use integrator::{integrate, steps_per_delay, History, MethodOfSteps, Stop};
pub use orbit::{
    find_periodic_orbit, measure_period, OrbitOptions, PeriodMeasurement, PeriodicOrbit,
    CONVERGENCE_TOL, CROSSING_THRESHOLD, CYCLES, MIN_CROSSINGS,
};
pub use sweep::{amplitude_sweep, linear_fit, LinearFit, SweepOptions, SweepRow, SweepTable};
pub use threshold::{
    trial_fate, unstable_orbit_threshold, Fate, ThresholdOptions, ThresholdResult,
    BISECTION_WIDTH, ESCAPE_LEVEL,
};
pub use trajectory::{Knot, Trajectory};

/// Default integration step.
pub const DEFAULT_STEP: f64 = 1.0 / 64.0;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;

use super::trajectory::{Knot, Trajectory};

/// Initial function on `[-1, 0]`.
#[derive(Clone)]
pub enum History {
    Constant(f64),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for History {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            History::Constant(a) => write!(f, "Constant({a})"),
            History::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl History {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            History::Constant(a) => *a,
            History::Function(phi) => phi(t),
        }
    }

    fn derivative(&self, t: f64) -> f64 {
        match self {
            History::Constant(_) => 0.0,
            History::Function(phi) => {
                // one-sided at the ends of [-1, 0]
                let h = 1e-6;
                let (a, b) = ((t - h).max(-1.0), (t + h).min(0.0));
                (phi(b) - phi(a)) / (b - a)
            }
        }
    }
}

/// Why [`MethodOfSteps::advance_until`] returned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stop {
    Reached,
    Requested,
}

/// Number of steps per unit delay, validating `step = 1/m` with `m >= 20`.
pub fn steps_per_delay(step: f64) -> Result<usize> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("step {step} must be positive")));
    }
    let m = (1.0 / step).round();
    if m < 20.0 || (m * step - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "step {step} must be 1/m for an integer m >= 20"
        )));
    }
    Ok(m as usize)
}

/// Method-of-steps integrator for `x'(t) = -mu f(x(t-1))` with a fixed step
/// `h = 1/m`.
///
/// Each step is classical RK4. The right-hand side only depends on the
/// delayed state, which lies on the already completed previous unit
/// interval, so the two midpoint stages coincide and the delayed values are
/// read from the history function or from the Hermite interpolant of the
/// stored knots. Knot derivatives are evaluated from the equation.
#[derive(Clone)]
pub struct MethodOfSteps {
    f: Nonlinearity,
    mu: f64,
    history: History,
    m: usize,
    h: f64,
    traj: Trajectory,
}

impl std::fmt::Debug for MethodOfSteps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MethodOfSteps")
            .field("f", &self.f)
            .field("mu", &self.mu)
            .field("history", &self.history)
            .field("m", &self.m)
            .field("t", &self.t())
            .finish()
    }
}

impl MethodOfSteps {
    pub fn new(f: &Nonlinearity, mu: f64, history: History, step: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidArgument(format!("mu = {mu}")));
        }
        let m = steps_per_delay(step)?;
        let h = 1.0 / m as f64;
        let mut traj = Trajectory::with_capacity(0.0, h, 64 * m);
        for j in 0..m {
            let t = -1.0 + j as f64 * h;
            traj.push(Knot {
                t,
                x: history.eval(t),
                dx: history.derivative(t),
            });
        }
        let x0 = history.eval(0.0);
        let dx0 = -mu * f.eval(history.eval(-1.0));
        if !(x0.is_finite() && dx0.is_finite()) {
            return Err(Error::Divergence { time: 0.0 });
        }
        traj.push(Knot { t: 0.0, x: x0, dx: dx0 });
        Ok(Self {
            f: f.clone(),
            mu,
            history,
            m,
            h,
            traj,
        })
    }

    pub fn t(&self) -> f64 {
        self.traj.t_end()
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.traj
    }

    pub fn into_trajectory(self) -> Trajectory {
        self.traj
    }

    /// Delayed state at `t_j - 1 + h/2`, where knot `j` is the current one.
    fn delayed_midpoint(&self, j: usize) -> f64 {
        let d = j - self.m;
        if d < self.m {
            // still inside the history interval
            return self.history.eval(self.traj.knots()[d].t + 0.5 * self.h);
        }
        let knots = self.traj.knots();
        let (a, b) = (&knots[d], &knots[d + 1]);
        0.5 * (a.x + b.x) + 0.125 * self.h * (a.dx - b.dx)
    }

    fn step_once(&mut self) -> Result<()> {
        let knots = self.traj.knots();
        let j = knots.len() - 1;
        let cur = knots[j];
        let x_lag1 = knots[j + 1 - self.m].x;
        let k1 = cur.dx; // -mu f(x(t_j - 1))
        let k_mid = -self.mu * self.f.eval(self.delayed_midpoint(j));
        let k4 = -self.mu * self.f.eval(x_lag1);
        let x = cur.x + self.h / 6.0 * (k1 + 4.0 * k_mid + k4);
        let t = (j + 1 - self.m) as f64 * self.h;
        if !(x.is_finite() && k4.is_finite() && k_mid.is_finite()) {
            return Err(Error::Divergence { time: t });
        }
        self.traj.push(Knot { t, x, dx: k4 });
        Ok(())
    }

    /// Integrates up to `t_end` (rounded up to the step grid).
    pub fn advance_to(&mut self, t_end: f64) -> Result<()> {
        self.advance_until(t_end, |_| false).map(|_| ())
    }

    /// Integrates up to `t_end`, stopping early once `stop` returns true for
    /// a newly computed knot.
    pub fn advance_until(&mut self, t_end: f64, mut stop: impl FnMut(&Knot) -> bool) -> Result<Stop> {
        let target = (t_end / self.h - 1e-9).ceil().max(0.0) as usize + self.m;
        while self.traj.knots().len() <= target {
            self.step_once()?;
            if stop(self.traj.last().expect("non-empty")) {
                return Ok(Stop::Requested);
            }
        }
        Ok(Stop::Reached)
    }
}

/// Integrates `x'(t) = -mu f(x(t-1))` from `history` up to `t_end`.
pub fn integrate(
    f: &Nonlinearity,
    mu: f64,
    history: History,
    t_end: f64,
    step: f64,
) -> Result<Trajectory> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument(format!("t_end = {t_end} must be positive")));
    }
    let mut solver = MethodOfSteps::new(f, mu, history, step)?;
    solver.advance_to(t_end)?;
    Ok(solver.into_trajectory())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::Preset;

    #[test]
    fn step_validation() {
        assert_eq!(steps_per_delay(0.05).unwrap(), 20);
        assert_eq!(steps_per_delay(1.0 / 64.0).unwrap(), 64);
        assert!(steps_per_delay(0.1).is_err());
        assert!(steps_per_delay(0.03).is_err());
        assert!(steps_per_delay(-0.01).is_err());
    }

    #[test]
    fn zero_history_stays_zero() {
        for p in [Preset::Wright, Preset::Ikeda, Preset::PolySwitch] {
            let tr = integrate(&p.build(), 3.0, History::Constant(0.0), 30.0, 0.05).unwrap();
            assert!(tr.knots().iter().all(|k| k.x == 0.0 && k.dx == 0.0));
        }
    }

    #[test]
    fn knots_on_grid() {
        let tr = integrate(&Preset::Wright.build(), 1.0, History::Constant(0.1), 3.0, 0.05).unwrap();
        assert_eq!(tr.t_start(), -1.0);
        assert!((tr.t_end() - 3.0).abs() < 1e-12);
        assert_eq!(tr.knots().len(), 81);
        for (i, k) in tr.knots().iter().enumerate() {
            assert!((k.t - (-1.0 + 0.05 * i as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn first_interval_is_exact_for_constant_history() {
        // on [0, 1] the solution is x(t) = a - mu f(a) t
        let (a, mu) = (0.3, 1.2);
        let f = Preset::Wright.build();
        let tr = integrate(&f, mu, History::Constant(a), 1.0, 0.05).unwrap();
        for k in tr.knots().iter().filter(|k| k.t > 0.0) {
            assert!((k.x - (a - mu * f.eval(a) * k.t)).abs() < 1e-14);
        }
    }

    #[test]
    fn second_interval_matches_closed_form_for_linear_f() {
        // f = id, history a: x = a(1 - mu t) on [0,1],
        // x = a(1 - mu) - mu a ((t-1) - mu (t-1)^2 / 2) on [1,2]
        let (a, mu) = (0.5, 0.8);
        let f = Nonlinearity::cubic(0.0, 0.0);
        let tr = integrate(&f, mu, History::Constant(a), 2.0, 0.05).unwrap();
        for k in tr.knots().iter().filter(|k| k.t > 1.0) {
            let s = k.t - 1.0;
            let exact = a * (1.0 - mu) - mu * a * (s - mu * s * s / 2.0);
            assert!((k.x - exact).abs() < 1e-13, "t = {}", k.t);
        }
    }

    #[test]
    fn divergence_is_reported() {
        let f = Nonlinearity::cubic(0.0, 5.0);
        let err = integrate(&f, 4.0, History::Constant(3.0), 50.0, 0.05).unwrap_err();
        match err {
            Error::Divergence { time } => assert!(time > 0.0 && time < 50.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn function_history_is_read_exactly() {
        let f = Nonlinearity::cubic(0.0, 0.0);
        let phi: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(|t: f64| t * t);
        let tr = integrate(&f, 1.0, History::Function(phi), 1.0, 0.05).unwrap();
        // x(t) = -int_0^t (s-1)^2 ds, Simpson is exact for quadratics
        for k in tr.knots().iter().filter(|k| k.t > 0.0) {
            let exact = -((k.t - 1.0).powi(3) + 1.0) / 3.0;
            assert!((k.x - exact).abs() < 1e-14);
        }
    }
}

use serde::Serialize;

use crate::error::{Error, Result};

/// A sample `(t, x(t), x'(t))` of the solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Knot {
    pub t: f64,
    pub x: f64,
    pub dx: f64,
}

/// Solution samples with a piecewise cubic Hermite interpolant, C^1 across
/// interior knots.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    knots: Vec<Knot>,
    /// Start of the integration; `[t0 - 1, t0]` holds the history when the
    /// trajectory comes from the integrator.
    t0: f64,
    /// Nominal knot spacing (the largest spacing for uniform grids).
    step: f64,
}

#[inline]
fn hermite(a: &Knot, b: &Knot, t: f64) -> (f64, f64) {
    let h = b.t - a.t;
    let s = (t - a.t) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let x = (2.0 * s3 - 3.0 * s2 + 1.0) * a.x
        + (s3 - 2.0 * s2 + s) * h * a.dx
        + (-2.0 * s3 + 3.0 * s2) * b.x
        + (s3 - s2) * h * b.dx;
    let dx = (6.0 * s2 - 6.0 * s) * (a.x - b.x) / h
        + (3.0 * s2 - 4.0 * s + 1.0) * a.dx
        + (3.0 * s2 - 2.0 * s) * b.dx;
    (x, dx)
}

impl Trajectory {
    pub(crate) fn with_capacity(t0: f64, step: f64, capacity: usize) -> Self {
        Self {
            knots: Vec::with_capacity(capacity),
            t0,
            step,
        }
    }

    pub(crate) fn push(&mut self, knot: Knot) {
        self.knots.push(knot);
    }

    /// Builds a trajectory from arbitrary samples; times must be strictly
    /// increasing and all values finite.
    pub fn from_knots(knots: Vec<Knot>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidArgument("a trajectory needs at least two knots".into()));
        }
        let mut step: f64 = 0.0;
        for w in knots.windows(2) {
            let dt = w[1].t - w[0].t;
            if !(dt > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "knot times must be strictly increasing (t = {})",
                    w[1].t
                )));
            }
            step = step.max(dt);
        }
        if knots.iter().any(|k| !(k.t.is_finite() && k.x.is_finite() && k.dx.is_finite())) {
            return Err(Error::InvalidArgument("non-finite knot".into()));
        }
        Ok(Self {
            t0: knots[0].t,
            knots,
            step,
        })
    }

    /// Samples `x` and `x'` on `[t_start, t_end]` with spacing at most `step`.
    pub fn from_fn(
        t_start: f64,
        t_end: f64,
        step: f64,
        x: impl Fn(f64) -> f64,
        dx: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if !(t_end > t_start && step > 0.0) {
            return Err(Error::InvalidArgument("empty sampling range".into()));
        }
        let n = ((t_end - t_start) / step).ceil() as usize;
        let knots = (0..=n)
            .map(|i| {
                let t = t_start + (t_end - t_start) * i as f64 / n as f64;
                Knot { t, x: x(t), dx: dx(t) }
            })
            .collect();
        Self::from_knots(knots)
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn t_start(&self) -> f64 {
        self.knots.first().map_or(self.t0, |k| k.t)
    }

    pub fn t_end(&self) -> f64 {
        self.knots.last().map_or(self.t0, |k| k.t)
    }

    pub fn last(&self) -> Option<&Knot> {
        self.knots.last()
    }

    pub fn covers(&self, t_start: f64, t_end: f64) -> bool {
        !self.knots.is_empty() && self.t_start() <= t_start && t_end <= self.t_end()
    }

    pub(crate) fn require_coverage(&self, need_start: f64, need_end: f64) -> Result<()> {
        if self.covers(need_start, need_end) {
            Ok(())
        } else {
            Err(Error::InsufficientCoverage {
                have_start: self.t_start(),
                have_end: self.t_end(),
                need_start,
                need_end,
            })
        }
    }

    /// Largest spacing between consecutive knots.
    pub fn max_spacing(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| w[1].t - w[0].t)
            .fold(0.0, f64::max)
    }

    /// Index `i` of the interval `[t_i, t_{i+1}]` containing `t`.
    fn interval(&self, t: f64) -> Option<usize> {
        let n = self.knots.len();
        if n < 2 || !(t >= self.knots[0].t && t <= self.knots[n - 1].t) {
            return None;
        }
        // fast path for uniform grids, corrected below
        let guess = ((t - self.knots[0].t) / self.step) as usize;
        let mut i = guess.min(n - 2);
        if self.knots[i].t <= t && t <= self.knots[i + 1].t {
            return Some(i);
        }
        i = self.knots.partition_point(|k| k.t <= t);
        Some(i.saturating_sub(1).min(n - 2))
    }

    /// Interpolated `(x(t), x'(t))`.
    pub fn eval_with_derivative(&self, t: f64) -> Option<(f64, f64)> {
        let i = self.interval(t)?;
        Some(hermite(&self.knots[i], &self.knots[i + 1], t))
    }

    pub fn eval(&self, t: f64) -> Option<f64> {
        self.eval_with_derivative(t).map(|(x, _)| x)
    }

    pub fn derivative(&self, t: f64) -> Option<f64> {
        self.eval_with_derivative(t).map(|(_, dx)| dx)
    }

    fn knot_range(&self, t_start: f64, t_end: f64) -> std::ops::Range<usize> {
        let lo = self.knots.partition_point(|k| k.t < t_start).saturating_sub(1);
        let hi = self
            .knots
            .partition_point(|k| k.t <= t_end)
            .min(self.knots.len());
        lo..hi
    }

    /// Copy of the knots covering `[t_start, t_end]`.
    pub fn window(&self, t_start: f64, t_end: f64) -> Result<Trajectory> {
        let range = self.knot_range(t_start, t_end);
        let end = range.end;
        let mut knots = self.knots[range].to_vec();
        if let Some(next) = self.knots.get(end) {
            if knots.last().is_none_or(|k| k.t < t_end) {
                knots.push(*next);
            }
        }
        let mut w = Trajectory::from_knots(knots)?;
        w.t0 = self.t0;
        w.step = self.step.max(w.step);
        Ok(w)
    }

    /// Upward zero crossings (`x` from negative to non-negative) in
    /// `[t_start, t_end]`, located by bisection on the interpolant.
    pub fn upward_crossings(&self, t_start: f64, t_end: f64) -> Vec<f64> {
        let range = self.knot_range(t_start, t_end);
        let mut out = Vec::new();
        for i in range.start..range.end.min(self.knots.len().saturating_sub(1)) {
            let (a, b) = (&self.knots[i], &self.knots[i + 1]);
            if !(a.x < 0.0 && b.x >= 0.0) {
                continue;
            }
            let (mut lo, mut hi) = (a.t, b.t);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if hermite(a, b, mid).0 < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            if root >= t_start && root <= t_end {
                out.push(root);
            }
        }
        out
    }

    /// `max |x|` over `[t_start, t_end]`, including interior extrema of the
    /// interpolant.
    pub fn max_abs(&self, t_start: f64, t_end: f64) -> f64 {
        let mut best: f64 = 0.0;
        let mut consider = |t: f64, x: f64| {
            if t >= t_start && t <= t_end {
                best = best.max(x.abs());
            }
        };
        let range = self.knot_range(t_start, t_end);
        for i in range.clone() {
            let k = &self.knots[i];
            consider(k.t, k.x);
            if i + 1 >= self.knots.len() {
                continue;
            }
            let (a, b) = (k, &self.knots[i + 1]);
            let h = b.t - a.t;
            let d = (a.x - b.x) / h;
            // x'(s) = qa s^2 + qb s + qc on s in [0, 1]
            let qa = 6.0 * d + 3.0 * a.dx + 3.0 * b.dx;
            let qb = -6.0 * d - 4.0 * a.dx - 2.0 * b.dx;
            let qc = a.dx;
            let mut roots = [f64::NAN; 2];
            if qa.abs() < 1e-300 {
                if qb != 0.0 {
                    roots[0] = -qc / qb;
                }
            } else {
                let disc = qb * qb - 4.0 * qa * qc;
                if disc >= 0.0 {
                    let sq = disc.sqrt();
                    roots = [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)];
                }
            }
            for s in roots {
                if s > 0.0 && s < 1.0 {
                    let t = a.t + s * h;
                    consider(t, hermite(a, b, t).0);
                }
            }
        }
        for t in [t_start, t_end] {
            if let Some(x) = self.eval(t) {
                consider(t, x);
            }
        }
        best
    }
}

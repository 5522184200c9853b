//! The Cooke transform: if `p` is a periodic solution with period `T` at
//! parameter `mu`, then `q(t) = p((lT + 1) t)` is a periodic solution with
//! period `T / (lT + 1)` at parameter `mu (lT + 1)`.

use serde::Serialize;

use crate::dde_sim::PeriodicOrbit;
use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::spectral::critical_value;

/// Residual sample points per transformed period.
pub const RESIDUAL_SAMPLES: usize = 512;
/// Coarsest knot spacing accepted by [`cooke_residual`].
pub const MAX_KNOT_SPACING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CookeImage {
    pub mu_out: f64,
    pub period_out: f64,
    pub l: u32,
    /// `lT + 1`, the common factor of both rescalings.
    pub time_rescale: f64,
}

pub fn cooke_map(mu_star: f64, period: f64, l: u32) -> Result<CookeImage> {
    if !(mu_star > 0.0 && mu_star.is_finite()) || !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Cooke transform needs mu > 0 and T > 0 (got mu = {mu_star}, T = {period})"
        )));
    }
    let s = l as f64 * period + 1.0;
    Ok(CookeImage {
        mu_out: mu_star * s,
        period_out: period / s,
        l,
        time_rescale: s,
    })
}

/// Period `4 / (4k+1)` of the linear oscillation at `mu_k`.
pub fn linear_period(k: u32) -> f64 {
    4.0 / (4 * k + 1) as f64
}

/// Checks that the Cooke transform sends `(mu_k, T_0^k)` to
/// `(mu_{k+l}, T_0^{k+l})`.
pub fn branch_map_check(k: u32, l: u32) -> bool {
    let image = cooke_map(critical_value(k as i64), linear_period(k), l).expect("positive inputs");
    let target_mu = critical_value((k + l) as i64);
    let target_t = linear_period(k + l);
    (image.mu_out - target_mu).abs() <= 1e-12 && (image.period_out - target_t).abs() <= 1e-12
}

/// Largest residual `|q'(t) + mu_out f(q(t-1))|` of the transformed orbit
/// `q(t) = p((lT+1) t)` over one transformed period, read through the
/// orbit's interpolant.
///
/// Sample `j` sits at `t_j = tau_j / (lT+1)` where `tau_j` runs over the
/// orbit's last cycle, so the values are directly comparable with
/// [`PeriodicOrbit::equation_residual`] at the same `tau_j`.
pub fn cooke_residual(orbit: &PeriodicOrbit, l: u32, f: &Nonlinearity) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidArgument("the orbit check needs l >= 1".into()));
    }
    let image = cooke_map(orbit.mu, orbit.period, l)?;
    let s = image.time_rescale;
    let traj = &orbit.trajectory;
    let spacing = traj.max_spacing();
    if spacing > MAX_KNOT_SPACING {
        return Err(Error::CoarseSampling {
            spacing,
            max: MAX_KNOT_SPACING,
        });
    }
    // q(t_j - 1) = p(tau_j - s) reaches back one delay plus l periods
    traj.require_coverage(orbit.cycle_start - s, orbit.cycle_start + orbit.period)?;
    let mut worst: f64 = 0.0;
    for tau in orbit.cycle_samples(RESIDUAL_SAMPLES) {
        let t = tau / s;
        let dq = s * traj.derivative(s * t).expect("covered");
        let lag = traj.eval(s * (t - 1.0)).expect("covered");
        worst = worst.max((dq + image.mu_out * f.eval(lag)).abs());
    }
    Ok(worst)
}

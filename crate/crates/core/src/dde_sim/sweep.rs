use serde::Serialize;

use crate::bifurcation::Direction;
use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::spectral::critical_value;

use super::orbit::{find_periodic_orbit, OrbitOptions};
use super::threshold::{unstable_orbit_threshold, ThresholdOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub eta: f64,
    pub mu: f64,
    /// Orbit amplitude (supercritical) or threshold history amplitude
    /// (subcritical).
    pub amplitude: f64,
    pub period: f64,
}

/// Least-squares line `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidArgument("linear fit needs two points".into()));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("linear fit needs distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub direction: Direction,
    pub rows: Vec<SweepRow>,
    /// Fit of `amplitude^2` against `eta` (supercritical sweeps only).
    pub fit: Option<LinearFit>,
}

/// Settings for [`amplitude_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub orbit: OrbitOptions,
    pub threshold: ThresholdOptions,
    pub initial_amplitude: f64,
    pub bracket: (f64, f64),
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            orbit: OrbitOptions::default(),
            threshold: ThresholdOptions::default(),
            initial_amplitude: 0.1,
            bracket: (1e-3, 2.0),
        }
    }
}

fn map_rows<T: Sync, R: Send>(items: &[T], op: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(op).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(op).collect()
    }
}

/// Measures the first Hopf branch (`k = 0`) over `eta_grid`.
///
/// For a supercritical bifurcation each row is the attracting orbit at
/// `mu_0 + eta`; for a subcritical one it is the basin-boundary threshold at
/// `mu_0 - eta` with the period of the shadowing transient. Values of `mu`
/// refer to `f` as given, i.e. `mu_0 / f'(0)`. Rows keep the grid order.
pub fn amplitude_sweep(
    f: &Nonlinearity,
    direction: Direction,
    eta_grid: &[f64],
    options: &SweepOptions,
) -> Result<SweepTable> {
    f.require_positive_slope()?;
    if eta_grid.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidArgument("eta values must be positive".into()));
    }
    let mu0 = critical_value(0);
    let rows: Vec<Result<SweepRow>> = match direction {
        Direction::Supercritical => map_rows(eta_grid, |&eta| {
            let mu = f.original_mu(mu0 + eta);
            let orbit = find_periodic_orbit(f, mu, options.initial_amplitude, &options.orbit)?;
            Ok(SweepRow {
                eta,
                mu,
                amplitude: orbit.amplitude,
                period: orbit.period,
            })
        }),
        Direction::Subcritical => map_rows(eta_grid, |&eta| {
            let mu = f.original_mu(mu0 - eta);
            let r = unstable_orbit_threshold(f, mu, options.bracket, &options.threshold)?;
            Ok(SweepRow {
                eta,
                mu,
                amplitude: r.amplitude,
                period: r.period_estimate,
            })
        }),
        Direction::Degenerate => return Err(Error::DegenerateDirection { k: 0 }),
    };
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let fit = match direction {
        Direction::Supercritical if rows.len() >= 2 => Some(linear_fit(
            &rows
                .iter()
                .map(|r| (r.eta, r.amplitude * r.amplitude))
                .collect::<Vec<_>>(),
        )?),
        _ => None,
    };
    Ok(SweepTable {
        direction,
        rows,
        fit,
    })
}

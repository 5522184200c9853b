use serde::Serialize;

use super::{classify_sequence, Direction, SequenceCase, SequenceClassification, DEFAULT_TOL};
use crate::error::Error;
use crate::nonlinearity::Nonlinearity;

/// Indices checked for the `f''(0) = 0` equivalence.
pub const ZERO_CURVATURE_KS: std::ops::RangeInclusive<i64> = -4..=6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroCurvatureCheck {
    pub k: i64,
    pub direction: Direction,
    pub schwarzian_at_zero: f64,
    /// supercritical iff `Sf(0) < 0`
    pub agrees: bool,
}

/// Sampled Schwarzian derivative compared with the bifurcation sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchwarzianReport {
    pub samples: Vec<(f64, f64)>,
    /// grid points where `f'` vanishes
    pub excluded: Vec<f64>,
    pub all_negative: bool,
    pub schwarzian_at_zero: f64,
    /// `|Sf(0) - 6 (C - B^2)|`
    pub identity_error: f64,
    pub sequence: SequenceClassification,
    pub zero_curvature: Option<Vec<ZeroCurvatureCheck>>,
    pub consistent: bool,
}

/// Samples `Sf` on `grid` and checks that a negative Schwarzian comes with
/// an all-supercritical sequence. When `f''(0) = 0` it also checks that the
/// direction of each bifurcation follows the sign of `Sf(0)`.
pub fn schwarzian_guard(f: &Nonlinearity, grid: &[f64]) -> SchwarzianReport {
    let mut samples = Vec::with_capacity(grid.len());
    let mut excluded = Vec::new();
    for &x in grid {
        match f.schwarzian(x) {
            Ok(s) => samples.push((x, s)),
            Err(Error::CriticalPoint { .. }) => excluded.push(x),
            Err(_) => excluded.push(x),
        }
    }
    let all_negative = !samples.is_empty() && samples.iter().all(|&(_, s)| s < 0.0);
    let (b, c) = (f.b(), f.c());
    let sequence = classify_sequence(b, c, DEFAULT_TOL);
    let sf0 = f.schwarzian(0.0).unwrap_or(f64::NAN);
    let identity_error = (sf0 - 6.0 * (c - b * b)).abs();

    let zero_curvature = (b.abs() <= DEFAULT_TOL).then(|| {
        ZERO_CURVATURE_KS
            .map(|k| {
                let direction = sequence.direction_at(k);
                let agrees = match direction {
                    Direction::Supercritical => sf0 < 0.0,
                    Direction::Subcritical => sf0 > 0.0,
                    Direction::Degenerate => sf0.abs() <= 6.0 * DEFAULT_TOL,
                };
                ZeroCurvatureCheck {
                    k,
                    direction,
                    schwarzian_at_zero: sf0,
                    agrees,
                }
            })
            .collect::<Vec<_>>()
    });

    let negative_ok = !all_negative || sequence.case == SequenceCase::AllSuper;
    let zero_ok = zero_curvature
        .as_ref()
        .is_none_or(|checks| checks.iter().all(|c| c.agrees));
    SchwarzianReport {
        samples,
        excluded,
        all_negative,
        schwarzian_at_zero: sf0,
        identity_error,
        sequence,
        zero_curvature,
        consistent: negative_ok && zero_ok,
    }
}

//! Direction of the Hopf bifurcations of `x'(t) = -mu f(x(t-1))` at the
//! critical values `mu_k = (4k+1) pi / 2`.
//!
//! Two independent routes decide the direction: the closed threshold
//! [`hopf_threshold`] compared against `C / B^2`, and the sign of the full
//! normal-form coefficient [`normal_form_k`].

mod guard;
mod normal_form;
mod sequence;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::critical_value;

pub use guard::{schwarzian_guard, SchwarzianReport, ZeroCurvatureCheck};
pub use normal_form::{normal_form_k, NormalFormTerms};
pub use sequence::{classify_sequence, SequenceCase, SequenceClassification};

/// Default half-width of the band around `C = H(k) B^2` reported as degenerate.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Limit of `H(k)` as `|k| -> infinity`.
pub const H_LIMIT: f64 = 22.0 / 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Supercritical,
    Subcritical,
    Degenerate,
}

impl Direction {
    /// Growth sign of the bifurcating branch: `+1` supercritical, `-1`
    /// subcritical.
    pub fn delta(self) -> Option<i8> {
        match self {
            Direction::Supercritical => Some(1),
            Direction::Subcritical => Some(-1),
            Direction::Degenerate => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Supercritical => "supercritical",
            Direction::Subcritical => "subcritical",
            Direction::Degenerate => "degenerate",
        }
    }
}

/// Side of `mu_k` on which the periodic orbits exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchSide {
    Right,
    Left,
}

impl BranchSide {
    pub fn as_str(self) -> &'static str {
        match self {
            BranchSide::Right => "right",
            BranchSide::Left => "left",
        }
    }
}

/// `H(k) = (22(4k+1) pi - 8) / (15 (4k+1) pi)`.
pub fn hopf_threshold(k: i64) -> f64 {
    let q = (4 * k + 1) as f64 * PI;
    (22.0 * q - 8.0) / (15.0 * q)
}

/// Direction of the `k`th bifurcation from the sign of `C - H(k) B^2`.
pub fn classify(b: f64, c: f64, k: i64, tol: f64) -> Direction {
    let margin = c - hopf_threshold(k) * b * b;
    if margin < -tol {
        Direction::Supercritical
    } else if margin > tol {
        Direction::Subcritical
    } else {
        Direction::Degenerate
    }
}

/// Side of `mu_k` the branch opens to. The eigenvalue pair crosses to the
/// right half-plane with increasing `mu` exactly when `mu_k > 0`, i.e. `k >= 0`.
pub fn branch_side(direction: Direction, k: i64) -> Result<BranchSide> {
    let positive = k >= 0;
    match direction {
        Direction::Supercritical if positive => Ok(BranchSide::Right),
        Direction::Supercritical => Ok(BranchSide::Left),
        Direction::Subcritical if positive => Ok(BranchSide::Left),
        Direction::Subcritical => Ok(BranchSide::Right),
        Direction::Degenerate => Err(Error::DegenerateDirection { k }),
    }
}

/// Everything known about the `k`th Hopf point for given `(B, C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BifurcationPoint {
    pub k: i64,
    pub mu_k: f64,
    pub omega_k: f64,
    pub direction: Direction,
    pub delta_k: Option<i8>,
    pub branch_side: Option<BranchSide>,
    /// Normal-form coefficient; only its sign is meaningful.
    pub k_coefficient: f64,
    pub threshold: f64,
}

impl BifurcationPoint {
    pub fn new(b: f64, c: f64, k: i64, tol: f64) -> Self {
        let direction = classify(b, c, k, tol);
        let w = critical_value(k);
        Self {
            k,
            mu_k: w,
            omega_k: w,
            direction,
            delta_k: direction.delta(),
            branch_side: branch_side(direction, k).ok(),
            k_coefficient: normal_form_k(b, c, k),
            threshold: hopf_threshold(k),
        }
    }

    /// Period `2 pi / |omega_k| = 4 / |4k+1|` of the linear oscillation.
    pub fn linear_period(&self) -> f64 {
        4.0 / ((4 * self.k + 1) as f64).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_values() {
        assert!((hopf_threshold(0) - (22.0 * PI - 8.0) / (15.0 * PI)).abs() < 1e-15);
        assert!((hopf_threshold(0) - 1.3).abs() < 0.005);
        assert!((hopf_threshold(-1) - (66.0 * PI + 8.0) / (45.0 * PI)).abs() < 1e-15);
        assert!((hopf_threshold(-1) - 1.52).abs() < 0.005);
        assert!((hopf_threshold(1_000_000) - H_LIMIT).abs() < 1e-7);
        assert!((hopf_threshold(-1_000_000) - H_LIMIT).abs() < 1e-7);
    }

    #[test]
    fn preset_examples() {
        assert_eq!(classify(0.5, 1.0 / 6.0, 0, DEFAULT_TOL), Direction::Supercritical);
        assert_eq!(classify(1.0, 1.44, 0, DEFAULT_TOL), Direction::Subcritical);
        assert_eq!(classify(1.0, 1.44, 1, DEFAULT_TOL), Direction::Subcritical);
        assert_eq!(classify(1.0, 1.44, 2, DEFAULT_TOL), Direction::Supercritical);
        assert_eq!(classify(1.0, 22.0 / 15.0, 5, DEFAULT_TOL), Direction::Subcritical);
        assert_eq!(classify(1.0, 22.0 / 15.0, -5, DEFAULT_TOL), Direction::Supercritical);
    }

    #[test]
    fn degenerate_band() {
        let b: f64 = 0.7;
        let c = hopf_threshold(3) * b * b;
        assert_eq!(classify(b, c, 3, DEFAULT_TOL), Direction::Degenerate);
        assert_eq!(classify(b, c + 1e-6, 3, 1e-5), Direction::Degenerate);
        assert_eq!(classify(b, c + 1e-6, 3, 1e-9), Direction::Subcritical);
        assert_eq!(classify(0.0, 0.0, 0, DEFAULT_TOL), Direction::Degenerate);
    }

    #[test]
    fn sides() {
        use BranchSide::*;
        use Direction::*;
        assert_eq!(branch_side(Supercritical, 0).unwrap(), Right);
        assert_eq!(branch_side(Subcritical, 0).unwrap(), Left);
        assert_eq!(branch_side(Supercritical, -1).unwrap(), Left);
        assert_eq!(branch_side(Subcritical, -3).unwrap(), Right);
        assert!(branch_side(Degenerate, 2).is_err());
    }

    #[test]
    fn point_invariants() {
        for k in -4..=6 {
            for (b, c) in [(0.5, 1.0 / 6.0), (1.0, 1.44), (1.0, H_LIMIT), (0.0, 0.0)] {
                let p = BifurcationPoint::new(b, c, k, DEFAULT_TOL);
                assert_eq!(p.mu_k, p.omega_k);
                assert_eq!(p.mu_k, (4 * k + 1) as f64 * PI / 2.0);
                match p.direction {
                    Direction::Supercritical => assert_eq!(p.delta_k, Some(1)),
                    Direction::Subcritical => assert_eq!(p.delta_k, Some(-1)),
                    Direction::Degenerate => {
                        assert!(p.delta_k.is_none() && p.branch_side.is_none())
                    }
                }
                if let Some(side) = p.branch_side {
                    let right = (p.direction == Direction::Supercritical && p.mu_k > 0.0)
                        || (p.direction == Direction::Subcritical && p.mu_k < 0.0);
                    assert_eq!(side == BranchSide::Right, right);
                }
            }
        }
    }

    #[test]
    fn threshold_shape() {
        for k in 0..200 {
            assert!(hopf_threshold(k + 1) > hopf_threshold(k));
            assert!(hopf_threshold(k) < H_LIMIT);
        }
        for k in -200..-1 {
            assert!(hopf_threshold(k) < hopf_threshold(k + 1));
            assert!(hopf_threshold(k) > H_LIMIT);
        }
    }
}

//! Closed-form bounds on the period `T^k_eta` of the orbits on the `k`th
//! Hopf branch at distance `eta` from `mu_k` (`k >= 0`).
//!
//! They follow from comparing Cooke images of the `k`th branch with the
//! positions of the later branches, so each bound is only valid under the
//! stated directions of the later bifurcations. Callers supply those
//! through the sequence classification.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bifurcation::{Direction, SequenceCase, SequenceClassification};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundSource {
    /// supercritical branch: lower bound
    #[serde(rename = "theorem2")]
    Theorem2,
    /// all bifurcations subcritical: upper bound
    #[serde(rename = "theorem3")]
    Theorem3,
    /// switching sequence, `k < n`: both bounds
    #[serde(rename = "theorem4-interior")]
    Theorem4Interior,
    /// switching sequence, `k = n`: lower bound only
    #[serde(rename = "theorem4-edge")]
    Theorem4Edge,
}

impl BoundSource {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundSource::Theorem2 => "theorem2",
            BoundSource::Theorem3 => "theorem3",
            BoundSource::Theorem4Interior => "theorem4-interior",
            BoundSource::Theorem4Edge => "theorem4-edge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodBound {
    pub k: u32,
    pub eta: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub source: BoundSource,
}

impl PeriodBound {
    /// Whether `period` satisfies the bound, widened by the relative `slack`.
    pub fn contains(&self, period: f64, slack: f64) -> bool {
        self.lower.is_none_or(|lo| period >= lo * (1.0 - slack))
            && self.upper.is_none_or(|hi| period <= hi * (1.0 + slack))
    }
}

/// `T_0^k = 4 / (4k+1)`.
pub fn linear_period(k: u32) -> f64 {
    4.0 / (4 * k + 1) as f64
}

fn base(k: u32) -> f64 {
    (4 * k + 1) as f64
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eta = {eta} must be positive")))
    }
}

/// `4k + 1 - 2 eta / pi`, required positive.
fn left_denominator(k: u32, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    let d = base(k) - 2.0 * eta / PI;
    if d > 0.0 {
        Ok(d)
    } else {
        Err(Error::InvalidArgument(format!(
            "eta = {eta} must be below (4k+1) pi / 2 = {}",
            base(k) * PI / 2.0
        )))
    }
}

/// Lower bound on a supercritical branch: `T >= 4 / (4k + 1 + 2 eta / pi)`.
pub fn bound_supercritical(k: u32, eta: f64) -> Result<PeriodBound> {
    check_eta(eta)?;
    Ok(PeriodBound {
        k,
        eta,
        lower: Some(4.0 / (base(k) + 2.0 * eta / PI)),
        upper: None,
        source: BoundSource::Theorem2,
    })
}

/// Upper bound when every bifurcation is subcritical:
/// `T <= 4 / (4k + 1 - 2 eta / pi)`.
pub fn bound_all_subcritical(k: u32, eta: f64) -> Result<PeriodBound> {
    let d = left_denominator(k, eta)?;
    Ok(PeriodBound {
        k,
        eta,
        lower: None,
        upper: Some(4.0 / d),
        source: BoundSource::Theorem3,
    })
}

/// Bounds for the subcritical branches of a switching sequence with last
/// subcritical index `n`.
pub fn bound_switching(k: u32, eta: f64, n: u32) -> Result<PeriodBound> {
    if k > n {
        return Err(Error::NotSubcritical {
            k: k as i64,
            n: n as i64,
        });
    }
    let d = left_denominator(k, eta)?;
    let with_index = |l: u32| (4.0 + 2.0 * eta / (l as f64 * PI)) / d;
    let lower = Some(with_index(n - k + 1));
    Ok(if k < n {
        PeriodBound {
            k,
            eta,
            lower,
            upper: Some(with_index(n - k)),
            source: BoundSource::Theorem4Interior,
        }
    } else {
        PeriodBound {
            k,
            eta,
            lower,
            upper: None,
            source: BoundSource::Theorem4Edge,
        }
    })
}

/// Picks the applicable bound for branch `k` from the classification.
/// Returns `None` when no statement covers the branch (degenerate cases).
pub fn bound_for(seq: &SequenceClassification, k: u32, eta: f64) -> Result<Option<PeriodBound>> {
    match seq.direction_at(k as i64) {
        Direction::Supercritical => bound_supercritical(k, eta).map(Some),
        Direction::Subcritical => {
            if seq.subcritical_from(k as i64) {
                return bound_all_subcritical(k, eta).map(Some);
            }
            match (seq.case, seq.n) {
                (SequenceCase::SwitchNonneg, Some(n)) if n >= 0 => {
                    bound_switching(k, eta, n as u32).map(Some)
                }
                _ => Ok(None),
            }
        }
        Direction::Degenerate => Ok(None),
    }
}

/// Statements about the period function that follow from the direction of
/// later bifurcations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub k: u32,
    /// `k` is subcritical and every later bifurcation supercritical, hence
    /// `T^k_eta` increases for small `eta`.
    pub increasing_asserted: bool,
    /// A subcritical `k` with `T^k_eta < T_0^k` forces every later one to be
    /// subcritical; `true` when the classification allows that.
    pub decreasing_allowed: bool,
    /// Outcome of checking a measured period against the rule above.
    pub consistent: Option<bool>,
}

/// Monotonicity consequences for branch `k >= 0`, optionally checked against
/// a measured period.
pub fn monotonicity_flags(
    seq: &SequenceClassification,
    k: u32,
    measured_period: Option<f64>,
) -> MonotonicityReport {
    let ki = k as i64;
    let subcritical = seq.direction_at(ki) == Direction::Subcritical;
    let increasing_asserted = subcritical
        && seq.case == SequenceCase::SwitchNonneg
        && seq.n == Some(ki);
    let decreasing_allowed = !subcritical || seq.subcritical_from(ki);
    let consistent = measured_period.map(|t| {
        if subcritical && t < linear_period(k) {
            decreasing_allowed
        } else if increasing_asserted {
            t >= linear_period(k)
        } else {
            true
        }
    });
    MonotonicityReport {
        k,
        increasing_asserted,
        decreasing_allowed,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifurcation::{classify_sequence, DEFAULT_TOL};

    #[test]
    fn supercritical_values() {
        let b = bound_supercritical(0, 0.1).unwrap();
        assert!((b.lower.unwrap() - 3.760_6).abs() < 1e-4);
        assert_eq!(b.upper, None);
        assert_eq!(b.source, BoundSource::Theorem2);
        let b = bound_supercritical(1, 0.1).unwrap();
        assert_eq!(b.lower.unwrap(), 4.0 / (5.0 + 0.2 / PI));
        assert!((bound_supercritical(0, 1e-12).unwrap().lower.unwrap() - 4.0).abs() < 1e-10);
        assert!(bound_supercritical(0, 0.0).is_err());
    }

    #[test]
    fn subcritical_values() {
        let b = bound_all_subcritical(0, 0.1).unwrap();
        assert!((b.upper.unwrap() - 4.272_0).abs() < 1e-4);
        assert_eq!(bound_all_subcritical(2, 0.5).unwrap().upper.unwrap(), 4.0 / (9.0 - 1.0 / PI));
        assert!((bound_all_subcritical(0, 1e-12).unwrap().upper.unwrap() - 4.0).abs() < 1e-10);
        assert!(bound_all_subcritical(0, 2.0).is_err());
        assert!(bound_all_subcritical(0, -0.1).is_err());
    }

    #[test]
    fn switching_values() {
        let b = bound_switching(0, 0.1, 1).unwrap();
        assert!((b.lower.unwrap() - 4.306_0).abs() < 1e-4);
        assert!((b.upper.unwrap() - 4.340_0).abs() < 1e-4);
        assert_eq!(b.source, BoundSource::Theorem4Interior);
        let e = bound_switching(1, 0.1, 1).unwrap();
        assert_eq!(e.lower.unwrap(), (4.0 + 0.2 / PI) / (5.0 - 0.2 / PI));
        assert_eq!((e.upper, e.source), (None, BoundSource::Theorem4Edge));
        let z = bound_switching(0, 1e-12, 1).unwrap();
        assert!((z.lower.unwrap() - 4.0).abs() < 1e-10 && (z.upper.unwrap() - 4.0).abs() < 1e-10);
        assert!(matches!(bound_switching(2, 0.1, 1), Err(Error::NotSubcritical { .. })));
    }

    #[test]
    fn interior_gap_identity() {
        for (k, n) in [(0, 1), (0, 3), (2, 5)] {
            for eta in [0.01, 0.1, 0.5] {
                let b = bound_switching(k, eta, n).unwrap();
                let gap = (2.0 * eta / PI) * (1.0 / (n - k) as f64 - 1.0 / (n - k + 1) as f64)
                    / (base(k) - 2.0 * eta / PI);
                assert!((b.upper.unwrap() - b.lower.unwrap() - gap).abs() < 1e-14);
                assert!(b.lower.unwrap() < b.upper.unwrap());
            }
        }
    }

    #[test]
    fn classification_dispatch() {
        let switch = classify_sequence(1.0, 1.44, DEFAULT_TOL);
        assert_eq!(bound_for(&switch, 0, 0.1).unwrap().unwrap().source, BoundSource::Theorem4Interior);
        assert_eq!(bound_for(&switch, 1, 0.1).unwrap().unwrap().source, BoundSource::Theorem4Edge);
        assert_eq!(bound_for(&switch, 2, 0.1).unwrap().unwrap().source, BoundSource::Theorem2);
        let sub = classify_sequence(1.0, 22.0 / 15.0, DEFAULT_TOL);
        assert_eq!(bound_for(&sub, 0, 0.1).unwrap().unwrap().source, BoundSource::Theorem3);
        let wright = classify_sequence(0.5, 1.0 / 6.0, DEFAULT_TOL);
        assert_eq!(bound_for(&wright, 0, 0.1).unwrap().unwrap().source, BoundSource::Theorem2);
    }

    #[test]
    fn monotonicity() {
        let switch = classify_sequence(1.0, 1.44, DEFAULT_TOL);
        let r = monotonicity_flags(&switch, 1, None);
        assert!(r.increasing_asserted && !r.decreasing_allowed);
        assert!(!monotonicity_flags(&switch, 0, None).increasing_asserted);
        assert_eq!(monotonicity_flags(&switch, 0, Some(3.9)).consistent, Some(false));

        let wright = classify_sequence(0.5, 1.0 / 6.0, DEFAULT_TOL);
        let r = monotonicity_flags(&wright, 0, Some(3.9));
        assert!(!r.increasing_asserted && r.consistent == Some(true));

        let all_sub = classify_sequence(1.0, 2.0, DEFAULT_TOL);
        let r = monotonicity_flags(&all_sub, 0, Some(3.95));
        assert_eq!(r.consistent, Some(true));
    }
}

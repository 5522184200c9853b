use std::f64::consts::PI;

use serde::Serialize;

use super::{classify, Direction, H_LIMIT};

/// The five possible arrangements of super- and subcritical bifurcations
/// along `k in Z`, plus the all-degenerate case `B = C = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SequenceCase {
    /// `C < H(0) B^2`: every bifurcation supercritical.
    AllSuper,
    /// `H(0) B^2 <= C < (22/15) B^2`: subcritical exactly for `0 <= k <= n`.
    SwitchNonneg,
    /// `C = (22/15) B^2`: subcritical exactly for `k >= 0`.
    BoundaryCase,
    /// `(22/15) B^2 < C <= H(-1) B^2`: subcritical for `k >= 0`, supercritical
    /// exactly for `n <= k <= -1`.
    SwitchNeg,
    /// `C > H(-1) B^2`: every bifurcation subcritical.
    AllSub,
    Degenerate,
}

impl SequenceCase {
    pub fn as_str(self) -> &'static str {
        match self {
            SequenceCase::AllSuper => "AllSuper",
            SequenceCase::SwitchNonneg => "SwitchNonneg",
            SequenceCase::BoundaryCase => "BoundaryCase",
            SequenceCase::SwitchNeg => "SwitchNeg",
            SequenceCase::AllSub => "AllSub",
            SequenceCase::Degenerate => "Degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceClassification {
    pub case: SequenceCase,
    /// `SwitchNonneg`: the last subcritical index `n >= 0`.
    /// `SwitchNeg`: the first supercritical index `n <= -1`.
    /// `None` when the band is empty because the edge index is degenerate.
    pub n: Option<i64>,
    pub b: f64,
    pub c: f64,
    pub tol: f64,
}

impl SequenceClassification {
    pub fn direction_at(&self, k: i64) -> Direction {
        classify(self.b, self.c, k, self.tol)
    }

    /// True when every bifurcation with index `>= k` is subcritical.
    pub fn subcritical_from(&self, k: i64) -> bool {
        match self.case {
            SequenceCase::AllSub => true,
            SequenceCase::BoundaryCase | SequenceCase::SwitchNeg => k >= 0,
            _ => false,
        }
    }
}

/// Largest `m >= start` (searching upward) still satisfying `pred`, given
/// that `pred` holds on an initial segment. `guess` seeds the search.
fn last_true(start: i64, guess: i64, pred: impl Fn(i64) -> bool) -> Option<i64> {
    let mut m = guess.max(start);
    while m >= start && !pred(m) {
        m -= 1;
    }
    if m < start {
        return None;
    }
    while pred(m + 1) {
        m += 1;
    }
    Some(m)
}

/// Classifies the whole sequence of bifurcations for `(B, C)`.
pub fn classify_sequence(b: f64, c: f64, tol: f64) -> SequenceClassification {
    let out = |case, n| SequenceClassification { case, n, b, c, tol };
    if b == 0.0 {
        let case = if c < -tol {
            SequenceCase::AllSuper
        } else if c > tol {
            SequenceCase::AllSub
        } else {
            SequenceCase::Degenerate
        };
        return out(case, None);
    }

    let first = classify(b, c, 0, tol);
    let last_negative = classify(b, c, -1, tol);
    let b2 = b * b;
    let boundary_margin = c - H_LIMIT * b2;

    if first == Direction::Degenerate && last_negative == Direction::Degenerate {
        return out(SequenceCase::Degenerate, None);
    }
    if first == Direction::Supercritical {
        return out(SequenceCase::AllSuper, None);
    }
    if boundary_margin.abs() <= tol {
        return out(SequenceCase::BoundaryCase, None);
    }
    if last_negative == Direction::Subcritical {
        return out(SequenceCase::AllSub, None);
    }

    // distance of C / B^2 from the limit 22/15, and the |4m+1| where H(m)
    // crosses it: H(m) = 22/15 - 8 / (15 (4m+1) pi)
    let gap = (boundary_margin / b2).abs();
    let crossing = (8.0 / (15.0 * PI * gap)).min(4e15);
    if boundary_margin < 0.0 {
        let guess = ((crossing - 1.0) / 4.0).floor() as i64;
        let n = last_true(0, guess, |m| classify(b, c, m, tol) == Direction::Subcritical);
        out(SequenceCase::SwitchNonneg, n)
    } else {
        // mirror: first supercritical index counted downward from -1
        let guess = ((crossing - 1.0) / 4.0).floor() as i64;
        let n = last_true(0, guess, |j| {
            classify(b, c, -1 - j, tol) == Direction::Supercritical
        })
        .map(|j| -1 - j);
        out(SequenceCase::SwitchNeg, n)
    }
}

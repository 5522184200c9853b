//! Roots of the characteristic equation `lambda = -mu exp(-lambda)` of the
//! linearization `x'(t) = -mu x(t-1)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Newton stops once `|lambda + mu exp(-lambda)|` falls below this.
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 100;

/// A characteristic root at parameter `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharRoot {
    pub alpha: f64,
    pub omega: f64,
    pub mu: f64,
    pub residual: f64,
}

impl CharRoot {
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.alpha, self.omega)
    }
}

/// `lambda + mu exp(-lambda)`.
pub fn characteristic(mu: f64, lambda: Complex64) -> Complex64 {
    lambda + mu * (-lambda).exp()
}

/// Critical value `(4k+1) pi / 2`, shared by `mu_k` and `omega_k`.
pub fn critical_value(k: i64) -> f64 {
    (4 * k + 1) as f64 * std::f64::consts::FRAC_PI_2
}

/// The purely imaginary root `i omega_k` at `mu = mu_k`.
pub fn critical_root(k: i64) -> CharRoot {
    let w = critical_value(k);
    let lambda = Complex64::new(0.0, w);
    CharRoot {
        alpha: 0.0,
        omega: w,
        mu: w,
        residual: characteristic(w, lambda).norm(),
    }
}

/// Newton iteration on `h(lambda) = lambda + mu exp(-lambda)`.
pub fn refine_root(mu: f64, guess: Complex64) -> Result<CharRoot> {
    let mut z = guess;
    let mut residual = characteristic(mu, z).norm();
    for _ in 0..NEWTON_MAX_ITER {
        if residual <= NEWTON_TOL {
            break;
        }
        let e = mu * (-z).exp();
        let step = (z + e) / (Complex64::new(1.0, 0.0) - e);
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) {
            break;
        }
        residual = characteristic(mu, z).norm();
    }
    if residual <= NEWTON_TOL {
        Ok(CharRoot {
            alpha: z.re,
            omega: z.im,
            mu,
            residual,
        })
    } else {
        Err(Error::NewtonFailed {
            re: z.re,
            im: z.im,
            residual,
            iterations: NEWTON_MAX_ITER,
        })
    }
}

/// Follows a root from `start` to parameter `mu_target` in increments of at
/// most `increment`, reusing each root as the next guess.
pub fn continue_root(start: CharRoot, mu_target: f64, increment: f64) -> Result<CharRoot> {
    if !(increment > 0.0) {
        return Err(Error::InvalidArgument(format!("continuation increment {increment}")));
    }
    let span = mu_target - start.mu;
    let steps = (span.abs() / increment).ceil().max(1.0) as usize;
    let mut root = start;
    for i in 1..=steps {
        let mu = start.mu + span * i as f64 / steps as f64;
        root = refine_root(mu, root.lambda())?;
    }
    Ok(root)
}

/// Central-difference estimate of `d alpha / d mu` at `mu_k`, continuing the
/// critical root in steps of `h / 10` to either side.
pub fn crossing_speed_numeric(k: i64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 1e-2) {
        return Err(Error::InvalidArgument(format!(
            "difference step must satisfy 0 < h <= 1e-2, got {h}"
        )));
    }
    let root = critical_root(k);
    let right = continue_root(root, root.mu + h, h / 10.0)?;
    let left = continue_root(root, root.mu - h, h / 10.0)?;
    Ok((right.alpha - left.alpha) / (2.0 * h))
}

/// Closed form `mu_k / (1 + mu_k^2)` of the crossing speed.
pub fn crossing_speed_exact(k: i64) -> f64 {
    let m = critical_value(k);
    m / (1.0 + m * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn critical_roots() {
        let r = critical_root(0);
        assert_eq!((r.alpha, r.omega, r.mu), (0.0, FRAC_PI_2, FRAC_PI_2));
        let r = critical_root(1);
        assert_eq!((r.omega, r.mu), (5.0 * FRAC_PI_2, 5.0 * FRAC_PI_2));
        let r = critical_root(-1);
        assert_eq!((r.omega, r.mu), (-1.5 * PI, -1.5 * PI));
        for k in -10..=10 {
            assert!(critical_root(k).residual <= 1e-13 * critical_value(k).abs().max(1.0));
        }
    }

    #[test]
    fn refine_from_nearby_guess() {
        let r = refine_root(FRAC_PI_2, Complex64::new(0.1, 1.5)).unwrap();
        assert!(r.alpha.abs() < 1e-12 && (r.omega - FRAC_PI_2).abs() < 1e-12);
        assert!(r.residual < 1e-12);
    }

    // Oracle: bisection on mu for the sign change of Re(lambda) along the
    // continued branch, independent of the Newton starting guess.
    fn alpha_along_branch(mu: f64) -> f64 {
        continue_root(critical_root(0), mu, 1e-3).unwrap().alpha
    }

    #[test]
    fn sides_of_first_crossing() {
        let below = refine_root(FRAC_PI_2 - 0.1, Complex64::new(0.0, FRAC_PI_2)).unwrap();
        let above = refine_root(FRAC_PI_2 + 0.1, Complex64::new(0.0, FRAC_PI_2)).unwrap();
        assert!(below.alpha < 0.0 && above.alpha > 0.0);
        assert_eq!(below.alpha.signum(), alpha_along_branch(FRAC_PI_2 - 0.1).signum());
        assert_eq!(above.alpha.signum(), alpha_along_branch(FRAC_PI_2 + 0.1).signum());

        let (mut lo, mut hi) = (FRAC_PI_2 - 0.1, FRAC_PI_2 + 0.1);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if alpha_along_branch(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn newton_failure_reports_iterate() {
        let err = refine_root(1.0, Complex64::new(f64::NAN, 0.0)).unwrap_err();
        assert!(matches!(err, Error::NewtonFailed { .. }));
    }

    #[test]
    fn crossing_speed_matches_closed_form() {
        for k in [0, 1] {
            let num = crossing_speed_numeric(k, 1e-4).unwrap();
            assert!((num - crossing_speed_exact(k)).abs() < 1e-4);
        }
        assert!(crossing_speed_numeric(-1, 1e-4).unwrap() < 0.0);
        assert!(crossing_speed_numeric(0, 0.0).is_err());
        assert!(crossing_speed_numeric(0, 0.1).is_err());
    }

    #[test]
    fn crossing_sign_follows_mu() {
        for k in -4..=4 {
            let num = crossing_speed_numeric(k, 1e-4).unwrap();
            assert_eq!(num.signum(), critical_value(k).signum());
            assert!((num - crossing_speed_exact(k)).abs() <= 10.0 * 1e-8 + 1e-9);
        }
    }
}

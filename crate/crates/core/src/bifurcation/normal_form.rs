use num_complex::Complex64;
use serde::Serialize;

use crate::spectral::critical_value;

/// Coefficients entering the normal-form coefficient at the `k`th Hopf point.
///
/// `b_abcd` is the coefficient of `x1^a x2^b x3^c x4^d` in the expansion of
/// the nonlinear part `F` evaluated on
/// `x1 e^{i w t} + x2 e^{-i w t} + x3 + x4 e^{2 i w t}`, `t in [-1, 0]`, and the
/// `l0_*` fields are the linear functional `L0 phi = -mu_k phi(-1)` applied to
/// `1`, `t e^{i w t}` and `e^{2 i w t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalFormTerms {
    pub b2000: Complex64,
    pub b1100: Complex64,
    pub b1010: Complex64,
    pub b0101: Complex64,
    pub b2100: Complex64,
    pub l0_one: Complex64,
    pub l0_theta: Complex64,
    pub l0_exp2: Complex64,
    pub omega: f64,
}

fn factorial(n: u32) -> f64 {
    (1..=n).product::<u32>() as f64
}

impl NormalFormTerms {
    /// Expands `F(phi) = -mu_k (B phi(-1)^2 + C phi(-1)^3)` monomial by
    /// monomial from the values of the test functions at `t = -1`.
    pub fn new(b: f64, c: f64, k: i64) -> Self {
        let w = critical_value(k);
        let mu = w;
        let i = Complex64::i();
        // test functions at t = -1
        let at_minus_one = [
            (-i * w).exp(),
            (i * w).exp(),
            Complex64::new(1.0, 0.0),
            (-2.0 * i * w).exp(),
        ];
        let coefficient = |exps: [u32; 4]| -> Complex64 {
            let order: u32 = exps.iter().sum();
            let taylor = match order {
                2 => b,
                3 => c,
                _ => 0.0,
            };
            let multinomial =
                factorial(order) / exps.iter().map(|&e| factorial(e)).product::<f64>();
            let monomial = exps
                .iter()
                .zip(at_minus_one.iter())
                .fold(Complex64::new(1.0, 0.0), |acc, (&e, z)| acc * z.powu(e));
            -mu * taylor * multinomial * monomial
        };
        let l0 = |phi_at_minus_one: Complex64| -mu * phi_at_minus_one;
        Self {
            b2000: coefficient([2, 0, 0, 0]),
            b1100: coefficient([1, 1, 0, 0]),
            b1010: coefficient([1, 0, 1, 0]),
            b0101: coefficient([0, 1, 0, 1]),
            b2100: coefficient([2, 1, 0, 0]),
            l0_one: l0(Complex64::new(1.0, 0.0)),
            l0_theta: l0(-at_minus_one[0]),
            l0_exp2: l0(at_minus_one[3]),
            omega: w,
        }
    }

    /// The complex quantity whose real part decides the direction.
    pub fn coefficient(&self) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let two_i_omega = Complex64::new(0.0, 2.0 * self.omega);
        let bracket = self.b2100 - self.b1100 * self.b1010 / self.l0_one
            + self.b2000 * self.b0101 / (two_i_omega - self.l0_exp2);
        bracket / (one - self.l0_theta)
    }
}

/// Normal-form coefficient `K` of the `k`th Hopf point, with every positive
/// prefactor kept. `K < 0` means supercritical, `K > 0` subcritical.
pub fn normal_form_k(b: f64, c: f64, k: i64) -> f64 {
    NormalFormTerms::new(b, c, k).coefficient().re
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-12 * b.norm().max(1.0)
    }

    #[test]
    fn terms_match_hand_expansion() {
        let i = Complex64::i();
        for k in -5..=5 {
            for (b, c) in [(0.5, 1.0 / 6.0), (1.0, 1.44), (-1.3, 2.0)] {
                let t = NormalFormTerms::new(b, c, k);
                let q = (4 * k + 1) as f64 * PI;
                assert!(close(t.b2000, (q / 2.0 * b).into()));
                assert!(close(t.b1100, (-q * b).into()));
                assert!(close(t.b1010, q * b * i));
                assert!(close(t.b0101, q * b * i));
                assert!(close(t.b2100, 1.5 * q * c * i));
                assert!(close(t.l0_one, (-q / 2.0).into()));
                assert!(close(t.l0_theta, -i * q / 2.0));
                assert!(close(t.l0_exp2, (q / 2.0).into()));
            }
        }
    }

    #[test]
    fn sign_examples() {
        assert!(normal_form_k(0.5, 1.0 / 6.0, 0) < 0.0);
        assert_eq!(normal_form_k(0.0, 0.0, 3), 0.0);
        assert!(normal_form_k(1.0, 1.44, 0) > 0.0);
    }

    #[test]
    fn reduces_to_threshold_form() {
        // Hand reduction with q = (4k+1) pi:
        // K = q^2 / (2 (1 + q^2/4)) * (3/2) * (C - H(k) B^2)
        for k in -4..=6 {
            let q = (4 * k + 1) as f64 * PI;
            let scale = q * q / (2.0 * (1.0 + q * q / 4.0));
            for (b, c) in [(0.5, 0.1), (1.0, 1.44), (2.0, -3.0), (-1.5, 2.9)] {
                let margin = c - super::super::hopf_threshold(k) * b * b;
                let expected = scale * 1.5 * margin;
                let got = normal_form_k(b, c, k);
                assert!((got - expected).abs() <= 1e-10 * expected.abs().max(1.0), "k={k}");
            }
        }
    }
}

//! The feedback nonlinearity `f` of `x'(t) = -mu f(x(t-1))`.
//!
//! A [`Nonlinearity`] is an immutable, shareable evaluator together with the
//! raw slope `f'(0)` and the normalized Taylor coefficients
//!
//! ```text
//! B = f''(0) / (2 f'(0)),    C = f'''(0) / (6 f'(0))
//! ```
//!
//! so that `f(x) / f'(0) = x + B x^2 + C x^3 + ...`. Critical parameters
//! computed from `(B, C)` refer to the normalized equation; divide by
//! [`Nonlinearity::d1`] to get values of the original `mu`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Scalar real function, shareable across threads.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Tolerance on `|f(0)|`.
pub const EQUILIBRIUM_TOL: f64 = 1e-12;
/// Below this `|f'(0)|` the linearization is treated as degenerate.
pub const MIN_SLOPE: f64 = 1e-8;
/// Below this `|f'(xi)|` the Schwarzian derivative is undefined.
pub const CRITICAL_SLOPE: f64 = 1e-10;
/// Base step of the finite-difference stencils.
pub const FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeSource {
    ClosedForm,
    FiniteDifference,
}

/// Slope and normalized Taylor coefficients at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorData {
    pub d1: f64,
    pub b: f64,
    pub c: f64,
}

/// Built-in nonlinearities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// `e^x - 1`, the log-transformed delayed logistic equation.
    Wright,
    /// `sin x`.
    Ikeda,
    /// `x + x^2 + 1.44 x^3`: subcritical at k = 0, 1 and supercritical beyond.
    PolySwitch,
    /// `x + x^2 + (22/15) x^3`: subcritical for every k >= 0.
    PolySubcritical,
    /// `x + B x^2 + C x^3`.
    Cubic { b: f64, c: f64 },
}

impl Preset {
    pub const NAMES: [&'static str; 5] = [
        "wright",
        "ikeda",
        "poly-switch",
        "poly-subcritical",
        "cubic(B,C)",
    ];

    pub fn build(self) -> Nonlinearity {
        match self {
            Preset::Wright => Nonlinearity::closed_form_unchecked(
                "wright",
                Arc::new(|x: f64| x.exp_m1()),
                [
                    Arc::new(|x: f64| x.exp()),
                    Arc::new(|x: f64| x.exp()),
                    Arc::new(|x: f64| x.exp()),
                ],
            ),
            Preset::Ikeda => Nonlinearity::closed_form_unchecked(
                "ikeda",
                Arc::new(|x: f64| x.sin()),
                [
                    Arc::new(|x: f64| x.cos()),
                    Arc::new(|x: f64| -x.sin()),
                    Arc::new(|x: f64| -x.cos()),
                ],
            ),
            Preset::PolySwitch => polynomial("poly-switch", 1.0, 2.0, 6.0 * 1.44),
            Preset::PolySubcritical => polynomial("poly-subcritical", 1.0, 2.0, 6.0 * 22.0 / 15.0),
            Preset::Cubic { b, c } => polynomial(&format!("cubic({b},{c})"), 1.0, 2.0 * b, 6.0 * c),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let name = s.trim().to_ascii_lowercase();
        match name.as_str() {
            "wright" => return Ok(Preset::Wright),
            "ikeda" => return Ok(Preset::Ikeda),
            "poly-switch" => return Ok(Preset::PolySwitch),
            "poly-subcritical" => return Ok(Preset::PolySubcritical),
            _ => {}
        }
        // cubic(B,C) or cubic:B,C
        let args = name
            .strip_prefix("cubic(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| name.strip_prefix("cubic:"))
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Error::UnknownPreset(s.to_string()));
        }
        let parse = |p: &str| {
            p.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::UnknownPreset(s.to_string()))
        };
        Ok(Preset::Cubic {
            b: parse(parts[0])?,
            c: parse(parts[1])?,
        })
    }
}

/// Looks up a built-in nonlinearity by name (`wright`, `ikeda`,
/// `poly-switch`, `poly-subcritical`, `cubic(B,C)`).
pub fn make_builtin(name: &str) -> Result<Nonlinearity> {
    Ok(name.parse::<Preset>()?.build())
}

/// `d1 x + (f2/2) x^2 + (f3/6) x^3` with closed-form derivatives.
fn polynomial(name: &str, d1: f64, f2: f64, f3: f64) -> Nonlinearity {
    let (a1, a2, a3) = (d1, f2 / 2.0, f3 / 6.0);
    Nonlinearity::closed_form_unchecked(
        name,
        Arc::new(move |x: f64| x * (a1 + x * (a2 + x * a3))),
        [
            Arc::new(move |x: f64| a1 + x * (2.0 * a2 + 3.0 * a3 * x)),
            Arc::new(move |x: f64| 2.0 * a2 + 6.0 * a3 * x),
            Arc::new(move |_| 6.0 * a3),
        ],
    )
}

/// The nonlinearity `f`, with `f(0) = 0` and `f'(0) != 0`.
#[derive(Clone)]
pub struct Nonlinearity {
    name: String,
    eval: ScalarFn,
    derivatives: Option<[ScalarFn; 3]>,
    taylor: TaylorData,
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("name", &self.name)
            .field("d1", &self.taylor.d1)
            .field("b", &self.taylor.b)
            .field("c", &self.taylor.c)
            .field("source", &self.derivative_source())
            .finish()
    }
}

impl Nonlinearity {
    fn closed_form_unchecked(name: &str, eval: ScalarFn, derivatives: [ScalarFn; 3]) -> Self {
        let d1 = derivatives[0](0.0);
        let taylor = TaylorData {
            d1,
            b: derivatives[1](0.0) / (2.0 * d1),
            c: derivatives[2](0.0) / (6.0 * d1),
        };
        Self {
            name: name.to_string(),
            eval,
            derivatives: Some(derivatives),
            taylor,
        }
    }

    /// Nonlinearity with user-supplied `f'`, `f''`, `f'''`. The closed-form
    /// Taylor data is cross-checked against finite differences of `eval`.
    pub fn closed_form(name: &str, eval: ScalarFn, derivatives: [ScalarFn; 3]) -> Result<Self> {
        check_equilibrium(eval(0.0))?;
        let d1 = derivatives[0](0.0);
        check_slope(d1)?;
        let nl = Self::closed_form_unchecked(name, eval, derivatives);
        let numeric = taylor_from_samples(|x| (nl.eval)(x))?;
        for (which, closed, fd) in [
            ("f'(0)", nl.taylor.d1, numeric.d1),
            ("B", nl.taylor.b, numeric.b),
            ("C", nl.taylor.c, numeric.c),
        ] {
            if (closed - fd).abs() > 1e-6 * closed.abs().max(1.0) {
                return Err(Error::InconsistentTaylor {
                    which,
                    closed,
                    numeric: fd,
                });
            }
        }
        Ok(nl)
    }

    /// Nonlinearity known only through evaluation; Taylor data and all
    /// derivatives come from finite differences.
    pub fn from_fn(name: &str, eval: ScalarFn) -> Result<Self> {
        check_equilibrium(eval(0.0))?;
        let taylor = taylor_from_samples(|x| eval(x))?;
        Ok(Self {
            name: name.to_string(),
            eval,
            derivatives: None,
            taylor,
        })
    }

    /// Cubic from the raw triple `(f'(0), f''(0), f'''(0))`.
    pub fn from_raw_cubic(d1: f64, f2: f64, f3: f64) -> Result<Self> {
        if ![d1, f2, f3].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(
                "cubic coefficients must be finite".into(),
            ));
        }
        check_slope(d1)?;
        Ok(polynomial(
            &format!("cubic-raw({d1},{f2},{f3})"),
            d1,
            f2,
            f3,
        ))
    }

    /// `x + B x^2 + C x^3`.
    pub fn cubic(b: f64, c: f64) -> Self {
        Preset::Cubic { b, c }.build()
    }

    /// `a * f`, sharing the evaluator.
    pub fn scaled(&self, a: f64) -> Result<Self> {
        if !(a.is_finite() && a != 0.0) {
            return Err(Error::InvalidArgument(format!("scale factor {a}")));
        }
        let eval = self.eval.clone();
        let derivatives = self.derivatives.as_ref().map(|[d1, d2, d3]| {
            let (d1, d2, d3) = (d1.clone(), d2.clone(), d3.clone());
            [
                Arc::new(move |x: f64| a * d1(x)) as ScalarFn,
                Arc::new(move |x: f64| a * d2(x)) as ScalarFn,
                Arc::new(move |x: f64| a * d3(x)) as ScalarFn,
            ]
        });
        let eval: ScalarFn = Arc::new(move |x| a * eval(x));
        Ok(match derivatives {
            Some(d) => Self::closed_form_unchecked(&format!("{a}*{}", self.name), eval, d),
            None => Self::from_fn(&format!("{a}*{}", self.name), eval)?,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Shared handle to the evaluator.
    pub fn evaluator(&self) -> ScalarFn {
        self.eval.clone()
    }

    pub fn d1(&self) -> f64 {
        self.taylor.d1
    }

    pub fn b(&self) -> f64 {
        self.taylor.b
    }

    pub fn c(&self) -> f64 {
        self.taylor.c
    }

    pub fn taylor(&self) -> TaylorData {
        self.taylor
    }

    pub fn derivative_source(&self) -> DerivativeSource {
        if self.derivatives.is_some() {
            DerivativeSource::ClosedForm
        } else {
            DerivativeSource::FiniteDifference
        }
    }

    /// `(f'(x), f''(x), f'''(x))`.
    pub fn derivatives_at(&self, x: f64) -> (f64, f64, f64) {
        match &self.derivatives {
            Some([d1, d2, d3]) => (d1(x), d2(x), d3(x)),
            None => central_derivatives(|s| (self.eval)(s), x),
        }
    }

    /// Rejects `f'(0) < 0`, which the branch indexing does not cover.
    pub fn require_positive_slope(&self) -> Result<()> {
        if self.taylor.d1 < 0.0 {
            Err(Error::NegativeSlope { d1: self.taylor.d1 })
        } else {
            Ok(())
        }
    }

    /// Converts a critical value of the normalized equation into the
    /// corresponding value of this equation's `mu`.
    pub fn original_mu(&self, normalized_mu: f64) -> f64 {
        normalized_mu / self.taylor.d1
    }

    /// Schwarzian derivative `f'''/f' - (3/2) (f''/f')^2` at `x`.
    pub fn schwarzian(&self, x: f64) -> Result<f64> {
        schwarzian(self, x)
    }
}

fn check_equilibrium(value: f64) -> Result<()> {
    if value.is_finite() && value.abs() <= EQUILIBRIUM_TOL {
        Ok(())
    } else {
        Err(Error::NonzeroEquilibrium { value })
    }
}

fn check_slope(d1: f64) -> Result<()> {
    if d1.is_finite() && d1.abs() >= MIN_SLOPE {
        Ok(())
    } else {
        Err(Error::DegenerateLinearization {
            d1,
            threshold: MIN_SLOPE,
        })
    }
}

/// Five-point central stencils for the first three derivatives at `x`.
fn stencil(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64, f64) {
    let (m2, m1, z, p1, p2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
    let d2 = (-p2 + 16.0 * p1 - 30.0 * z + 16.0 * m1 - m2) / (12.0 * h * h);
    let d3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h);
    (d1, d2, d3)
}

/// Stencil at `h = FD_STEP` and `h/2`, combined by one Richardson step. The
/// first two stencils are fourth order, the third one second order.
fn central_derivatives(f: impl Fn(f64) -> f64, x: f64) -> (f64, f64, f64) {
    let (a1, a2, a3) = stencil(&f, x, FD_STEP);
    let (b1, b2, b3) = stencil(&f, x, FD_STEP / 2.0);
    (
        (16.0 * b1 - a1) / 15.0,
        (16.0 * b2 - a2) / 15.0,
        (4.0 * b3 - a3) / 3.0,
    )
}

/// Estimates `(f'(0), B, C)` from samples of `f` around the origin.
pub fn taylor_from_samples(f: impl Fn(f64) -> f64) -> Result<TaylorData> {
    let (d1, d2, d3) = central_derivatives(f, 0.0);
    check_slope(d1)?;
    Ok(TaylorData {
        d1,
        b: d2 / (2.0 * d1),
        c: d3 / (6.0 * d1),
    })
}

/// Schwarzian derivative of `f` at `x`.
pub fn schwarzian(f: &Nonlinearity, x: f64) -> Result<f64> {
    let (d1, d2, d3) = f.derivatives_at(x);
    if !(d1.abs() >= CRITICAL_SLOPE) {
        return Err(Error::CriticalPoint { xi: x, d1 });
    }
    let q = d2 / d1;
    Ok(d3 / d1 - 1.5 * q * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn preset_coefficients() {
        let w = make_builtin("wright").unwrap();
        assert_eq!((w.d1(), w.b(), w.c()), (1.0, 0.5, 1.0 / 6.0));
        let i = make_builtin("ikeda").unwrap();
        assert_eq!((i.b(), i.c()), (0.0, -1.0 / 6.0));
        let p = make_builtin("poly-switch").unwrap();
        assert_eq!(p.b(), 1.0);
        assert_relative_eq!(p.c(), 1.44, epsilon = 1e-15);
        let s = make_builtin("poly-subcritical").unwrap();
        assert_relative_eq!(s.c(), 22.0 / 15.0, epsilon = 1e-15);
        let c = make_builtin("cubic(0.25, -2)").unwrap();
        assert_eq!((c.b(), c.c()), (0.25, -2.0));
        assert_eq!(make_builtin("cubic:1,2").unwrap().c(), 2.0);
    }

    #[test]
    fn unknown_preset() {
        for bad in ["mackey-glass", "cubic(1)", "cubic(a,b)", ""] {
            assert!(matches!(make_builtin(bad), Err(Error::UnknownPreset(_))), "{bad}");
        }
    }

    #[test]
    fn taylor_samples() {
        let t = taylor_from_samples(f64::exp_m1).unwrap();
        assert_relative_eq!(t.d1, 1.0, epsilon = 1e-6);
        assert_relative_eq!(t.b, 0.5, epsilon = 1e-6);
        assert_relative_eq!(t.c, 1.0 / 6.0, epsilon = 1e-6);

        let t = taylor_from_samples(|x| x).unwrap();
        assert_relative_eq!(t.d1, 1.0, epsilon = 1e-12);
        assert!(t.b.abs() < 1e-9 && t.c.abs() < 1e-6);

        let t = taylor_from_samples(f64::sin).unwrap();
        assert!(t.b.abs() < 1e-6);
        assert_relative_eq!(t.c, -1.0 / 6.0, epsilon = 1e-6);
    }

    #[test]
    fn degenerate_slope() {
        assert!(matches!(
            taylor_from_samples(|x| x * x),
            Err(Error::DegenerateLinearization { .. })
        ));
        assert!(Nonlinearity::from_raw_cubic(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn rejects_shifted_equilibrium() {
        let r = Nonlinearity::from_fn("shifted", Arc::new(|x: f64| x + 0.1));
        assert!(matches!(r, Err(Error::NonzeroEquilibrium { .. })));
    }

    #[test]
    fn closed_form_cross_check() {
        let ok = Nonlinearity::closed_form(
            "tanh",
            Arc::new(f64::tanh),
            [
                Arc::new(|x: f64| 1.0 - x.tanh().powi(2)),
                Arc::new(|x: f64| -2.0 * x.tanh() * (1.0 - x.tanh().powi(2))),
                Arc::new(|x: f64| {
                    let s = 1.0 - x.tanh().powi(2);
                    -2.0 * s * s + 4.0 * x.tanh().powi(2) * s
                }),
            ],
        )
        .unwrap();
        assert_relative_eq!(ok.c(), -1.0 / 3.0, epsilon = 1e-15);

        // wrong third derivative
        let bad = Nonlinearity::closed_form(
            "bad",
            Arc::new(f64::sin),
            [
                Arc::new(f64::cos),
                Arc::new(|x: f64| -x.sin()),
                Arc::new(|x: f64| x.cos()),
            ],
        );
        assert!(matches!(bad, Err(Error::InconsistentTaylor { which: "C", .. })));
    }

    #[test]
    fn schwarzian_values() {
        let w = Preset::Wright.build();
        for x in [-2.0, -0.3, 0.0, 1.0, 2.0] {
            assert_relative_eq!(w.schwarzian(x).unwrap(), -0.5, epsilon = 1e-14);
        }
        let c = Nonlinearity::cubic(0.0, 1.0);
        assert_relative_eq!(c.schwarzian(0.0).unwrap(), 6.0, epsilon = 1e-14);
        // f'(x) = 1 + 2x vanishes at -1/2
        let q = Nonlinearity::cubic(1.0, 0.0);
        assert!(matches!(q.schwarzian(-0.5), Err(Error::CriticalPoint { .. })));
    }

    #[test]
    fn finite_difference_schwarzian_matches_closed_form() {
        let fd = Nonlinearity::from_fn("wright-fd", Arc::new(f64::exp_m1)).unwrap();
        assert_eq!(fd.derivative_source(), DerivativeSource::FiniteDifference);
        for x in [-1.0, 0.0, 0.5, 1.0] {
            assert!((fd.schwarzian(x).unwrap() + 0.5).abs() < 1e-5, "x = {x}");
        }
    }

    #[test]
    fn negative_slope_rejected_for_classification() {
        let f = Nonlinearity::from_raw_cubic(-1.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            f.require_positive_slope(),
            Err(Error::NegativeSlope { .. })
        ));
    }

    #[test]
    fn raw_cubic_normalizes() {
        let f = Nonlinearity::from_raw_cubic(1.0, 2.0, 8.64).unwrap();
        assert_eq!(f.b(), 1.0);
        assert_relative_eq!(f.c(), 1.44, epsilon = 1e-15);
        let g = Nonlinearity::from_raw_cubic(2.0, 2.0, 6.0).unwrap();
        assert_eq!((g.d1(), g.b(), g.c()), (2.0, 0.5, 0.5));
        assert_eq!(g.original_mu(std::f64::consts::FRAC_PI_2), std::f64::consts::FRAC_PI_4);
    }
}

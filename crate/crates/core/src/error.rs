use thiserror::Error;

/// Errors produced by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown preset `{0}` (expected wright, ikeda, poly-switch, poly-subcritical or cubic)")]
    UnknownPreset(String),

    #[error("f(0) = {value:e}, but the nonlinearity must vanish at the equilibrium")]
    NonzeroEquilibrium { value: f64 },

    #[error("degenerate linearization: |f'(0)| = {d1:e} is below {threshold:e}")]
    DegenerateLinearization { d1: f64, threshold: f64 },

    #[error("f'(0) = {d1} < 0 is not supported; branch indexing assumes f'(0) > 0")]
    NegativeSlope { d1: f64 },

    #[error("closed-form {which} = {closed} disagrees with finite differences ({numeric})")]
    InconsistentTaylor {
        which: &'static str,
        closed: f64,
        numeric: f64,
    },

    #[error("critical point of f at xi = {xi}: |f'(xi)| = {d1:e}")]
    CriticalPoint { xi: f64, d1: f64 },

    #[error("Newton iteration did not converge after {iterations} steps (last iterate {re} + {im}i, residual {residual:e})")]
    NewtonFailed {
        re: f64,
        im: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate bifurcation at k = {k}: C - H(k) B^2 is within tolerance of zero")]
    DegenerateDirection { k: i64 },

    #[error("bifurcation {k} is not subcritical for switching index n = {n}")]
    NotSubcritical { k: i64, n: i64 },

    #[error("solution diverged at t = {time}")]
    Divergence { time: f64 },

    #[error("no sustained oscillation: {0}")]
    NoOscillation(String),

    #[error("periodic orbit did not converge by t = {horizon} (relative drift {drift:e})")]
    NotConverged { horizon: f64, drift: f64 },

    #[error("bracket [{low}, {high}] does not straddle a decay/escape threshold: {reason}")]
    BracketNotStraddling { low: f64, high: f64, reason: String },

    #[error("trajectory covers [{have_start}, {have_end}] but [{need_start}, {need_end}] is required")]
    InsufficientCoverage {
        have_start: f64,
        have_end: f64,
        need_start: f64,
        need_end: f64,
    },

    #[error("trajectory knot spacing {spacing} exceeds {max}")]
    CoarseSampling { spacing: f64, max: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerical machinery (divergence, missing
    /// convergence) as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NewtonFailed { .. }
                | Error::Divergence { .. }
                | Error::NoOscillation(_)
                | Error::NotConverged { .. }
                | Error::BracketNotStraddling { .. }
        )
    }
}

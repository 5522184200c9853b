//! Hopf bifurcation analysis for the scalar delay equation
//! `x'(t) = -mu f(x(t-1))` with `f(0) = 0`.
//!
//! * [`nonlinearity`]: the feedback function and its Taylor data `(B, C)`.
//! * [`spectral`]: roots of `lambda = -mu exp(-lambda)`.
//! * [`bifurcation`]: direction of every Hopf point, in closed form and via
//!   the normal-form coefficient, and the resulting sequence type.
//! * [`cooke`] and [`period_bounds`]: the Cooke transform and the period
//!   estimates it yields along the branches.
//! * [`dde_sim`]: a method-of-steps integrator with periodic-orbit and
//!   basin-boundary tools to check all of the above numerically.

// `!(x > 0.0)` is used on purpose: it rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bifurcation;
pub mod cooke;
pub mod dde_sim;
pub mod error;
pub mod nonlinearity;
pub mod period_bounds;
pub mod spectral;

pub use error::{Error, Result};
pub use nonlinearity::{make_builtin, Nonlinearity, Preset};

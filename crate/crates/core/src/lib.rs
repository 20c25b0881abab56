//! Exact radial calculus and Monte Carlo samplers for diffusion on the
//! p-adic numbers.
//!
//! The library is organized bottom-up:
//!
//! * [`padic`] — finite-precision p-adic arithmetic, Haar measure on balls
//!   and circles, additive characters, uniform sampling.
//! * [`radial`] — series evaluation of the radial heat kernel, ball and
//!   circle masses, the exit-rate constant `alpha`, the closed-form exit
//!   probability, ball convolutions and bridge ball probabilities.
//! * [`sampler`] — increment, path and bridge samplers driven by the exact
//!   radial laws; reproducible under a fixed `(seed, stream_id)`.
//! * [`experiments`] — Monte Carlo estimators with confidence intervals and
//!   deterministic verification reports for the inequalities the kernel
//!   satisfies.
//! * [`stats`] — the small amount of statistics the experiments need
//!   (binomial standard errors, chi-square goodness of fit).
//!
//! All radii are integer exponents (`p^a`), never floating-point magnitudes,
//! so every ultrametric comparison is exact.

// `!(x > 0.0)` guards are deliberate: unlike `x <= 0.0` they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod padic;
pub mod radial;
pub mod sampler;
pub mod stats;

pub use error::{Error, Result};

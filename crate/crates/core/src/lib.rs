//! Zames-Falb multiplier synthesis and absolute-stability certification.
//!
//! The crate decides uniform feedback stability of a stable SISO LTI plant
//! `G` against monotone, odd-monotone and slope-restricted uncertainty by
//! searching for a multiplier `M(jω) = 1 - Z(jω)` with `‖z‖₁ ≤ 1`:
//!
//! - [`lti`]: real-rational transfer functions, Hurwitz tests, Nyquist sampling.
//! - [`multiplier`]: exponential kernel bases, `Z(jω)`, and the `Π` matrices.
//! - [`search`]: LP synthesis, grid re-verification, and the uniform gain bound.
//! - [`classes`]: representatives of the uncertainty classes, IQC tests and
//!   constructive falsification signals.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classes;
pub mod error;
pub mod lti;
pub mod multiplier;
pub mod search;

pub use error::{Error, Result};

//! Numerical kernels for the fractional-in-time Schrödinger equation:
//! special functions, Mittag-Leffler and Fox H evaluation, fractional
//! differentiation of sampled data and the particle-in-a-box model.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod error;
pub mod fox_h;
pub mod frac_deriv;
pub mod mittag_leffler;
pub mod model;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;

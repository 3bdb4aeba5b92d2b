//! Neumann Fučík eigenfunctions on `[0, π]`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod biorthogonal;
pub mod dilation;
pub mod eigenfunction;
pub mod error;
pub mod expansion;
pub mod output;
pub mod quadrature;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};

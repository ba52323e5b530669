//! Numerical core for weakly hyperbolic first-order systems
//! `D_t u = A(t, D_x) u` with polynomial-in-time coefficients.
//!
//! The crate is `no_std` (with `alloc`). File formats, the CLI and the
//! FFT-based Cauchy solver live in the `hyposym` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod catalog;
pub mod conditions;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod quasi_sym;
pub mod reduction;
pub mod solver;
pub mod symbol;

pub use error::{Error, Result};
pub use poly::Poly;
pub use symbol::SystemSymbol;

//! Dense complex matrices, Hermitian eigendecomposition and the functional
//! calculus built on top of it.
//!
//! Everything here is deliberately small: the matrices handled by this crate
//! are at most a few hundred rows, and deterministic, full-accuracy
//! eigenvectors matter more than throughput.

mod calc;
mod eigh;
mod matrix;
mod svd;

pub use calc::{func_calc, indicator, norms, resolvent, Norms};
pub use eigh::{eigh, eigh_from_guess, eigh_with, EigenSystem, EighOptions};
pub use matrix::{HermitianMatrix, Matrix, HERMITIAN_INGEST_TOL};
pub use svd::{svd, Svd};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;

/// The imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

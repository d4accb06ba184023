//! Functions of Hermitian matrices under relatively bounded perturbations.
//!
//! The crate computes double operator integrals in the eigenbases of two
//! Hermitian matrices, the divided-difference symbols that represent
//! `f(B) - f(A)` through them, two-sided bounds on Schur multiplier norms with
//! explicit factorization certificates, spectral shift functions along the
//! path `A + tK`, and commutator / Cayley-transform identities.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod doi;
pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod perturb;
pub mod schur;
pub mod ssf;
pub mod symbols;

pub use error::{Error, Result};
pub use linalg::{
    eigh, func_calc, norms, EigenSystem, HermitianMatrix, Matrix, Norms, C64,
};
pub use symbols::{ScalarFunction, Symbol, Weight};

//! Arnoldi-Tikhonov regularization of linear discrete ill-posed problems,
//! with the Tikhonov parameter chosen at every Krylov iteration by
//! minimizing a projected generalized cross-validation function.
//!
//! The crate is organized bottom-up:
//!
//! - [`dense`]: self-contained dense kernels (QR, SVD, GSVD) that also serve
//!   as exact oracles for the projected computations,
//! - [`operator`]: the matrix-free operator interface,
//! - [`arnoldi`]: the Krylov decomposition `A W_m = W_{m+1} Hbar_m` and its
//!   decay diagnostics,
//! - [`spectral`]: approximate (generalized) singular triplets lifted from
//!   the projected factors,
//! - [`tikhonov`]: reduced and full-dimensional Tikhonov solves,
//! - [`gcv`]: full and projected GCV functions and their minimization,
//! - [`problems`]: classical test problems, noise, and the 2D blur operator,
//! - [`driver`]: the outer iteration, experiment orchestration and CSV/PGM
//!   artifacts consumed by the `atgcv` command line tool.

pub mod arnoldi;
pub mod dense;
pub mod driver;
pub mod error;
pub mod gcv;
pub mod operator;
pub mod problems;
pub mod spectral;
pub mod tikhonov;

pub use error::{Error, Result};

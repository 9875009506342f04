//! Self-contained dense linear algebra kernels: matrix/vector types,
//! Householder QR least squares, SVD and GSVD. These double as the exact
//! oracles for everything the Krylov side computes in projected form.

mod gsvd;
mod matrix;
mod qr;
mod svd;

pub use gsvd::{gsvd, GsvdPair};
pub use matrix::{matvec, Matrix, Vector};
pub use qr::{qr_lstsq, QrDecomp, RANK_TOL};
pub use svd::{spectral_norm, svd, SvdFactors};

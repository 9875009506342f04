//! Tikhonov solves: the reduced Krylov minimization for a given parameter,
//! and the full-dimensional dense solve used as its oracle.

use crate::arnoldi::ArnoldiDecomposition;
use crate::dense::{qr_lstsq, Matrix, Vector};
use crate::error::{Error, Result};

/// Solution of the reduced minimization
/// `min_y ||Hbar y - beta e_1||^2 + lambda^2 ||L_m y||^2`.
#[derive(Clone, Debug)]
pub struct ReducedSolution {
    pub y: Vector,
    pub lambda: f64,
    /// `||Hbar y - beta e_1||` (the data-fit part only).
    pub residual_norm: f64,
    /// `x = W_m y`, filled in by [`lift`] when requested.
    pub lifted: Option<Vector>,
}

/// Solve the reduced Tikhonov problem as the stacked least-squares system
/// `min || [Hbar; lambda L_m] y - [beta e_1; 0] ||` by Householder QR.
pub fn solve_reduced(
    hbar: &Matrix,
    lm: &Matrix,
    beta: f64,
    lambda: f64,
) -> Result<ReducedSolution> {
    let m = hbar.cols();
    if hbar.rows() != m + 1 {
        return Err(Error::DimensionMismatch(format!(
            "Hbar must be (m+1) x m, got {}x{}",
            hbar.rows(),
            hbar.cols()
        )));
    }
    if lm.rows() != m || lm.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "L_m must be {m}x{m}, got {}x{}",
            lm.rows(),
            lm.cols()
        )));
    }
    if beta <= 0.0 {
        return Err(Error::InvalidArgument("beta = ||b|| must be positive".into()));
    }
    if lambda < 0.0 {
        return Err(Error::InvalidArgument("lambda must be >= 0".into()));
    }
    let stacked = hbar.vstack(&lm.scaled(lambda));
    let mut rhs = Vector::zeros(2 * m + 1);
    rhs[0] = beta;
    let y = qr_lstsq(&stacked, &rhs)?;

    let mut resid = hbar.matvec(&y);
    resid[0] -= beta;
    Ok(ReducedSolution {
        residual_norm: resid.norm(),
        y,
        lambda,
        lifted: None,
    })
}

/// Lift reduced coordinates back to the full space: `x = W_m y`.
pub fn lift(state: &ArnoldiDecomposition, y: &Vector) -> Result<Vector> {
    state.lift(y)
}

/// Dense Tikhonov solve `min_x ||A x - b||^2 + lambda^2 ||L x||^2`,
/// the minimizer of the normal equations `(A^T A + lambda^2 L^T L) x = A^T b`,
/// computed from the stacked system by QR for conditioning. This is the
/// oracle every projected computation is checked against.
pub fn full_tikhonov(a: &Matrix, l: &Matrix, b: &Vector, lambda: f64) -> Result<Vector> {
    if a.cols() != l.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} columns, L has {}",
            a.cols(),
            l.cols()
        )));
    }
    a.check_matvec_dims(&Vector::zeros(a.cols()))?;
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} vs {} rows",
            b.len(),
            a.rows()
        )));
    }
    if lambda < 0.0 {
        return Err(Error::InvalidArgument("lambda must be >= 0".into()));
    }
    let stacked = a.vstack(&l.scaled(lambda));
    let mut rhs = Vector::zeros(stacked.rows());
    for i in 0..b.len() {
        rhs[i] = b[i];
    }
    qr_lstsq(&stacked, &rhs)
}

//! Generalized SVD of a matrix pair (A, B) sharing a column space:
//! `A X = U diag(s)`, `B X = V diag(c)` with orthonormal U, V columns,
//! nonsingular X and `s_i^2 + c_i^2 = 1`.
//!
//! Computed through the QR factorization of the stacked matrix [A; B]
//! followed by a CS-style decomposition of the partitioned orthonormal
//! factor. Only small pairs ever reach this routine, so the emphasis is on
//! transparency rather than scalability.

use super::matrix::{Matrix, Vector};
use super::qr::QrDecomp;
use super::svd::svd;
use crate::error::{Error, Result};

/// A cosine below this is treated as exactly zero, flagging an infinite
/// generalized singular value.
const C_TOL: f64 = 1e-10;

/// GSVD factors ordered by ascending generalized singular value
/// `gamma_i = s_i / c_i` (equivalently: `c` non-increasing, `s`
/// non-decreasing). A zero cosine is encoded as `gamma = +inf`.
///
/// `U` is square (`a.rows x a.rows`): its leading `n` columns pair with the
/// generalized values, the trailing ones complete the orthonormal basis.
/// `V` is `b.rows x n` with orthonormal columns, `X` is `n x n` nonsingular.
#[derive(Clone, Debug)]
pub struct GsvdPair {
    pub u: Matrix,
    pub v: Matrix,
    pub x: Matrix,
    pub s: Vector,
    pub c: Vector,
    pub gamma: Vector,
}

impl GsvdPair {
    pub fn n(&self) -> usize {
        self.x.cols()
    }

    /// Largest finite generalized singular value, if any.
    pub fn gamma_max_finite(&self) -> Option<f64> {
        self.gamma
            .iter()
            .rev()
            .find(|g| g.is_finite())
            .copied()
    }

    /// Smallest strictly positive generalized singular value.
    pub fn gamma_min_positive(&self) -> Option<f64> {
        self.gamma.iter().find(|g| **g > 0.0 && g.is_finite()).copied()
    }

    /// Number of infinite generalized singular values (zero cosines).
    pub fn infinite_count(&self) -> usize {
        self.gamma.iter().filter(|g| g.is_infinite()).count()
    }
}

/// Compute the GSVD of `(a, b)`. Requires `a.cols == b.cols`, `a.rows >=
/// a.cols`, and a stacked matrix `[a; b]` of full column rank.
pub fn gsvd(a: &Matrix, b: &Matrix) -> Result<GsvdPair> {
    let n = a.cols();
    if b.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "gsvd: column counts {} and {} differ",
            n,
            b.cols()
        )));
    }
    if a.rows() < n {
        return Err(Error::DimensionMismatch(format!(
            "gsvd: first factor must have rows >= cols, got {}x{}",
            a.rows(),
            n
        )));
    }
    let stacked = a.vstack(b);
    let qr = QrDecomp::factor(&stacked)?;
    if let Some((index, value)) = qr.rank_deficiency() {
        return Err(Error::RankDeficient { index, value });
    }
    let q = qr.thin_q();
    let q1 = Matrix::from_fn(a.rows(), n, |i, j| q[(i, j)]);
    let q2 = Matrix::from_fn(b.rows(), n, |i, j| q[(a.rows() + i, j)]);

    // CS step: SVD of the top block. Its singular values are the sines.
    let f = svd(&q1)?;

    // Reorder to ascending sines (descending cosines); the complement
    // columns of U stay at the end.
    let mut u = Matrix::zeros(a.rows(), a.rows());
    let mut w = Matrix::zeros(n, n);
    let mut s = Vector::zeros(n);
    for j in 0..n {
        let src = n - 1 - j;
        // Clamp roundoff: sines of an orthonormal block cannot exceed 1.
        s[j] = f.sigma[src].min(1.0);
        for i in 0..a.rows() {
            u[(i, j)] = f.u[(i, src)];
        }
        for i in 0..n {
            w[(i, j)] = f.v[(i, src)];
        }
    }
    for j in n..a.rows() {
        for i in 0..a.rows() {
            u[(i, j)] = f.u[(i, j)];
        }
    }

    // Cosines from the bottom block: c_i = ||Q2 w_i||, exact complement of
    // the sines because Q has orthonormal columns.
    let mut v = Matrix::zeros(b.rows(), n);
    let mut c = Vector::zeros(n);
    let mut deferred = Vec::new();
    for j in 0..n {
        let q2w = q2.matvec(&w.col(j));
        let cj = q2w.norm();
        if cj > C_TOL {
            c[j] = cj;
            v.set_col(j, &q2w.scaled(1.0 / cj));
        } else {
            c[j] = 0.0;
            deferred.push(j);
        }
    }
    // Zero-cosine columns of V carry no constraint; complete them to an
    // orthonormal set so V stays well defined.
    for j in deferred {
        let col = orthonormal_completion(&v, b.rows())?;
        v.set_col(j, &col);
    }

    let gamma = Vector::from_vec(
        (0..n)
            .map(|j| if c[j] == 0.0 { f64::INFINITY } else { s[j] / c[j] })
            .collect(),
    );

    // X = R^{-1} W, column by column.
    let mut x = Matrix::zeros(n, n);
    for j in 0..n {
        let col = qr.solve_r(&w.col(j))?;
        x.set_col(j, &col);
    }

    Ok(GsvdPair { u, v, x, s, c, gamma })
}

/// A unit vector orthogonal to all current nonzero columns of `v`.
fn orthonormal_completion(v: &Matrix, dim: usize) -> Result<Vector> {
    let mut best: Option<(f64, Vector)> = None;
    for k in 0..dim {
        let mut cand = Vector::basis(dim, k);
        for j in 0..v.cols() {
            let col = v.col(j);
            let nrm = col.norm();
            if nrm < 0.5 {
                continue; // unset column
            }
            let d = cand.dot(&col);
            cand.axpy(-d, &col);
        }
        // Second orthogonalization pass for safety.
        for j in 0..v.cols() {
            let col = v.col(j);
            if col.norm() < 0.5 {
                continue;
            }
            let d = cand.dot(&col);
            cand.axpy(-d, &col);
        }
        let nrm = cand.norm();
        if best.as_ref().map_or(true, |(b, _)| nrm > *b) {
            best = Some((nrm, cand));
        }
        if nrm > 0.7 {
            break;
        }
    }
    match best {
        Some((nrm, mut v)) if nrm > 1e-8 => {
            v.scale(1.0 / nrm);
            Ok(v)
        }
        _ => Err(Error::NonFinite("orthonormal completion failed".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_matrix(n: usize, seed: u64) -> Matrix {
        // Small deterministic pseudo-random fill.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        Matrix::from_fn(n, n, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64) / (u32::MAX as f64) - 0.5
        })
    }

    #[test]
    fn identity_pair_has_unit_gammas() {
        let a = Matrix::identity(4);
        let b = Matrix::identity(4);
        let p = gsvd(&a, &b).unwrap();
        for i in 0..4 {
            assert!((p.gamma[i] - 1.0).abs() < 1e-12, "gamma {} = {}", i, p.gamma[i]);
        }
    }

    #[test]
    fn identity_regularizer_reduces_to_svd() {
        let a = test_matrix(5, 3);
        let p = gsvd(&a, &Matrix::identity(5)).unwrap();
        let f = svd(&a).unwrap();
        // gamma ascending vs sigma descending.
        for i in 0..5 {
            let g = p.gamma[i];
            let sv = f.sigma[4 - i];
            assert!((g - sv).abs() <= 1e-10 * (1.0 + sv), "gamma {g} vs sigma {sv}");
        }
    }

    #[test]
    fn factorization_identities() {
        let a = test_matrix(6, 11);
        let b = test_matrix(6, 12);
        let p = gsvd(&a, &b).unwrap();
        let ax = a.matmul(&p.x);
        let us = Matrix::from_fn(6, 6, |i, j| p.u[(i, j)] * p.s[j]);
        assert!(ax.sub(&us).frobenius_norm() <= 1e-10 * a.frobenius_norm());
        let bx = b.matmul(&p.x);
        let vc = Matrix::from_fn(6, 6, |i, j| p.v[(i, j)] * p.c[j]);
        assert!(bx.sub(&vc).frobenius_norm() <= 1e-10 * (b.frobenius_norm() + 1.0));
        // Normalization.
        for i in 0..6 {
            assert!((p.s[i] * p.s[i] + p.c[i] * p.c[i] - 1.0).abs() < 1e-12);
        }
        // Ordering: c non-increasing.
        for i in 1..6 {
            assert!(p.c[i] <= p.c[i - 1] + 1e-12);
        }
    }

    #[test]
    fn rank_deficient_stack_rejected() {
        let a = Matrix::zeros(3, 3);
        let b = Matrix::zeros(3, 3);
        assert!(matches!(gsvd(&a, &b), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn zero_cosine_flagged_infinite() {
        // B annihilates e1, so gamma_1 = inf.
        let a = Matrix::identity(3);
        let b = Matrix::from_diag(&[0.0, 1.0, 1.0]);
        let p = gsvd(&a, &b).unwrap();
        assert_eq!(p.infinite_count(), 1);
        assert!(p.gamma[2].is_infinite());
    }
}

//! Singular value decomposition by Householder bidiagonalization followed by
//! implicit-shift QR sweeps on the bidiagonal factor.

use super::matrix::{Matrix, Vector};
use crate::error::{Error, Result};

/// Relative deflation tolerance per off-diagonal element.
const OFFDIAG_TOL: f64 = 1e-14;

/// Full SVD factors `A = U diag(sigma) V^T` with square orthogonal `U`
/// (`rows x rows`) and `V` (`cols x cols`); `sigma` is non-increasing with
/// `min(rows, cols)` entries.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    pub u: Matrix,
    pub sigma: Vector,
    pub v: Matrix,
}

impl SvdFactors {
    /// `U diag(sigma) V^T` with the rectangular diagonal embedding.
    pub fn reconstruct(&self) -> Matrix {
        let rows = self.u.rows();
        let cols = self.v.rows();
        let k = self.sigma.len();
        let mut us = Matrix::zeros(rows, cols);
        for j in 0..k {
            let s = self.sigma[j];
            for i in 0..rows {
                us[(i, j)] = self.u[(i, j)] * s;
            }
        }
        us.matmul(&self.v.transpose())
    }
}

/// Compute the SVD of any finite dense matrix.
pub fn svd(a: &Matrix) -> Result<SvdFactors> {
    if !a.is_finite() {
        return Err(Error::NonFinite("svd input".into()));
    }
    if a.rows() < a.cols() {
        let f = svd(&a.transpose())?;
        return Ok(SvdFactors { u: f.v, sigma: f.sigma, v: f.u });
    }
    let m = a.rows();
    let n = a.cols();
    let mut u = Matrix::identity(m);
    let mut v = Matrix::identity(n);
    if n == 0 {
        return Ok(SvdFactors { u, sigma: Vector::zeros(0), v });
    }
    let mut work = a.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    bidiagonalize(&mut work, &mut u, &mut v, &mut diag, &mut off);

    let cap = 100 * n.max(1);
    bidiagonal_qr(&mut diag, &mut off, &mut u, &mut v, cap)?;

    // Flip signs so every singular value is non-negative.
    for j in 0..n {
        if diag[j] < 0.0 {
            diag[j] = -diag[j];
            for i in 0..m {
                u[(i, j)] = -u[(i, j)];
            }
        }
    }
    // Sort descending, permuting the leading n columns of U and V.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let sigma = Vector::from_vec(order.iter().map(|&i| diag[i]).collect());
    let mut u_sorted = u.clone();
    let mut v_sorted = v.clone();
    for (newj, &oldj) in order.iter().enumerate() {
        for i in 0..m {
            u_sorted[(i, newj)] = u[(i, oldj)];
        }
        for i in 0..n {
            v_sorted[(i, newj)] = v[(i, oldj)];
        }
    }
    Ok(SvdFactors { u: u_sorted, sigma, v: v_sorted })
}

/// Largest singular value.
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    let f = svd(a)?;
    Ok(if f.sigma.len() == 0 { 0.0 } else { f.sigma[0] })
}

/// Reduce `work` (m x n, m >= n) to upper bidiagonal form, accumulating the
/// left transform into `u` (m x m) and the right transform into `v` (n x n).
fn bidiagonalize(
    work: &mut Matrix,
    u: &mut Matrix,
    v: &mut Matrix,
    diag: &mut [f64],
    off: &mut [f64],
) {
    let m = work.rows();
    let n = work.cols();
    for k in 0..n {
        // Left reflector zeroing work[k+1.., k].
        let mut norm_sq = 0.0;
        for i in k..m {
            norm_sq += work[(i, k)] * work[(i, k)];
        }
        if norm_sq > 0.0 {
            let norm = norm_sq.sqrt();
            let akk = work[(k, k)];
            let alpha = if akk >= 0.0 { -norm } else { norm };
            let v0 = akk - alpha;
            let beta = 2.0 / (norm_sq - 2.0 * alpha * akk + alpha * alpha);
            work[(k, k)] = v0;
            for j in (k + 1)..n {
                let mut dot = 0.0;
                for i in k..m {
                    dot += work[(i, k)] * work[(i, j)];
                }
                let t = beta * dot;
                for i in k..m {
                    let w = work[(i, k)];
                    work[(i, j)] -= t * w;
                }
            }
            // u <- u * H_k
            for r in 0..m {
                let mut dot = 0.0;
                for i in k..m {
                    dot += u[(r, i)] * work[(i, k)];
                }
                let t = beta * dot;
                for i in k..m {
                    let w = work[(i, k)];
                    u[(r, i)] -= t * w;
                }
            }
            diag[k] = alpha;
        } else {
            diag[k] = 0.0;
        }

        // Right reflector zeroing work[k, k+2..].
        if k + 2 < n {
            let mut norm_sq = 0.0;
            for j in (k + 1)..n {
                norm_sq += work[(k, j)] * work[(k, j)];
            }
            if norm_sq > 0.0 {
                let norm = norm_sq.sqrt();
                let akk1 = work[(k, k + 1)];
                let alpha = if akk1 >= 0.0 { -norm } else { norm };
                let v0 = akk1 - alpha;
                let beta = 2.0 / (norm_sq - 2.0 * alpha * akk1 + alpha * alpha);
                work[(k, k + 1)] = v0;
                for i in (k + 1)..m {
                    let mut dot = 0.0;
                    for j in (k + 1)..n {
                        dot += work[(k, j)] * work[(i, j)];
                    }
                    let t = beta * dot;
                    for j in (k + 1)..n {
                        let w = work[(k, j)];
                        work[(i, j)] -= t * w;
                    }
                }
                // v <- v * H_k
                for r in 0..n {
                    let mut dot = 0.0;
                    for j in (k + 1)..n {
                        dot += v[(r, j)] * work[(k, j)];
                    }
                    let t = beta * dot;
                    for j in (k + 1)..n {
                        let w = work[(k, j)];
                        v[(r, j)] -= t * w;
                    }
                }
                off[k] = alpha;
            } else {
                off[k] = 0.0;
            }
        } else if k + 1 < n {
            off[k] = work[(k, k + 1)];
        }
    }
}

#[inline]
fn givens(a: f64, b: f64) -> (f64, f64, f64) {
    // c*a + s*b = r, -s*a + c*b = 0, c^2 + s^2 = 1, r >= 0.
    if b == 0.0 && a == 0.0 {
        return (1.0, 0.0, 0.0);
    }
    let r = a.hypot(b);
    (a / r, b / r, r)
}

/// Rotate columns p and q of `mat` by (c, s).
#[inline]
fn rotate_cols(mat: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..mat.rows() {
        let a = mat[(i, p)];
        let b = mat[(i, q)];
        mat[(i, p)] = c * a + s * b;
        mat[(i, q)] = -s * a + c * b;
    }
}

/// Implicit-shift QR on the bidiagonal (diag, off), accumulating rotations.
fn bidiagonal_qr(
    diag: &mut [f64],
    off: &mut [f64],
    u: &mut Matrix,
    v: &mut Matrix,
    cap: usize,
) -> Result<()> {
    let n = diag.len();
    if n <= 1 {
        return Ok(());
    }
    let mut sweeps = 0usize;
    let mut hi = n - 1;
    'outer: while hi > 0 {
        // Deflate converged trailing off-diagonals.
        while hi > 0 {
            let tol = OFFDIAG_TOL * (diag[hi - 1].abs() + diag[hi].abs());
            if off[hi - 1].abs() <= tol {
                off[hi - 1] = 0.0;
                hi -= 1;
            } else {
                break;
            }
        }
        if hi == 0 {
            break;
        }
        // Find the start of the unreduced block [lo, hi].
        let mut lo = hi - 1;
        while lo > 0 {
            let tol = OFFDIAG_TOL * (diag[lo - 1].abs() + diag[lo].abs());
            if off[lo - 1].abs() <= tol {
                off[lo - 1] = 0.0;
                break;
            }
            lo -= 1;
        }

        // A negligible diagonal inside the block forces a zero singular
        // value: chase the off-diagonal entry of that row away with left
        // rotations, then restart.
        let scale = diag[lo..=hi]
            .iter()
            .chain(off[lo..hi].iter())
            .fold(0.0f64, |m, x| m.max(x.abs()));
        if diag[hi].abs() <= OFFDIAG_TOL * scale {
            // Zero last diagonal: chase off[hi-1] upward with right rotations.
            diag[hi] = 0.0;
            let mut bulge = off[hi - 1];
            off[hi - 1] = 0.0;
            for j in (lo..hi).rev() {
                let (c, s, r) = givens(diag[j], bulge);
                diag[j] = r;
                rotate_cols(v, j, hi, c, s);
                if j > lo {
                    bulge = -s * off[j - 1];
                    off[j - 1] *= c;
                }
            }
            sweeps += 1;
            if sweeps > cap {
                return Err(Error::SvdNonConvergence { sweeps });
            }
            continue 'outer;
        }
        for i in lo..hi {
            if diag[i].abs() <= OFFDIAG_TOL * scale {
                diag[i] = 0.0;
                let mut bulge = off[i];
                off[i] = 0.0;
                for j in (i + 1)..=hi {
                    // Left rotation in rows (j, i) zeroing the (i, j) entry.
                    let (c, s, r) = givens(diag[j], bulge);
                    diag[j] = r;
                    rotate_cols(u, j, i, c, s);
                    if j < hi {
                        bulge = -s * off[j];
                        off[j] *= c;
                    }
                }
                sweeps += 1;
                if sweeps > cap {
                    return Err(Error::SvdNonConvergence { sweeps });
                }
                continue 'outer;
            }
        }

        // Wilkinson shift from the trailing 2x2 of B^T B.
        let dm = diag[hi - 1];
        let dn = diag[hi];
        let em = off[hi - 1];
        let em1 = if hi >= 2 && hi - 1 > lo { off[hi - 2] } else { 0.0 };
        let t11 = dm * dm + em1 * em1;
        let t22 = dn * dn + em * em;
        let t12 = dm * em;
        let mu = if t12 == 0.0 {
            t22
        } else {
            let d = (t11 - t22) / 2.0;
            let sgn = if d >= 0.0 { 1.0 } else { -1.0 };
            t22 - t12 * t12 / (d + sgn * (d * d + t12 * t12).sqrt())
        };

        // One implicit QR step with bulge chasing.
        let y = diag[lo] * diag[lo] - mu;
        let z = diag[lo] * off[lo];
        let (mut c, mut s, _) = givens(y, z);

        // Right rotation on columns (lo, lo+1).
        {
            let d0 = diag[lo];
            let e0 = off[lo];
            diag[lo] = c * d0 + s * e0;
            off[lo] = -s * d0 + c * e0;
        }
        let mut bulge = s * diag[lo + 1];
        diag[lo + 1] *= c;
        rotate_cols(v, lo, lo + 1, c, s);

        let mut k = lo;
        loop {
            // Left rotation on rows (k, k+1) zeroing the (k+1, k) bulge.
            let (c1, s1, r1) = givens(diag[k], bulge);
            c = c1;
            s = s1;
            diag[k] = r1;
            let ek = off[k];
            let dk1 = diag[k + 1];
            off[k] = c * ek + s * dk1;
            diag[k + 1] = -s * ek + c * dk1;
            rotate_cols(u, k, k + 1, c, s);
            if k + 1 > hi - 1 {
                break;
            }
            let bulge2 = s * off[k + 1];
            off[k + 1] *= c;

            // Right rotation on columns (k+1, k+2) zeroing the (k, k+2) bulge.
            let (c2, s2, r2) = givens(off[k], bulge2);
            c = c2;
            s = s2;
            off[k] = r2;
            let dk1b = diag[k + 1];
            let ek1 = off[k + 1];
            diag[k + 1] = c * dk1b + s * ek1;
            off[k + 1] = -s * dk1b + c * ek1;
            bulge = s * diag[k + 2];
            diag[k + 2] *= c;
            rotate_cols(v, k + 1, k + 2, c, s);
            k += 1;
        }

        sweeps += 1;
        if sweeps > cap {
            return Err(Error::SvdNonConvergence { sweeps });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let a = Matrix::from_diag(&[3.0, 2.0, 1.0]);
        let f = svd(&a).unwrap();
        assert!((f.sigma[0] - 3.0).abs() < 1e-14);
        assert!((f.sigma[1] - 2.0).abs() < 1e-14);
        assert!((f.sigma[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_matrix_has_unit_singular_values() {
        // Rotation by an irrational-ish angle.
        let t = 0.7f64;
        let a = Matrix::from_rows(&[&[t.cos(), -t.sin()], &[t.sin(), t.cos()]]);
        let f = svd(&a).unwrap();
        for i in 0..2 {
            assert!((f.sigma[i] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruction_small() {
        let a = Matrix::from_fn(6, 4, |i, j| ((7 * i + 3 * j + 2) % 13) as f64 - 6.0);
        let f = svd(&a).unwrap();
        let err = f.reconstruct().sub(&a).frobenius_norm();
        assert!(err <= 1e-10 * a.frobenius_norm().max(1.0), "rec err {err:e}");
        // Orthogonality of both factors.
        let uerr = f.u.transpose().matmul(&f.u).sub(&Matrix::identity(6)).frobenius_norm();
        let verr = f.v.transpose().matmul(&f.v).sub(&Matrix::identity(4)).frobenius_norm();
        assert!(uerr < 1e-12 * 6.0 && verr < 1e-12 * 4.0);
    }

    #[test]
    fn wide_matrix_via_transpose() {
        let a = Matrix::from_fn(3, 5, |i, j| (i as f64 + 1.0) * (j as f64 - 2.0) + 0.5);
        let f = svd(&a).unwrap();
        let err = f.reconstruct().sub(&a).frobenius_norm();
        assert!(err <= 1e-10 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn rank_deficient_has_zero_sigma() {
        // Rank 1 by construction.
        let a = Matrix::from_fn(4, 4, |i, j| ((i + 1) * (j + 1)) as f64);
        let f = svd(&a).unwrap();
        assert!(f.sigma[1].abs() < 1e-12 * f.sigma[0]);
        let err = f.reconstruct().sub(&a).frobenius_norm();
        assert!(err <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn spectral_norm_trivial() {
        assert!((spectral_norm(&Matrix::identity(4)).unwrap() - 1.0).abs() < 1e-14);
        let d = Matrix::from_diag(&[0.0, 0.0, 5.0]);
        assert!((spectral_norm(&d).unwrap() - 5.0).abs() < 1e-14);
    }
}

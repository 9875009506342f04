//! Householder QR factorization and least-squares solves.

use super::matrix::{Matrix, Vector};
use crate::error::{Error, Result};

/// Relative tolerance on |R[i,i]| below which the factor is declared rank
/// deficient.
pub const RANK_TOL: f64 = 1e-12;

/// Packed Householder QR of an `m x n` matrix with `m >= n`.
///
/// The reflectors are stored below the diagonal of `qr`, the upper triangle
/// holds `R`.
pub struct QrDecomp {
    m: usize,
    n: usize,
    qr: Matrix,
    betas: Vec<f64>,
    rdiag: Vec<f64>,
}

impl QrDecomp {
    pub fn factor(a: &Matrix) -> Result<QrDecomp> {
        let (m, n) = (a.rows(), a.cols());
        if m < n {
            return Err(Error::DimensionMismatch(format!(
                "qr requires rows >= cols, got {}x{}",
                m, n
            )));
        }
        let mut qr = a.clone();
        let mut betas = vec![0.0; n];
        let mut rdiag = vec![0.0; n];

        for k in 0..n {
            // Householder vector for column k, rows k..m.
            let mut norm_sq = 0.0;
            for i in k..m {
                norm_sq += qr[(i, k)] * qr[(i, k)];
            }
            let norm = norm_sq.sqrt();
            if norm == 0.0 {
                betas[k] = 0.0;
                rdiag[k] = 0.0;
                continue;
            }
            let akk = qr[(k, k)];
            let alpha = if akk >= 0.0 { -norm } else { norm };
            let v0 = akk - alpha;
            // beta = 2 / v^T v with v = x - alpha e1.
            let vtv = norm_sq - 2.0 * alpha * akk + alpha * alpha;
            let beta = 2.0 / vtv;
            qr[(k, k)] = v0;
            betas[k] = beta;
            rdiag[k] = alpha;

            // Apply I - beta v v^T to the trailing columns.
            for j in (k + 1)..n {
                let mut dot = 0.0;
                for i in k..m {
                    dot += qr[(i, k)] * qr[(i, j)];
                }
                let t = beta * dot;
                for i in k..m {
                    let vik = qr[(i, k)];
                    qr[(i, j)] -= t * vik;
                }
            }
        }
        Ok(QrDecomp { m, n, qr, betas, rdiag })
    }

    /// Largest |R[i,i]|.
    pub fn rdiag_max(&self) -> f64 {
        self.rdiag.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    /// Index of the first diagonal entry under the relative rank tolerance.
    pub fn rank_deficiency(&self) -> Option<(usize, f64)> {
        let tol = RANK_TOL * self.rdiag_max();
        self.rdiag
            .iter()
            .enumerate()
            .find(|(_, r)| r.abs() <= tol)
            .map(|(i, r)| (i, r.abs()))
    }

    /// Apply `Q^T` to a full-length vector in place.
    pub fn apply_qt(&self, x: &mut Vector) {
        assert_eq!(x.len(), self.m);
        for k in 0..self.n {
            let beta = self.betas[k];
            if beta == 0.0 {
                continue;
            }
            let mut dot = 0.0;
            for i in k..self.m {
                dot += self.qr[(i, k)] * x[i];
            }
            let t = beta * dot;
            for i in k..self.m {
                x[i] -= t * self.qr[(i, k)];
            }
        }
    }

    /// Apply `Q` to a full-length vector in place.
    pub fn apply_q(&self, x: &mut Vector) {
        assert_eq!(x.len(), self.m);
        for k in (0..self.n).rev() {
            let beta = self.betas[k];
            if beta == 0.0 {
                continue;
            }
            let mut dot = 0.0;
            for i in k..self.m {
                dot += self.qr[(i, k)] * x[i];
            }
            let t = beta * dot;
            for i in k..self.m {
                x[i] -= t * self.qr[(i, k)];
            }
        }
    }

    /// Thin orthonormal factor `Q` (`m x n`).
    pub fn thin_q(&self) -> Matrix {
        let mut q = Matrix::zeros(self.m, self.n);
        for j in 0..self.n {
            let mut e = Vector::basis(self.m, j);
            self.apply_q(&mut e);
            q.set_col(j, &e);
        }
        q
    }

    /// Upper triangular factor `R` (`n x n`).
    pub fn r(&self) -> Matrix {
        let mut r = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            r[(i, i)] = self.rdiag[i];
            for j in (i + 1)..self.n {
                r[(i, j)] = self.qr[(i, j)];
            }
        }
        r
    }

    /// Solve `R y = c` by back substitution; errors on rank deficiency.
    pub fn solve_r(&self, c: &Vector) -> Result<Vector> {
        if let Some((index, value)) = self.rank_deficiency() {
            return Err(Error::RankDeficient { index, value });
        }
        assert_eq!(c.len(), self.n);
        let mut y = c.clone();
        for i in (0..self.n).rev() {
            let mut s = y[i];
            for j in (i + 1)..self.n {
                s -= self.qr[(i, j)] * y[j];
            }
            y[i] = s / self.rdiag[i];
        }
        Ok(y)
    }

    /// Minimize `||A x - b||` for the factored `A`.
    pub fn lstsq(&self, b: &Vector) -> Result<Vector> {
        if b.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "lstsq rhs length {} for {}x{} system",
                b.len(),
                self.m,
                self.n
            )));
        }
        let mut qtb = b.clone();
        self.apply_qt(&mut qtb);
        let head = Vector::from_vec(qtb.as_slice()[..self.n].to_vec());
        self.solve_r(&head)
    }
}

/// Least-squares solve of an overdetermined full-rank system by Householder QR.
pub fn qr_lstsq(a: &Matrix, b: &Vector) -> Result<Vector> {
    QrDecomp::factor(a)?.lstsq(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let a = Matrix::identity(3);
        let b = Vector::from_vec(vec![1.0, 2.0, 3.0]);
        let x = qr_lstsq(&a, &b).unwrap();
        for i in 0..3 {
            assert!((x[i] - b[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn overdetermined_mean() {
        // min over x of (x-0)^2 + (x-2)^2 is attained at the mean.
        let a = Matrix::from_rows(&[&[1.0], &[1.0]]);
        let b = Vector::from_vec(vec![0.0, 2.0]);
        let x = qr_lstsq(&a, &b).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_detected() {
        let a = Matrix::from_rows(&[&[1.0, 1.0], &[1.0, 1.0], &[1.0, 1.0]]);
        let b = Vector::from_vec(vec![1.0, 1.0, 1.0]);
        match qr_lstsq(&a, &b) {
            Err(Error::RankDeficient { .. }) => {}
            other => panic!("expected rank error, got {:?}", other.map(|v| v.len())),
        }
    }

    #[test]
    fn thin_q_is_orthonormal() {
        let a = Matrix::from_fn(7, 4, |i, j| ((3 * i + 5 * j + 1) % 11) as f64 - 5.0);
        let f = QrDecomp::factor(&a).unwrap();
        let q = f.thin_q();
        let qtq = q.transpose().matmul(&q);
        let err = qtq.sub(&Matrix::identity(4)).frobenius_norm();
        assert!(err < 1e-12 * 4.0, "orthogonality error {err:e}");
        // Reconstruction: A = Q R.
        let rec = q.matmul(&f.r()).sub(&a).frobenius_norm();
        assert!(rec < 1e-12 * a.frobenius_norm());
    }
}

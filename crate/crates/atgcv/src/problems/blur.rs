//! Matrix-free 2D Gaussian blur operator `A = T (x) T` with a banded
//! symmetric Toeplitz factor, and the Kronecker-sum first-derivative
//! regularizer `L = I (x) L1 + L1 (x) I`.
//!
//! Vectors of length `n^2` are column-stacked images; the Kronecker
//! identities turn every application into a pair of banded `n x n` matrix
//! products, so nothing of size `n^2 x n^2` is ever formed.

use super::deriv1;
use crate::dense::{Matrix, Vector};
use crate::error::{Error, Result};
use crate::operator::LinearOperator;

/// Parameters of the Gaussian point spread function.
#[derive(Clone, Copy, Debug)]
pub struct BlurConfig {
    /// Image side length; the operator acts on n^2 pixels.
    pub n: usize,
    /// Half-bandwidth of the Toeplitz factor (>= 1).
    pub band: usize,
    /// Spread of the Gaussian (> 0).
    pub sigma: f64,
}

impl BlurConfig {
    pub fn validate(&self) -> Result<()> {
        if self.band < 1 || self.band > self.n {
            return Err(Error::InvalidArgument(format!(
                "band {} outside 1..={}",
                self.band, self.n
            )));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidArgument("sigma must be positive".into()));
        }
        if self.n < 2 {
            return Err(Error::InvalidArgument("image side must be at least 2".into()));
        }
        Ok(())
    }
}

/// The blur operator `A = T (x) T`, applied as `T X T` on the reshaped
/// image (T is symmetric). Cost per application is O(n^2 band).
pub struct BlurOperator {
    n: usize,
    /// First column of the banded symmetric Toeplitz factor, length `band`.
    stencil: Vec<f64>,
}

/// Build the blur operator: `T[i][j] = z exp(-(i-j)^2 / (2 sigma^2))` for
/// `|i-j| < band`, zero elsewhere, with `z = 1 / (sigma sqrt(2 pi))`.
pub fn blur_operator(cfg: &BlurConfig) -> Result<BlurOperator> {
    cfg.validate()?;
    let z = 1.0 / (cfg.sigma * (2.0 * std::f64::consts::PI).sqrt());
    let stencil = (0..cfg.band)
        .map(|d| z * (-((d * d) as f64) / (2.0 * cfg.sigma * cfg.sigma)).exp())
        .collect();
    Ok(BlurOperator { n: cfg.n, stencil })
}

impl BlurOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dense Toeplitz factor, for oracles and condition estimates.
    pub fn factor_dense(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| {
            let d = i.abs_diff(j);
            if d < self.stencil.len() {
                self.stencil[d]
            } else {
                0.0
            }
        })
    }

    /// y = T x for one image row/column.
    fn toeplitz_apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        let band = self.stencil.len();
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = i.saturating_sub(band - 1);
            let hi = (i + band).min(n);
            let mut s = 0.0;
            for j in lo..hi {
                s += self.stencil[i.abs_diff(j)] * x[j];
            }
            *yi = s;
        }
    }
}

impl LinearOperator for BlurOperator {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn apply(&self, x: &Vector) -> Vector {
        let n = self.n;
        assert_eq!(x.len(), n * n, "blur operator dimension mismatch");
        // Column-stacked image: X[i][j] = x[j*n + i]. Apply T to every
        // column, then to every row.
        let mut tmp = vec![0.0; n * n];
        for j in 0..n {
            self.toeplitz_apply(&x.as_slice()[j * n..(j + 1) * n], &mut tmp[j * n..(j + 1) * n]);
        }
        let mut out = vec![0.0; n * n];
        let mut row_in = vec![0.0; n];
        let mut row_out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                row_in[j] = tmp[j * n + i];
            }
            self.toeplitz_apply(&row_in, &mut row_out);
            for j in 0..n {
                out[j * n + i] = row_out[j];
            }
        }
        Vector::from_vec(out)
    }

    fn apply_transpose(&self, x: &Vector) -> Vector {
        // T is symmetric, so A = T (x) T is too.
        self.apply(x)
    }
}

/// The Kronecker-sum regularizer `L = I (x) L1 + L1 (x) I` with `L1` the
/// first-derivative operator; applies as `L1 X + X L1^T` on the image.
pub struct KronRegularizer {
    n: usize,
}

pub fn kron_regularizer(n: usize) -> Result<KronRegularizer> {
    if n < 2 {
        return Err(Error::InvalidArgument("kron regularizer needs n >= 2".into()));
    }
    Ok(KronRegularizer { n })
}

impl KronRegularizer {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dense factor `L1`, for explicit-assembly oracles.
    pub fn factor_dense(&self) -> Matrix {
        deriv1(self.n)
    }

    /// y = L1 x: forward difference with a zero last entry.
    fn d_apply(x: &[f64], y: &mut [f64]) {
        let n = x.len();
        for i in 0..n - 1 {
            y[i] = x[i] - x[i + 1];
        }
        y[n - 1] = 0.0;
    }

    /// y = L1^T x: adjoint of the forward difference.
    fn dt_apply(x: &[f64], y: &mut [f64]) {
        let n = x.len();
        y[0] = x[0];
        for i in 1..n - 1 {
            y[i] = x[i] - x[i - 1];
        }
        y[n - 1] = -x[n - 2];
    }
}

impl LinearOperator for KronRegularizer {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn apply(&self, x: &Vector) -> Vector {
        let n = self.n;
        assert_eq!(x.len(), n * n, "kron regularizer dimension mismatch");
        let mut out = vec![0.0; n * n];
        // (I (x) L1) vec(X) = vec(L1 X): difference down every column.
        let mut col_out = vec![0.0; n];
        for j in 0..n {
            Self::d_apply(&x.as_slice()[j * n..(j + 1) * n], &mut col_out);
            out[j * n..(j + 1) * n].copy_from_slice(&col_out);
        }
        // (L1 (x) I) vec(X) = vec(X L1^T): difference along every row.
        let mut row_in = vec![0.0; n];
        let mut row_out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                row_in[j] = x[j * n + i];
            }
            Self::d_apply(&row_in, &mut row_out);
            for j in 0..n {
                out[j * n + i] += row_out[j];
            }
        }
        Vector::from_vec(out)
    }

    fn apply_transpose(&self, x: &Vector) -> Vector {
        let n = self.n;
        assert_eq!(x.len(), n * n, "kron regularizer dimension mismatch");
        let mut out = vec![0.0; n * n];
        let mut col_out = vec![0.0; n];
        for j in 0..n {
            Self::dt_apply(&x.as_slice()[j * n..(j + 1) * n], &mut col_out);
            out[j * n..(j + 1) * n].copy_from_slice(&col_out);
        }
        let mut row_in = vec![0.0; n];
        let mut row_out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                row_in[j] = x[j * n + i];
            }
            Self::dt_apply(&row_in, &mut row_out);
            for j in 0..n {
                out[j * n + i] += row_out[j];
            }
        }
        Vector::from_vec(out)
    }
}

/// Explicit Kronecker product, for test oracles on small sizes.
pub fn kron_dense(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    Matrix::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_one_is_diagonal_scaling() {
        let cfg = BlurConfig { n: 5, band: 1, sigma: 1.0 };
        let op = blur_operator(&cfg).unwrap();
        let e1 = Vector::basis(25, 0);
        let y = op.apply(&e1);
        let z = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((y[0] - z * z).abs() < 1e-15);
        for i in 1..25 {
            assert_eq!(y[i], 0.0);
        }
    }

    #[test]
    fn blur_is_symmetric_on_probes() {
        let cfg = BlurConfig { n: 6, band: 3, sigma: 1.5 };
        let op = blur_operator(&cfg).unwrap();
        let x = Vector::from_vec((0..36).map(|i| ((i * 7 + 3) % 11) as f64 - 5.0).collect());
        let y = Vector::from_vec((0..36).map(|i| ((i * 5 + 1) % 13) as f64 - 6.0).collect());
        let lhs = op.apply(&x).dot(&y);
        let rhs = x.dot(&op.apply(&y));
        assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn matches_explicit_kronecker_assembly() {
        let cfg = BlurConfig { n: 8, band: 3, sigma: 1.0 };
        let op = blur_operator(&cfg).unwrap();
        let t = op.factor_dense();
        let dense = kron_dense(&t, &t);
        let x = Vector::from_vec((0..64).map(|i| ((i as f64) * 0.37).sin()).collect());
        let fast = op.apply(&x);
        let slow = dense.matvec(&x);
        assert!(fast.sub(&slow).norm() < 1e-13 * slow.norm().max(1.0));
    }

    #[test]
    fn kron_regularizer_annihilates_constants() {
        let l = kron_regularizer(4).unwrap();
        let ones = Vector::from_vec(vec![1.0; 16]);
        assert!(l.apply(&ones).norm() == 0.0);
    }

    #[test]
    fn kron_regularizer_matches_explicit_assembly() {
        let n = 4;
        let l = kron_regularizer(n).unwrap();
        let l1 = l.factor_dense();
        let eye = Matrix::identity(n);
        let dense = kron_dense(&eye, &l1).add(&kron_dense(&l1, &eye));
        // Random-ish probe and the linear-ramp image X[i][j] = i.
        let probes = [
            Vector::from_vec((0..16).map(|i| ((i * 3 + 2) % 7) as f64 - 3.0).collect()),
            Vector::from_vec((0..16).map(|k| (k % n) as f64).collect()),
        ];
        for x in &probes {
            let fast = l.apply(x);
            let slow = dense.matvec(x);
            assert!(fast.sub(&slow).norm() < 1e-13 * slow.norm().max(1.0));
            let fast_t = l.apply_transpose(x);
            let slow_t = dense.matvec_transpose(x);
            assert!(fast_t.sub(&slow_t).norm() < 1e-13 * slow_t.norm().max(1.0));
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(blur_operator(&BlurConfig { n: 5, band: 0, sigma: 1.0 }).is_err());
        assert!(blur_operator(&BlurConfig { n: 5, band: 6, sigma: 1.0 }).is_err());
        assert!(blur_operator(&BlurConfig { n: 5, band: 2, sigma: 0.0 }).is_err());
    }
}

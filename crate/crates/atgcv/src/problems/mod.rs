//! Classical discrete ill-posed test problems, the first-derivative
//! regularization operator, calibrated Gaussian noise, and the matrix-free
//! two-dimensional blur operator.
//!
//! The 1D problems follow the standard quadrature/collocation conventions
//! for the named kernels. SHAW builds its right-hand side from the
//! discretized operator, so `A x_true = b_exact` holds to roundoff; the
//! others carry the closed-form right-hand side of the underlying integral
//! equation and are consistent only up to discretization error (see
//! [`TestProblem::consistency_tol`]).

mod blur;
mod pgm;

pub use blur::{blur_operator, kron_dense, kron_regularizer, BlurConfig, BlurOperator, KronRegularizer};
pub use pgm::{read_pgm, write_pgm};

use std::f64::consts::PI;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::{svd, Matrix, Vector};
use crate::error::{Error, Result};

/// Names of the available 1D test problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Shaw,
    Wing,
    Baart,
    Foxgood,
    ILaplace,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 5] = [
        ProblemKind::Shaw,
        ProblemKind::Wing,
        ProblemKind::Baart,
        ProblemKind::Foxgood,
        ProblemKind::ILaplace,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Shaw => "shaw",
            ProblemKind::Wing => "wing",
            ProblemKind::Baart => "baart",
            ProblemKind::Foxgood => "foxgood",
            ProblemKind::ILaplace => "i_laplace",
        }
    }
}

impl FromStr for ProblemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<ProblemKind> {
        match s.to_ascii_lowercase().as_str() {
            "shaw" => Ok(ProblemKind::Shaw),
            "wing" => Ok(ProblemKind::Wing),
            "baart" => Ok(ProblemKind::Baart),
            "foxgood" => Ok(ProblemKind::Foxgood),
            "i_laplace" | "ilaplace" => Ok(ProblemKind::ILaplace),
            other => Err(Error::InvalidArgument(format!("unknown problem '{other}'"))),
        }
    }
}

/// A generated test problem: dense operator, exact data, true solution.
#[derive(Clone, Debug)]
pub struct TestProblem {
    pub kind: ProblemKind,
    pub n: usize,
    pub a: Matrix,
    pub b_exact: Vector,
    pub x_true: Vector,
    /// Known exponential decay rate of the singular values, where one is
    /// established (SHAW: 2, WING: 4.5).
    pub alpha_hint: Option<f64>,
}

impl TestProblem {
    /// Relative tolerance on `||A x_true - b_exact|| / ||b_exact||`.
    /// SHAW is consistent by construction; the problems with a closed-form
    /// right-hand side inherit the quadrature error of their rule, which is
    /// largest for WING's discontinuous solution.
    pub fn consistency_tol(&self) -> f64 {
        match self.kind {
            ProblemKind::Shaw => 1e-8,
            ProblemKind::Wing => 0.3,
            ProblemKind::Baart => 1e-2,
            ProblemKind::Foxgood => 1e-2,
            ProblemKind::ILaplace => 0.2,
        }
    }
}

/// Generate a named test problem of size `n`.
pub fn make_problem(kind: ProblemKind, n: usize) -> Result<TestProblem> {
    if n < 8 {
        return Err(Error::InvalidArgument(format!(
            "problem size n = {n} too small, need n >= 8"
        )));
    }
    match kind {
        ProblemKind::Shaw => shaw(n),
        ProblemKind::Wing => wing(n),
        ProblemKind::Baart => baart(n),
        ProblemKind::Foxgood => foxgood(n),
        ProblemKind::ILaplace => i_laplace(n),
    }
}

/// One-dimensional image restoration kernel on [-pi/2, pi/2], midpoint rule.
/// Symmetric, severely ill-posed with singular value decay rate about 2.
fn shaw(n: usize) -> Result<TestProblem> {
    if n % 2 != 0 {
        return Err(Error::InvalidArgument("shaw requires an even n".into()));
    }
    let h = PI / n as f64;
    let t: Vec<f64> = (0..n).map(|i| -PI / 2.0 + (i as f64 + 0.5) * h).collect();
    let a = Matrix::from_fn(n, n, |i, j| {
        let u = PI * (t[i].sin() + t[j].sin());
        let sinc = if u.abs() < 1e-8 { 1.0 - u * u / 6.0 } else { u.sin() / u };
        let c = t[i].cos() + t[j].cos();
        h * c * c * sinc * sinc
    });
    let x_true = Vector::from_vec(
        t.iter()
            .map(|&ti| 2.0 * (-6.0 * (ti - 0.8) * (ti - 0.8)).exp()
                + (-2.0 * (ti + 0.5) * (ti + 0.5)).exp())
            .collect(),
    );
    let b_exact = a.matvec(&x_true);
    Ok(TestProblem { kind: ProblemKind::Shaw, n, a, b_exact, x_true, alpha_hint: Some(2.0) })
}

/// Kernel `t exp(-s t^2)` on the unit square with a discontinuous indicator
/// solution and an analytic right-hand side.
fn wing(n: usize) -> Result<TestProblem> {
    let h = 1.0 / n as f64;
    let pts: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
    let (t1, t2) = (1.0 / 3.0, 2.0 / 3.0);
    let a = Matrix::from_fn(n, n, |i, j| h * pts[j] * (-pts[i] * pts[j] * pts[j]).exp());
    let x_true = Vector::from_vec(
        pts.iter()
            .map(|&tj| if tj > t1 && tj < t2 { 1.0 } else { 0.0 })
            .collect(),
    );
    let b_exact = Vector::from_vec(
        pts.iter()
            .map(|&si| ((-si * t1 * t1).exp() - (-si * t2 * t2).exp()) / (2.0 * si))
            .collect(),
    );
    Ok(TestProblem { kind: ProblemKind::Wing, n, a, b_exact, x_true, alpha_hint: Some(4.5) })
}

/// Kernel `exp(s cos t)` on [0, pi/2] x [0, pi] with solution sin t and
/// right-hand side `2 sinh(s) / s`.
fn baart(n: usize) -> Result<TestProblem> {
    let hs = PI / (2.0 * n as f64);
    let ht = PI / n as f64;
    let s: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * hs).collect();
    let t: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * ht).collect();
    let a = Matrix::from_fn(n, n, |i, j| ht * (s[i] * t[j].cos()).exp());
    let x_true = Vector::from_vec(t.iter().map(|tj| tj.sin()).collect());
    let b_exact = Vector::from_vec(s.iter().map(|&si| 2.0 * si.sinh() / si).collect());
    Ok(TestProblem { kind: ProblemKind::Baart, n, a, b_exact, x_true, alpha_hint: None })
}

/// Kernel `sqrt(s^2 + t^2)` on the unit square, solution `t`, right-hand
/// side `((1 + s^2)^{3/2} - s^3) / 3`.
fn foxgood(n: usize) -> Result<TestProblem> {
    let h = 1.0 / n as f64;
    let pts: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
    let a = Matrix::from_fn(n, n, |i, j| h * (pts[i] * pts[i] + pts[j] * pts[j]).sqrt());
    let x_true = Vector::from_vec(pts.clone());
    let b_exact = Vector::from_vec(
        pts.iter()
            .map(|&si| ((1.0 + si * si).powf(1.5) - si * si * si) / 3.0)
            .collect(),
    );
    Ok(TestProblem { kind: ProblemKind::Foxgood, n, a, b_exact, x_true, alpha_hint: None })
}

/// Inverse Laplace transform with kernel `exp(-s t)` on [0, inf), solution
/// `exp(-t/2)` and right-hand side `1 / (s + 1/2)`. Discretized with
/// Gauss-Laguerre nodes in `t` and equidistant collocation in `s`.
fn i_laplace(n: usize) -> Result<TestProblem> {
    let (nodes, log_weights) = gauss_laguerre(n)?;
    let s: Vec<f64> = (1..=n).map(|i| 10.0 * i as f64 / n as f64).collect();
    // Weights folded with e^{t_j} for the plain [0, inf) integral; combine
    // in log space to dodge under/overflow at large node values.
    let a = Matrix::from_fn(n, n, |i, j| (log_weights[j] + nodes[j] - s[i] * nodes[j]).exp());
    let x_true = Vector::from_vec(nodes.iter().map(|&t| (-t / 2.0).exp()).collect());
    let b_exact = Vector::from_vec(s.iter().map(|&si| 1.0 / (si + 0.5)).collect());
    Ok(TestProblem { kind: ProblemKind::ILaplace, n, a, b_exact, x_true, alpha_hint: None })
}

/// Gauss-Laguerre nodes and log-weights by the Golub-Welsch method: the
/// Jacobi matrix of the Laguerre recurrence is symmetric positive definite,
/// so its SVD is its eigendecomposition; weights are the squared first
/// components of the normalized eigenvectors.
fn gauss_laguerre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut j = Matrix::zeros(n, n);
    for k in 0..n {
        j[(k, k)] = 2.0 * k as f64 + 1.0;
        if k + 1 < n {
            j[(k, k + 1)] = (k + 1) as f64;
            j[(k + 1, k)] = (k + 1) as f64;
        }
    }
    let f = svd(&j)?;
    // Ascending nodes.
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|c| (f.sigma[c], f.u[(0, c)].abs()))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let nodes = pairs.iter().map(|p| p.0).collect();
    let log_weights = pairs.iter().map(|p| 2.0 * p.1.ln()).collect();
    Ok((nodes, log_weights))
}

/// Discretized first derivative with a zero row at the bottom:
/// rows `(1, -1)` on the diagonal/superdiagonal, square `n x n`.
pub fn deriv1(n: usize) -> Matrix {
    assert!(n >= 2, "deriv1 needs n >= 2");
    Matrix::from_fn(n, n, |i, j| {
        if i + 1 < n && j == i {
            1.0
        } else if i + 1 < n && j == i + 1 {
            -1.0
        } else {
            0.0
        }
    })
}

/// Add norm-calibrated Gaussian noise: `b = b_exact + level * ||b_exact|| *
/// g / ||g||` with `g` standard normal from a ChaCha8 stream keyed by the
/// seed, so `||b - b_exact|| / ||b_exact|| = level` exactly and runs are
/// bit-reproducible.
pub fn add_noise(b_exact: &Vector, level: f64, seed: u64) -> Result<Vector> {
    if level < 0.0 {
        return Err(Error::InvalidArgument("noise level must be >= 0".into()));
    }
    if level == 0.0 {
        return Ok(b_exact.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Vector::zeros(b_exact.len());
    for i in 0..g.len() {
        g[i] = StandardNormal.sample(&mut rng);
    }
    let gnorm = g.norm();
    if gnorm == 0.0 {
        return Err(Error::NonFinite("degenerate noise draw".into()));
    }
    let mut b = b_exact.clone();
    b.axpy(level * b_exact.norm() / gnorm, &g);
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deriv1_annihilates_constants() {
        let l = deriv1(3);
        let ones = Vector::from_vec(vec![1.0, 1.0, 1.0]);
        assert_eq!(l.matvec(&ones).as_slice(), &[0.0, 0.0, 0.0]);
        let ramp = Vector::from_vec(vec![1.0, 2.0, 3.0]);
        assert_eq!(l.matvec(&ramp).as_slice(), &[-1.0, -1.0, 0.0]);
    }

    #[test]
    fn noise_level_zero_is_identity() {
        let b = Vector::from_vec(vec![1.0, -2.0, 3.0]);
        let noisy = add_noise(&b, 0.0, 7).unwrap();
        assert_eq!(noisy, b);
    }

    #[test]
    fn noise_level_exact_by_construction() {
        let b = Vector::from_vec((0..50).map(|i| (i as f64 * 0.1).sin() + 2.0).collect());
        for level in [1e-3, 1e-2, 0.5] {
            let noisy = add_noise(&b, level, 42).unwrap();
            let rel = noisy.sub(&b).norm() / b.norm();
            assert!((rel - level).abs() < 1e-14 * (1.0 + level));
        }
    }

    #[test]
    fn noise_deterministic_given_seed() {
        let p = make_problem(ProblemKind::Shaw, 32).unwrap();
        let b1 = add_noise(&p.b_exact, 1e-2, 123).unwrap();
        let b2 = add_noise(&p.b_exact, 1e-2, 123).unwrap();
        assert_eq!(b1, b2);
        let b3 = add_noise(&p.b_exact, 1e-2, 124).unwrap();
        assert!(b1.sub(&b3).norm() > 0.0);
    }

    #[test]
    fn shaw_requires_even_n() {
        assert!(make_problem(ProblemKind::Shaw, 31).is_err());
        assert!(make_problem(ProblemKind::Shaw, 32).is_ok());
    }

    #[test]
    fn unknown_name_rejected() {
        assert!("nosuch".parse::<ProblemKind>().is_err());
        assert!(matches!("shaw".parse::<ProblemKind>(), Ok(ProblemKind::Shaw)));
    }

    #[test]
    fn problems_are_consistent() {
        for kind in ProblemKind::ALL {
            let p = make_problem(kind, 32).unwrap();
            assert!(p.a.is_finite(), "{:?} has non-finite entries", kind);
            let rel = p.a.matvec(&p.x_true).sub(&p.b_exact).norm() / p.b_exact.norm();
            assert!(
                rel <= p.consistency_tol(),
                "{:?}: consistency {rel:e} above {:e}",
                kind,
                p.consistency_tol()
            );
        }
    }

    #[test]
    fn gauss_laguerre_integrates_low_polynomials() {
        let (nodes, logw) = gauss_laguerre(12).unwrap();
        // integral of t^k e^{-t} = k! for the Laguerre weight.
        for (k, expect) in [(0u32, 1.0), (1, 1.0), (2, 2.0), (3, 6.0), (4, 24.0)] {
            let s: f64 = nodes
                .iter()
                .zip(logw.iter())
                .map(|(&t, &lw)| lw.exp() * t.powi(k as i32))
                .sum();
            assert!((s - expect).abs() < 1e-9 * expect.max(1.0), "k={k}: {s}");
        }
    }
}

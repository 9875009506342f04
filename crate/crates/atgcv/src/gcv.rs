//! Generalized cross-validation: the full GCV function through the dense
//! GSVD, its projected approximation on the Krylov subspace, and a robust
//! one-dimensional minimizer over a log-spaced grid.

use crate::dense::{gsvd, Matrix, Vector};
use crate::error::{Error, Result};
use crate::tikhonov::{full_tikhonov, solve_reduced};

/// Grid defaults: point count and the widening (in decades) applied on each
/// side of the generalized-spectrum range.
pub const GRID_POINTS: usize = 200;
pub const GRID_WIDEN_DECADES: f64 = 2.0;
/// Floor for the grid's lower endpoint relative to gamma_max.
const GRID_REL_FLOOR: f64 = 1e-10;
/// Relative tolerance (on lambda) of the golden-section refinement.
const REFINE_TOL: f64 = 1e-4;

/// Sampled GCV curve: strictly ascending positive abscissas, the function
/// values, and the index of the grid minimum (smallest index on ties).
#[derive(Clone, Debug)]
pub struct GcvCurve {
    pub lambdas: Vector,
    pub values: Vector,
    pub argmin_index: usize,
}

/// Tikhonov filter weight `lambda^2 / (gamma^2 + lambda^2)`, with the
/// conventions `gamma = +inf -> 0` and `gamma = 0 -> 1`.
#[inline]
pub fn gcv_weight(gamma: f64, lambda: f64) -> f64 {
    if gamma.is_infinite() {
        0.0
    } else if gamma == 0.0 {
        1.0
    } else {
        let r = gamma / lambda;
        1.0 / (r * r + 1.0)
    }
}

/// Full GCV function through the dense GSVD of `(A, L)` with `L` padded
/// square:
///
/// `G(lambda) = sum_i (w_i u_i^T b)^2 / (sum_i w_i)^2`,
/// `w_i = lambda^2 / (gamma_i^2 + lambda^2)`.
///
/// Indices with an infinite generalized value (the null space of `L`)
/// receive weight zero in both sums, which reproduces the usual trace term
/// for a rectangular `L` of full row rank.
pub fn gcv_full(pair: &GsvdPairRef<'_>, lambda: f64) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(Error::InvalidArgument("gcv requires lambda > 0".into()));
    }
    let n = pair.gamma.len();
    if pair.utb.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "U^T b has length {}, expected {}",
            pair.utb.len(),
            n
        )));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let w = gcv_weight(pair.gamma[i], lambda);
        let t = w * pair.utb[i];
        num += t * t;
        den += w;
    }
    if den == 0.0 {
        return Err(Error::NonFinite("gcv denominator vanished".into()));
    }
    Ok(num / (den * den))
}

/// Borrowed view of the ingredients of the full GCV function.
pub struct GsvdPairRef<'a> {
    pub gamma: &'a Vector,
    pub utb: &'a Vector,
}

/// Precomputed full-GCV evaluator for a dense pair `(A, L)` and data `b`.
pub struct FullGcv {
    gamma: Vector,
    utb: Vector,
}

impl FullGcv {
    pub fn new(a: &Matrix, l: &Matrix, b: &Vector) -> Result<FullGcv> {
        let pair = gsvd(a, l)?;
        let n = pair.n();
        let mut utb = Vector::zeros(n);
        for j in 0..n {
            utb[j] = pair.u.col(j).dot(b);
        }
        Ok(FullGcv { gamma: pair.gamma, utb })
    }

    pub fn from_parts(gamma: Vector, utb: Vector) -> FullGcv {
        FullGcv { gamma, utb }
    }

    pub fn eval(&self, lambda: f64) -> Result<f64> {
        gcv_full(&GsvdPairRef { gamma: &self.gamma, utb: &self.utb }, lambda)
    }

    pub fn gamma(&self) -> &Vector {
        &self.gamma
    }

    /// Finite range of the generalized spectrum, for grid construction.
    pub fn gamma_range(&self) -> Result<(f64, f64)> {
        gamma_range(&self.gamma)
    }
}

fn gamma_range(gamma: &Vector) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for g in gamma.iter() {
        if g.is_finite() && *g > 0.0 {
            lo = lo.min(*g);
            hi = hi.max(*g);
        }
    }
    if hi == 0.0 {
        return Err(Error::NonFinite(
            "no finite positive generalized singular values".into(),
        ));
    }
    Ok((lo, hi))
}

/// Projected GCV evaluator for one Krylov iteration: built once per `m`
/// (a single small GSVD), then evaluated at many `lambda`.
///
/// `G_m(lambda) = ||Hbar y_lambda - beta e_1||^2
///              / (n - m + sum_i lambda^2/(gamma_i^2 + lambda^2))^2`.
///
/// The numerator is the actual reduced residual rather than its filter
/// expansion, which is identical up to roundoff and robust when `L_m` is
/// nearly singular.
pub struct ProjectedGcv {
    hbar: Matrix,
    lm: Matrix,
    beta: f64,
    n: usize,
    gamma: Vector,
}

impl ProjectedGcv {
    pub fn new(hbar: &Matrix, lm: &Matrix, beta: f64, n: usize) -> Result<ProjectedGcv> {
        let m = hbar.cols();
        if m >= n {
            return Err(Error::OutOfRange(format!(
                "projected dimension m = {m} must stay below n = {n}"
            )));
        }
        let pair = gsvd(hbar, lm)?;
        Ok(ProjectedGcv {
            hbar: hbar.clone(),
            lm: lm.clone(),
            beta,
            n,
            gamma: pair.gamma,
        })
    }

    pub fn eval(&self, lambda: f64) -> Result<f64> {
        if lambda <= 0.0 {
            return Err(Error::InvalidArgument("gcv requires lambda > 0".into()));
        }
        let sol = solve_reduced(&self.hbar, &self.lm, self.beta, lambda)?;
        let m = self.hbar.cols();
        let mut den = (self.n - m) as f64;
        for g in self.gamma.iter() {
            den += gcv_weight(*g, lambda);
        }
        let r = sol.residual_norm;
        Ok(r * r / (den * den))
    }

    pub fn gamma(&self) -> &Vector {
        &self.gamma
    }

    pub fn gamma_range(&self) -> Result<(f64, f64)> {
        gamma_range(&self.gamma)
    }
}

/// One-shot projected GCV evaluation.
pub fn gcv_projected(hbar: &Matrix, lm: &Matrix, beta: f64, lambda: f64, n: usize) -> Result<f64> {
    ProjectedGcv::new(hbar, lm, beta, n)?.eval(lambda)
}

/// Log-spaced grid spanning the generalized-spectrum range widened by
/// `widen` decades on each side, with the lower end floored relative to
/// `gamma_max`.
pub fn lambda_grid(gamma_min: f64, gamma_max: f64, points: usize, widen: f64) -> Vector {
    let lo = gamma_min.max(GRID_REL_FLOOR * gamma_max) * 10f64.powf(-widen);
    let hi = gamma_max * 10f64.powf(widen);
    log_spaced(lo, hi, points)
}

pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Vector {
    assert!(lo > 0.0 && hi > lo && points >= 2);
    let llo = lo.ln();
    let lhi = hi.ln();
    let step = (lhi - llo) / (points - 1) as f64;
    Vector::from_vec((0..points).map(|i| (llo + step * i as f64).exp()).collect())
}

/// Minimize a positive function of `lambda` over the widened spectrum grid:
/// coarse scan (smallest-index tie-break), then golden-section refinement in
/// `log lambda` on the bracketing cells. Returns the refined minimizer and
/// the sampled curve.
pub fn minimize_gcv(
    mut f: impl FnMut(f64) -> Result<f64>,
    gamma_min: f64,
    gamma_max: f64,
) -> Result<(f64, GcvCurve)> {
    minimize_on_grid(&mut f, &lambda_grid(gamma_min, gamma_max, GRID_POINTS, GRID_WIDEN_DECADES))
}

/// Same as [`minimize_gcv`] with a caller-supplied grid.
pub fn minimize_on_grid(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    grid: &Vector,
) -> Result<(f64, GcvCurve)> {
    let mut values = Vector::zeros(grid.len());
    let mut best = 0usize;
    for i in 0..grid.len() {
        let v = f(grid[i])?;
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("gcv value at lambda = {:e}", grid[i])));
        }
        values[i] = v;
        if v < values[best] {
            best = i;
        }
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let lambda_star = if lo < hi {
        golden_section_log(f, lo, hi)?
    } else {
        grid[best]
    };
    Ok((
        lambda_star,
        GcvCurve { lambdas: grid.clone(), values, argmin_index: best },
    ))
}

/// Golden-section minimization in log-space on [lo, hi], run until the
/// bracket endpoints agree to the relative refinement tolerance.
pub fn golden_section_log(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut a = lo.ln();
    let mut b = hi.ln();
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1.exp())?;
    let mut f2 = f(x2.exp())?;
    while b - a > REFINE_TOL {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1.exp())?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2.exp())?;
        }
    }
    Ok(((a + b) / 2.0).exp())
}

/// Figure-of-merit parameter: minimize `||x_lambda - x_true||` over the
/// standard grid with golden-section refinement, `x_lambda` from the dense
/// Tikhonov solve. Only meaningful when the true solution is known.
pub fn optimal_lambda(a: &Matrix, l: &Matrix, b: &Vector, x_true: &Vector) -> Result<f64> {
    let pair = gsvd(a, l)?;
    let (gmin, gmax) = gamma_range(&pair.gamma)?;
    let mut f = |lambda: f64| -> Result<f64> {
        let x = full_tikhonov(a, l, b, lambda)?;
        Ok(x.sub(x_true).norm())
    };
    let (lambda, _curve) = minimize_gcv(&mut f, gmin, gmax)?;
    Ok(lambda)
}

/// Error-vs-lambda curve used by [`optimal_lambda`]; exposed for reports.
pub fn error_curve(a: &Matrix, l: &Matrix, b: &Vector, x_true: &Vector) -> Result<(f64, GcvCurve)> {
    let pair = gsvd(a, l)?;
    let (gmin, gmax) = gamma_range(&pair.gamma)?;
    let mut f = |lambda: f64| -> Result<f64> {
        let x = full_tikhonov(a, l, b, lambda)?;
        Ok(x.sub(x_true).norm())
    };
    minimize_gcv(&mut f, gmin, gmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_gamma_closed_form() {
        // gamma = 1, u^T b = 1: G(lambda) = 1 for every lambda.
        let gamma = Vector::from_vec(vec![1.0]);
        let utb = Vector::from_vec(vec![1.0]);
        let g = gcv_full(&GsvdPairRef { gamma: &gamma, utb: &utb }, 1.0).unwrap();
        assert!((g - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_must_be_positive() {
        let gamma = Vector::from_vec(vec![1.0]);
        let utb = Vector::from_vec(vec![1.0]);
        assert!(gcv_full(&GsvdPairRef { gamma: &gamma, utb: &utb }, 0.0).is_err());
    }

    #[test]
    fn large_lambda_limit() {
        // All weights approach 1: G -> ||U^T b||^2 / P^2.
        let gamma = Vector::from_vec(vec![0.5, 1.0, 2.0]);
        let utb = Vector::from_vec(vec![1.0, -2.0, 0.5]);
        let g = gcv_full(&GsvdPairRef { gamma: &gamma, utb: &utb }, 1e8 * 2.0).unwrap();
        let expected = (1.0 + 4.0 + 0.25) / 9.0;
        assert!((g - expected).abs() < 1e-6 * expected);
    }

    #[test]
    fn unimodal_refinement_hits_minimum() {
        let mut f = |x: f64| -> Result<f64> { Ok((x.ln() - 3f64.ln()).powi(2) + 1.0) };
        let (lstar, curve) = minimize_on_grid(&mut f, &log_spaced(1e-6, 1e6, 200)).unwrap();
        assert!((lstar - 3.0).abs() < 3e-3, "lstar = {lstar}");
        assert!(curve.values[curve.argmin_index] <= curve.values[0]);
    }

    #[test]
    fn constant_function_tie_breaks_to_first_cell() {
        let mut f = |_: f64| -> Result<f64> { Ok(2.0) };
        let grid = log_spaced(1e-2, 1e2, 50);
        let (lstar, curve) = minimize_on_grid(&mut f, &grid).unwrap();
        assert_eq!(curve.argmin_index, 0);
        assert!(lstar >= grid[0] && lstar <= grid[1]);
    }

    #[test]
    fn non_finite_value_rejected() {
        let mut f = |x: f64| -> Result<f64> { Ok(if x > 1.0 { f64::NAN } else { 1.0 }) };
        assert!(minimize_on_grid(&mut f, &log_spaced(1e-1, 1e1, 10)).is_err());
    }

    #[test]
    fn weight_conventions() {
        assert_eq!(gcv_weight(f64::INFINITY, 1.0), 0.0);
        assert_eq!(gcv_weight(0.0, 1.0), 1.0);
        assert!((gcv_weight(1.0, 1.0) - 0.5).abs() < 1e-15);
    }
}

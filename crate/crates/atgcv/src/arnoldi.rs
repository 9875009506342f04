//! Arnoldi decomposition `A W_m = W_{m+1} Hbar_m` built one column at a
//! time, plus the projection of a regularization operator onto the Krylov
//! subspace and the subdiagonal decay diagnostics.
//!
//! Two orthogonalization variants share one interface: modified
//! Gram-Schmidt with a single reorthogonalization pass (the default), and a
//! Householder recurrence whose basis stays orthonormal to machine
//! precision, which matters for the decay diagnostics.

use crate::dense::{Matrix, Vector};
use crate::error::{Error, Result};
use crate::operator::LinearOperator;

/// Relative breakdown tolerance: the recurrence terminates when the new
/// subdiagonal drops below `BREAKDOWN_REL * max_j ||A w_j||`.
pub const BREAKDOWN_REL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArnoldiVariant {
    ModifiedGramSchmidt,
    Householder,
}

/// State of the Krylov recurrence after `m` completed columns.
///
/// The basis holds `w_1 .. w_{m+1}`; after a breakdown (or once the basis
/// spans the whole space) the (m+1)-th vector does not exist and the last
/// row of `Hbar_m` is exactly zero.
pub struct ArnoldiDecomposition {
    variant: ArnoldiVariant,
    dim: usize,
    beta: f64,
    basis: Vec<Vector>,
    /// Column j holds h[0..=j+1] of `Hbar`.
    h_cols: Vec<Vec<f64>>,
    /// Measured subdiagonal history h_{j+1,j}, including the one that
    /// triggered a breakdown.
    subdiag: Vec<f64>,
    breakdown: bool,
    apply_norm_max: f64,
    // Householder bookkeeping: reflectors and the running sign fixes that
    // keep w_1 = b/||b|| and the subdiagonal non-negative.
    reflectors: Vec<Vector>,
    reflector_betas: Vec<f64>,
    signs: Vec<f64>,
}

impl ArnoldiDecomposition {
    /// Completed columns of `Hbar`.
    pub fn m(&self) -> usize {
        self.h_cols.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn variant(&self) -> ArnoldiVariant {
        self.variant
    }

    /// `||b||` of the starting vector.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn breakdown(&self) -> bool {
        self.breakdown
    }

    /// Whether the genuine Krylov vector `w_{m+1}` is available.
    pub fn has_next_basis(&self) -> bool {
        self.basis.len() == self.m() + 1
    }

    /// Basis vector `w_k`, 1-based.
    pub fn w(&self, k: usize) -> &Vector {
        &self.basis[k - 1]
    }

    /// `W_k` as a dense `dim x k` matrix, 1 <= k <= basis size.
    pub fn w_matrix(&self, k: usize) -> Matrix {
        assert!(k <= self.basis.len(), "only {} basis vectors exist", self.basis.len());
        let mut w = Matrix::zeros(self.dim, k);
        for (j, v) in self.basis.iter().take(k).enumerate() {
            w.set_col(j, v);
        }
        w
    }

    /// The rectangular Hessenberg factor `Hbar_m`, `(m+1) x m`. After a
    /// breakdown the last row is exactly zero.
    pub fn hbar_matrix(&self) -> Matrix {
        let m = self.m();
        let mut h = Matrix::zeros(m + 1, m);
        for (j, col) in self.h_cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                h[(i, j)] = v;
            }
        }
        h
    }

    /// The square projection `H_m = W_m^T A W_m`, `m x m`.
    pub fn h_matrix(&self) -> Matrix {
        let m = self.m();
        let mut h = Matrix::zeros(m, m);
        for (j, col) in self.h_cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                if i < m {
                    h[(i, j)] = v;
                }
            }
        }
        h
    }

    /// Measured subdiagonal entries h_{j+1,j}, j = 1..m.
    pub fn subdiagonals(&self) -> &[f64] {
        &self.subdiag
    }

    /// Lift reduced coordinates: `x = W_m y`.
    pub fn lift(&self, y: &Vector) -> Result<Vector> {
        if y.len() != self.m() {
            return Err(Error::DimensionMismatch(format!(
                "lift: got length {} for m = {}",
                y.len(),
                self.m()
            )));
        }
        let mut x = Vector::zeros(self.dim);
        for (j, w) in self.basis.iter().take(y.len()).enumerate() {
            x.axpy(y[j], w);
        }
        Ok(x)
    }

    /// Lift a reduced `(m+1) x k` matrix through the extended basis:
    /// `W_{m+1} M`. After a breakdown only `m` basis vectors exist; the last
    /// row of `M` must then be negligible and is dropped.
    pub fn lift_extended(&self, mat: &Matrix) -> Matrix {
        assert_eq!(mat.rows(), self.m() + 1);
        let avail = self.basis.len();
        let mut out = Matrix::zeros(self.dim, mat.cols());
        for j in 0..mat.cols() {
            let mut col = Vector::zeros(self.dim);
            for (i, w) in self.basis.iter().take(avail).enumerate() {
                col.axpy(mat[(i, j)], w);
            }
            out.set_col(j, &col);
        }
        out
    }

    /// Lift a reduced `m x k` matrix: `W_m M`.
    pub fn lift_reduced(&self, mat: &Matrix) -> Matrix {
        assert_eq!(mat.rows(), self.m());
        let mut out = Matrix::zeros(self.dim, mat.cols());
        for j in 0..mat.cols() {
            let mut col = Vector::zeros(self.dim);
            for (i, w) in self.basis.iter().take(mat.rows()).enumerate() {
                col.axpy(mat[(i, j)], w);
            }
            out.set_col(j, &col);
        }
        out
    }
}

/// Start the recurrence: the m = 0 state with `w_1 = b / ||b||`.
pub fn arnoldi_start(
    a: &dyn LinearOperator,
    b: &Vector,
    variant: ArnoldiVariant,
) -> Result<ArnoldiDecomposition> {
    if a.dim() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "operator dim {} vs rhs length {}",
            a.dim(),
            b.len()
        )));
    }
    let beta = b.norm();
    if beta == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut state = ArnoldiDecomposition {
        variant,
        dim: b.len(),
        beta,
        basis: Vec::new(),
        h_cols: Vec::new(),
        subdiag: Vec::new(),
        breakdown: false,
        apply_norm_max: 0.0,
        reflectors: Vec::new(),
        reflector_betas: Vec::new(),
        signs: Vec::new(),
    };
    match variant {
        ArnoldiVariant::ModifiedGramSchmidt => {
            state.basis.push(b.scaled(1.0 / beta));
        }
        ArnoldiVariant::Householder => {
            // First reflector maps b onto a multiple of e_1.
            let mut z = b.clone();
            let (refl, rbeta, alpha) = make_reflector(&mut z, 0);
            state.reflectors.push(refl);
            state.reflector_betas.push(rbeta);
            let d1 = if alpha >= 0.0 { 1.0 } else { -1.0 };
            state.signs.push(d1);
            // w_1 = d_1 * P_1 e_1 = b / ||b||.
            let mut w1 = Vector::basis(state.dim, 0);
            apply_reflectors_forward(&state, &mut w1);
            w1.scale(d1);
            state.basis.push(w1);
        }
    }
    Ok(state)
}

/// Extend the decomposition by one column.
pub fn arnoldi_extend(state: &mut ArnoldiDecomposition, a: &dyn LinearOperator) -> Result<()> {
    if state.breakdown {
        return Err(Error::Breakdown {
            m: state.m(),
            h: *state.subdiag.last().unwrap_or(&0.0),
        });
    }
    let m = state.m();
    if m + 1 > state.dim {
        return Err(Error::OutOfRange(format!(
            "cannot extend past the space dimension {}",
            state.dim
        )));
    }
    let w_last = state.basis.last().expect("basis nonempty").clone();
    let z = a.apply(&w_last);
    state.apply_norm_max = state.apply_norm_max.max(z.norm());
    let tau = BREAKDOWN_REL * state.apply_norm_max;

    match state.variant {
        ArnoldiVariant::ModifiedGramSchmidt => extend_mgs(state, z, tau),
        ArnoldiVariant::Householder => extend_householder(state, z, tau),
    }
    Ok(())
}

fn extend_mgs(state: &mut ArnoldiDecomposition, mut z: Vector, tau: f64) {
    let m = state.m();
    let mut h_col = vec![0.0; m + 2];
    for (i, w) in state.basis.iter().enumerate() {
        let h = w.dot(&z);
        z.axpy(-h, w);
        h_col[i] = h;
    }
    // One reorthogonalization pass.
    for (i, w) in state.basis.iter().enumerate() {
        let dh = w.dot(&z);
        z.axpy(-dh, w);
        h_col[i] += dh;
    }
    let hnext = z.norm();
    state.subdiag.push(hnext);
    let space_full = state.basis.len() == state.dim;
    if hnext <= tau || space_full {
        h_col[m + 1] = 0.0;
        state.breakdown = true;
    } else {
        h_col[m + 1] = hnext;
        state.basis.push(z.scaled(1.0 / hnext));
    }
    state.h_cols.push(h_col);
}

fn extend_householder(state: &mut ArnoldiDecomposition, z: Vector, tau: f64) {
    let m = state.m();
    let n = state.dim;
    // g = P_{m+1} ... P_1 z
    let mut g = z;
    apply_reflectors_backward(state, &mut g);

    // Residual beyond position m+1 decides breakdown / reflector m+2.
    let trailing: f64 = g.as_slice()[(m + 1).min(n)..]
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let space_full = state.basis.len() == state.dim;

    let mut h_col = vec![0.0; m + 2];
    if trailing <= tau || space_full {
        for i in 0..=m {
            h_col[i] = state.signs[i] * g[i];
        }
        state.subdiag.push(trailing);
        h_col[m + 1] = 0.0;
        state.breakdown = true;
    } else {
        let (refl, rbeta, alpha) = make_reflector(&mut g, m + 1);
        state.reflectors.push(refl);
        state.reflector_betas.push(rbeta);
        for i in 0..=m {
            h_col[i] = state.signs[i] * g[i];
        }
        let d_next = if alpha >= 0.0 { 1.0 } else { -1.0 };
        state.signs.push(d_next);
        h_col[m + 1] = d_next * alpha;
        state.subdiag.push(h_col[m + 1]);
        // w_{m+2} = d_next * P_1 ... P_{m+2} e_{m+2}
        let mut w = Vector::basis(n, m + 1);
        apply_reflectors_forward(state, &mut w);
        w.scale(d_next);
        state.basis.push(w);
    }
    state.h_cols.push(h_col);
}

/// Build a Householder reflector that zeroes `z` strictly below `pos` and
/// overwrite `z` with its image (alpha at `pos`, zeros below). Returns the
/// reflector vector, its beta, and alpha.
fn make_reflector(z: &mut Vector, pos: usize) -> (Vector, f64, f64) {
    let n = z.len();
    let mut norm_sq = 0.0;
    for i in pos..n {
        norm_sq += z[i] * z[i];
    }
    let norm = norm_sq.sqrt();
    let mut v = Vector::zeros(n);
    if norm == 0.0 {
        return (v, 0.0, 0.0);
    }
    let zp = z[pos];
    // alpha = -sign(zp) * norm keeps v0 = zp - alpha free of cancellation.
    let alpha = if zp >= 0.0 { -norm } else { norm };
    let v0 = zp - alpha;
    let vtv = norm_sq - 2.0 * alpha * zp + alpha * alpha;
    let beta = 2.0 / vtv;
    v[pos] = v0;
    for i in (pos + 1)..n {
        v[i] = z[i];
    }
    z[pos] = alpha;
    for i in (pos + 1)..n {
        z[i] = 0.0;
    }
    (v, beta, alpha)
}

fn apply_reflector(v: &Vector, beta: f64, x: &mut Vector) {
    if beta == 0.0 {
        return;
    }
    let d = v.dot(x);
    x.axpy(-beta * d, v);
}

/// x <- P_k ... P_1 x
fn apply_reflectors_backward(state: &ArnoldiDecomposition, x: &mut Vector) {
    for (v, &b) in state.reflectors.iter().zip(state.reflector_betas.iter()) {
        apply_reflector(v, b, x);
    }
}

/// x <- P_1 ... P_k x
fn apply_reflectors_forward(state: &ArnoldiDecomposition, x: &mut Vector) {
    for (v, &b) in state
        .reflectors
        .iter()
        .zip(state.reflector_betas.iter())
        .rev()
    {
        apply_reflector(v, b, x);
    }
}

/// Orthogonal projection of a square regularization operator onto the
/// Krylov subspace: `L_m = W_m^T L W_m` (`m x m`). Rectangular operators
/// must be padded to square with zero rows first, which leaves the
/// seminorm of lifted vectors unchanged.
pub fn project_regularizer(l: &dyn LinearOperator, state: &ArnoldiDecomposition) -> Result<Matrix> {
    if l.dim() != state.dim() {
        return Err(Error::DimensionMismatch(format!(
            "regularizer dim {} vs problem dim {}",
            l.dim(),
            state.dim()
        )));
    }
    let m = state.m();
    let mut lm = Matrix::zeros(m, m);
    for j in 0..m {
        let lw = l.apply(state.w(j + 1));
        for i in 0..m {
            lm[(i, j)] = state.w(i + 1).dot(&lw);
        }
    }
    Ok(lm)
}

/// Incrementally maintained projection `L_m = W_m^T L W_m`: one new basis
/// vector costs a single operator application instead of m.
pub struct RegularizerProjection {
    lw: Vec<Vector>,
    lm: Matrix,
}

impl RegularizerProjection {
    pub fn new() -> Self {
        RegularizerProjection { lw: Vec::new(), lm: Matrix::zeros(0, 0) }
    }

    /// Bring the cached projection up to the state's current `m`.
    pub fn update(&mut self, l: &dyn LinearOperator, state: &ArnoldiDecomposition) -> Result<()> {
        if l.dim() != state.dim() {
            return Err(Error::DimensionMismatch(format!(
                "regularizer dim {} vs problem dim {}",
                l.dim(),
                state.dim()
            )));
        }
        let m = state.m();
        while self.lw.len() < m {
            let j = self.lw.len();
            self.lw.push(l.apply(state.w(j + 1)));
        }
        let old = self.lm.rows();
        if old == m {
            return Ok(());
        }
        let mut lm = Matrix::zeros(m, m);
        for i in 0..old {
            for j in 0..old {
                lm[(i, j)] = self.lm[(i, j)];
            }
        }
        for j in old..m {
            for i in 0..m {
                lm[(i, j)] = state.w(i + 1).dot(&self.lw[j]);
            }
        }
        for i in old..m {
            for j in 0..old {
                lm[(i, j)] = state.w(i + 1).dot(&self.lw[j]);
            }
        }
        self.lm = lm;
        Ok(())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.lm
    }
}

impl Default for RegularizerProjection {
    fn default() -> Self {
        Self::new()
    }
}

/// Geometric mean of the first `m` subdiagonal entries, computed in log
/// space: `(prod h_{i+1,i})^{1/m}`.
pub fn decay_product(state: &ArnoldiDecomposition, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::OutOfRange("decay_product needs m >= 1".into()));
    }
    if m > state.subdiag.len() {
        return Err(Error::OutOfRange(format!(
            "only {} subdiagonals recorded",
            state.subdiag.len()
        )));
    }
    let log_sum: f64 = state.subdiag[..m].iter().map(|h| h.ln()).sum();
    Ok((log_sum / m as f64).exp())
}

/// Exponential singular-value decay model `sigma_j <= k e^{-alpha j}`.
#[derive(Clone, Copy, Debug)]
pub struct DecayModel {
    pub alpha: f64,
    pub k: f64,
}

impl DecayModel {
    pub fn new(alpha: f64, k: f64) -> Result<Self> {
        if alpha <= 0.0 || k <= 0.0 {
            return Err(Error::InvalidArgument(
                "decay model requires alpha > 0 and k > 0".into(),
            ));
        }
        Ok(DecayModel { alpha, k })
    }

    /// Fit the constant from the largest singular value: `k = sigma_1 e^alpha`.
    pub fn fitted(alpha: f64, sigma_1: f64) -> Result<Self> {
        Self::new(alpha, sigma_1 * alpha.exp())
    }
}

/// Computable superlinear decay bound for the subdiagonal geometric mean:
/// `k * exp(-m alpha / e^2 + (alpha + 2) / 2)`, the asymptotic envelope with
/// its vanishing remainder term dropped.
pub fn decay_bound(model: &DecayModel, m: usize) -> f64 {
    let e2 = std::f64::consts::E * std::f64::consts::E;
    model.k * (-(m as f64) * model.alpha / e2 + (model.alpha + 2.0) / 2.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::Matrix;

    #[test]
    fn start_normalizes() {
        let a = Matrix::identity(3);
        let b = Vector::from_vec(vec![3.0, 0.0, 0.0]);
        let st = arnoldi_start(&a, &b, ArnoldiVariant::ModifiedGramSchmidt).unwrap();
        assert_eq!(st.w(1).as_slice(), &[1.0, 0.0, 0.0]);
        assert_eq!(st.m(), 0);

        let b2 = Vector::from_vec(vec![1.0, 1.0, 0.0]);
        let st2 = arnoldi_start(&a, &b2, ArnoldiVariant::Householder).unwrap();
        assert!((st2.w(1).norm() - 1.0).abs() < 1e-15);
        assert!((st2.w(1)[0] - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_rhs_rejected() {
        let a = Matrix::identity(2);
        let b = Vector::zeros(2);
        assert!(matches!(
            arnoldi_start(&a, &b, ArnoldiVariant::ModifiedGramSchmidt),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn identity_breaks_down_at_one() {
        let a = Matrix::identity(4);
        let b = Vector::from_vec(vec![1.0, 2.0, 0.0, -1.0]);
        for variant in [ArnoldiVariant::ModifiedGramSchmidt, ArnoldiVariant::Householder] {
            let mut st = arnoldi_start(&a, &b, variant).unwrap();
            arnoldi_extend(&mut st, &a).unwrap();
            assert!(st.breakdown(), "variant {variant:?}");
            assert_eq!(st.m(), 1);
            let h = st.hbar_matrix();
            assert!((h[(0, 0)] - 1.0).abs() < 1e-14);
            assert_eq!(h[(1, 0)], 0.0);
            assert!(arnoldi_extend(&mut st, &a).is_err());
        }
    }

    #[test]
    fn hand_computed_first_column() {
        // A = diag(1,2), b = (1,1): h11 = 1.5, h21 = 0.5.
        let a = Matrix::from_diag(&[1.0, 2.0]);
        let b = Vector::from_vec(vec![1.0, 1.0]);
        for variant in [ArnoldiVariant::ModifiedGramSchmidt, ArnoldiVariant::Householder] {
            let mut st = arnoldi_start(&a, &b, variant).unwrap();
            arnoldi_extend(&mut st, &a).unwrap();
            let h = st.hbar_matrix();
            assert!((h[(0, 0)] - 1.5).abs() < 1e-14, "variant {variant:?}");
            assert!((h[(1, 0)] - 0.5).abs() < 1e-14, "variant {variant:?}");
        }
    }

    #[test]
    fn factorization_residual_small_matrix() {
        let a = Matrix::from_fn(6, 6, |i, j| 1.0 / ((i + j + 1) as f64));
        let b = Vector::from_vec((0..6).map(|i| (i as f64 * 0.7).sin() + 1.5).collect());
        for variant in [ArnoldiVariant::ModifiedGramSchmidt, ArnoldiVariant::Householder] {
            let mut st = arnoldi_start(&a, &b, variant).unwrap();
            for _ in 0..4 {
                arnoldi_extend(&mut st, &a).unwrap();
            }
            let m = st.m();
            let wm = st.w_matrix(m);
            let wm1 = st.w_matrix(m + 1);
            let resid = a.matmul(&wm).sub(&wm1.matmul(&st.hbar_matrix()));
            assert!(
                resid.frobenius_norm() < 1e-12 * a.frobenius_norm() * m as f64,
                "variant {variant:?}, resid {:e}",
                resid.frobenius_norm()
            );
            let wtw = wm1.transpose().matmul(&wm1);
            let orth = wtw.sub(&Matrix::identity(m + 1)).frobenius_norm();
            assert!(orth < 1e-12, "variant {variant:?}, orth {orth:e}");
        }
    }

    #[test]
    fn projection_of_identity_is_identity() {
        let a = Matrix::from_fn(5, 5, |i, j| ((i * 3 + j * 7) % 5) as f64 - 1.0);
        let b = Vector::from_vec(vec![1.0, -1.0, 0.5, 2.0, 0.0]);
        let mut st = arnoldi_start(&a, &b, ArnoldiVariant::ModifiedGramSchmidt).unwrap();
        for _ in 0..3 {
            arnoldi_extend(&mut st, &a).unwrap();
        }
        let eye = Matrix::identity(5);
        let lm = project_regularizer(&eye, &st).unwrap();
        assert!(lm.sub(&Matrix::identity(3)).frobenius_norm() < 1e-12);
        let zero = Matrix::zeros(5, 5);
        let lz = project_regularizer(&zero, &st).unwrap();
        assert_eq!(lz.frobenius_norm(), 0.0);
    }

    #[test]
    fn incremental_projection_matches_one_shot() {
        let a = Matrix::from_fn(6, 6, |i, j| ((i + 2 * j) % 7) as f64 / 3.0 - 0.8);
        let l = Matrix::from_fn(6, 6, |i, j| if i == j { 1.0 } else if j == i + 1 { -1.0 } else { 0.0 });
        let b = Vector::from_vec((0..6).map(|i| (i as f64).cos() + 1.1).collect());
        let mut st = arnoldi_start(&a, &b, ArnoldiVariant::ModifiedGramSchmidt).unwrap();
        let mut proj = RegularizerProjection::new();
        for _ in 0..4 {
            arnoldi_extend(&mut st, &a).unwrap();
            proj.update(&l, &st).unwrap();
            let oneshot = project_regularizer(&l, &st).unwrap();
            assert!(proj.matrix().sub(&oneshot).frobenius_norm() < 1e-13);
        }
    }

    #[test]
    fn decay_product_trivial_cases() {
        let a = Matrix::identity(2);
        let b = Vector::from_vec(vec![1.0, 0.0]);
        let mut st = arnoldi_start(&a, &b, ArnoldiVariant::ModifiedGramSchmidt).unwrap();
        st.subdiag = vec![1.0, 1.0, 1.0];
        assert!((decay_product(&st, 3).unwrap() - 1.0).abs() < 1e-15);
        st.subdiag = vec![4.0, 1.0];
        assert!((decay_product(&st, 2).unwrap() - 2.0).abs() < 1e-15);
        assert!(decay_product(&st, 0).is_err());
    }

    #[test]
    fn decay_bound_formula_structure() {
        // Exponent vanishes when m alpha / e^2 = (alpha + 2) / 2.
        let m = 4usize;
        let e2 = std::f64::consts::E * std::f64::consts::E;
        let alpha = 1.0 / (m as f64 / e2 - 0.5);
        assert!(alpha > 0.0);
        let model = DecayModel::new(alpha, 1.0).unwrap();
        assert!((decay_bound(&model, m) - 1.0).abs() < 1e-12);

        // Doubling m multiplies the log-bound by exp(-m alpha / e^2).
        let model2 = DecayModel::new(2.0, 3.0).unwrap();
        for m in [2usize, 5, 9] {
            let lhs = decay_bound(&model2, 2 * m).ln() - decay_bound(&model2, m).ln();
            let rhs = -(m as f64) * model2.alpha / e2;
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn lift_preserves_norm() {
        let a = Matrix::from_fn(7, 7, |i, j| ((5 * i + j) % 9) as f64 / 4.0 - 1.0);
        let b = Vector::from_vec((0..7).map(|i| 1.0 + (i as f64) * 0.3).collect());
        let mut st = arnoldi_start(&a, &b, ArnoldiVariant::Householder).unwrap();
        for _ in 0..5 {
            arnoldi_extend(&mut st, &a).unwrap();
        }
        let y = Vector::from_vec(vec![0.3, -1.2, 0.0, 2.5, -0.4]);
        let x = st.lift(&y).unwrap();
        assert!((x.norm() - y.norm()).abs() < 1e-12);
        // y = e_1 lifts to w_1.
        let e1 = Vector::basis(5, 0);
        let w1 = st.lift(&e1).unwrap();
        assert!(w1.sub(st.w(1)).norm() < 1e-14);
        // Dimension check.
        assert!(st.lift(&Vector::zeros(3)).is_err());
    }
}

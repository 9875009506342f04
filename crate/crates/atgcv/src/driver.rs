//! The outer iteration: extend the Krylov decomposition, project the
//! regularizer, take the GSVD of the projected pair, pick the Tikhonov
//! parameter by minimizing the projected GCV function, solve the reduced
//! problem, and stop once the residual norm stagnates. Also the experiment
//! orchestration (CSV artifacts, full-GCV and optimal-parameter references)
//! and the image deblurring pipeline behind the command line tool.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::arnoldi::{
    arnoldi_extend, arnoldi_start, ArnoldiVariant, RegularizerProjection,
};
use crate::dense::{qr_lstsq, Matrix, Vector};
use crate::error::{Error, Result};
use crate::gcv::{lambda_grid, minimize_on_grid, FullGcv, ProjectedGcv, GRID_POINTS, GRID_WIDEN_DECADES};
use crate::gcv::optimal_lambda;
use crate::operator::LinearOperator;
use crate::problems::{
    add_noise, blur_operator, deriv1, kron_regularizer, make_problem, read_pgm, write_pgm,
    BlurConfig, ProblemKind,
};
use crate::tikhonov::solve_reduced;

/// Stopping strategies for the outer iteration. The residual rule is the
/// default; the GCV-value rule watches the minima of the projected GCV
/// functions instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopRule {
    Residual,
    GcvChange,
}

/// Regularizer choices for the 1D problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularizer1D {
    Identity,
    Deriv1,
}

impl Regularizer1D {
    pub fn build(&self, n: usize) -> Matrix {
        match self {
            Regularizer1D::Identity => Matrix::identity(n),
            Regularizer1D::Deriv1 => deriv1(n),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regularizer1D::Identity => "identity",
            Regularizer1D::Deriv1 => "deriv1",
        }
    }
}

/// Knobs of the outer iteration.
#[derive(Clone, Copy, Debug)]
pub struct AtGcvOptions {
    /// Residual stagnation threshold.
    pub delta: f64,
    /// Iteration cap.
    pub max_m: usize,
    pub variant: ArnoldiVariant,
    pub stop_rule: StopRule,
    /// Lambda-grid overrides.
    pub grid_points: usize,
    pub grid_widen: f64,
    /// Record wall-clock times. Off by default so identical configurations
    /// produce byte-identical artifacts.
    pub timing: bool,
}

impl Default for AtGcvOptions {
    fn default() -> Self {
        AtGcvOptions {
            delta: 1e-4,
            max_m: 50,
            variant: ArnoldiVariant::ModifiedGramSchmidt,
            stop_rule: StopRule::Residual,
            grid_points: GRID_POINTS,
            grid_widen: GRID_WIDEN_DECADES,
            timing: false,
        }
    }
}

impl AtGcvOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) {
            return Err(Error::InvalidArgument("delta must be positive".into()));
        }
        if self.max_m < 1 {
            return Err(Error::InvalidArgument("max_m must be at least 1".into()));
        }
        if self.grid_points < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
        }
        Ok(())
    }
}

/// Why the outer iteration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    ResidualRule,
    Breakdown,
    MaxM,
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Termination::ResidualRule => "residual-rule",
            Termination::Breakdown => "breakdown",
            Termination::MaxM => "max_m",
        }
    }
}

/// Per-iteration record of the outer loop.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub m: usize,
    pub lambda: f64,
    pub gcv_min: f64,
    pub residual_norm: f64,
    pub relative_error: Option<f64>,
    pub wall_time: f64,
}

/// Outcome of a run: the iteration history, the lifted solution, and the
/// reference parameters when a dense problem made them computable.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub records: Vec<IterationRecord>,
    pub final_x: Vector,
    pub terminated_by: Termination,
    /// Minimizer of the full GCV function (dense problems only).
    pub lambda_full_gcv: Option<f64>,
    /// Minimizer of the true-error curve (dense problems with known truth).
    pub lambda_opt: Option<f64>,
}

impl RunReport {
    pub fn final_record(&self) -> &IterationRecord {
        self.records.last().expect("records nonempty")
    }
}

/// Run the Arnoldi-Tikhonov iteration with per-step GCV parameter choice.
///
/// Per iteration: extend the decomposition, update `L_m`, take the GSVD of
/// `(Hbar_m, L_m)`, minimize the projected GCV function for `lambda_m`,
/// solve the reduced Tikhonov problem, and test the residual stagnation
/// rule (checked from m = 2 on, so one iteration always completes). On
/// exit the reduced solution is lifted: `x = W_m y_m`.
pub fn at_gcv(
    a: &dyn LinearOperator,
    b: &Vector,
    l: &dyn LinearOperator,
    x_true: Option<&Vector>,
    opts: &AtGcvOptions,
) -> Result<RunReport> {
    opts.validate()?;
    let start_time = Instant::now();
    let n = a.dim();
    if n < 2 {
        return Err(Error::InvalidArgument("problem dimension must be at least 2".into()));
    }
    let mut state = arnoldi_start(a, b, opts.variant)?;
    let beta = state.beta();
    let mut proj = RegularizerProjection::new();
    let mut records: Vec<IterationRecord> = Vec::new();

    let (terminated_by, y) = loop {
        arnoldi_extend(&mut state, a)?;
        let m = state.m();
        proj.update(l, &state)?;
        let hbar = state.hbar_matrix();
        let lm = proj.matrix().clone();

        let pg = ProjectedGcv::new(&hbar, &lm, beta, n)?;
        let (gmin, gmax) = pg.gamma_range()?;
        let grid = lambda_grid(gmin, gmax, opts.grid_points, opts.grid_widen);
        let (lambda_m, _curve) = minimize_on_grid(&mut |x| pg.eval(x), &grid)?;
        let gcv_min = pg.eval(lambda_m)?;

        let sol = solve_reduced(&hbar, &lm, beta, lambda_m)?;
        let relative_error = match x_true {
            Some(xt) => {
                let x = state.lift(&sol.y)?;
                Some(x.sub(xt).norm() / xt.norm())
            }
            None => None,
        };
        records.push(IterationRecord {
            m,
            lambda: lambda_m,
            gcv_min,
            residual_norm: sol.residual_norm,
            relative_error,
            wall_time: if opts.timing {
                start_time.elapsed().as_secs_f64()
            } else {
                0.0
            },
        });

        if state.breakdown() {
            break (Termination::Breakdown, sol.y);
        }
        if m >= 2 {
            let prev = &records[records.len() - 2];
            let cur = records.last().unwrap();
            let stop = match opts.stop_rule {
                StopRule::Residual => {
                    let r = cur.residual_norm;
                    r == 0.0 || (r - prev.residual_norm).abs() / r < opts.delta
                }
                StopRule::GcvChange => {
                    let g = cur.gcv_min;
                    g == 0.0 || (g - prev.gcv_min).abs() / g < opts.delta
                }
            };
            if stop {
                break (Termination::ResidualRule, sol.y);
            }
        }
        // The projected GCV denominator needs m < n, so the effective cap
        // is min(max_m, n - 1).
        if m >= opts.max_m || m + 1 >= n {
            break (Termination::MaxM, sol.y);
        }
    };

    let final_x = state.lift(&y)?;
    Ok(RunReport {
        records,
        final_x,
        terminated_by,
        lambda_full_gcv: None,
        lambda_opt: None,
    })
}

/// Configuration of a 1D test-problem run.
#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub problem: ProblemKind,
    pub n: usize,
    pub noise: f64,
    pub seed: u64,
    pub reg: Regularizer1D,
    pub opts: AtGcvOptions,
}

/// Everything a 1D experiment produced, for reporting and tests.
pub struct SolveOutcome {
    pub report: RunReport,
    pub problem_n: usize,
    /// Relative error of the plain unregularized least-squares solution,
    /// when computable.
    pub unregularized_error: Option<f64>,
}

/// Run a 1D experiment: generate the problem, corrupt the data, run the
/// iteration, and (for dense sizes) attach the full-GCV and optimal
/// reference parameters.
pub fn run_experiment(cfg: &SolveConfig) -> Result<SolveOutcome> {
    let p = make_problem(cfg.problem, cfg.n)?;
    let b = add_noise(&p.b_exact, cfg.noise, cfg.seed)?;
    let l = cfg.reg.build(cfg.n);
    let mut report = at_gcv(&p.a, &b, &l, Some(&p.x_true), &cfg.opts)?;

    let mut unreg = None;
    if cfg.n <= 256 {
        let full = FullGcv::new(&p.a, &l, &b)?;
        let (gmin, gmax) = full.gamma_range()?;
        let grid = lambda_grid(gmin, gmax, cfg.opts.grid_points, cfg.opts.grid_widen);
        let (lambda_a, _) = minimize_on_grid(&mut |x| full.eval(x), &grid)?;
        report.lambda_full_gcv = Some(lambda_a);
        report.lambda_opt = Some(optimal_lambda(&p.a, &l, &b, &p.x_true)?);
        unreg = match qr_lstsq(&p.a, &b) {
            Ok(x_ls) => Some(x_ls.sub(&p.x_true).norm() / p.x_true.norm()),
            Err(Error::RankDeficient { .. }) => None,
            Err(e) => return Err(e),
        };
    }
    Ok(SolveOutcome { report, problem_n: cfg.n, unregularized_error: unreg })
}

/// Run a 1D experiment and write its run CSV into `out_dir`.
pub fn run_experiment_to_dir(cfg: &SolveConfig, out_dir: &Path) -> Result<SolveOutcome> {
    let outcome = run_experiment(cfg)?;
    fs::create_dir_all(out_dir)?;
    write_run_csv(&out_dir.join("run.csv"), &outcome.report)?;
    Ok(outcome)
}

/// Configuration of a deblurring run.
#[derive(Clone, Debug)]
pub struct DeblurConfig {
    pub blur: BlurConfig,
    pub noise: f64,
    pub seed: u64,
    /// When set, the input image is already blurred and noisy; otherwise the
    /// observation is synthesized from the clean input.
    pub pre_corrupted: bool,
    pub opts: AtGcvOptions,
}

pub struct DeblurOutcome {
    pub report: RunReport,
    pub restored: Matrix,
    /// The corrupted observation as an image (synthesized runs only).
    pub corrupted: Option<Matrix>,
}

/// Column-stack an image into a vector.
pub fn image_to_vec(img: &Matrix) -> Vector {
    let n = img.rows();
    let mut x = Vector::zeros(n * img.cols());
    for j in 0..img.cols() {
        for i in 0..n {
            x[j * n + i] = img[(i, j)];
        }
    }
    x
}

/// Reshape a column-stacked vector back into an `n x n` image.
pub fn vec_to_image(x: &Vector, n: usize) -> Matrix {
    assert_eq!(x.len(), n * n);
    Matrix::from_fn(n, n, |i, j| x[j * n + i])
}

/// Deblur an image: build the blur operator and the Kronecker-sum
/// regularizer, synthesize the observation unless the input is already
/// corrupted, and run the iteration matrix-free.
pub fn deblur_image(image: &Matrix, cfg: &DeblurConfig) -> Result<DeblurOutcome> {
    if image.rows() != image.cols() {
        return Err(Error::InvalidArgument(format!(
            "deblurring expects a square image, got {}x{}",
            image.rows(),
            image.cols()
        )));
    }
    let n = image.rows();
    if n != cfg.blur.n {
        return Err(Error::InvalidArgument(format!(
            "blur config side {} does not match image side {n}",
            cfg.blur.n
        )));
    }
    let a = blur_operator(&cfg.blur)?;
    let l = kron_regularizer(n)?;
    let x_in = image_to_vec(image);

    let (b, x_true, corrupted) = if cfg.pre_corrupted {
        (x_in, None, None)
    } else {
        let b_bar = a.apply(&x_in);
        let b = add_noise(&b_bar, cfg.noise, cfg.seed)?;
        let corrupted = vec_to_image(&b, n);
        (b, Some(x_in), Some(corrupted))
    };

    let report = at_gcv(&a, &b, &l, x_true.as_ref(), &cfg.opts)?;
    let restored = vec_to_image(&report.final_x, n);
    Ok(DeblurOutcome { report, restored, corrupted })
}

/// File-based deblurring entry point: read a PGM, run, write the restored
/// image (and the synthesized corrupted observation) plus the run CSV.
pub fn deblur_file(input: &Path, cfg: &DeblurConfig, out_dir: &Path) -> Result<DeblurOutcome> {
    let image = read_pgm(input)?;
    let mut cfg = cfg.clone();
    cfg.blur.n = image.rows();
    let outcome = deblur_image(&image, &cfg)?;
    fs::create_dir_all(out_dir)?;
    write_pgm(&out_dir.join("restored.pgm"), &outcome.restored)?;
    if let Some(corrupted) = &outcome.corrupted {
        write_pgm(&out_dir.join("corrupted.pgm"), corrupted)?;
    }
    write_run_csv(&out_dir.join("run.csv"), &outcome.report)?;
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// CSV artifacts
// ---------------------------------------------------------------------------

/// Full-precision scientific formatting: 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{:.16e}", v)
    }
}

fn write_lines(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut body = String::with_capacity(rows.len() * 64 + header.len() + 1);
    body.push_str(header);
    body.push('\n');
    for r in rows {
        body.push_str(r);
        body.push('\n');
    }
    fs::write(path, body)?;
    Ok(())
}

/// The per-iteration run table.
pub fn write_run_csv(path: &Path, report: &RunReport) -> Result<()> {
    let rows: Vec<String> = report
        .records
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.m,
                fmt_float(r.lambda),
                fmt_float(r.gcv_min),
                fmt_float(r.residual_norm),
                fmt_float(r.relative_error.unwrap_or(f64::NAN)),
                fmt_float(r.wall_time)
            )
        })
        .collect();
    write_lines(path, "m,lambda_m,gcv_min,residual_norm,rel_error,wall_time_s", &rows)
}

/// Dump a problem's operator, data and solution for external checking.
pub fn write_problem_csv(kind: ProblemKind, n: usize, out_dir: &Path) -> Result<()> {
    let p = make_problem(kind, n)?;
    fs::create_dir_all(out_dir)?;
    let header: Vec<String> = (0..n).map(|j| format!("c{j}")).collect();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| fmt_float(p.a[(i, j)]))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    write_lines(&out_dir.join("A.csv"), &header.join(","), &rows)?;
    let brows: Vec<String> = (0..n).map(|i| fmt_float(p.b_exact[i])).collect();
    write_lines(&out_dir.join("b.csv"), "b", &brows)?;
    let xrows: Vec<String> = (0..n).map(|i| fmt_float(p.x_true[i])).collect();
    write_lines(&out_dir.join("x_true.csv"), "x_true", &xrows)?;
    Ok(())
}

/// Diagnostic tables for a problem: subdiagonal decay against its bound,
/// subdiagonals against singular values, lifted-SVD error against its
/// Krylov characterization and the single-column estimate, and projected
/// against true (generalized) singular values.
pub fn diagnose(kind: ProblemKind, n: usize, max_m: usize, out_dir: &Path) -> Result<PathBuf> {
    use crate::arnoldi::{decay_bound, decay_product, DecayModel};
    use crate::dense::{spectral_norm, svd};
    use crate::spectral::{aposteriori_bound, approx_gsvd, approx_svd, truncation_error};

    if n > 256 {
        return Err(Error::InvalidArgument(
            "diagnostics assemble dense factors; use n <= 256".into(),
        ));
    }
    let p = make_problem(kind, n)?;
    let dense = svd(&p.a)?;
    let l = deriv1(n);
    let dense_pair = crate::dense::gsvd(&p.a, &l)?;
    let model = match p.alpha_hint {
        Some(alpha) => Some(DecayModel::fitted(alpha, dense.sigma[0])?),
        None => None,
    };

    let mut state = arnoldi_start(&p.a, &p.b_exact, ArnoldiVariant::Householder)?;
    let mut proj = RegularizerProjection::new();

    let mut decay_rows = Vec::new();
    let mut hs_rows = Vec::new();
    let mut resid_rows = Vec::new();
    let mut sv_rows = Vec::new();

    for m in 1..=max_m {
        if state.breakdown() || m > n {
            break;
        }
        arnoldi_extend(&mut state, &p.a)?;
        proj.update(&l, &state)?;

        let h_m = state.subdiagonals()[m - 1];
        let product = decay_product(&state, m)?;
        let bound = model.as_ref().map(|md| decay_bound(md, m));
        decay_rows.push(format!(
            "{},{},{}",
            m,
            fmt_float(product),
            fmt_float(bound.unwrap_or(f64::NAN))
        ));
        let sigma_m = dense.sigma[m - 1];
        hs_rows.push(format!("{},{},{}", m, fmt_float(h_m), fmt_float(sigma_m)));

        // Lifted-SVD error and its exact Krylov characterization.
        let t = approx_svd(&state)?;
        let mut approx = Matrix::zeros(n, n);
        for k in 0..state.m() {
            let uk = t.ubar.col(k);
            let vk = t.vbar.col(k);
            for i in 0..n {
                for j in 0..n {
                    approx[(i, j)] += t.sigma[k] * uk[i] * vk[j];
                }
            }
        }
        let err = spectral_norm(&p.a.sub(&approx))?;
        let trunc = truncation_error(&p.a, &state)?;
        let apost = if state.has_next_basis() {
            Some(aposteriori_bound(&state, &p.a)?)
        } else {
            None
        };
        resid_rows.push(format!(
            "{},{},{},{}",
            m,
            fmt_float(err),
            fmt_float(trunc),
            fmt_float(apost.unwrap_or(f64::NAN))
        ));

        // Projected vs true values, descending in k.
        let g = approx_gsvd(&state, proj.matrix())?;
        for k in 0..state.m() {
            let sigma_proj = t.sigma[k];
            let sigma_true = dense.sigma[k];
            let gamma_proj = g.gamma[state.m() - 1 - k];
            let gamma_true = dense_pair.gamma[n - 1 - k];
            sv_rows.push(format!(
                "{},{},{},{},{},{}",
                m,
                k + 1,
                fmt_float(sigma_proj),
                fmt_float(sigma_true),
                fmt_float(gamma_proj),
                fmt_float(gamma_true)
            ));
        }
    }

    fs::create_dir_all(out_dir)?;
    write_lines(&out_dir.join("decay.csv"), "m,decay_product,decay_bound", &decay_rows)?;
    write_lines(&out_dir.join("h_vs_sigma.csv"), "m,h_subdiag,sigma_m", &hs_rows)?;
    write_lines(
        &out_dir.join("svd_residual.csv"),
        "m,lifted_svd_error,truncation_error,single_col_estimate",
        &resid_rows,
    )?;
    write_lines(
        &out_dir.join("singular_values.csv"),
        "m,k,sigma_proj,sigma_true,gamma_proj,gamma_true",
        &sv_rows,
    )?;
    Ok(out_dir.to_path_buf())
}

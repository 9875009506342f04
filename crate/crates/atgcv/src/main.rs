//! Command line front end: classical test-problem runs, image deblurring,
//! diagnostics, and problem dumps. Exit codes: 0 success, 2 bad arguments,
//! 3 numerical failure, 4 i/o failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use atgcv::arnoldi::ArnoldiVariant;
use atgcv::driver::{
    deblur_file, diagnose, run_experiment_to_dir, write_problem_csv, AtGcvOptions, DeblurConfig,
    Regularizer1D, SolveConfig, StopRule,
};
use atgcv::problems::{BlurConfig, ProblemKind};
use atgcv::Error;

#[derive(Parser)]
#[command(
    name = "atgcv",
    about = "Arnoldi-Tikhonov solver with per-iteration GCV parameter selection",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegArg {
    Identity,
    Deriv1,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Mgs,
    Householder,
}

#[derive(Clone, Copy, ValueEnum)]
enum StopArg {
    Residual,
    Gcv,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a classical 1D test problem and write the run history CSV.
    Solve {
        /// Problem name: shaw, wing, baart, foxgood, i_laplace.
        #[arg(long)]
        problem: String,
        /// Problem dimension.
        #[arg(long)]
        n: usize,
        /// Relative Gaussian noise level on the right-hand side.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Seed of the noise generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Regularization operator.
        #[arg(long, value_enum, default_value_t = RegArg::Deriv1)]
        reg: RegArg,
        /// Residual stagnation threshold.
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
        /// Iteration cap.
        #[arg(long = "max-m", default_value_t = 50)]
        max_m: usize,
        /// Orthogonalization variant.
        #[arg(long, value_enum, default_value_t = VariantArg::Mgs)]
        variant: VariantArg,
        /// Stopping rule.
        #[arg(long = "stop-rule", value_enum, default_value_t = StopArg::Residual)]
        stop_rule: StopArg,
        /// Lambda grid size override.
        #[arg(long = "grid-points", default_value_t = 200)]
        grid_points: usize,
        /// Lambda grid widening in decades on each side.
        #[arg(long = "grid-widen", default_value_t = 2.0)]
        grid_widen: f64,
        /// Record wall-clock times (makes outputs non-reproducible).
        #[arg(long, default_value_t = false)]
        timing: bool,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Restore a blurred and noisy image (or corrupt-and-restore a clean one).
    Deblur {
        /// Input image (binary 8-bit PGM, square).
        #[arg(long = "in")]
        input: PathBuf,
        /// Half-bandwidth of the Toeplitz blur factor.
        #[arg(long, default_value_t = 7)]
        band: usize,
        /// Spread of the Gaussian point spread function.
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
        /// Relative Gaussian noise level for the synthesized observation.
        #[arg(long, default_value_t = 1e-2)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Treat the input as an already corrupted observation.
        #[arg(long = "pre-corrupted", default_value_t = false)]
        pre_corrupted: bool,
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
        #[arg(long = "max-m", default_value_t = 50)]
        max_m: usize,
        #[arg(long, default_value_t = false)]
        timing: bool,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit convergence and approximation diagnostics as CSV tables.
    Diagnose {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        n: usize,
        #[arg(long = "max-m", default_value_t = 10)]
        max_m: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dump a test problem's operator, data and solution as CSV.
    Problem {
        #[arg(long)]
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve {
            problem,
            n,
            noise,
            seed,
            reg,
            delta,
            max_m,
            variant,
            stop_rule,
            grid_points,
            grid_widen,
            timing,
            out,
        } => {
            let cfg = SolveConfig {
                problem: problem.parse::<ProblemKind>()?,
                n,
                noise,
                seed,
                reg: match reg {
                    RegArg::Identity => Regularizer1D::Identity,
                    RegArg::Deriv1 => Regularizer1D::Deriv1,
                },
                opts: AtGcvOptions {
                    delta,
                    max_m,
                    variant: match variant {
                        VariantArg::Mgs => ArnoldiVariant::ModifiedGramSchmidt,
                        VariantArg::Householder => ArnoldiVariant::Householder,
                    },
                    stop_rule: match stop_rule {
                        StopArg::Residual => StopRule::Residual,
                        StopArg::Gcv => StopRule::GcvChange,
                    },
                    grid_points,
                    grid_widen,
                    timing,
                },
            };
            let outcome = run_experiment_to_dir(&cfg, &out)?;
            let rec = outcome.report.final_record();
            println!(
                "terminated by {} at m = {}, lambda = {:.4e}, residual = {:.4e}",
                outcome.report.terminated_by.name(),
                rec.m,
                rec.lambda,
                rec.residual_norm
            );
            if let Some(err) = rec.relative_error {
                println!("relative error = {:.4e}", err);
            }
            if let Some(la) = outcome.report.lambda_full_gcv {
                println!("full-GCV lambda_A = {:.4e}", la);
            }
            if let Some(lo) = outcome.report.lambda_opt {
                println!("optimal lambda = {:.4e}", lo);
            }
            println!("wrote {}", out.join("run.csv").display());
            Ok(())
        }
        Command::Deblur {
            input,
            band,
            sigma,
            noise,
            seed,
            pre_corrupted,
            delta,
            max_m,
            timing,
            out,
        } => {
            let cfg = DeblurConfig {
                // Image side is filled in from the file.
                blur: BlurConfig { n: 2, band, sigma },
                noise,
                seed,
                pre_corrupted,
                opts: AtGcvOptions { delta, max_m, timing, ..Default::default() },
            };
            let outcome = deblur_file(&input, &cfg, &out)?;
            let rec = outcome.report.final_record();
            println!(
                "terminated by {} at m = {}, lambda = {:.4e}",
                outcome.report.terminated_by.name(),
                rec.m,
                rec.lambda
            );
            if let Some(err) = rec.relative_error {
                println!("restored relative error = {:.4e}", err);
            }
            println!("wrote {}", out.join("restored.pgm").display());
            Ok(())
        }
        Command::Diagnose { problem, n, max_m, out } => {
            let kind = problem.parse::<ProblemKind>()?;
            let dir = diagnose(kind, n, max_m, &out)?;
            println!("wrote diagnostics under {}", dir.display());
            Ok(())
        }
        Command::Problem { name, n, out } => {
            let kind = name.parse::<ProblemKind>()?;
            write_problem_csv(kind, n, &out)?;
            println!("wrote A.csv, b.csv, x_true.csv under {}", out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! Command-line definition and dispatch.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use kl_pdhg::oracle::{kkt_residual, kkt_residual_with_dual, lambda_max};
use kl_pdhg::{
    objective, solve, solve_l1, solve_path, Dataset, PathConfig, PenaltyParams, SolveConfig,
    StepNorm,
};

use crate::bench::{generate, BenchSpec};
use crate::io::{load_coefficients, load_dataset, write_csv, Format};
use crate::output::{sparse_coefficients, BenchOutput, CheckOutput, PathOutput, SolveOutput};

/// Exit status for a run whose solver stopped at `max_iter`.
pub const EXIT_NOT_CONVERGED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "klpdhg",
    version,
    about = "Sparse logistic regression by primal-dual iterations with KL proximal steps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Constant used for the step sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StepRule {
    /// Largest row norm of the design.
    RowMax,
    /// Half the spectral norm; slower but converges on correlated designs.
    Spectral,
}

impl From<StepRule> for StepNorm {
    fn from(r: StepRule) -> Self {
        match r {
            StepRule::RowMax => StepNorm::RowMax,
            StepRule::Spectral => StepNorm::Spectral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    /// Elastic net, fixed steps (alpha < 1).
    En,
    /// Lasso, adaptive steps.
    L1,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Destination file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub output_format: OutputFormat,
    /// Worker threads for the matrix kernels.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one (lambda, alpha) pair.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        #[arg(long, value_enum, default_value = "row-max")]
        step_norm: StepRule,
        /// Include the per-iteration residual in the output.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit a warm-started path over a log-spaced grid ending at lambda_max.
    Path {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 100)]
        nlambda: usize,
        #[arg(long, default_value_t = 1e-3)]
        lambda_min_ratio: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        #[arg(long, value_enum, default_value = "row-max")]
        step_norm: StepRule,
        /// Solve every grid point from zero.
        #[arg(long)]
        cold: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Report objective and optimality residuals of a coefficient file.
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        coefficients: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        lambda: f64,
        /// Stationarity residual accepted as optimal.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time a solver on a seeded synthetic instance.
    Bench {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        correlation: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "en")]
        solver: SolverKind,
        /// Ignored by the lasso solver.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Absolute lambda; defaults to a tenth of lambda_max.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        #[arg(long, value_enum, default_value = "row-max")]
        step_norm: StepRule,
        /// Also write the generated dataset as CSV.
        #[arg(long)]
        write_data: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn sink(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> anyhow::Result<T> {
    match threads {
        Some(0) => anyhow::bail!("--threads must be positive"),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(f)),
        None => Ok(f()),
    }
}

fn load(input: &InputArgs) -> anyhow::Result<Dataset> {
    load_dataset(&input.input, input.format)
        .with_context(|| format!("loading {}", input.input.display()))
}

fn fit(
    data: &Dataset,
    p: &PenaltyParams,
    cfg: &SolveConfig,
) -> kl_pdhg::Result<kl_pdhg::SolveReport> {
    if p.alpha() >= 1.0 {
        solve_l1(data, p.lambda(), cfg)
    } else {
        solve(data, p, cfg)
    }
}

/// Runs one command and returns the process exit status: `0` on success,
/// [`EXIT_NOT_CONVERGED`] when a solve stopped at its iteration cap.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Solve {
            input,
            alpha,
            lambda,
            tol,
            max_iter,
            step_norm,
            trace,
            output,
        } => {
            let data = load(&input)?;
            let p = PenaltyParams::new(lambda, alpha)?;
            let cfg = SolveConfig::default()
                .with_tol(tol)
                .with_max_iter(max_iter)
                .with_step_norm(step_norm.into());
            let r = with_threads(output.threads, || fit(&data, &p, &cfg))??;
            let kkt = kkt_residual_with_dual(&data, &r.theta_final, &r.s_final, &p)?;
            let converged = r.converged();
            let res = SolveOutput {
                lambda,
                alpha,
                n_features: data.nfeatures(),
                theta: sparse_coefficients(&r.theta_final),
                objective: r.objective_final,
                iterations: r.iterations,
                final_residual: r.final_residual(),
                kkt: kkt.into(),
                converged,
                residual_history: trace.then_some(r.residual_history),
            };
            let mut w = sink(&output.out)?;
            match output.output_format {
                OutputFormat::Json => res.write_json(&mut w)?,
                OutputFormat::Csv => res.write_csv(&mut w)?,
            }
            w.flush()?;
            Ok(if converged { 0 } else { EXIT_NOT_CONVERGED })
        }
        Command::Path {
            input,
            alpha,
            nlambda,
            lambda_min_ratio,
            tol,
            max_iter,
            step_norm,
            cold,
            output,
        } => {
            let data = load(&input)?;
            let cfg = PathConfig {
                n_lambda: nlambda,
                lambda_min_ratio,
                alpha,
                tol,
                max_iter,
                warm_start: !cold,
                step_norm: step_norm.into(),
            };
            let r = with_threads(output.threads, || solve_path(&data, &cfg))??;
            let res = PathOutput::new(alpha, data.nfeatures(), &r);
            let mut w = sink(&output.out)?;
            match output.output_format {
                OutputFormat::Json => res.write_json(&mut w)?,
                OutputFormat::Csv => res.write_csv(&mut w)?,
            }
            w.flush()?;
            Ok(if r.partial { EXIT_NOT_CONVERGED } else { 0 })
        }
        Command::Check {
            input,
            coefficients,
            alpha,
            lambda,
            tol,
            out,
        } => {
            let data = load(&input)?;
            let p = PenaltyParams::new(lambda, alpha)?;
            let theta = load_coefficients(&coefficients, data.nfeatures())
                .with_context(|| format!("loading {}", coefficients.display()))?;
            let kkt = kkt_residual(&data, &theta, &p)?;
            let passed = kkt.stationarity_residual <= tol;
            let res = CheckOutput {
                lambda,
                alpha,
                objective: objective(&data, &theta, &p)?,
                nonzeros: theta.iter().filter(|t| **t != 0.0).count(),
                kkt: kkt.into(),
                tol,
                passed,
            };
            let mut w = sink(&out)?;
            serde_json::to_writer_pretty(&mut w, &res)?;
            writeln!(w)?;
            w.flush()?;
            Ok(if passed { 0 } else { EXIT_NOT_CONVERGED })
        }
        Command::Bench {
            m,
            n,
            correlation,
            seed,
            solver,
            alpha,
            lambda,
            tol,
            max_iter,
            step_norm,
            write_data,
            out,
            threads,
        } => {
            let inst = generate(&BenchSpec {
                m,
                n,
                correlation,
                seed,
            })?;
            let data = inst.data;
            if let Some(path) = &write_data {
                let mut w = BufWriter::new(
                    File::create(path)
                        .with_context(|| format!("cannot create {}", path.display()))?,
                );
                write_csv(&data, &mut w)?;
                w.flush()?;
            }
            let alpha = match solver {
                SolverKind::En => alpha,
                SolverKind::L1 => 1.0,
            };
            let lmax = lambda_max(&data, alpha)?;
            let lambda = lambda.unwrap_or(0.1 * lmax);
            let p = PenaltyParams::new(lambda, alpha)?;
            let cfg = SolveConfig::default()
                .with_tol(tol)
                .with_max_iter(max_iter)
                .with_step_norm(step_norm.into());
            let (r, secs) = with_threads(threads, || {
                let t = Instant::now();
                let r = match solver {
                    SolverKind::En => solve(&data, &p, &cfg),
                    SolverKind::L1 => solve_l1(&data, lambda, &cfg),
                };
                (r, t.elapsed().as_secs_f64())
            })?;
            let r = r?;
            let res = BenchOutput {
                m,
                n,
                correlation,
                seed,
                solver: format!("{solver:?}").to_lowercase(),
                lambda,
                alpha,
                lambda_max: lmax,
                iterations: r.iterations,
                converged: r.converged(),
                objective: r.objective_final,
                nonzeros: r.theta_final.iter().filter(|t| **t != 0.0).count(),
                wall_time_secs: secs,
            };
            let mut w = sink(&out)?;
            serde_json::to_writer_pretty(&mut w, &res)?;
            writeln!(w)?;
            w.flush()?;
            Ok(if r.converged() { 0 } else { EXIT_NOT_CONVERGED })
        }
    }
}

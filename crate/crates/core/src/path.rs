//! Regularization paths over a log-spaced, decreasing grid of `lambda`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{objective, Dataset, PenaltyParams};
use crate::oracle::lambda_max;
use crate::solver::{solve, solve_l1, SolveConfig, SolveReport, StepNorm, WarmStart};

#[derive(Debug, Clone)]
pub struct PathConfig {
    pub n_lambda: usize,
    pub lambda_min_ratio: f64,
    /// Mixing weight in `(0, 1]`; `1` selects the lasso solver.
    pub alpha: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Start each solve from the previous solution and its induced dual.
    pub warm_start: bool,
    pub step_norm: StepNorm,
}

impl PathConfig {
    pub fn new(alpha: f64) -> Self {
        Self {
            n_lambda: 100,
            lambda_min_ratio: 1e-3,
            alpha,
            tol: 1e-8,
            max_iter: 100_000,
            warm_start: true,
            step_norm: StepNorm::RowMax,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_lambda < 2 {
            return Err(Error::InvalidParameter {
                name: "n_lambda",
                value: self.n_lambda as f64,
            });
        }
        if !(self.lambda_min_ratio > 0.0 && self.lambda_min_ratio < 1.0) {
            return Err(Error::InvalidParameter {
                name: "lambda_min_ratio",
                value: self.lambda_min_ratio,
            });
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: self.alpha,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PathResult {
    pub lambdas: Vec<f64>,
    pub coefficients: Vec<Vec<f64>>,
    pub nonzero_counts: Vec<usize>,
    pub objectives: Vec<f64>,
    pub per_solve_iterations: Vec<usize>,
    /// Whether each solve met its tolerance.
    pub converged: Vec<bool>,
    /// Set when at least one solve hit `max_iter`.
    pub partial: bool,
}

impl PathResult {
    pub fn total_iterations(&self) -> usize {
        self.per_solve_iterations.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// `n_lambda` values from `lambda_max` down to `lambda_min_ratio * lambda_max`,
/// equally spaced in `log lambda`.
pub fn make_lambda_grid(data: &Dataset, cfg: &PathConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let top = lambda_max(data, cfg.alpha)?;
    if top == 0.0 {
        return Err(Error::EmptyPath);
    }
    let last = (cfg.n_lambda - 1) as f64;
    Ok((0..cfg.n_lambda)
        .map(|i| top * libm::pow(cfg.lambda_min_ratio, i as f64 / last))
        .collect())
}

/// Solves along the grid in decreasing order. Grid points at or above
/// `lambda_max` have the all-zero solution and are not iterated.
pub fn solve_path(data: &Dataset, cfg: &PathConfig) -> Result<PathResult> {
    let lambdas = make_lambda_grid(data, cfg)?;
    let top = lambda_max(data, cfg.alpha)?;
    let n = data.nfeatures();
    let k = lambdas.len();
    let mut out = PathResult {
        lambdas: Vec::with_capacity(k),
        coefficients: Vec::with_capacity(k),
        nonzero_counts: Vec::with_capacity(k),
        objectives: Vec::with_capacity(k),
        per_solve_iterations: Vec::with_capacity(k),
        converged: Vec::with_capacity(k),
        partial: false,
    };
    let mut previous: Option<Vec<f64>> = None;
    for &lambda in &lambdas {
        let params = PenaltyParams::new(lambda, cfg.alpha)?;
        let (theta, iterations, ok) = if lambda >= top {
            (vec![0.0; n], 0, true)
        } else {
            let mut solve_cfg = SolveConfig::default()
                .with_tol(cfg.tol)
                .with_max_iter(cfg.max_iter)
                .with_step_norm(cfg.step_norm);
            if cfg.warm_start {
                if let Some(prev) = &previous {
                    solve_cfg = solve_cfg.with_warm_start(WarmStart::from_theta(data, prev)?);
                }
            }
            let report: SolveReport = if cfg.alpha < 1.0 {
                solve(data, &params, &solve_cfg)?
            } else {
                solve_l1(data, lambda, &solve_cfg)?
            };
            let ok = report.converged();
            (report.theta_final, report.iterations, ok)
        };
        out.partial |= !ok;
        out.objectives.push(objective(data, &theta, &params)?);
        out.nonzero_counts
            .push(theta.iter().filter(|t| **t != 0.0).count());
        out.per_solve_iterations.push(iterations);
        out.converged.push(ok);
        out.lambdas.push(lambda);
        previous = Some(theta.clone());
        out.coefficients.push(theta);
    }
    Ok(out)
}

//! Accelerated adaptive-step scheme for the lasso (`alpha = 1`).
//!
//! Starting from `sigma_0 tau_0 L^2 = 1`, every iteration applies
//! `rho+ = 1/sqrt(1 + sigma)`, `sigma+ = rho+ sigma`, `tau+ = tau / rho+`,
//! which keeps `sigma_k tau_k L^2 = 1` and drives the iterates to a saddle
//! point at rate `O(1/k^2)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::norm1;
use crate::model::{logistic_loss, Dataset};
use crate::prox::elastic_net_prox_into;

use super::{
    drive, primal_dual_step, step_constant, zero_design_report, SolveConfig, SolveReport,
    SolverState, StepRecord,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveSteps {
    pub rho: f64,
    pub sigma: f64,
    pub tau: f64,
    /// Cached `|A|_op^2`.
    pub op_norm_sq: f64,
}

/// Initial steps. `tau0` defaults to `1 / (2 L^2)`, the value maximizing the
/// `k^2` coefficient of the rate bound; `rho0` defaults to 1/2.
pub fn init_adaptive_steps(
    op_norm: f64,
    tau0: Option<f64>,
    rho0: Option<f64>,
) -> Result<AdaptiveSteps> {
    if !(op_norm > 0.0 && op_norm.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "op_norm",
            value: op_norm,
        });
    }
    let op_norm_sq = op_norm * op_norm;
    let tau = tau0.unwrap_or(0.5 / op_norm_sq);
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "tau0",
            value: tau,
        });
    }
    let rho = rho0.unwrap_or(0.5);
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter {
            name: "rho0",
            value: rho,
        });
    }
    Ok(AdaptiveSteps {
        rho,
        sigma: 1.0 / (tau * op_norm_sq),
        tau,
        op_norm_sq,
    })
}

impl AdaptiveSteps {
    /// The step update applied after every iteration.
    pub fn step_update(&self) -> Self {
        let rho = 1.0 / libm::sqrt(1.0 + self.sigma);
        Self {
            rho,
            sigma: rho * self.sigma,
            tau: self.tau / rho,
            op_norm_sq: self.op_norm_sq,
        }
    }

    /// `sigma tau L^2`, identically 1 in exact arithmetic.
    pub fn step_product(&self) -> f64 {
        self.sigma * self.tau * self.op_norm_sq
    }

    pub fn record(&self) -> StepRecord {
        StepRecord {
            rho: self.rho,
            sigma: self.sigma,
            tau: self.tau,
        }
    }
}

/// Value of the rate lower bound after `k` iterations:
/// `2 t L^2 / (1 + 2 t L^2) k + 2 t / (1 + 2 t L^2)^2 k^2` with `t = tau0`.
pub fn rate_lower_bound(tau0: f64, op_norm: f64, k: f64) -> f64 {
    let q = 2.0 * tau0 * op_norm * op_norm;
    q / (1.0 + q) * k + 2.0 * tau0 / ((1.0 + q) * (1.0 + q)) * k * k
}

/// One iteration with l1 weight `m lambda`, followed by the step update.
/// `lambda = 0` turns the prox into the identity.
pub fn iterate_once_l1(
    state: &mut SolverState,
    steps: &mut AdaptiveSteps,
    data: &Dataset,
    lambda: f64,
) {
    let weight = data.nsamples() as f64 * lambda;
    primal_dual_step(
        state,
        data,
        steps.rho,
        steps.sigma,
        steps.tau,
        |hat, tau, out| {
            elastic_net_prox_into(hat, weight * tau, 0.0, out);
            Ok(())
        },
    )
    .expect("l1 prox is total");
    *steps = steps.step_update();
}

/// Solves the lasso problem with default initial steps.
pub fn solve_l1(data: &Dataset, lambda: f64, cfg: &SolveConfig) -> Result<SolveReport> {
    let op_norm = step_constant(data.design(), cfg.step_norm);
    if op_norm == 0.0 {
        check_lambda(lambda)?;
        return Ok(zero_design_report(data, 0.0));
    }
    solve_l1_with_steps(data, lambda, cfg, init_adaptive_steps(op_norm, None, None)?)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
        })
    }
}

/// Solves the lasso problem from explicit initial steps.
pub fn solve_l1_with_steps(
    data: &Dataset,
    lambda: f64,
    cfg: &SolveConfig,
    mut steps: AdaptiveSteps,
) -> Result<SolveReport> {
    check_lambda(lambda)?;
    let state = cfg.initial_state(data)?;
    let mut records = Vec::new();
    let (state, history, termination) = drive(state, cfg, |st| {
        records.push(steps.record());
        iterate_once_l1(st, &mut steps, data, lambda);
        Ok(())
    })?;
    Ok(SolveReport {
        objective_final: logistic_loss(&state.u_curr, data.y()) + lambda * norm1(&state.theta),
        theta_final: state.theta,
        s_final: state.s,
        iterations: state.k,
        residual_history: history,
        termination,
        step_history: records,
    })
}

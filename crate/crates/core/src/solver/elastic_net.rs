//! Fixed-step scheme for the elastic net (`alpha < 1`).
//!
//! With `L = |A|_op` and ridge weight `lambda2 = m lambda (1 - alpha)` the
//! steps
//!
//! ```text
//! rho   = 1 - lambda2 / (2 L^2) * (sqrt(1 + 4 L^2 / lambda2) - 1)
//! sigma = (1 - rho) / rho
//! tau   = (1 - rho) / (lambda2 rho)
//! ```
//!
//! give `1/2 |theta* - theta_k|^2 <= rho^k (1/2 |theta* - theta_0|^2 + D(s*, s_0) / lambda2)`.

use crate::error::{Error, Result};
use crate::model::{logistic_loss, Dataset, PenaltyParams};
use crate::prox::elastic_net_prox_into;

use super::{
    drive, primal_dual_step, step_constant, zero_design_report, SolveConfig, SolveReport,
    SolverState,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedSteps {
    pub rho: f64,
    pub sigma: f64,
    pub tau: f64,
}

/// Closed-form step parameters from the operator norm and the ridge weight.
pub fn compute_fixed_steps(op_norm: f64, lambda2: f64) -> Result<FixedSteps> {
    if !(op_norm > 0.0 && op_norm.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "op_norm",
            value: op_norm,
        });
    }
    if !(lambda2 > 0.0 && lambda2.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "lambda2",
            value: lambda2,
        });
    }
    // 1 - (l2 / 2L^2)(sqrt(1 + x) - 1) with x = 4L^2 / l2 equals
    // x / (sqrt(1 + x) + 1)^2, which avoids cancellation when x is small.
    let x = 4.0 * op_norm * op_norm / lambda2;
    let r = libm::sqrt(1.0 + x) + 1.0;
    let rho = x / (r * r);
    Ok(FixedSteps {
        rho,
        sigma: (1.0 - rho) / rho,
        tau: (1.0 - rho) / (lambda2 * rho),
    })
}

/// One iteration of the elastic-net scheme.
pub fn iterate_once(
    state: &mut SolverState,
    steps: &FixedSteps,
    data: &Dataset,
    p: &PenaltyParams,
) {
    let m = data.nsamples();
    let (l1, l2) = (p.lambda1(m), p.lambda2(m));
    primal_dual_step(
        state,
        data,
        steps.rho,
        steps.sigma,
        steps.tau,
        |hat, tau, out| {
            elastic_net_prox_into(hat, l1 * tau, l2 * tau, out);
            Ok(())
        },
    )
    .expect("elastic-net prox is total");
}

/// Solves the elastic-net problem; requires `alpha < 1`.
pub fn solve(data: &Dataset, p: &PenaltyParams, cfg: &SolveConfig) -> Result<SolveReport> {
    if p.alpha() >= 1.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: p.alpha(),
        });
    }
    let op_norm = step_constant(data.design(), cfg.step_norm);
    if op_norm == 0.0 {
        return Ok(zero_design_report(data, 0.0));
    }
    let steps = compute_fixed_steps(op_norm, p.lambda2(data.nsamples()))?;
    let state = cfg.initial_state(data)?;
    let (state, history, termination) = drive(state, cfg, |st| {
        iterate_once(st, &steps, data, p);
        Ok(())
    })?;
    Ok(SolveReport {
        objective_final: logistic_loss(&state.u_curr, data.y()) + p.value(&state.theta),
        theta_final: state.theta,
        s_final: state.s,
        iterations: state.k,
        residual_history: history,
        termination,
        step_history: alloc::vec::Vec::new(),
    })
}

//! Nonlinear primal-dual hybrid gradient solvers.
//!
//! Both schemes alternate a Kullback-Leibler proximal ascent step on the
//! dual variable `s` (carried through its logits `v`) with a Euclidean
//! proximal descent step on the coefficients `theta`. The auxiliary vector
//! `u = A theta` is recomputed after every primal step, and
//! `|u - v|_2 -> 0` serves as the stopping criterion.

use alloc::vec;
use alloc::vec::Vec;

use crate::entropy::{grad_psi, sigmoid, DualPoint};
use crate::error::{check_len, Error, Result};
use crate::linalg::{dist2, norm2};
use crate::matrix::DesignMatrix;
use crate::model::Dataset;
use crate::prox::{Admissibility, Penalty};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod elastic_net;
pub mod lasso;

pub use elastic_net::{compute_fixed_steps, iterate_once, solve, FixedSteps};
pub use lasso::{
    init_adaptive_steps, iterate_once_l1, solve_l1, solve_l1_with_steps, AdaptiveSteps,
};

/// Iterates of a primal-dual solve.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub(crate) theta: Vec<f64>,
    pub(crate) u_curr: Vec<f64>,
    pub(crate) u_prev: Vec<f64>,
    pub(crate) v: Vec<f64>,
    pub(crate) s: DualPoint,
    pub(crate) k: usize,
    scratch_m: Vec<f64>,
    scratch_n: Vec<f64>,
}

impl SolverState {
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// `A theta` at the current iterate.
    pub fn u_curr(&self) -> &[f64] {
        &self.u_curr
    }

    /// `A theta` at the previous iterate.
    pub fn u_prev(&self) -> &[f64] {
        &self.u_prev
    }

    /// Dual logits.
    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn s(&self) -> &DualPoint {
        &self.s
    }

    /// Number of completed iterations.
    pub fn iteration(&self) -> usize {
        self.k
    }

    /// `|u - v|_2`.
    pub fn residual(&self) -> f64 {
        dist2(&self.u_curr, &self.v)
    }
}

/// Sets `u = u_prev = A theta0` (so the first extrapolation vanishes) and
/// `v = logit(s0)`.
pub fn init_state(data: &Dataset, theta0: &[f64], s0: &DualPoint) -> Result<SolverState> {
    check_len("theta0", data.nfeatures(), theta0.len())?;
    check_len("s0", data.nsamples(), s0.len())?;
    let u = data.design().mat_vec(theta0)?;
    Ok(SolverState {
        theta: theta0.to_vec(),
        u_prev: u.clone(),
        u_curr: u,
        v: grad_psi(s0),
        s: s0.clone(),
        k: 0,
        scratch_m: vec![0.0; data.nsamples()],
        scratch_n: vec![0.0; data.nfeatures()],
    })
}

/// One primal-dual update with explicit step parameters. `prox` receives
/// the gradient-step point, the primal step size and the output buffer.
pub(crate) fn primal_dual_step<F>(
    state: &mut SolverState,
    data: &Dataset,
    rho: f64,
    sigma: f64,
    tau: f64,
    prox: F,
) -> Result<()>
where
    F: FnOnce(&[f64], f64, &mut [f64]) -> Result<()>,
{
    let a = data.design();
    let inv = 1.0 / (1.0 + sigma);
    for ((v, &u), &up) in state.v.iter_mut().zip(&state.u_curr).zip(&state.u_prev) {
        *v = (sigma * u + sigma * rho * (u - up) + *v) * inv;
    }
    state.s.assign_sigmoid(&state.v);

    state.s.residual_into(data.y(), &mut state.scratch_m);
    a.mat_tvec_into(&state.scratch_m, &mut state.scratch_n);
    for (g, &t) in state.scratch_n.iter_mut().zip(&state.theta) {
        *g = t - tau * *g;
    }
    prox(&state.scratch_n, tau, &mut state.theta)?;

    core::mem::swap(&mut state.u_prev, &mut state.u_curr);
    a.mat_vec_into(&state.theta, &mut state.u_curr);
    state.k += 1;
    Ok(())
}

/// Initial point for a warm-started solve.
#[derive(Debug, Clone)]
pub struct WarmStart {
    pub theta: Vec<f64>,
    pub s: DualPoint,
}

impl WarmStart {
    /// Pairs `theta` with its induced dual point `sigmoid(A theta)`.
    pub fn from_theta(data: &Dataset, theta: &[f64]) -> Result<Self> {
        let u = data.design().mat_vec(theta)?;
        Ok(Self {
            theta: theta.to_vec(),
            s: sigmoid(&u),
        })
    }
}

/// The constant used in place of `|A|` in the step-size formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepNorm {
    /// Largest row norm of `A`, the induced `l1 -> l2` norm.
    #[default]
    RowMax,
    /// Half the spectral norm of `A`, estimated by power iteration and
    /// inflated by 1%. The entropy is 4-strongly convex in the Euclidean
    /// norm on the open cube, so these steps satisfy the Euclidean step
    /// condition for any design. On strongly correlated designs the row-max
    /// steps can cycle without converging.
    Spectral,
}

const SPECTRAL_ITERS: usize = 100;
const SPECTRAL_INFLATION: f64 = 1.01;

/// Step constant for `a` under `norm`; zero only for the zero matrix.
pub fn step_constant(a: &DesignMatrix, norm: StepNorm) -> f64 {
    match norm {
        StepNorm::RowMax => a.operator_norm(),
        StepNorm::Spectral => {
            if a.operator_norm() == 0.0 {
                return 0.0;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(0x0005_7e95);
            let mut x: Vec<f64> = (0..a.ncols()).map(|_| rng.random::<f64>() + 0.5).collect();
            let mut ax = vec![0.0; a.nrows()];
            let mut est = 0.0;
            for _ in 0..SPECTRAL_ITERS {
                let nx = norm2(&x);
                if nx == 0.0 {
                    break;
                }
                x.iter_mut().for_each(|v| *v /= nx);
                a.mat_vec_into(&x, &mut ax);
                est = norm2(&ax);
                a.mat_tvec_into(&ax, &mut x);
            }
            0.5 * SPECTRAL_INFLATION * est
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Relative tolerance on `|u - v|_2`.
    pub tol: f64,
    pub max_iter: usize,
    /// Defaults to `theta = 0`, `s = 1/2`.
    pub warm_start: Option<WarmStart>,
    pub step_norm: StepNorm,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 100_000,
            warm_start: None,
            step_norm: StepNorm::RowMax,
        }
    }
}

impl SolveConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_warm_start(mut self, warm: WarmStart) -> Self {
        self.warm_start = Some(warm);
        self
    }

    pub fn with_step_norm(mut self, step_norm: StepNorm) -> Self {
        self.step_norm = step_norm;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tol",
                value: self.tol,
            });
        }
        Ok(())
    }

    pub(crate) fn initial_state(&self, data: &Dataset) -> Result<SolverState> {
        self.validate()?;
        match &self.warm_start {
            Some(w) => init_state(data, &w.theta, &w.s),
            None => init_state(
                data,
                &vec![0.0; data.nfeatures()],
                &DualPoint::uniform(data.nsamples()),
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIterReached,
}

/// Step parameters used at one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub rho: f64,
    pub sigma: f64,
    pub tau: f64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub theta_final: Vec<f64>,
    /// Dual iterate at termination.
    pub s_final: DualPoint,
    pub iterations: usize,
    /// `|u^(k) - v^(k)|_2` after each iteration `k = 1..=iterations`.
    pub residual_history: Vec<f64>,
    pub termination: Termination,
    pub objective_final: f64,
    /// Per-iteration steps; empty for the fixed-step scheme.
    pub step_history: Vec<StepRecord>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(0.0)
    }
}

#[inline]
pub(crate) fn is_converged(state: &SolverState, tol: f64) -> bool {
    state.residual() <= tol * norm2(&state.u_curr).max(1.0)
}

/// Runs `step` until the residual test passes or `max_iter` is hit.
pub(crate) fn drive<F>(
    mut state: SolverState,
    cfg: &SolveConfig,
    mut step: F,
) -> Result<(SolverState, Vec<f64>, Termination)>
where
    F: FnMut(&mut SolverState) -> Result<()>,
{
    let mut history = Vec::new();
    let mut termination = Termination::MaxIterReached;
    while state.k < cfg.max_iter {
        step(&mut state)?;
        history.push(state.residual());
        if is_converged(&state, cfg.tol) {
            termination = Termination::Converged;
            break;
        }
    }
    Ok((state, history, termination))
}

/// Report for the all-zero design, where every coefficient vector gives the
/// same loss and the penalty alone is minimized at zero.
pub(crate) fn zero_design_report(data: &Dataset, penalty_at_zero: f64) -> SolveReport {
    SolveReport {
        theta_final: vec![0.0; data.nfeatures()],
        s_final: DualPoint::uniform(data.nsamples()),
        iterations: 0,
        residual_history: Vec::new(),
        termination: Termination::Converged,
        objective_final: core::f64::consts::LN_2 + penalty_at_zero,
        step_history: Vec::new(),
    }
}

/// Solves `min_theta (1/m) [sum_i log(1 + exp(u_i)) - <y, u> + P(theta)]`
/// for any penalty with an exact proximal map.
///
/// Strongly convex penalties run the fixed-step scheme with the penalty's
/// modulus in place of the ridge weight; merely convex ones run the
/// accelerated adaptive-step scheme with default initial steps.
pub fn solve_with_penalty(
    data: &Dataset,
    penalty: &dyn Penalty,
    cfg: &SolveConfig,
) -> Result<SolveReport> {
    let m = data.nsamples() as f64;
    let op_norm = step_constant(data.design(), cfg.step_norm);
    if op_norm == 0.0 {
        let mut report = zero_design_report(data, 0.0);
        report.objective_final = core::f64::consts::LN_2 + penalty.value(&report.theta_final) / m;
        return Ok(report);
    }
    let prox = |hat: &[f64], tau: f64, out: &mut [f64]| penalty.prox_into(hat, tau, out);
    let state = cfg.initial_state(data)?;
    let (state, history, termination, steps) = match penalty.admissibility() {
        Admissibility::StronglyConvex { modulus } => {
            let fs = compute_fixed_steps(op_norm, modulus)?;
            let (st, h, t) = drive(state, cfg, |st| {
                primal_dual_step(st, data, fs.rho, fs.sigma, fs.tau, prox)
            })?;
            (st, h, t, Vec::new())
        }
        Admissibility::Convex => {
            let mut steps = init_adaptive_steps(op_norm, None, None)?;
            let mut records = Vec::new();
            let (st, h, t) = drive(state, cfg, |st| {
                records.push(steps.record());
                primal_dual_step(st, data, steps.rho, steps.sigma, steps.tau, prox)?;
                steps = steps.step_update();
                Ok(())
            })?;
            (st, h, t, records)
        }
    };
    let objective =
        crate::model::logistic_loss(&state.u_curr, data.y()) + penalty.value(&state.theta) / m;
    Ok(SolveReport {
        theta_final: state.theta,
        s_final: state.s,
        iterations: state.k,
        residual_history: history,
        termination,
        objective_final: objective,
        step_history: steps,
    })
}

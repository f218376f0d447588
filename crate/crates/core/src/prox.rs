//! Proximal maps for the primal descent step.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm1, norm2};

/// Input of the elastic-net proximal map: the gradient-step point and the
/// already step-scaled l1 and ridge weights.
#[derive(Debug, Clone, Copy)]
pub struct ProxRequest<'a> {
    pub theta_hat: &'a [f64],
    pub l1_weight: f64,
    pub ridge_weight: f64,
}

impl<'a> ProxRequest<'a> {
    pub fn new(theta_hat: &'a [f64], l1_weight: f64, ridge_weight: f64) -> Result<Self> {
        check_weight("l1_weight", l1_weight)?;
        check_weight("ridge_weight", ridge_weight)?;
        Ok(Self {
            theta_hat,
            l1_weight,
            ridge_weight,
        })
    }
}

fn check_weight(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

/// `sign(x) max(0, |x| - w)`, with `sign(0) = 0`.
#[inline]
pub fn soft_threshold(x: f64, w: f64) -> f64 {
    let mag = (x.abs() - w).max(0.0);
    if x > 0.0 {
        mag
    } else if x < 0.0 {
        -mag
    } else {
        0.0
    }
}

/// Soft thresholding followed by ridge shrinkage, the exact minimizer of
/// `l1 |t|_1 + ridge/2 |t|^2 + 1/2 |t - theta_hat|^2`.
pub fn elastic_net_prox(req: &ProxRequest<'_>) -> Vec<f64> {
    let mut out = vec![0.0; req.theta_hat.len()];
    elastic_net_prox_into(req.theta_hat, req.l1_weight, req.ridge_weight, &mut out);
    out
}

/// Plain soft thresholding.
pub fn l1_prox(theta_hat: &[f64], weight: f64) -> Vec<f64> {
    let mut out = vec![0.0; theta_hat.len()];
    elastic_net_prox_into(theta_hat, weight, 0.0, &mut out);
    out
}

#[inline]
pub(crate) fn elastic_net_prox_into(theta_hat: &[f64], l1: f64, ridge: f64, out: &mut [f64]) {
    let denom = 1.0 + ridge;
    for (o, &x) in out.iter_mut().zip(theta_hat) {
        *o = soft_threshold(x, l1) / denom;
    }
}

/// Which solver a penalty may be paired with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Admissibility {
    /// Strongly convex with the given modulus: the fixed-step, linearly
    /// convergent scheme applies.
    StronglyConvex { modulus: f64 },
    /// Merely convex: only the accelerated adaptive-step scheme applies.
    Convex,
}

/// A regularizer that can be plugged into the primal step of the solvers.
///
/// Values are in the units of the sample-summed loss
/// `sum_i log(1 + exp(u_i)) - <y, u>`, so an elastic net with parameters
/// `(lambda, alpha)` has weights `m lambda alpha` and `m lambda (1 - alpha)`.
/// Admissibility is declared by the implementor and not verified.
pub trait Penalty {
    fn name(&self) -> &'static str;

    fn value(&self, theta: &[f64]) -> f64;

    fn admissibility(&self) -> Admissibility;

    /// Writes `argmin_t step * P(t) + 1/2 |t - theta_hat|^2` into `out`.
    fn prox_into(&self, theta_hat: &[f64], step: f64, out: &mut [f64]) -> Result<()> {
        let _ = (theta_hat, step, out);
        Err(Error::UnsupportedPenalty(self.name()))
    }
}

/// Proximal map of `step * penalty` at `theta_hat`.
pub fn penalty_prox(penalty: &dyn Penalty, theta_hat: &[f64], step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: step,
        });
    }
    let mut out = vec![0.0; theta_hat.len()];
    penalty.prox_into(theta_hat, step, &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPenalty;

impl Penalty for ZeroPenalty {
    fn name(&self) -> &'static str {
        "zero"
    }

    fn value(&self, _theta: &[f64]) -> f64 {
        0.0
    }

    fn admissibility(&self) -> Admissibility {
        Admissibility::Convex
    }

    fn prox_into(&self, theta_hat: &[f64], _step: f64, out: &mut [f64]) -> Result<()> {
        out.copy_from_slice(theta_hat);
        Ok(())
    }
}

/// `l1 |theta|_1 + l2/2 |theta|_2^2`.
#[derive(Debug, Clone, Copy)]
pub struct ElasticNet {
    pub l1: f64,
    pub l2: f64,
}

impl ElasticNet {
    pub fn new(l1: f64, l2: f64) -> Result<Self> {
        check_weight("l1", l1)?;
        check_weight("l2", l2)?;
        Ok(Self { l1, l2 })
    }

    /// Sample-scaled weights for `m` samples.
    pub fn from_params(p: &crate::model::PenaltyParams, m: usize) -> Self {
        Self {
            l1: p.lambda1(m),
            l2: p.lambda2(m),
        }
    }
}

impl Penalty for ElasticNet {
    fn name(&self) -> &'static str {
        "elastic-net"
    }

    fn value(&self, theta: &[f64]) -> f64 {
        self.l1 * norm1(theta) + 0.5 * self.l2 * dot(theta, theta)
    }

    fn admissibility(&self) -> Admissibility {
        if self.l2 > 0.0 {
            Admissibility::StronglyConvex { modulus: self.l2 }
        } else {
            Admissibility::Convex
        }
    }

    fn prox_into(&self, theta_hat: &[f64], step: f64, out: &mut [f64]) -> Result<()> {
        check_len("prox output", theta_hat.len(), out.len())?;
        elastic_net_prox_into(theta_hat, self.l1 * step, self.l2 * step, out);
        Ok(())
    }
}

/// `weight |theta|_1`.
#[derive(Debug, Clone, Copy)]
pub struct Lasso {
    pub weight: f64,
}

impl Penalty for Lasso {
    fn name(&self) -> &'static str {
        "lasso"
    }

    fn value(&self, theta: &[f64]) -> f64 {
        self.weight * norm1(theta)
    }

    fn admissibility(&self) -> Admissibility {
        Admissibility::Convex
    }

    fn prox_into(&self, theta_hat: &[f64], step: f64, out: &mut [f64]) -> Result<()> {
        check_len("prox output", theta_hat.len(), out.len())?;
        elastic_net_prox_into(theta_hat, self.weight * step, 0.0, out);
        Ok(())
    }
}

/// `weight * sum_g |theta_g|_2` over disjoint index groups. Evaluation only;
/// no proximal map is provided.
#[derive(Debug, Clone)]
pub struct GroupLasso {
    pub groups: Vec<Vec<usize>>,
    pub weight: f64,
}

impl Penalty for GroupLasso {
    fn name(&self) -> &'static str {
        "group-lasso"
    }

    fn value(&self, theta: &[f64]) -> f64 {
        self.groups
            .iter()
            .map(|g| {
                let block: Vec<f64> = g.iter().map(|&j| theta[j]).collect();
                norm2(&block)
            })
            .sum::<f64>()
            * self.weight
    }

    fn admissibility(&self) -> Admissibility {
        Admissibility::Convex
    }
}

//! Problem data, penalty parameters and the regularized logistic objective.

use alloc::vec::Vec;

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm1};
use crate::matrix::DesignMatrix;

/// Design matrix plus a binary response vector.
///
/// No intercept column is added. Callers who want one append a constant
/// feature. Columns are used as given; standardization is up to the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    design: DesignMatrix,
    y: Vec<f64>,
}

impl Dataset {
    pub fn new(design: DesignMatrix, y: Vec<f64>) -> Result<Self> {
        check_len("response", design.nrows(), y.len())?;
        if let Some(i) = y.iter().position(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::InvalidData(alloc::format!(
                "response entry {i} is {} (expected 0 or 1)",
                y[i]
            )));
        }
        Ok(Self { design, y })
    }

    pub fn design(&self) -> &DesignMatrix {
        &self.design
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Number of samples `m`.
    pub fn nsamples(&self) -> usize {
        self.design.nrows()
    }

    /// Number of features `n`.
    pub fn nfeatures(&self) -> usize {
        self.design.ncols()
    }

    /// The same data with the design stored as CSR.
    pub fn to_csr(&self) -> Self {
        Self {
            design: self.design.to_csr(),
            y: self.y.clone(),
        }
    }
}

/// Elastic-net tuning parameter `lambda > 0` and mixing weight `alpha` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    lambda: f64,
    alpha: f64,
}

impl PenaltyParams {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
            });
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
            });
        }
        Ok(Self { lambda, alpha })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `m * lambda * alpha`, the l1 weight of the sample-scaled problem.
    pub fn lambda1(&self, m: usize) -> f64 {
        m as f64 * self.lambda * self.alpha
    }

    /// `m * lambda * (1 - alpha)`, the ridge weight of the sample-scaled problem.
    pub fn lambda2(&self, m: usize) -> f64 {
        m as f64 * self.lambda * (1.0 - self.alpha)
    }

    /// Penalty value `lambda * (alpha |theta|_1 + (1 - alpha)/2 |theta|_2^2)`.
    pub fn value(&self, theta: &[f64]) -> f64 {
        self.lambda * (self.alpha * norm1(theta) + 0.5 * (1.0 - self.alpha) * dot(theta, theta))
    }
}

/// `log(1 + exp(u))` without overflow.
#[inline]
pub fn log1pexp(u: f64) -> f64 {
    u.max(0.0) + libm::log1p(libm::exp(-u.abs()))
}

/// Average logistic loss `(1/m) sum_i [log(1 + exp(u_i)) - y_i u_i]` for
/// given logits `u = A theta`.
pub fn logistic_loss(u: &[f64], y: &[f64]) -> f64 {
    let total = u
        .iter()
        .zip(y)
        .fold(0.0, |acc, (&ui, &yi)| acc + (log1pexp(ui) - yi * ui));
    total / u.len() as f64
}

/// Elastic-net regularized logistic objective at `theta`.
pub fn objective(data: &Dataset, theta: &[f64], p: &PenaltyParams) -> Result<f64> {
    let u = data.design().mat_vec(theta)?;
    Ok(logistic_loss(&u, data.y()) + p.value(theta))
}

//! Independent verification tools: optimality residuals, the zero-solution
//! threshold, and a classical proximal-gradient reference solver.
//!
//! Nothing here shares an update path with the primal-dual solvers; the
//! reference solver steps with the spectral norm instead of the row-norm
//! bound and never touches the dual logits.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entropy::{sigmoid, DualPoint};
use crate::error::{check_len, Error, Result};
use crate::linalg::norm2;
use crate::matrix::DesignMatrix;
use crate::model::{Dataset, PenaltyParams};
use crate::prox::soft_threshold;

/// Optimality residuals at a candidate `(theta, s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport {
    /// Largest coordinatewise distance of
    /// `(1/m) A^T (y - s) - lambda (1 - alpha) theta` to `lambda alpha d|theta|_1`.
    pub stationarity_residual: f64,
    /// `|s - sigmoid(A theta)|_inf`.
    pub dual_consistency_residual: f64,
}

/// Distance from `g` to the subdifferential `w * d|t|` at `t`.
#[inline]
fn subgradient_gap(g: f64, t: f64, w: f64) -> f64 {
    if t > 0.0 {
        (g - w).abs()
    } else if t < 0.0 {
        (g + w).abs()
    } else {
        (g.abs() - w).max(0.0)
    }
}

fn stationarity(data: &Dataset, theta: &[f64], s: &DualPoint, p: &PenaltyParams) -> f64 {
    let m = data.nsamples();
    let mut diff = vec![0.0; m];
    // y - s, with the complement used where y = 1
    s.residual_into(data.y(), &mut diff);
    diff.iter_mut().for_each(|d| *d = -*d);
    let mut g = vec![0.0; data.nfeatures()];
    data.design().mat_tvec_into(&diff, &mut g);
    let ridge = p.lambda() * (1.0 - p.alpha());
    let w = p.lambda() * p.alpha();
    g.iter()
        .zip(theta)
        .map(|(&gj, &tj)| subgradient_gap(gj / m as f64 - ridge * tj, tj, w))
        .fold(0.0, f64::max)
}

/// Residuals with the dual point derived from `theta`, so the dual
/// consistency term vanishes.
pub fn kkt_residual(data: &Dataset, theta: &[f64], p: &PenaltyParams) -> Result<KktReport> {
    let s = sigmoid(&data.design().mat_vec(theta)?);
    Ok(KktReport {
        stationarity_residual: stationarity(data, theta, &s, p),
        dual_consistency_residual: 0.0,
    })
}

/// Residuals at an externally supplied dual point.
pub fn kkt_residual_with_dual(
    data: &Dataset,
    theta: &[f64],
    s: &DualPoint,
    p: &PenaltyParams,
) -> Result<KktReport> {
    check_len("dual point", data.nsamples(), s.len())?;
    let induced = sigmoid(&data.design().mat_vec(theta)?);
    let dual = s
        .probabilities()
        .iter()
        .zip(s.complements())
        .zip(induced.probabilities().iter().zip(induced.complements()))
        .map(|((&a, &ac), (&b, &bc))| {
            // compare on whichever side of 1/2 keeps full precision
            if a > 0.5 && b > 0.5 {
                (ac - bc).abs()
            } else {
                (a - b).abs()
            }
        })
        .fold(0.0, f64::max);
    Ok(KktReport {
        stationarity_residual: stationarity(data, theta, s, p),
        dual_consistency_residual: dual,
    })
}

/// Smallest `lambda` at which `theta = 0` is optimal:
/// `|(1/m) A^T (y - 1/2)|_inf / alpha`.
pub fn lambda_max(data: &Dataset, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
        });
    }
    let centered: Vec<f64> = data.y().iter().map(|y| y - 0.5).collect();
    let g = data.design().mat_tvec(&centered)?;
    let m = data.nsamples() as f64;
    Ok(g.iter().fold(0.0, |acc: f64, x| acc.max((x / m).abs())) / alpha)
}

/// Power-iteration estimate of the largest singular value of `A`, started
/// from a fixed pseudo-random vector.
pub fn spectral_norm_power_iter(a: &DesignMatrix, iters: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0005_eed0_fa11);
    let mut x: Vec<f64> = (0..a.ncols()).map(|_| rng.random::<f64>() - 0.5).collect();
    let mut ax = vec![0.0; a.nrows()];
    let nx = norm2(&x);
    if nx == 0.0 {
        return 0.0;
    }
    x.iter_mut().for_each(|v| *v /= nx);
    for _ in 0..iters.max(1) {
        a.mat_vec_into(&x, &mut ax);
        a.mat_tvec_into(&ax, &mut x);
        let n = norm2(&x);
        if n == 0.0 {
            return 0.0;
        }
        x.iter_mut().for_each(|v| *v /= n);
    }
    a.mat_vec_into(&x, &mut ax);
    norm2(&ax)
}

/// Power-iteration count and safety inflation for the reference step size.
const POWER_ITERS: usize = 200;
const NORM_INFLATION: f64 = 1.01;
/// Iteration cap of the reference solver.
pub const REFERENCE_MAX_ITER: usize = 10_000_000;

/// Proximal gradient on the regularized objective from `theta = 0`, run
/// until the stationarity residual is at most `tol`.
pub fn prox_grad_reference(data: &Dataset, p: &PenaltyParams, tol: f64) -> Result<Vec<f64>> {
    prox_grad_reference_from(data, p, tol, &vec![0.0; data.nfeatures()])
}

/// As [`prox_grad_reference`], from an arbitrary start.
pub fn prox_grad_reference_from(
    data: &Dataset,
    p: &PenaltyParams,
    tol: f64,
    theta0: &[f64],
) -> Result<Vec<f64>> {
    check_len("theta0", data.nfeatures(), theta0.len())?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
        });
    }
    let a = data.design();
    let m = data.nsamples();
    let mf = m as f64;
    let spec = NORM_INFLATION * spectral_norm_power_iter(a, POWER_ITERS);
    let ridge = p.lambda() * (1.0 - p.alpha());
    let w = p.lambda() * p.alpha();
    let lipschitz = spec * spec / (4.0 * mf) + ridge;
    if lipschitz == 0.0 {
        return Ok(vec![0.0; data.nfeatures()]);
    }
    let step = 1.0 / lipschitz;

    let mut theta = theta0.to_vec();
    let mut u = vec![0.0; m];
    let mut r = vec![0.0; m];
    let mut grad = vec![0.0; data.nfeatures()];
    let mut residual = f64::INFINITY;
    for _ in 0..REFERENCE_MAX_ITER {
        a.mat_vec_into(&theta, &mut u);
        sigmoid(&u).residual_into(data.y(), &mut r);
        a.mat_tvec_into(&r, &mut grad);
        // grad of the smooth part: (1/m) A^T (s - y) + ridge * theta
        residual = 0.0;
        for (gj, &tj) in grad.iter_mut().zip(&theta) {
            *gj = *gj / mf + ridge * tj;
            residual = f64::max(residual, subgradient_gap(-*gj, tj, w));
        }
        if residual <= tol {
            return Ok(theta);
        }
        for (tj, &gj) in theta.iter_mut().zip(&grad) {
            *tj = soft_threshold(*tj - step * gj, step * w);
        }
    }
    Err(Error::OracleFailure {
        iterations: REFERENCE_MAX_ITER,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::objective;

    #[test]
    fn power_iteration_examples() {
        let d = DesignMatrix::from_rows(&[[3.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!((spectral_norm_power_iter(&d, 200) - 3.0).abs() < 1e-10);
        let a = DesignMatrix::from_rows(&[[3.0, 4.0], [0.0, 1.0]]).unwrap();
        // sqrt(13 + sqrt(160)), the larger singular value of [[3,4],[0,1]]
        assert!((spectral_norm_power_iter(&a, 200) - 5.064_495_102_245_98).abs() < 1e-10);
        let (u, v) = ([1.0, -2.0, 0.5], [3.0, 1.0]);
        let rows: Vec<Vec<f64>> = u
            .iter()
            .map(|ui| v.iter().map(|vj| ui * vj).collect())
            .collect();
        let r1 = DesignMatrix::from_rows(&rows).unwrap();
        assert!((spectral_norm_power_iter(&r1, 50) - norm2(&u) * norm2(&v)).abs() < 1e-12);
        let z = DesignMatrix::dense(2, 2, vec![0.0; 4]).unwrap();
        assert_eq!(spectral_norm_power_iter(&z, 10), 0.0);
    }

    #[test]
    fn lambda_max_scalar() {
        let d = Dataset::new(DesignMatrix::from_rows(&[[2.0]]).unwrap(), vec![1.0]).unwrap();
        assert_eq!(lambda_max(&d, 1.0).unwrap(), 1.0);
        assert_eq!(lambda_max(&d, 0.5).unwrap(), 2.0);
        assert!(lambda_max(&d, 0.0).is_err());
    }

    #[test]
    fn lambda_max_degenerate_zero() {
        // A^T (y - 1/2) = 0 when two identical rows carry opposite labels
        let a = DesignMatrix::from_rows(&[[1.0, 2.0], [1.0, 2.0]]).unwrap();
        let d = Dataset::new(a, vec![1.0, 0.0]).unwrap();
        assert_eq!(lambda_max(&d, 1.0).unwrap(), 0.0);
        let p = PenaltyParams::new(0.01, 0.5).unwrap();
        assert_eq!(
            kkt_residual(&d, &[0.0, 0.0], &p)
                .unwrap()
                .stationarity_residual,
            0.0
        );
    }

    #[test]
    fn zero_is_kkt_above_lambda_max() {
        let a = DesignMatrix::from_rows(&[[1.0, -0.5], [0.3, 2.0], [-1.2, 0.4]]).unwrap();
        let d = Dataset::new(a, vec![1.0, 0.0, 0.0]).unwrap();
        let lm = lambda_max(&d, 0.8).unwrap();
        let above = PenaltyParams::new(lm, 0.8).unwrap();
        assert_eq!(
            kkt_residual(&d, &[0.0, 0.0], &above)
                .unwrap()
                .stationarity_residual,
            0.0
        );
        let below = PenaltyParams::new(0.5 * lm, 0.8).unwrap();
        assert!(
            kkt_residual(&d, &[0.0, 0.0], &below)
                .unwrap()
                .stationarity_residual
                > 0.0
        );
        assert_eq!(
            prox_grad_reference(&d, &above, 1e-12).unwrap(),
            vec![0.0, 0.0]
        );
    }

    #[test]
    fn separable_scalar_matches_grid_search() {
        let a = DesignMatrix::from_rows(&[[1.0], [2.0], [-1.0], [0.5]]).unwrap();
        let d = Dataset::new(a, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        let p = PenaltyParams::new(0.05, 0.5).unwrap();
        let th = prox_grad_reference(&d, &p, 1e-12).unwrap();
        let (mut best, mut arg) = (f64::INFINITY, 0.0);
        for i in 0..=400_000 {
            let t = -2.0 + i as f64 * 1e-5 * 2.0;
            let f = objective(&d, &[t], &p).unwrap();
            if f < best {
                best = f;
                arg = t;
            }
        }
        assert!((th[0] - arg).abs() < 1e-4, "{} vs {}", th[0], arg);
    }

    #[test]
    fn external_dual_consistency() {
        let a = DesignMatrix::from_rows(&[[1.0], [2.0]]).unwrap();
        let d = Dataset::new(a, vec![1.0, 0.0]).unwrap();
        let p = PenaltyParams::new(0.1, 0.5).unwrap();
        let s = DualPoint::new(&[0.5, 0.5]).unwrap();
        let r = kkt_residual_with_dual(&d, &[0.0], &s, &p).unwrap();
        assert_eq!(r.dual_consistency_residual, 0.0);
        let r = kkt_residual_with_dual(&d, &[1.0], &s, &p).unwrap();
        let expect = 1.0 / (1.0 + libm::exp(-2.0)) - 0.5;
        assert!((r.dual_consistency_residual - expect).abs() < 1e-15);
    }
}

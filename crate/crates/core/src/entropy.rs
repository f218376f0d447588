//! Binary-entropy geometry of the dual variable.
//!
//! `psi(s) = sum_i s_i log s_i + (1 - s_i) log(1 - s_i)` is the convex
//! conjugate of the summed log-partition `sum_i log(1 + exp(u_i))`. Its
//! gradient is the componentwise logit and its Bregman divergence is the
//! binary Kullback-Leibler divergence. The dual ascent step of both solvers
//! is a proximal step in this geometry, which collapses to an affine update
//! of the logits followed by a sigmoid.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Sigmoid outputs are kept inside `[CLAMP, 1 - CLAMP]`.
pub const CLAMP: f64 = 1e-15;

/// A point of the open cube `(0, 1)^m`.
///
/// Each coordinate is stored together with its complement `1 - s_i`, each
/// computed directly from the logit. Near 1 the complement carries far more
/// precision than `1.0 - s_i` would, which keeps `logit(sigmoid(v))` exact to
/// round-off over the whole clamped range.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint {
    s: Vec<f64>,
    sc: Vec<f64>,
}

impl DualPoint {
    /// Wraps probabilities that lie strictly inside `(0, 1)`.
    pub fn new(s: &[f64]) -> Result<Self> {
        if let Some(index) = s.iter().position(|&x| !(x > 0.0 && x < 1.0)) {
            return Err(Error::Domain {
                index,
                value: s[index],
            });
        }
        Ok(Self {
            s: s.to_vec(),
            sc: s.iter().map(|x| 1.0 - x).collect(),
        })
    }

    /// Every coordinate equal to 1/2, the center of the cube.
    pub fn uniform(m: usize) -> Self {
        Self {
            s: alloc::vec![0.5; m],
            sc: alloc::vec![0.5; m],
        }
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// The probabilities `s_i`.
    pub fn probabilities(&self) -> &[f64] {
        &self.s
    }

    /// The complements `1 - s_i`.
    pub fn complements(&self) -> &[f64] {
        &self.sc
    }

    /// Overwrites `self` with `sigmoid(v)`, reusing the buffers.
    pub(crate) fn assign_sigmoid(&mut self, v: &[f64]) {
        self.s.resize(v.len(), 0.0);
        self.sc.resize(v.len(), 0.0);
        for ((s, c), &x) in self.s.iter_mut().zip(self.sc.iter_mut()).zip(v) {
            (*s, *c) = sigmoid_pair(x);
        }
    }

    /// `s_i - y_i` for binary `y`, using the complement when `y_i = 1`.
    pub(crate) fn residual_into(&self, y: &[f64], out: &mut [f64]) {
        for (((o, &s), &c), &yi) in out.iter_mut().zip(&self.s).zip(&self.sc).zip(y) {
            *o = if yi == 1.0 { -c } else { s };
        }
    }
}

/// `(sigmoid(v), 1 - sigmoid(v))`, evaluated branch-wise and clamped.
#[inline]
pub fn sigmoid_pair(v: f64) -> (f64, f64) {
    let e = libm::exp(-v.abs());
    let big = 1.0 / (1.0 + e);
    let small = e / (1.0 + e);
    let (s, c) = if v >= 0.0 { (big, small) } else { (small, big) };
    if s < CLAMP {
        (CLAMP, 1.0 - CLAMP)
    } else if c < CLAMP {
        (1.0 - CLAMP, CLAMP)
    } else {
        (s, c)
    }
}

/// Componentwise logistic sigmoid, clamped into the open cube.
pub fn sigmoid(v: &[f64]) -> DualPoint {
    let mut out = DualPoint {
        s: Vec::new(),
        sc: Vec::new(),
    };
    out.assign_sigmoid(v);
    out
}

/// Gradient of `psi`: the componentwise logit `log(s_i / (1 - s_i))`.
pub fn grad_psi(s: &DualPoint) -> Vec<f64> {
    s.s.iter()
        .zip(&s.sc)
        .map(|(&p, &q)| libm::log(p) - libm::log(q))
        .collect()
}

#[inline]
fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * libm::log(x)
    }
}

fn check_cube(s: &[f64]) -> Result<()> {
    match s.iter().position(|x| !(0.0..=1.0).contains(x)) {
        None => Ok(()),
        Some(index) => Err(Error::Domain {
            index,
            value: s[index],
        }),
    }
}

/// Negative summed binary entropy on the closed cube, with `0 log 0 = 0`.
pub fn psi(s: &[f64]) -> Result<f64> {
    check_cube(s)?;
    Ok(s.iter()
        .fold(0.0, |acc, &x| acc + xlogx(x) + xlogx(1.0 - x)))
}

/// `a log(a / b)` with `0 log(0 / b) = 0`; infinite when `a > 0 = b`.
#[inline]
fn relative_term(a: f64, b: f64) -> Option<f64> {
    if a == 0.0 {
        Some(0.0)
    } else if b == 0.0 {
        None
    } else {
        Some(a * libm::log(a / b))
    }
}

/// Binary Kullback-Leibler divergence `D(s, s')`, evaluated term by term.
///
/// Fails with a domain error when either argument leaves `[0, 1]^m` or when
/// the divergence is infinite (`s'` on the boundary where `s` is not).
pub fn kl_divergence(s: &[f64], s_prime: &[f64]) -> Result<f64> {
    crate::error::check_len("kl_divergence", s.len(), s_prime.len())?;
    check_cube(s)?;
    check_cube(s_prime)?;
    let mut total = 0.0;
    for (i, (&a, &b)) in s.iter().zip(s_prime).enumerate() {
        let t = relative_term(a, b)
            .zip(relative_term(1.0 - a, 1.0 - b))
            .ok_or(Error::Domain { index: i, value: b })?;
        total += t.0 + t.1;
    }
    Ok(total.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::{E, LN_2};

    #[test]
    fn psi_examples() {
        let m = 7;
        let half = vec![0.5; m];
        assert!((psi(&half).unwrap() + m as f64 * LN_2).abs() < 1e-14);
        assert_eq!(psi(&[0.0, 1.0]).unwrap(), 0.0);
        assert!((psi(&[0.25]).unwrap() + 0.562_335_144_618_808_4).abs() < 1e-15);
        assert!(matches!(
            psi(&[0.5, 1.5]),
            Err(Error::Domain { index: 1, .. })
        ));
        assert!(psi(&[-0.1]).is_err());
    }

    #[test]
    fn grad_psi_examples() {
        let v = grad_psi(&DualPoint::new(&[0.5, E / (1.0 + E)]).unwrap());
        assert_eq!(v[0], 0.0);
        assert!((v[1] - 1.0).abs() < 1e-15);
        assert!(DualPoint::new(&[0.0]).is_err());
        assert!(DualPoint::new(&[0.3, 1.0]).is_err());
    }

    #[test]
    fn sigmoid_examples() {
        let s = sigmoid(&[0.0, 40.0, libm::log(3.0), -40.0]);
        let p = s.probabilities();
        assert_eq!(p[0], 0.5);
        assert_eq!(p[1], 1.0 - CLAMP);
        assert_eq!(s.complements()[1], CLAMP);
        assert!((p[2] - 0.75).abs() < 1e-15);
        assert_eq!(p[3], CLAMP);
    }

    #[test]
    fn kl_examples() {
        let s = [0.2, 0.9, 0.5];
        assert_eq!(kl_divergence(&s, &s).unwrap(), 0.0);
        let d = kl_divergence(&[0.5], &[0.25]).unwrap();
        assert!((d - 0.143_841_036_225_890_3).abs() < 1e-15, "{d}");
        assert!(kl_divergence(&[0.5], &[0.0]).is_err());
        assert!(kl_divergence(&[2.0], &[0.5]).is_err());
        // boundary s against interior s' is finite
        assert!((kl_divergence(&[1.0], &[0.5]).unwrap() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn residual_uses_complement() {
        let s = sigmoid(&[30.0, -3.0]);
        let mut r = [0.0; 2];
        s.residual_into(&[1.0, 0.0], &mut r);
        assert_eq!(r[0], -s.complements()[0]);
        assert_eq!(r[1], s.probabilities()[1]);
    }
}

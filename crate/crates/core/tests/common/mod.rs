#![allow(dead_code)]

use kl_pdhg::{Dataset, DesignMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

/// Gaussian design with a planted sparse coefficient vector and logistic labels.
pub fn gaussian_instance(seed: u64, m: usize, n: usize) -> Dataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let values: Vec<f64> = (0..m * n)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let a = DesignMatrix::dense(m, n, values).unwrap();
    let k = (n / 5).max(1);
    let mut truth = vec![0.0; n];
    for t in truth.iter_mut().take(k) {
        *t = rng.random_range(-1.0..1.0);
    }
    let u = a.mat_vec(&truth).unwrap();
    let y = u
        .iter()
        .map(|&ui| {
            let p = 1.0 / (1.0 + (-ui).exp());
            if rng.random::<f64>() < p {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Dataset::new(a, y).unwrap()
}

pub fn random_vec(rng: &mut StdRng, len: usize) -> Vec<f64> {
    (0..len).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Least-squares slope of `log g` against `log k` over the points with
/// `g > floor`.
pub fn loglog_slope(points: &[(usize, f64)], floor: f64) -> Option<(f64, usize)> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, g)| *g > floor)
        .map(|&(k, g)| ((k as f64).ln(), g.ln()))
        .collect();
    if pts.len() < 10 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some((sxy / sxx, pts.len()))
}

/// Gaussian design with more features than samples; the lasso problem is
/// then not strongly convex and the accelerated regime is visible.
pub fn wide_instance(seed: u64) -> Dataset {
    gaussian_instance(seed, 100, 400)
}

/// Rows `sqrt(1 - r) z + sqrt(r) z0` with a shared factor `z0` per row, so
/// every pair of features has correlation `r`.
pub fn correlated_instance(seed: u64, m: usize, n: usize, r: f64) -> Dataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(m * n);
    for _ in 0..m {
        let z0: f64 = StandardNormal.sample(&mut rng);
        for _ in 0..n {
            let z: f64 = StandardNormal.sample(&mut rng);
            values.push((1.0 - r).sqrt() * z + r.sqrt() * z0);
        }
    }
    let a = DesignMatrix::dense(m, n, values).unwrap();
    let mut truth = vec![0.0; n];
    for t in truth.iter_mut().step_by(10) {
        *t = rng.random_range(-1.5..1.5);
    }
    let u = a.mat_vec(&truth).unwrap();
    let y = u
        .iter()
        .map(|&ui| f64::from(rng.random::<f64>() < 1.0 / (1.0 + (-ui).exp())))
        .collect();
    Dataset::new(a, y).unwrap()
}

//! Seeded synthetic instances with equicorrelated Gaussian features.

use kl_pdhg::{Dataset, DesignMatrix};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSpec {
    pub m: usize,
    pub n: usize,
    /// Pairwise feature correlation in `[0, 1)`.
    pub correlation: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub data: Dataset,
    pub theta_true: Vec<f64>,
}

/// Draws `x_i = sqrt(1 - r) z_i + sqrt(r) z0` per row, plants a sparse
/// coefficient vector on `max(1, n / 10)` random features, and samples labels
/// from the logistic model.
pub fn generate(spec: &BenchSpec) -> anyhow::Result<Instance> {
    let BenchSpec {
        m,
        n,
        correlation: r,
        seed,
    } = *spec;
    anyhow::ensure!(m > 0 && n > 0, "m and n must be positive");
    anyhow::ensure!(
        (0.0..1.0).contains(&r),
        "correlation must lie in [0, 1), got {r}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut theta_true = vec![0.0; n];
    for j in sample(&mut rng, n, (n / 10).max(1)) {
        let mag: f64 = rng.random_range(0.5..1.5);
        theta_true[j] = if rng.random_bool(0.5) { mag } else { -mag };
    }

    let (a, b) = ((1.0 - r).sqrt(), r.sqrt());
    let mut values = Vec::with_capacity(m * n);
    let mut y = Vec::with_capacity(m);
    for _ in 0..m {
        let z0: f64 = rng.sample(StandardNormal);
        let start = values.len();
        for _ in 0..n {
            let z: f64 = rng.sample(StandardNormal);
            values.push(a * z + b * z0);
        }
        let eta: f64 = values[start..]
            .iter()
            .zip(&theta_true)
            .map(|(x, t)| x * t)
            .sum();
        let p = 1.0 / (1.0 + (-eta).exp());
        y.push(if Bernoulli::new(p)?.sample(&mut rng) {
            1.0
        } else {
            0.0
        });
    }
    let data = Dataset::new(DesignMatrix::dense(m, n, values)?, y)?;
    Ok(Instance { data, theta_true })
}

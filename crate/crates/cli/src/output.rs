//! Serializable result records and their CSV/JSON writers.

use std::io::Write;

use kl_pdhg::oracle::KktReport;
use kl_pdhg::PathResult;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    /// 0-based feature index.
    pub index: usize,
    pub value: f64,
}

/// Nonzero entries of `theta` in index order.
pub fn sparse_coefficients(theta: &[f64]) -> Vec<Coefficient> {
    theta
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(index, &value)| Coefficient { index, value })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktOutput {
    pub stationarity: f64,
    pub dual_consistency: f64,
}

impl From<KktReport> for KktOutput {
    fn from(k: KktReport) -> Self {
        Self {
            stationarity: k.stationarity_residual,
            dual_consistency: k.dual_consistency_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub lambda: f64,
    pub alpha: f64,
    pub n_features: usize,
    pub theta: Vec<Coefficient>,
    pub objective: f64,
    pub iterations: usize,
    pub final_residual: f64,
    pub kkt: KktOutput,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_history: Option<Vec<f64>>,
}

impl SolveOutput {
    pub fn write_json(&self, mut w: impl Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }

    /// `index,value` rows for the nonzero coefficients.
    pub fn write_csv(&self, w: impl Write) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["index", "value"])?;
        for c in &self.theta {
            out.serialize((c.index, c.value))?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEntry {
    pub lambda: f64,
    pub objective: f64,
    pub nonzeros: usize,
    pub iterations: usize,
    pub converged: bool,
    pub theta: Vec<Coefficient>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathOutput {
    pub alpha: f64,
    pub n_features: usize,
    pub partial: bool,
    pub total_iterations: usize,
    pub entries: Vec<PathEntry>,
}

impl PathOutput {
    pub fn new(alpha: f64, n_features: usize, r: &PathResult) -> Self {
        let entries = (0..r.len())
            .map(|i| PathEntry {
                lambda: r.lambdas[i],
                objective: r.objectives[i],
                nonzeros: r.nonzero_counts[i],
                iterations: r.per_solve_iterations[i],
                converged: r.converged[i],
                theta: sparse_coefficients(&r.coefficients[i]),
            })
            .collect();
        Self {
            alpha,
            n_features,
            partial: r.partial,
            total_iterations: r.total_iterations(),
            entries,
        }
    }

    pub fn write_json(&self, mut w: impl Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }

    /// One row per lambda with the dense coefficient vector in
    /// `theta_0 .. theta_{n-1}`.
    pub fn write_csv(&self, w: impl Write) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> =
            ["lambda", "objective", "nonzeros", "iterations", "converged"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        header.extend((0..self.n_features).map(|j| format!("theta_{j}")));
        out.write_record(&header)?;
        let mut dense = vec![0.0; self.n_features];
        for e in &self.entries {
            dense.iter_mut().for_each(|d| *d = 0.0);
            for c in &e.theta {
                dense[c.index] = c.value;
            }
            let mut rec = vec![
                e.lambda.to_string(),
                e.objective.to_string(),
                e.nonzeros.to_string(),
                e.iterations.to_string(),
                e.converged.to_string(),
            ];
            rec.extend(dense.iter().map(f64::to_string));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutput {
    pub lambda: f64,
    pub alpha: f64,
    pub objective: f64,
    pub nonzeros: usize,
    pub kkt: KktOutput,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchOutput {
    pub m: usize,
    pub n: usize,
    pub correlation: f64,
    pub seed: u64,
    pub solver: String,
    pub lambda: f64,
    pub alpha: f64,
    pub lambda_max: f64,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub nonzeros: usize,
    pub wall_time_secs: f64,
}

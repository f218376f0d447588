mod common;

use common::*;
use kl_pdhg::oracle::{kkt_residual, lambda_max};
use kl_pdhg::*;

#[test]
fn warm_path_is_valid_and_cheaper_than_cold() {
    let d = gaussian_instance(2024, 200, 50);
    let mut cfg = PathConfig::new(0.5);
    let warm = solve_path(&d, &cfg).unwrap();
    assert_eq!(warm.len(), 100);
    assert!(!warm.partial);
    assert!(warm.lambdas[0] >= lambda_max(&d, 0.5).unwrap());
    assert!(warm.coefficients[0].iter().all(|t| *t == 0.0));
    assert!(warm.nonzero_counts[99] >= warm.nonzero_counts[0]);
    for (i, theta) in warm.coefficients.iter().enumerate() {
        let p = PenaltyParams::new(warm.lambdas[i], 0.5).unwrap();
        assert!(kkt_residual(&d, theta, &p).unwrap().stationarity_residual <= 10.0 * cfg.tol);
        assert_eq!(warm.objectives[i], objective(&d, theta, &p).unwrap());
    }
    cfg.warm_start = false;
    let cold = solve_path(&d, &cfg).unwrap();
    assert!(warm.total_iterations() < cold.total_iterations());
}

#[test]
fn lasso_path_uses_adaptive_solver() {
    let d = gaussian_instance(9, 100, 20);
    let mut cfg = PathConfig::new(1.0);
    cfg.n_lambda = 10;
    cfg.lambda_min_ratio = 0.05;
    let r = solve_path(&d, &cfg).unwrap();
    assert!(!r.partial);
    for (i, theta) in r.coefficients.iter().enumerate() {
        let p = PenaltyParams::new(r.lambdas[i], 1.0).unwrap();
        assert!(kkt_residual(&d, theta, &p).unwrap().stationarity_residual <= 10.0 * cfg.tol);
    }
}

#[test]
fn failed_solves_mark_the_path_partial() {
    let d = gaussian_instance(3, 100, 20);
    let mut cfg = PathConfig::new(0.5);
    cfg.n_lambda = 5;
    cfg.max_iter = 2;
    let r = solve_path(&d, &cfg).unwrap();
    assert!(r.partial);
    assert_eq!(r.len(), 5);
    assert!(r.converged[0]);
    assert!(r.converged.iter().any(|c| !c));
}

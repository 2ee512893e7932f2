//! Fits the 1.5 cm glass fibre strengths by MLE and MLqE.
//!
//! Run with `cargo run --release --example fit_glass_fibre`.

use std::time::Instant;

use weibull_mlqe::gof::ks_test;
use weibull_mlqe::{fit_mle, fit_mlqe, GaConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data: Vec<f64> = include_str!("../data/glass_fibre.txt")
        .lines()
        .filter_map(|l| l.trim().parse().ok())
        .collect();
    let config = GaConfig::with_seed(2024);

    let start = Instant::now();
    let mle = fit_mle(&data, &config)?;
    println!(
        "MLE        alpha = {:.4}  beta = {:.4}  KS p = {:.4}  ({} evaluations, {:?})",
        mle.theta_hat.alpha(),
        mle.theta_hat.beta(),
        ks_test(&data, &mle.theta_hat)?.p_value,
        mle.evaluations,
        start.elapsed()
    );

    for q in [0.7, 0.8, 0.9] {
        let fit = fit_mlqe(&data, q, &config)?;
        println!(
            "MLqE q={q:.1}  alpha = {:.4}  beta = {:.4}  KS p = {:.4}  residual = {:.2e}",
            fit.theta_hat.alpha(),
            fit.theta_hat.beta(),
            ks_test(&data, &fit.theta_hat)?.p_value,
            fit.residual.norm_inf()
        );
    }
    Ok(())
}

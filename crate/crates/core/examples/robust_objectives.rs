//! The deformed-log family and the density power divergence on a sample
//! with planted outliers: objective values, observation weights and
//! estimating-equation residuals.
//!
//! cargo run --release --example robust_objectives

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use weibull_mlqe::objectives::{
    dpd_logq_affine_discrepancy, ee_residual, weight, ObjectiveSpec, PreparedSample,
};
use weibull_mlqe::optimize::fit_spec;
use weibull_mlqe::{GaConfig, WeibullParams};

fn main() -> weibull_mlqe::Result<()> {
    let truth = WeibullParams::new(3.0, 2.0)?;
    let mut data = truth.sample(60, &mut ChaCha8Rng::seed_from_u64(8));
    data.extend([9.0, 11.0, 14.0]);

    let specs = [
        ObjectiveSpec::log(),
        ObjectiveSpec::log_q(0.8)?,
        ObjectiveSpec::log_kappa(0.2)?,
        ObjectiveSpec::log_shift(0.05)?,
        ObjectiveSpec::dpd(0.2)?,
    ];
    let prepared = PreparedSample::new(&data)?;
    let config = GaConfig::fast(4);
    for spec in &specs {
        let fit = fit_spec(&data, spec, &config)?;
        let at_truth = prepared.evaluate(&truth, spec);
        let r = ee_residual(&fit.theta_hat, &data, spec)?;
        let w_out = weight(14.0, &fit.theta_hat, spec)?;
        println!(
            "{:?}({}): α̂ = {:.4} β̂ = {:.4}  value at truth {:.4e}  residual {:.1e}  weight of 14.0 {:.3e}",
            spec.kind(),
            spec.tuning(),
            fit.theta_hat.alpha(),
            fit.theta_hat.beta(),
            at_truth.value,
            r.norm_inf(),
            w_out
        );
    }

    let grid: Vec<WeibullParams> =
        [(2.5, 1.8), (3.0, 2.0), (3.5, 2.2)].iter().map(|&(a, b)| WeibullParams::new(a, b)).collect::<Result<_, _>>()?;
    let d = dpd_logq_affine_discrepancy(&data, 0.8, &grid)?;
    println!("divergence minus affine log_q image over the grid: {:?} (spread {:.3e})", d.residuals, d.spread);
    Ok(())
}

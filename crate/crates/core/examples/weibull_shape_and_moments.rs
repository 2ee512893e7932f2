//! Density shape, moments and entropies of a few Weibull laws.
//!
//! cargo run --example weibull_shape_and_moments

use weibull_mlqe::WeibullParams;

fn main() -> weibull_mlqe::Result<()> {
    for (a, b) in [(0.7, 1.0), (1.0, 4.0), (1.5, 1.0), (2.0, 1.0), (4.0, 2.0)] {
        let theta = WeibullParams::new(a, b)?;
        let shape = theta.shape_analysis();
        println!("W(α={a}, β={b})");
        println!("  pdf(0) = {}  decreasing = {}", theta.pdf(0.0)?, shape.monotone_decreasing);
        println!(
            "  mode = {:?}  inflections = {:?} / {:?}",
            shape.mode, shape.inflection_lower, shape.inflection_upper
        );
        println!(
            "  mean = {:.6}  E[X²] = {:.6}  E[X | X > β] - β = {:.6}",
            theta.raw_moment(1.0)?,
            theta.raw_moment(2.0)?,
            theta.residual_life_moment(1, b)?
        );
        println!(
            "  E[X log X] = {:.6}  E[X log² X] = {:.6}  ∫ x f² = {:.6}",
            theta.weighted_log_moment(1.0, 1.0)?,
            theta.weighted_log2_moment(1.0, 1.0)?,
            theta.weighted_moment(1.0, 2.0)?
        );
        println!(
            "  Shannon = {:.6}  quadratic = {:.6}  Tsallis(0.8) = {:.6}",
            theta.shannon_entropy(),
            theta.quadratic_entropy()?,
            theta.tsallis_entropy(0.8)?
        );
        if a >= 1.0 {
            let t = 0.5 / b;
            let m = theta.mgf(t)?;
            println!("  M({t}) = {:.6} ({} terms, tail ≤ {:.1e})", m.value, m.terms, m.remainder_bound);
        }
    }
    Ok(())
}

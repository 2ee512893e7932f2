//! Chooses q for the glass-fibre data by the largest Kolmogorov–Smirnov
//! p-value over a grid, then prints the whole profile.
//!
//! cargo run --release --example select_q_glass

use weibull_mlqe::gof::select_q_by_ks;
use weibull_mlqe::simulate::q_grid;
use weibull_mlqe::GaConfig;

fn main() -> weibull_mlqe::Result<()> {
    let data: Vec<f64> = include_str!("../data/glass_fibre.txt")
        .lines()
        .filter_map(|l| l.trim().parse().ok())
        .collect();
    let grid = q_grid(0.60, 1.10, 0.02)?;
    let sel = select_q_by_ks(&data, &grid, &GaConfig::fast(1))?;

    println!("{:>5} {:>9} {:>9} {:>8} {:>8}", "q", "alpha", "beta", "D", "p");
    for row in &sel.rows {
        let mark = if row.q == sel.q_star { " <" } else { "" };
        println!(
            "{:>5.2} {:>9.4} {:>9.4} {:>8.4} {:>8.4}{mark}",
            row.q,
            row.fit.theta_hat.alpha(),
            row.fit.theta_hat.beta(),
            row.ks.statistic,
            row.ks.p_value
        );
    }
    let best = sel.best();
    println!("q* = {:.2}, p = {:.4}", sel.q_star, best.ks.p_value);
    Ok(())
}

//! Contaminates the glass-fibre sample, fits both estimators and writes
//! CDF and histogram plot data.
//!
//! cargo run --release --example inject_and_plot -- /tmp/glass

use std::path::PathBuf;

use weibull_mlqe::cli::{default_inlier_range, inject_contamination, write_plot_data, Contamination, FitReport};
use weibull_mlqe::{fit_mle, fit_mlqe, GaConfig};

fn main() -> weibull_mlqe::Result<()> {
    let data: Vec<f64> = include_str!("../data/glass_fibre.txt")
        .lines()
        .filter_map(|l| l.trim().parse().ok())
        .collect();
    let stem = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&stem)?;
    let config = GaConfig::with_seed(1);

    let (a, b, count) = default_inlier_range(&data);
    let modes = [
        ("clean", Contamination::None),
        ("outliers", Contamination::Outliers),
        ("inliers", Contamination::Inliers { a, b, count }),
        ("both", Contamination::Both { a, b, count }),
    ];
    for (name, mode) in modes {
        let sample = inject_contamination(&data, mode, 7)?;
        let mle = fit_mle(&sample, &config)?;
        let mlqe = fit_mlqe(&sample, 0.8, &config)?;
        let path = stem.join(format!("{name}.csv"));
        write_plot_data(&path, &sample, &mle.theta_hat, Some(&mlqe.theta_hat))?;
        for report in [FitReport::new(None, &mle, &sample, 1, 0.0)?, FitReport::new(Some(0.8), &mlqe, &sample, 1, 0.0)?] {
            println!(
                "{name:<9} {:<5} α̂ = {:<9} β̂ = {:<9} KS p = {}",
                report.method, report.alpha_hat, report.beta_hat, report.ks_p_value
            );
        }
        println!("          plot data in {}", path.display());
    }
    Ok(())
}

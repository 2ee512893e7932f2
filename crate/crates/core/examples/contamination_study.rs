//! Monte Carlo comparison of MLE and MLqE under contamination, driven by
//! the design files in `designs/`.
//!
//! cargo run --release --example contamination_study -- designs/wu_case2.toml 200

use std::path::PathBuf;

use weibull_mlqe::simulate::{write_summaries_csv, Study};
use weibull_mlqe::GaConfig;

fn main() -> weibull_mlqe::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("designs/ww_case1.toml"));
    let mut study = Study::from_path(&path)?;
    study.replications = args.next().and_then(|r| r.parse().ok()).unwrap_or(200);
    study.ga = GaConfig::fast(study.seed);

    println!("{} with {} replications", path.display(), study.replications);
    let (rows, q_star) = study.run()?;
    write_summaries_csv(std::io::stdout().lock(), &rows)?;
    for r in &rows {
        println!("{:<12} mean α {:.4}  MSE α {:.4}  MSE β {:.5}", r.method.to_string(), r.mean_alpha, r.mse_alpha, r.mse_beta);
    }
    if let Some(q) = q_star {
        println!("q* = {q}");
    }
    Ok(())
}

//! The genetic algorithm on the 2-D Rastrigin function, with and without the
//! Nelder–Mead polish.
//!
//! cargo run --release --example ga_rastrigin

use std::f64::consts::PI;

use weibull_mlqe::{ga_maximize, GaConfig};

fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}

fn main() -> weibull_mlqe::Result<()> {
    let mut config = GaConfig::with_seed(3).with_bounds(vec![-5.12, -5.12], vec![5.12, 5.12]);
    println!("{config}");

    let out = ga_maximize(|x: &[f64]| -rastrigin(x), &config)?;
    println!("polished: x = {:?}  f = {:.3e}  ({} evaluations)", out.x, -out.value, out.evaluations);
    println!("GA best before polish: {:.3e}", -out.ga_best_value);
    for (g, v) in out.history.iter().enumerate().step_by(40) {
        println!("  generation {g:>3}: best {:.4e}", -v);
    }

    config.polish = false;
    let raw = ga_maximize(|x: &[f64]| -rastrigin(x), &config)?;
    println!("GA only:  x = {:?}  f = {:.3e}", raw.x, -raw.value);

    let solved = (0..100)
        .filter(|&seed| {
            let cfg = GaConfig { seed, ..config.clone() };
            let cfg = GaConfig { polish: true, ..cfg };
            let o = ga_maximize(|x: &[f64]| -rastrigin(x), &cfg).expect("finite objective");
            o.x.iter().all(|v| v.abs() < 1e-2)
        })
        .count();
    println!("global optimum found in {solved}/100 seeds");
    Ok(())
}

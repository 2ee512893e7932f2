//! Expected Hessian, Fisher information and q-Fisher matrices, with the
//! closed form checked against quadrature.
//!
//! cargo run --release --example information_matrices

use weibull_mlqe::information::{consistency_conditions, expected_hessian, fisher, q_fisher_checked};
use weibull_mlqe::WeibullParams;

fn show(name: &str, m: &weibull_mlqe::InfoMatrix) {
    println!(
        "  {name:<18} [{:+.6} {:+.6}; {:+.6} {:+.6}]  det {:+.4e}",
        m.e_aa,
        m.e_ab,
        m.e_ab,
        m.e_bb,
        m.det()
    );
}

fn main() -> weibull_mlqe::Result<()> {
    for (a, b) in [(0.8, 1.5), (2.0, 1.0), (4.0, 2.0)] {
        let theta = WeibullParams::new(a, b)?;
        println!("W(α={a}, β={b}), per observation");
        show("expected Hessian", &expected_hessian(&theta, 1)?);
        show("Fisher", &fisher(&theta, 1)?);
        for q in [0.8, 0.9, 1.1] {
            let c = q_fisher_checked(&theta, q, 1)?;
            show(&format!("q-Fisher q={q}"), &c.matrix);
            println!("  {:<18} closed form vs quadrature {:.1e}", "", c.max_relative_discrepancy);
        }
    }

    let report = consistency_conditions(&WeibullParams::new(2.0, 3.0)?)?;
    for c in &report.checks {
        println!("{:<28} {} ({:.4e}) {}", c.name, if c.passed { "ok" } else { "FAILED" }, c.value, c.detail);
    }
    Ok(())
}

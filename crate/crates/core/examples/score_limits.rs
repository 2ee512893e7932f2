//! Behaviour of the weighted scores at the edges of the support, from the
//! analytic classes and from direct probes.
//!
//! cargo run --example score_limits

use weibull_mlqe::objectives::{probe_score_limits, score_limit_class, score_psi};
use weibull_mlqe::WeibullParams;

fn main() -> weibull_mlqe::Result<()> {
    for (a, q) in [(2.0, 1.2), (2.0, 0.8), (0.6, 1.2), (0.6, 0.8)] {
        let theta = WeibullParams::new(a, 1.0)?;
        let class = score_limit_class(&theta, q)?;
        let probe = probe_score_limits(&theta, q)?;
        println!(
            "α={a} q={q}: x→0 ({}, {}) probe ({}, {}); x→∞ ({}, {}) probe ({}, {})",
            class.at_zero.0,
            class.at_zero.1,
            probe.at_zero.0,
            probe.at_zero.1,
            class.at_infinity.0,
            class.at_infinity.1,
            probe.at_infinity.0,
            probe.at_infinity.1
        );
        for x in [1e-8, 1e-4, 1.0, 3.0, 6.0] {
            let s = score_psi(x, &theta, q)?;
            println!("    ψ({x:e}) = ({:+.4e}, {:+.4e})", s.d_alpha, s.d_beta);
        }
    }
    Ok(())
}

//! One-sample Kolmogorov–Smirnov test against a fitted Weibull, and q
//! selection by the largest p-value.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::WeibullParams;
use crate::error::{Error, Result};
use crate::optimize::{fit_mlqe, FitResult, GaConfig};
use crate::simulate::check_grid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// `D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)`.
pub fn ks_statistic<F: Fn(f64) -> f64>(data: &[f64], cdf: F) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Data("KS statistic of an empty sample".into()));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        if !f.is_finite() {
            return Err(Error::Numerical(format!("cdf({x}) = {f} is not finite")));
        }
        let i = i as f64;
        d = d.max((i + 1.0) / n - f).max(f - i / n);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Asymptotic p-value with the Stephens finite-n correction
/// `λ = (√n + 0.12 + 0.11/√n) D`.
pub fn ks_pvalue(statistic: f64, n: usize) -> f64 {
    if !(statistic > 0.0) || n == 0 {
        return 1.0;
    }
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * statistic;
    kolmogorov_tail(lambda)
}

/// `2 Σ (-1)^{k-1} exp(-2 k² λ²)`, clamped to `[0, 1]`.
pub(crate) fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    // Below this the alternating series is 1 to double precision and
    // converges too slowly to be worth summing.
    if lambda < 0.18 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=10_000u32 {
        let term = (-2.0 * (k as f64).powi(2) * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// KS test of `data` against `W(θ)`.
pub fn ks_test(data: &[f64], theta: &WeibullParams) -> Result<KsResult> {
    let statistic = ks_statistic(data, |x| theta.cdf(x).unwrap_or(f64::NAN))?;
    Ok(KsResult { statistic, p_value: ks_pvalue(statistic, data.len()), n: data.len() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KsRow {
    pub q: f64,
    pub fit: FitResult,
    pub ks: KsResult,
}

/// Result of [`select_q_by_ks`].
#[derive(Debug, Clone, PartialEq)]
pub struct KsSelection {
    pub q_star: f64,
    pub rows: Vec<KsRow>,
    /// Grid values whose fit failed, with the reason.
    pub failed: Vec<(f64, String)>,
}

impl KsSelection {
    pub fn best(&self) -> &KsRow {
        self.rows.iter().find(|r| r.q == self.q_star).expect("q_star is in the table")
    }

    pub const CSV_HEADER: &'static str = "q,alpha_hat,beta_hat,D,p_value";

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{:.6},{:.6},{:.6},{:.6}",
                r.q,
                r.fit.theta_hat.alpha(),
                r.fit.theta_hat.beta(),
                r.ks.statistic,
                r.ks.p_value
            )?;
        }
        Ok(())
    }
}

/// Fits MLqE at every grid value and keeps the q with the largest KS
/// p-value; ties go to the q nearest 1. Every fit uses the same GA seed.
pub fn select_q_by_ks(data: &[f64], grid: &[f64], config: &GaConfig) -> Result<KsSelection> {
    check_grid(grid)?;
    let results: Vec<(f64, Result<KsRow>)> = grid
        .par_iter()
        .map(|&q| {
            let row = fit_mlqe(data, q, config).and_then(|fit| {
                let ks = ks_test(data, &fit.theta_hat)?;
                Ok(KsRow { q, fit, ks })
            });
            (q, row)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for (q, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failed.push((q, e.to_string())),
        }
    }
    let best = rows
        .iter()
        .max_by(|a, b| {
            a.ks.p_value
                .total_cmp(&b.ks.p_value)
                .then_with(|| (b.q - 1.0).abs().total_cmp(&(a.q - 1.0).abs()))
        })
        .ok_or_else(|| Error::Fit(format!("every fit on the q grid failed: {failed:?}")))?;
    Ok(KsSelection { q_star: best.q, rows: rows.clone(), failed })
}

//! Expected Hessian, Fisher and q-Fisher information of the Weibull model,
//! plus numeric checks of the conditions behind consistency of the scale
//! estimate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::distributions::WeibullParams;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity, Tolerance};
use crate::special::EULER_GAMMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixConvention {
    /// Expectation of the log-likelihood Hessian (negative definite).
    ExpectedHessian,
    /// Negated expected Hessian or a weighted score outer product (positive
    /// definite).
    Fisher,
}

/// Symmetric 2×2 information-type matrix for (α, β) scaled by `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoMatrix {
    pub e_aa: f64,
    pub e_ab: f64,
    pub e_bb: f64,
    pub n: usize,
    pub convention: MatrixConvention,
}

impl InfoMatrix {
    pub fn det(&self) -> f64 {
        self.e_aa * self.e_bb - self.e_ab * self.e_ab
    }

    pub fn as_array(&self) -> [[f64; 2]; 2] {
        [[self.e_aa, self.e_ab], [self.e_ab, self.e_bb]]
    }

    pub fn is_positive_definite(&self) -> bool {
        self.e_aa > 0.0 && self.det() > 0.0
    }

    fn scaled(self, n: usize) -> Self {
        let k = n as f64;
        Self { e_aa: k * self.e_aa, e_ab: k * self.e_ab, e_bb: k * self.e_bb, n, ..self }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    Ok(())
}

/// `n · E[∇² log f]`.
///
/// Entries: E_αα = −(π²/6 + (1−γ)²)/α², E_αβ = (1−γ)/β, E_ββ = −α²/β², with γ
/// the Euler–Mascheroni constant.
pub fn expected_hessian(theta: &WeibullParams, n: usize) -> Result<InfoMatrix> {
    check_n(n)?;
    let (a, b) = (theta.alpha(), theta.beta());
    let g1 = 1.0 - EULER_GAMMA;
    Ok(InfoMatrix {
        e_aa: -(PI * PI / 6.0 + g1 * g1) / (a * a),
        e_ab: g1 / b,
        e_bb: -(a * a) / (b * b),
        n: 1,
        convention: MatrixConvention::ExpectedHessian,
    }
    .scaled(n))
}

/// Fisher information, the negated expected Hessian.
pub fn fisher(theta: &WeibullParams, n: usize) -> Result<InfoMatrix> {
    let h = expected_hessian(theta, n)?;
    let m = InfoMatrix { e_aa: -h.e_aa, e_ab: -h.e_ab, e_bb: -h.e_bb, n, convention: MatrixConvention::Fisher };
    if !m.is_positive_definite() {
        return Err(Error::Numerical(format!("Fisher matrix is not positive definite: {m:?}")));
    }
    Ok(m)
}

/// One term `coef · x^{power_alpha·α} · log^{log_power}(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub coef: f64,
    /// Multiple of α in the exponent of x: 0, 1 or 2.
    pub power_alpha: u32,
    pub log_power: u32,
}

/// The two components of `∂ log f` written as sums of [`ExpansionTerm`]s:
///
/// ∂α = (1/α − log β) + log x − β^{−α} x^α log x + β^{−α} log β · x^α,
/// ∂β = −α/β + α β^{−α−1} x^α.
pub fn score_expansion(theta: &WeibullParams) -> [Vec<ExpansionTerm>; 2] {
    let (a, b) = (theta.alpha(), theta.beta());
    let lb = b.ln();
    let s = b.powf(-a);
    let t = |coef, power_alpha, log_power| ExpansionTerm { coef, power_alpha, log_power };
    [
        vec![t(1.0 / a - lb, 0, 0), t(1.0, 0, 1), t(-s, 1, 1), t(s * lb, 1, 0)],
        vec![t(-a / b, 0, 0), t(a * s / b, 1, 0)],
    ]
}

fn multiply(u: &[ExpansionTerm], v: &[ExpansionTerm]) -> Vec<ExpansionTerm> {
    let mut out: Vec<ExpansionTerm> = Vec::new();
    for x in u {
        for y in v {
            let p = x.power_alpha + y.power_alpha;
            let k = x.log_power + y.log_power;
            match out.iter_mut().find(|t| t.power_alpha == p && t.log_power == k) {
                Some(t) => t.coef += x.coef * y.coef,
                None => out.push(ExpansionTerm { coef: x.coef * y.coef, power_alpha: p, log_power: k }),
            }
        }
    }
    out.sort_by_key(|t| (t.log_power, t.power_alpha));
    out
}

/// Expansion of each element of `∂log f ∂log fᵀ` in the order (αα, αβ, ββ).
pub fn outer_product_expansion(theta: &WeibullParams) -> [Vec<ExpansionTerm>; 3] {
    let [za, zb] = score_expansion(theta);
    [multiply(&za, &za), multiply(&za, &zb), multiply(&zb, &zb)]
}

/// Coefficients of `x^0, x^α, x^{2α}` in `(∂β log f)²`.
pub fn q_fisher_beta_coefficients(theta: &WeibullParams) -> [f64; 3] {
    let terms = &outer_product_expansion(theta)[2];
    let mut out = [0.0; 3];
    for t in terms {
        out[t.power_alpha as usize] += t.coef;
    }
    out
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 2.0) || q == 1.0 {
        return Err(Error::domain(format!("q-Fisher needs 0 < q < 2, q ≠ 1, got {q}")));
    }
    Ok(())
}

/// `n · E[f^{1−q} ∂log f ∂log fᵀ] = n ∫ ∂log f ∂log fᵀ f^{2−q} dx`, from the
/// weighted-moment tools with r = 2 − q.
pub fn q_fisher(theta: &WeibullParams, q: f64, n: usize) -> Result<InfoMatrix> {
    check_n(n)?;
    check_q(q)?;
    let a = theta.alpha();
    let r = 2.0 - q;
    let names = ["αα", "αβ", "ββ"];
    let mut vals = [0.0; 3];
    for (i, terms) in outer_product_expansion(theta).iter().enumerate() {
        let mut acc = 0.0;
        for t in terms {
            let s = f64::from(t.power_alpha) * a;
            let m = theta.weighted_log_power_moment(s, r, t.log_power).map_err(|e| {
                Error::domain(format!(
                    "q-Fisher element {} term x^{s} log^{}: {e}",
                    names[i], t.log_power
                ))
            })?;
            acc += t.coef * m;
        }
        vals[i] = acc;
    }
    Ok(InfoMatrix { e_aa: vals[0], e_ab: vals[1], e_bb: vals[2], n: 1, convention: MatrixConvention::Fisher }.scaled(n))
}

/// The q-Fisher matrix by adaptive quadrature of its defining integral.
pub fn q_fisher_by_quadrature(theta: &WeibullParams, q: f64, n: usize) -> Result<InfoMatrix> {
    check_n(n)?;
    check_q(q)?;
    let (a, b) = (theta.alpha(), theta.beta());
    let r = 2.0 - q;
    // In w = (x/β)^α the integrand behaves like w^p log²w near 0.
    let p = (1.0 - q) * (a - 1.0) / a;
    if p <= -1.0 {
        return Err(Error::domain(format!("q-Fisher integral diverges at 0 for α = {a}, q = {q}")));
    }
    let element = |which: usize| -> Result<f64> {
        let g = move |wv: f64| -> f64 {
            if wv <= 0.0 || !wv.is_finite() {
                return 0.0;
            }
            let l = wv.ln() / a;
            let ln_f = a.ln() - b.ln() + (a - 1.0) * l - wv;
            let za = 1.0 / a + l - wv * l;
            let zb = a / b * (wv - 1.0);
            let z = match which {
                0 => za * za,
                1 => za * zb,
                _ => zb * zb,
            };
            // dx = (β/α) w^{1/α − 1} dw
            let ln_jac = (b / a).ln() + (1.0 / a - 1.0) * wv.ln();
            z * (r * ln_f + ln_jac).exp()
        };
        let tol = Tolerance { absolute: 1e-14, relative: 1e-12, max_intervals: 8000 };
        let near = integrate(
            |v: f64| {
                if v <= 0.0 {
                    return 0.0;
                }
                let wv = v.powf(1.0 / (p + 1.0));
                g(wv) * wv.powf(-p) / (p + 1.0)
            },
            0.0,
            1.0,
            tol,
        )?;
        let far = integrate_to_infinity(g, 1.0, tol)?;
        Ok(near.value + far.value)
    };
    Ok(InfoMatrix { e_aa: element(0)?, e_ab: element(1)?, e_bb: element(2)?, n: 1, convention: MatrixConvention::Fisher }
        .scaled(n))
}

/// Closed-form q-Fisher matrix cross-checked against quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckedQFisher {
    /// The trusted matrix: the closed form when it agrees, otherwise the
    /// quadrature result.
    pub matrix: InfoMatrix,
    pub closed_form: Option<InfoMatrix>,
    pub quadrature: InfoMatrix,
    pub max_relative_discrepancy: f64,
    pub fell_back: bool,
}

pub const Q_FISHER_AGREEMENT: f64 = 1e-5;

/// Evaluates [`q_fisher`] and [`q_fisher_by_quadrature`]; falls back to the
/// quadrature value when the two disagree beyond [`Q_FISHER_AGREEMENT`] or
/// the closed form is unavailable.
pub fn q_fisher_checked(theta: &WeibullParams, q: f64, n: usize) -> Result<CheckedQFisher> {
    let quad = q_fisher_by_quadrature(theta, q, n)?;
    let closed = q_fisher(theta, q, n).ok();
    let discrepancy = match &closed {
        Some(c) => {
            let scale = quad.e_aa.abs().max(quad.e_bb.abs());
            [(c.e_aa, quad.e_aa), (c.e_ab, quad.e_ab), (c.e_bb, quad.e_bb)]
                .iter()
                .map(|(x, y)| (x - y).abs() / y.abs().max(1e-3 * scale))
                .fold(0.0, f64::max)
        }
        None => f64::INFINITY,
    };
    let fell_back = !(discrepancy <= Q_FISHER_AGREEMENT);
    if fell_back {
        eprintln!("q-Fisher closed form disagrees with quadrature (relative {discrepancy:e}); using quadrature");
    }
    Ok(CheckedQFisher {
        matrix: if fell_back { quad } else { closed.expect("agreement implies a closed form") },
        closed_form: closed,
        quadrature: quad,
        max_relative_discrepancy: discrepancy,
        fell_back,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Condition-specific number: the residual for the mean-zero score, the
    /// expected curvature, or the bound M(β).
    pub value: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub checks: Vec<ConditionCheck>,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Numeric checks of the three regularity conditions for the scale
/// likelihood equation with α known, on the parameter space β > 1:
///
/// 1. `E[∂β log f] = 0`;
/// 2. `E[∂²β log f] = −α²/β²`, finite and negative;
/// 3. `|∂³β log f(x)| < H(x) = 2α + α(α+1)(α+2)x^α` on a grid of x, with
///    `E[H(X)] = M(β) = 2α + α(α+1)(α+2)β^α` finite.
pub fn consistency_conditions(theta: &WeibullParams) -> Result<ConditionReport> {
    let (a, b) = (theta.alpha(), theta.beta());
    if !(b > 1.0) {
        return Err(Error::domain(format!("the consistency conditions are stated for β > 1, got {b}")));
    }
    let m_alpha = theta.raw_moment(a)?;

    let mean_score = -a / b + a / b.powf(a + 1.0) * m_alpha;
    let c1 = ConditionCheck {
        name: "mean score is zero",
        passed: mean_score.abs() < 1e-8,
        value: mean_score,
        detail: format!("E[d log f / dβ] = {mean_score:e}"),
    };

    let curvature = a / (b * b) - a * (a + 1.0) / b.powf(a + 2.0) * m_alpha;
    let target = -(a * a) / (b * b);
    let c2 = ConditionCheck {
        name: "expected curvature is finite and negative",
        passed: curvature.is_finite() && curvature < 0.0 && (curvature - target).abs() <= 1e-10 * target.abs(),
        value: curvature,
        detail: format!("E[d² log f / dβ²] = {curvature} against −α²/β² = {target}"),
    };

    let k3 = a * (a + 1.0) * (a + 2.0);
    let m_beta = 2.0 * a + k3 * b.powf(a);
    let expected_h = 2.0 * a + k3 * m_alpha;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..=400 {
        // x from 1e−3 β to 1e3 β on a log grid
        let x = b * 10f64.powf(-3.0 + 6.0 * f64::from(i) / 400.0);
        let third = -2.0 * a / b.powi(3) + k3 * x.powf(a) / b.powf(a + 3.0);
        let h = 2.0 * a + k3 * x.powf(a);
        worst = worst.max(third.abs() / h);
    }
    let c3 = ConditionCheck {
        name: "third derivative dominated by an integrable bound",
        passed: worst < 1.0 && m_beta.is_finite() && (expected_h - m_beta).abs() <= 1e-10 * m_beta,
        value: m_beta,
        detail: format!("max |d³ log f / dβ³| / H = {worst:.6}, M(β) = {m_beta}, E[H(X)] = {expected_h}"),
    };
    Ok(ConditionReport { checks: vec![c1, c2, c3] })
}

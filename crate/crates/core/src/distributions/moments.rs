//! Moments, weighted expectations, entropies and the moment generating
//! function of the Weibull law.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_to_infinity, Tolerance};
use crate::special::{binomial, digamma, ln_gamma, trigamma, upper_gamma, upper_gamma_scaled, EULER_GAMMA};

use super::weibull::{check_support, WeibullParams};

/// Sum of a truncated series together with a bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub remainder_bound: f64,
    pub terms: usize,
}

pub const MGF_DEFAULT_TERMS: usize = 60;
const MGF_MAX_REMAINDER: f64 = 1e-10;
/// Largest tolerated ratio of the summed term magnitudes to the result in
/// the residual-life expansion.
const RESIDUAL_CANCELLATION_LIMIT: f64 = 1e4;

impl WeibullParams {
    /// `E[X^s f^{r−1}(X)]`.
    ///
    /// With ζ = s + (r−1)(α−1) this is α^{r−1} β^{s−r+1} r^{−(1+ζ/α)} Γ(1+ζ/α),
    /// finite iff ζ > −α and r > 0.
    pub fn weighted_moment(&self, s: f64, r: f64) -> Result<f64> {
        self.weighted_log_power_moment(s, r, 0)
    }

    /// `E[X^s log(X) f^{r−1}(X)]`.
    pub fn weighted_log_moment(&self, s: f64, r: f64) -> Result<f64> {
        self.weighted_log_power_moment(s, r, 1)
    }

    /// `E[X^s log²(X) f^{r−1}(X)]`.
    pub fn weighted_log2_moment(&self, s: f64, r: f64) -> Result<f64> {
        self.weighted_log_power_moment(s, r, 2)
    }

    /// `E[X^s log^k(X) f^{r−1}(X)]` for k ∈ {0, 1, 2}.
    ///
    /// Substituting w = r(x/β)^α reduces the integral to
    /// C ∫ w^{ζ/α} (L + log(w)/α)^k e^{−w} dw with L = log(β / r^{1/α}).
    pub fn weighted_log_power_moment(&self, s: f64, r: f64, k: u32) -> Result<f64> {
        let (a, b) = (self.alpha(), self.beta());
        if !(r > 0.0 && r.is_finite()) || !s.is_finite() {
            return Err(Error::domain(format!("weighted moment needs r > 0 and finite s, got s = {s}, r = {r}")));
        }
        let zeta = s + (r - 1.0) * (a - 1.0);
        if zeta <= -a {
            return Err(Error::domain(format!(
                "weighted moment diverges: s + (r−1)(α−1) = {zeta} must exceed −α = {}",
                -a
            )));
        }
        let z = 1.0 + zeta / a;
        let ln_c = (r - 1.0) * a.ln() + (s - r + 1.0) * b.ln() - z * r.ln() + ln_gamma(z);
        let c = ln_c.exp();
        let lb = b.ln() - r.ln() / a;
        let factor = match k {
            0 => 1.0,
            1 => lb + digamma(z) / a,
            2 => {
                let p0 = digamma(z);
                lb * lb + 2.0 * lb * p0 / a + (p0 * p0 + trigamma(z)) / (a * a)
            }
            _ => return Err(Error::domain(format!("log power {k} not supported"))),
        };
        Ok(c * factor)
    }

    /// `E[X^s] = β^s Γ(1 + s/α)` for s > −α.
    pub fn raw_moment(&self, s: f64) -> Result<f64> {
        if !(s > -self.alpha()) {
            return Err(Error::domain(format!("raw moment of order {s} diverges for shape {}", self.alpha())));
        }
        Ok((s * self.beta().ln() + ln_gamma(1.0 + s / self.alpha())).exp())
    }

    /// `E[X^s 1{X ≥ t}] = t^s R(t) + (s β^s / α) Γ(s/α, (t/β)^α)`, with the
    /// second term taken as 0 at s = 0.
    pub fn truncated_moment(&self, s: f64, t: f64) -> Result<f64> {
        check_support(t)?;
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::domain(format!("truncated moment needs s ≥ 0, got {s}")));
        }
        let (a, b) = (self.alpha(), self.beta());
        let u = (t / b).powf(a);
        let head = if s == 0.0 { 1.0 } else { t.powf(s) } * (-u).exp();
        if s == 0.0 {
            return Ok(head);
        }
        Ok(head + s * b.powf(s) / a * upper_gamma(s / a, u))
    }

    /// `E[(X − t)^n | X > t]` via the binomial expansion, each term carrying
    /// the scaled incomplete gamma e^u Γ(1 + k/α, u).
    pub fn residual_life_moment(&self, order: u32, t: f64) -> Result<f64> {
        check_support(t)?;
        if order == 0 {
            return Err(Error::domain("residual life moment order must be at least 1"));
        }
        let (a, b) = (self.alpha(), self.beta());
        let u = (t / b).powf(a);
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        for k in 0..=order {
            let tail = if k == 0 { 1.0 } else { b.powi(k as i32) * upper_gamma_scaled(1.0 + f64::from(k) / a, u) };
            let term = binomial(order, k) * (-t).powi((order - k) as i32) * tail;
            sum += term;
            magnitude += term.abs();
        }
        if t > 0.0 && !(sum.abs() * RESIDUAL_CANCELLATION_LIMIT >= magnitude) {
            return self.residual_life_by_quadrature(order, t, u);
        }
        Ok(sum)
    }

    /// `E[(X − t)^n | X > t]` as `∫ (β(u+v)^{1/α} − t)^n e^{−v} dv`, used when
    /// the alternating binomial sum cancels.
    fn residual_life_by_quadrature(&self, order: u32, t: f64, u: f64) -> Result<f64> {
        let a = self.alpha();
        let excess = |v: f64| t * ((v / u).ln_1p() / a).exp_m1();
        let tol = Tolerance { absolute: 1e-300, relative: 1e-12, max_intervals: 4000 };
        Ok(integrate_to_infinity(|v| excess(v).powi(order as i32) * (-v).exp(), 0.0, tol)?.value)
    }

    /// Tsallis entropy `(1 − ∫f^q) / (q − 1)`, defined for q > 0, q ≠ 1 and
    /// q(α−1) > −1.
    pub fn tsallis_entropy(&self, q: f64) -> Result<f64> {
        if q == 1.0 || !(q > 0.0) || !q.is_finite() {
            return Err(Error::domain(format!("Tsallis index must be positive and differ from 1, got {q}")));
        }
        if q * (self.alpha() - 1.0) <= -1.0 {
            return Err(Error::domain(format!(
                "Tsallis entropy diverges: q(α−1) = {} ≤ −1",
                q * (self.alpha() - 1.0)
            )));
        }
        let integral = self.weighted_moment(0.0, q)?;
        Ok((1.0 - integral) / (q - 1.0))
    }

    /// Quadratic (order-2 Rényi) entropy `−log ∫f²`, for α > 1/2.
    pub fn quadratic_entropy(&self) -> Result<f64> {
        let a = self.alpha();
        if a <= 0.5 {
            return Err(Error::domain(format!("quadratic entropy needs α > 1/2, got {a}")));
        }
        let g = 2.0 - 1.0 / a;
        Ok(self.beta().ln() - a.ln() + g * std::f64::consts::LN_2 - ln_gamma(g))
    }

    /// Shannon entropy `1 + log(β/α) + (1 − 1/α) γ`.
    pub fn shannon_entropy(&self) -> f64 {
        1.0 + (self.beta() / self.alpha()).ln() + (1.0 - 1.0 / self.alpha()) * EULER_GAMMA
    }

    /// Moment generating function `E[e^{tX}]` with the default series length.
    pub fn mgf(&self, t: f64) -> Result<SeriesValue> {
        self.mgf_with_terms(t, MGF_DEFAULT_TERMS)
    }

    /// Moment generating function. For α = 1 the closed form 1/(1 − βt); for
    /// α > 1 the series Σ_{n=0}^{terms} (βt)^n Γ(1 + n/α) / n!.
    pub fn mgf_with_terms(&self, t: f64, terms: usize) -> Result<SeriesValue> {
        let (a, b) = (self.alpha(), self.beta());
        if !t.is_finite() {
            return Err(Error::domain(format!("mgf argument must be finite, got {t}")));
        }
        if a < 1.0 {
            return Err(Error::domain(format!("mgf series is not available for shape {a} < 1")));
        }
        if a == 1.0 {
            if (b * t).abs() >= 1.0 {
                return Err(Error::domain(format!("mgf of the exponential law needs |t| < 1/β, got t = {t}")));
            }
            return Ok(SeriesValue { value: 1.0 / (1.0 - b * t), remainder_bound: 0.0, terms: 0 });
        }
        if terms == 0 {
            return Err(Error::domain("mgf series needs at least one term"));
        }
        let bt = b * t;
        let term = |n: usize| -> f64 {
            if n == 0 {
                return 1.0;
            }
            let nf = n as f64;
            let mag = nf * bt.abs().ln() + ln_gamma(1.0 + nf / a) - ln_gamma(nf + 1.0);
            let sign = if bt < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
            sign * mag.exp()
        };
        let mut value = 0.0;
        let mut comp = 0.0;
        for n in 0..=terms {
            // Kahan summation keeps alternating series for t < 0 tidy.
            let y = term(n) - comp;
            let s = value + y;
            comp = (s - value) - y;
            value = s;
        }
        let remainder_bound = if bt == 0.0 {
            0.0
        } else {
            let next = term(terms + 1).abs();
            let ratio = term(terms + 2).abs() / next;
            if ratio < 1.0 {
                next / (1.0 - ratio)
            } else {
                f64::INFINITY
            }
        };
        if remainder_bound > MGF_MAX_REMAINDER * value.abs().max(1.0) {
            return Err(Error::Numerical(format!(
                "mgf series with {terms} terms leaves a tail bound of {remainder_bound:e}"
            )));
        }
        Ok(SeriesValue { value, remainder_bound, terms: terms + 1 })
    }
}

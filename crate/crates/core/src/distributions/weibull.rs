use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-parameter Weibull law with shape `alpha` and scale `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    alpha: f64,
    beta: f64,
}

impl WeibullParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("shape must be positive and finite, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be positive and finite, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Density. At `x = 0` follows the limit: `+∞` for α < 1, `1/β` for α = 1,
    /// `0` for α > 1.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_support(x)?;
        if x == 0.0 {
            return Ok(if self.alpha < 1.0 {
                f64::INFINITY
            } else if self.alpha == 1.0 {
                1.0 / self.beta
            } else {
                0.0
            });
        }
        Ok(self.ln_pdf_positive(x).exp())
    }

    /// `log f(x)` for x > 0, computed without forming `f`.
    #[inline]
    pub fn ln_pdf_positive(&self, x: f64) -> f64 {
        let ln_z = (x / self.beta).ln();
        (self.alpha / self.beta).ln() + (self.alpha - 1.0) * ln_z - (self.alpha * ln_z).exp()
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_support(x)?;
        Ok(-(-(x / self.beta).powf(self.alpha)).exp_m1())
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain(format!("quantile level must lie in (0, 1), got {u}")));
        }
        Ok(self.beta * (-(-u).ln_1p()).powf(1.0 / self.alpha))
    }

    /// `n` draws by inverse transform. Uniforms come from the open interval,
    /// so no draw is exactly zero.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                self.beta * (-u.ln()).powf(1.0 / self.alpha)
            })
            .collect()
    }

    /// Survival function R(t) = 1 − F(t).
    pub fn reliability(&self, t: f64) -> Result<f64> {
        check_support(t)?;
        Ok((-(t / self.beta).powf(self.alpha)).exp())
    }

    /// Hazard rate (α/β)(t/β)^{α−1}.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() || (t == 0.0 && self.alpha < 1.0) {
            return Err(Error::domain(format!("hazard undefined at t = {t} for shape {}", self.alpha)));
        }
        Ok(self.alpha / self.beta * (t / self.beta).powf(self.alpha - 1.0))
    }

    /// Mode and inflection points of the density.
    pub fn shape_analysis(&self) -> ShapeAnalysis {
        let a = self.alpha;
        if a <= 1.0 {
            return ShapeAnalysis {
                mode: None,
                inflection_lower: None,
                inflection_upper: None,
                monotone_decreasing: true,
            };
        }
        let mode = self.beta * ((a - 1.0) / a).powf(1.0 / a);
        // Roots of α²u² − 3α(α−1)u + (α−1)(α−2) in u = (x/β)^α.
        let disc = ((a - 1.0) * (5.0 * a - 1.0)).sqrt();
        let u_plus = (3.0 * (a - 1.0) + disc) / (2.0 * a);
        let u_minus = (3.0 * (a - 1.0) - disc) / (2.0 * a);
        let inflection_lower = if u_minus > 0.0 {
            Some(self.beta * u_minus.powf(1.0 / a))
        } else if a == 2.0 {
            Some(0.0)
        } else {
            None
        };
        ShapeAnalysis {
            mode: Some(mode),
            inflection_lower,
            inflection_upper: Some(self.beta * u_plus.powf(1.0 / a)),
            monotone_decreasing: false,
        }
    }
}

/// Monotonicity, mode and inflection structure of a Weibull density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeAnalysis {
    /// Unique mode; absent when α ≤ 1.
    pub mode: Option<f64>,
    /// Lower inflection point; absent for α ≤ 1 and for 1 < α < 2 (the
    /// density is concave from the origin up to the upper inflection).
    pub inflection_lower: Option<f64>,
    pub inflection_upper: Option<f64>,
    pub monotone_decreasing: bool,
}

pub(crate) fn check_support(x: f64) -> Result<()> {
    if x < 0.0 || x.is_nan() {
        Err(Error::domain(format!("argument {x} lies outside the support [0, ∞)")))
    } else {
        Ok(())
    }
}

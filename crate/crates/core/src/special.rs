//! Special-function kernels: gamma family, polygamma and the upper
//! incomplete gamma function (plain, regularized and exponentially scaled).

pub use statrs::function::gamma::{digamma, gamma, ln_gamma};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const ASYMPTOTIC_THRESHOLD: f64 = 12.0;

/// Trigamma function Ψ⁽¹⁾(x) for x > 0.
///
/// Upward recurrence Ψ⁽¹⁾(x) = Ψ⁽¹⁾(x + 1) + 1/x² until the argument clears
/// the asymptotic threshold, then the Bernoulli series.
pub fn trigamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    let mut acc = 0.0;
    let mut z = x;
    while z < ASYMPTOTIC_THRESHOLD {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let r = 1.0 / z;
    let r2 = r * r;
    // 1/z + 1/(2z²) + Σ B_2k / z^(2k+1)
    let series = r2
        * (1.0 / 6.0
            - r2 * (1.0 / 30.0
                - r2 * (1.0 / 42.0 - r2 * (1.0 / 30.0 - r2 * (5.0 / 66.0 - r2 * 691.0 / 2730.0)))));
    acc + r + 0.5 * r2 + r * series
}

/// Exponentially scaled upper incomplete gamma, `e^x Γ(a, x)`, for a > 0 and
/// x ≥ 0.
///
/// Never forms `e^x` and `Γ(a, x)` separately when x is large, so it stays
/// finite where the unscaled pair would overflow/underflow.
pub fn upper_gamma_scaled(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return gamma(a);
    }
    if x < a + 1.0 {
        // e^x Γ(a) − e^x γ(a, x), with e^x γ(a, x) = x^a Σ xⁿ / (a(a+1)…(a+n)).
        let lower_scaled = (a * x.ln()).exp() * lower_series(a, x);
        x.exp() * gamma(a) - lower_scaled
    } else {
        (a * x.ln()).exp() * upper_continued_fraction(a, x)
    }
}

/// Upper incomplete gamma Γ(a, x) (not regularized), a > 0, x ≥ 0.
pub fn upper_gamma(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return gamma(a);
    }
    if x < a + 1.0 {
        gamma(a) * (1.0 - lower_regularized(a, x))
    } else {
        (a * x.ln() - x).exp() * upper_continued_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x) / Γ(a).
pub fn upper_regularized(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - lower_regularized(a, x)
    } else {
        (a * x.ln() - x - ln_gamma(a)).exp() * upper_continued_fraction(a, x)
    }
}

fn lower_regularized(a: f64, x: f64) -> f64 {
    (a * x.ln() - x - ln_gamma(a)).exp() * lower_series(a, x)
}

/// Σ_{n≥0} xⁿ / (a(a+1)…(a+n)).
fn lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..10_000 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum
}

/// Continued fraction for e^x x^{-a} Γ(a, x) (modified Lentz).
fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Binomial coefficient as a float.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

#![allow(dead_code)]

use weibull_mlqe::quadrature::{integrate, integrate_to_infinity, Tolerance};
use weibull_mlqe::WeibullParams;

pub fn glass_fibre() -> Vec<f64> {
    include_str!("../../data/glass_fibre.txt")
        .lines()
        .filter_map(|l| l.trim().parse().ok())
        .collect()
}

pub fn w(a: f64, b: f64) -> WeibullParams {
    WeibullParams::new(a, b).unwrap()
}

/// `∫_0^∞ g(x) dx` computed in `w = (x/β)^α`, where the transformed
/// integrand behaves like `w^p` (times logs) at 0; the power is removed on
/// `[0, 1]` by `w = v^{1/(p+1)}`.
pub fn integrate_half_line<G: Fn(f64) -> f64>(theta: &WeibullParams, p: f64, g: G) -> f64 {
    let (a, b) = (theta.alpha(), theta.beta());
    let in_w = |wv: f64| -> f64 {
        if wv <= 0.0 || !wv.is_finite() {
            return 0.0;
        }
        let x = b * wv.powf(1.0 / a);
        let dx = b / a * wv.powf(1.0 / a - 1.0);
        let v = g(x) * dx;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let tol = Tolerance { absolute: 1e-15, relative: 1e-12, max_intervals: 8000 };
    let near = integrate(
        |v: f64| {
            if v <= 0.0 {
                return 0.0;
            }
            let wv = v.powf(1.0 / (p + 1.0));
            in_w(wv) * wv.powf(-p) / (p + 1.0)
        },
        0.0,
        1.0,
        tol,
    )
    .unwrap()
    .value;
    let far = integrate_to_infinity(in_w, 1.0, tol).unwrap().value;
    near + far
}

/// `∫ x^s log^k(x) f(x)^r dx`.
pub fn weighted_oracle(theta: &WeibullParams, s: f64, r: f64, k: i32) -> f64 {
    let p = (s + (r - 1.0) * (theta.alpha() - 1.0)) / theta.alpha();
    integrate_half_line(theta, p, |x| x.powf(s) * x.ln().powi(k) * theta.pdf(x).unwrap().powf(r))
}

/// `∫_t^∞ g(x) dx`.
pub fn integrate_tail<G: Fn(f64) -> f64>(g: G, t: f64) -> f64 {
    let tol = Tolerance { absolute: 1e-300, relative: 1e-12, max_intervals: 8000 };
    integrate_to_infinity(g, t, tol).unwrap().value
}

/// Score of log f with respect to (α, β), written out directly.
pub fn score(x: f64, a: f64, b: f64) -> (f64, f64) {
    let l = (x / b).ln();
    let wv = (a * l).exp();
    (1.0 / a + l - wv * l, a / b * (wv - 1.0))
}

/// Second partials of log f: (αα, αβ, ββ).
pub fn second_partials(x: f64, a: f64, b: f64) -> (f64, f64, f64) {
    let l = (x / b).ln();
    let wv = (a * l).exp();
    (
        -1.0 / (a * a) - wv * l * l,
        -1.0 / b + wv / b * (1.0 + a * l),
        a / (b * b) - a * (a + 1.0) * wv / (b * b),
    )
}

/// Central-difference gradient of `f` at (α, β) with relative step `h`.
pub fn fd_gradient<F: Fn(f64, f64) -> f64>(f: F, a: f64, b: f64, h: f64) -> (f64, f64) {
    let (ha, hb) = (h * a, h * b);
    ((f(a + ha, b) - f(a - ha, b)) / (2.0 * ha), (f(a, b + hb) - f(a, b - hb)) / (2.0 * hb))
}

pub fn rel_close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs().max(1e-300)
}

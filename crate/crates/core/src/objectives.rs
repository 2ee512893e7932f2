//! Likelihood-type objectives for the Weibull model: the log-likelihood,
//! the log_q likelihood and the other deformed-log family members, their
//! gradients and score functions, weights, estimating-equation residuals and
//! the density power divergence.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::distributions::WeibullParams;
use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// `ln(1e−300)`: floor applied to `log f` when a negative exponent would
/// otherwise blow `f^{1−q}` up.
pub const LN_DENSITY_FLOOR: f64 = -690.775_527_898_213_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    Log,
    LogQ,
    LogKappa,
    LogShift,
    Dpd,
}

/// A member of the deformed-log objective family together with its tuning
/// constant (q, κ, shift or DPD exponent; ignored for `Log`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    kind: ObjectiveKind,
    tuning: f64,
}

impl ObjectiveSpec {
    pub fn new(kind: ObjectiveKind, tuning: f64) -> Result<Self> {
        let ok = match kind {
            ObjectiveKind::Log => true,
            ObjectiveKind::LogQ => tuning.is_finite() && tuning != 1.0,
            ObjectiveKind::LogKappa => tuning.is_finite(),
            ObjectiveKind::LogShift => tuning.is_finite() && tuning >= 0.0,
            ObjectiveKind::Dpd => tuning.is_finite() && tuning > 0.0,
        };
        if !ok {
            return Err(Error::InvalidParameter(format!("tuning {tuning} is outside the domain of {kind:?}")));
        }
        let tuning = if kind == ObjectiveKind::Log { 0.0 } else { tuning };
        Ok(Self { kind, tuning })
    }

    pub fn log() -> Self {
        Self { kind: ObjectiveKind::Log, tuning: 0.0 }
    }

    pub fn log_q(q: f64) -> Result<Self> {
        Self::new(ObjectiveKind::LogQ, q)
    }

    pub fn log_kappa(kappa: f64) -> Result<Self> {
        Self::new(ObjectiveKind::LogKappa, kappa)
    }

    pub fn log_shift(shift: f64) -> Result<Self> {
        Self::new(ObjectiveKind::LogShift, shift)
    }

    pub fn dpd(gamma: f64) -> Result<Self> {
        Self::new(ObjectiveKind::Dpd, gamma)
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn tuning(&self) -> f64 {
        self.tuning
    }
}

/// Gradient-shaped pair (∂/∂α, ∂/∂β).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreVector {
    pub d_alpha: f64,
    pub d_beta: f64,
}

impl ScoreVector {
    pub fn new(d_alpha: f64, d_beta: f64) -> Self {
        Self { d_alpha, d_beta }
    }

    pub fn norm_inf(&self) -> f64 {
        self.d_alpha.abs().max(self.d_beta.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.d_alpha.is_finite() && self.d_beta.is_finite()
    }
}

impl Add for ScoreVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.d_alpha + o.d_alpha, self.d_beta + o.d_beta)
    }
}

impl Sub for ScoreVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.d_alpha - o.d_alpha, self.d_beta - o.d_beta)
    }
}

impl AddAssign for ScoreVector {
    fn add_assign(&mut self, o: Self) {
        self.d_alpha += o.d_alpha;
        self.d_beta += o.d_beta;
    }
}

impl Mul<ScoreVector> for f64 {
    type Output = ScoreVector;
    fn mul(self, v: ScoreVector) -> ScoreVector {
        ScoreVector::new(self * v.d_alpha, self * v.d_beta)
    }
}

#[derive(Default)]
struct ScoreAccumulator {
    a: CompensatedSum,
    b: CompensatedSum,
}

impl ScoreAccumulator {
    fn add(&mut self, v: ScoreVector) {
        self.a.add(v.d_alpha);
        self.b.add(v.d_beta);
    }

    fn value(&self) -> ScoreVector {
        ScoreVector::new(self.a.value(), self.b.value())
    }
}

/// Per-observation building blocks: `L = log(x/β)`, `w = (x/β)^α` and
/// `log f`.
#[derive(Debug, Clone, Copy)]
struct Point {
    l: f64,
    w: f64,
    ln_f: f64,
}

#[inline]
fn point(theta: &WeibullParams, ln_x: f64) -> Point {
    let (a, b) = (theta.alpha(), theta.beta());
    let l = ln_x - b.ln();
    let w = (a * l).exp();
    Point { l, w, ln_f: a.ln() - b.ln() + (a - 1.0) * l - w }
}

/// Score of `log f`: ∂/∂α = 1/α + L − wL, ∂/∂β = (α/β)(w − 1).
#[inline]
fn log_score(theta: &WeibullParams, p: &Point) -> ScoreVector {
    let (a, b) = (theta.alpha(), theta.beta());
    ScoreVector::new(1.0 / a + p.l - p.w * p.l, a / b * (p.w - 1.0))
}

fn check_data(data: &[f64]) -> Result<()> {
    if let Some((i, &x)) = data.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::domain(format!("observation {i} = {x} lies outside the open support (0, ∞)")));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if q == 1.0 || !q.is_finite() {
        return Err(Error::domain(format!("q must be finite and differ from 1 (use the log-likelihood), got {q}")));
    }
    Ok(())
}

/// Deformed logarithm Λ(z) of the chosen kind.
///
/// `LogQ`: (z^{1−q} − 1)/(1 − q). `LogKappa`: (z^κ − z^{−κ})/(2κ), the natural
/// log at κ = 0. `LogShift`: log(shift + z). `Dpd`: (z^γ − 1)/γ, the per-point
/// data term of the divergence up to an affine map.
pub fn deformed_log(z: f64, spec: &ObjectiveSpec) -> Result<f64> {
    if spec.kind == ObjectiveKind::LogShift {
        if z < 0.0 || (z == 0.0 && spec.tuning == 0.0) || z.is_nan() {
            return Err(Error::domain(format!("log(shift + z) undefined at z = {z}, shift = {}", spec.tuning)));
        }
        return Ok((spec.tuning + z).ln());
    }
    if !(z > 0.0) {
        return Err(Error::domain(format!("deformed log needs z > 0, got {z}")));
    }
    let ln_z = z.ln();
    Ok(match spec.kind {
        ObjectiveKind::Log => ln_z,
        ObjectiveKind::LogQ => log_q_from_ln(ln_z, spec.tuning),
        ObjectiveKind::LogKappa => {
            if spec.tuning == 0.0 {
                ln_z
            } else {
                (spec.tuning * ln_z).sinh() / spec.tuning
            }
        }
        ObjectiveKind::Dpd => (spec.tuning * ln_z).exp_m1() / spec.tuning,
        ObjectiveKind::LogShift => unreachable!(),
    })
}

#[inline]
fn log_q_from_ln(ln_z: f64, q: f64) -> f64 {
    let g = 1.0 - q;
    (g * ln_z).exp_m1() / g
}

/// Log-likelihood `n log(α/β) + Σ[(α−1) log(x_i/β) − (x_i/β)^α]`.
pub fn loglik(theta: &WeibullParams, data: &[f64]) -> Result<f64> {
    check_data(data)?;
    let mut acc = CompensatedSum::default();
    for &x in data {
        acc.add(point(theta, x.ln()).ln_f);
    }
    Ok(acc.value())
}

/// Gradient of [`loglik`] in (α, β).
pub fn grad_loglik(theta: &WeibullParams, data: &[f64]) -> Result<ScoreVector> {
    check_data(data)?;
    let mut acc = ScoreAccumulator::default();
    for &x in data {
        acc.add(log_score(theta, &point(theta, x.ln())));
    }
    Ok(acc.value())
}

/// Hessian of [`loglik`] as `[[∂αα, ∂αβ], [∂αβ, ∂ββ]]`.
pub fn hessian_loglik(theta: &WeibullParams, data: &[f64]) -> Result<[[f64; 2]; 2]> {
    check_data(data)?;
    let (a, b) = (theta.alpha(), theta.beta());
    let (mut haa, mut hbb, mut hab) = (CompensatedSum::default(), CompensatedSum::default(), CompensatedSum::default());
    for &x in data {
        let p = point(theta, x.ln());
        haa.add(-1.0 / (a * a) - p.w * p.l * p.l);
        hbb.add(a / (b * b) - a * (a + 1.0) * p.w / (b * b));
        hab.add(-1.0 / b + p.w / b * (1.0 + a * p.l));
    }
    let off = hab.value();
    Ok([[haa.value(), off], [off, hbb.value()]])
}

/// log_q likelihood `Σ (f^{1−q}(x_i) − 1)/(1 − q)`.
pub fn logq_lik(theta: &WeibullParams, data: &[f64], q: f64) -> Result<f64> {
    check_data(data)?;
    check_q(q)?;
    let mut acc = CompensatedSum::default();
    for &x in data {
        acc.add(log_q_from_ln(point(theta, x.ln()).ln_f, q));
    }
    Ok(acc.value())
}

/// Weighted score `f^{1−q} · ∂ log f` at one observation.
pub fn score_psi(x: f64, theta: &WeibullParams, q: f64) -> Result<ScoreVector> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("score function needs x > 0, got {x}")));
    }
    Ok(psi_at(theta, &point(theta, x.ln()), q))
}

#[inline]
fn psi_at(theta: &WeibullParams, p: &Point, q: f64) -> ScoreVector {
    ((1.0 - q) * p.ln_f).exp() * log_score(theta, p)
}

/// Gradient of [`logq_lik`], the sum of [`score_psi`] over the sample.
pub fn grad_logq_lik(theta: &WeibullParams, data: &[f64], q: f64) -> Result<ScoreVector> {
    check_data(data)?;
    check_q(q)?;
    let mut acc = ScoreAccumulator::default();
    for &x in data {
        acc.add(psi_at(theta, &point(theta, x.ln()), q));
    }
    Ok(acc.value())
}

/// Per-observation weight multiplying the score of `log f` in the
/// estimating equations of each objective.
pub fn weight(x: f64, theta: &WeibullParams, spec: &ObjectiveSpec) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("weight needs x > 0, got {x}")));
    }
    Ok(weight_at(point(theta, x.ln()).ln_f, spec))
}

#[inline]
fn weight_at(ln_f: f64, spec: &ObjectiveSpec) -> f64 {
    let t = spec.tuning;
    match spec.kind {
        ObjectiveKind::Log => 1.0,
        ObjectiveKind::LogQ => ((1.0 - t) * ln_f).exp(),
        ObjectiveKind::LogKappa => (t * ln_f).cosh(),
        ObjectiveKind::LogShift => {
            if t == 0.0 {
                1.0
            } else {
                let f = ln_f.exp();
                f / (t + f)
            }
        }
        ObjectiveKind::Dpd => (t * ln_f).exp(),
    }
}

/// Left-hand side of the estimating equations `Σ w(x_i) ∂log f(x_i) = 0`.
///
/// For `Dpd` with exponent γ this is `(1/n) Σ f^γ ∂log f − E[f^γ ∂log f]`,
/// the expectation taken under the model in closed form.
pub fn ee_residual(theta: &WeibullParams, data: &[f64], spec: &ObjectiveSpec) -> Result<ScoreVector> {
    match spec.kind {
        ObjectiveKind::Log => grad_loglik(theta, data),
        ObjectiveKind::LogQ => grad_logq_lik(theta, data, spec.tuning),
        ObjectiveKind::LogKappa | ObjectiveKind::LogShift => {
            check_data(data)?;
            let mut acc = ScoreAccumulator::default();
            for &x in data {
                let p = point(theta, x.ln());
                acc.add(weight_at(p.ln_f, spec) * log_score(theta, &p));
            }
            Ok(acc.value())
        }
        ObjectiveKind::Dpd => {
            check_data(data)?;
            if data.is_empty() {
                return Err(Error::Data("empty sample".into()));
            }
            let mut acc = ScoreAccumulator::default();
            for &x in data {
                let p = point(theta, x.ln());
                acc.add(weight_at(p.ln_f, spec) * log_score(theta, &p));
            }
            let mean = (1.0 / data.len() as f64) * acc.value();
            Ok(mean - dpd_score_expectation(theta, spec.tuning)?)
        }
    }
}

/// `E[f^γ ∂log f] = ∫ ∂log f · f^{1+γ} dx` from the weighted-moment tools.
pub fn dpd_score_expectation(theta: &WeibullParams, gamma: f64) -> Result<ScoreVector> {
    let (a, b) = (theta.alpha(), theta.beta());
    let r = 1.0 + gamma;
    let lb = b.ln();
    let scale = b.powf(-a);
    let m0 = theta.weighted_moment(0.0, r)?;
    let lm0 = theta.weighted_log_moment(0.0, r)?;
    let ma = theta.weighted_moment(a, r)?;
    let lma = theta.weighted_log_moment(a, r)?;
    // ∂α: 1/α + L − wL with L = log x − log β, w = x^α β^{−α}
    let d_alpha = (1.0 / a - lb) * m0 + lm0 - scale * (lma - lb * ma);
    let d_beta = a / b * (scale * ma - m0);
    Ok(ScoreVector::new(d_alpha, d_beta))
}

/// Density power divergence objective (to be minimized)
/// `∫f^{1+γ} dx − (1 + 1/γ)(1/n) Σ f^γ(x_i)`.
pub fn dpd_objective(theta: &WeibullParams, data: &[f64], gamma: f64) -> Result<f64> {
    check_data(data)?;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!("DPD exponent must be positive, got {gamma}")));
    }
    if data.is_empty() {
        return Err(Error::Data("empty sample".into()));
    }
    if gamma * (theta.alpha() - 1.0) <= -1.0 {
        return Err(Error::domain(format!(
            "∫f^(1+γ) diverges: γ(α−1) = {} ≤ −1",
            gamma * (theta.alpha() - 1.0)
        )));
    }
    let integral = theta.weighted_moment(0.0, 1.0 + gamma)?;
    let mut acc = CompensatedSum::default();
    for &x in data {
        acc.add((gamma * point(theta, x.ln()).ln_f).exp());
    }
    Ok(integral - (1.0 + 1.0 / gamma) * acc.value() / data.len() as f64)
}

/// Value of an objective on a sample, oriented so that larger is better.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    /// Some `log f` was clamped at [`LN_DENSITY_FLOOR`], or the value is not
    /// finite.
    pub cliffed: bool,
}

/// Sample with its logarithms cached, for repeated objective evaluation.
#[derive(Debug, Clone)]
pub struct PreparedSample {
    ln_x: Vec<f64>,
}

impl PreparedSample {
    pub fn new(data: &[f64]) -> Result<Self> {
        check_data(data)?;
        if data.is_empty() {
            return Err(Error::Data("empty sample".into()));
        }
        Ok(Self { ln_x: data.iter().map(|x| x.ln()).collect() })
    }

    pub fn len(&self) -> usize {
        self.ln_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_x.is_empty()
    }

    /// Sum of Λ(f(x_i)) for the chosen kind; for `Dpd` the negated divergence.
    ///
    /// Kinds whose value grows without bound as f → 0 (log_q with q > 1,
    /// log_κ with κ ≠ 0) see `log f` floored and the result flagged.
    pub fn evaluate(&self, theta: &WeibullParams, spec: &ObjectiveSpec) -> Evaluation {
        let t = spec.tuning;
        let floors = match spec.kind {
            ObjectiveKind::LogQ => t > 1.0,
            ObjectiveKind::LogKappa => t != 0.0,
            _ => false,
        };
        let mut cliffed = false;
        let mut acc = CompensatedSum::default();
        for &ln_x in &self.ln_x {
            let mut ln_f = point(theta, ln_x).ln_f;
            if floors && !(ln_f >= LN_DENSITY_FLOOR) {
                ln_f = LN_DENSITY_FLOOR;
                cliffed = true;
            }
            let v = match spec.kind {
                ObjectiveKind::Log => ln_f,
                ObjectiveKind::LogQ => log_q_from_ln(ln_f, t),
                ObjectiveKind::LogKappa => {
                    if t == 0.0 {
                        ln_f
                    } else {
                        (t * ln_f).sinh() / t
                    }
                }
                ObjectiveKind::LogShift => (t + ln_f.exp()).ln(),
                ObjectiveKind::Dpd => (t * ln_f).exp(),
            };
            acc.add(v);
        }
        let value = if spec.kind == ObjectiveKind::Dpd {
            let n = self.ln_x.len() as f64;
            match theta.weighted_moment(0.0, 1.0 + t) {
                Ok(integral) => (1.0 + 1.0 / t) * acc.value() / n - integral,
                Err(_) => f64::NEG_INFINITY,
            }
        } else {
            acc.value()
        };
        Evaluation { value, cliffed: cliffed || !value.is_finite() }
    }
}

/// Limit of a score component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Limit {
    PosInfinity,
    NegInfinity,
    Zero,
    /// Converges to a finite non-zero value.
    Finite,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limit::PosInfinity => "+inf",
            Limit::NegInfinity => "-inf",
            Limit::Zero => "0",
            Limit::Finite => "finite",
        })
    }
}

/// Limits of (ψ_α, ψ_β) as x → 0 and x → ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreLimits {
    pub at_zero: (Limit, Limit),
    pub at_infinity: (Limit, Limit),
}

/// Analytic limit classes of the weighted scores.
///
/// Near 0, `f^{1−q}` behaves like `x^{(α−1)(1−q)}` while the bracket of ψ_α
/// tends to −∞ through `log(x/β)` and that of ψ_β to −α/β. Near ∞, `f^{1−q}`
/// decays like `exp(−(1−q)(x/β)^α)` for q < 1 and explodes for q > 1.
pub fn score_limit_class(theta: &WeibullParams, q: f64) -> Result<ScoreLimits> {
    if !(q > 0.0) || q == 1.0 || !q.is_finite() {
        return Err(Error::domain(format!("limit classes need q > 0, q ≠ 1, got {q}")));
    }
    let a = theta.alpha();
    let power = (a - 1.0) * (1.0 - q);
    let at_zero = if a == 1.0 {
        (Limit::NegInfinity, Limit::Finite)
    } else if power > 0.0 {
        (Limit::Zero, Limit::Zero)
    } else {
        (Limit::NegInfinity, Limit::NegInfinity)
    };
    let at_infinity = if q > 1.0 { (Limit::NegInfinity, Limit::PosInfinity) } else { (Limit::Zero, Limit::Zero) };
    Ok(ScoreLimits { at_zero, at_infinity })
}

/// Classifies the score limits from direct evaluation along a sequence of
/// points approaching the boundary: `β·{1e−20, 1e−40, 1e−80}` towards 0 and
/// `β·{1e2, 1e4, 1e8}` towards ∞. The points near 0 sit far out because
/// `x^p log x` with small p > 0 only turns towards 0 below `x = e^{−1/p}`.
pub fn probe_score_limits(theta: &WeibullParams, q: f64) -> Result<ScoreLimits> {
    let b = theta.beta();
    let near: Vec<ScoreVector> =
        [1e-20, 1e-40, 1e-80].iter().map(|&s| score_psi(s * b, theta, q)).collect::<Result<_>>()?;
    let far: Vec<ScoreVector> =
        [1e2, 1e4, 1e8].iter().map(|&s| score_psi(s * b, theta, q)).collect::<Result<_>>()?;
    let classify = |v: [f64; 3]| -> Limit {
        let m = v.map(f64::abs);
        if m[2].is_infinite() || (m[2] > 1.1 * m[1] && m[1] > 1.1 * m[0]) {
            if v[2] > 0.0 {
                Limit::PosInfinity
            } else {
                Limit::NegInfinity
            }
        } else if m[2] == 0.0 || (m[2] < 0.9 * m[1] && m[1] < 0.9 * m[0]) {
            Limit::Zero
        } else {
            Limit::Finite
        }
    };
    let pick = |vs: &[ScoreVector]| {
        (
            classify([vs[0].d_alpha, vs[1].d_alpha, vs[2].d_alpha]),
            classify([vs[0].d_beta, vs[1].d_beta, vs[2].d_beta]),
        )
    };
    Ok(ScoreLimits { at_zero: pick(&near), at_infinity: pick(&far) })
}

/// Outcome of comparing the divergence with an affine image of the log_q
/// likelihood over a set of parameter points.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineDiscrepancy {
    pub gamma: f64,
    /// `DPD(θ) − (σ·l_q(θ) + μ)` with σ = −(1+γ)/n, μ = −(1 + 1/γ).
    pub residuals: Vec<f64>,
    /// max − min of the residuals; zero iff the two objectives differ by a
    /// constant over the grid.
    pub spread: f64,
}

/// Evaluates the claimed affine relation between the divergence with
/// exponent γ = 1 − q and the log_q likelihood on each θ of a grid.
///
/// Since `(1/n) Σ f^γ = 1 + (γ/n) l_q`, the residual equals `∫f^{2−q} dx`,
/// which depends on θ.
pub fn dpd_logq_affine_discrepancy(data: &[f64], q: f64, thetas: &[WeibullParams]) -> Result<AffineDiscrepancy> {
    let gamma = 1.0 - q;
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("affine comparison needs q < 1, got {q}")));
    }
    let n = data.len() as f64;
    let sigma = -(1.0 + gamma) / n;
    let mu = -(1.0 + 1.0 / gamma);
    let residuals = thetas
        .iter()
        .map(|theta| Ok(dpd_objective(theta, data, gamma)? - (sigma * logq_lik(theta, data, q)? + mu)))
        .collect::<Result<Vec<_>>>()?;
    let lo = residuals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = if residuals.is_empty() { 0.0 } else { hi - lo };
    Ok(AffineDiscrepancy { gamma, residuals, spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(a: f64, b: f64) -> WeibullParams {
        WeibullParams::new(a, b).unwrap()
    }

    fn draws(theta: &WeibullParams, n: usize, seed: u64) -> Vec<f64> {
        theta.sample(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    fn fd_grad<F: Fn(&WeibullParams) -> f64>(f: F, theta: &WeibullParams) -> ScoreVector {
        let (a, b) = (theta.alpha(), theta.beta());
        let ha = 1e-6 * a;
        let hb = 1e-6 * b;
        ScoreVector::new(
            (f(&w(a + ha, b)) - f(&w(a - ha, b))) / (2.0 * ha),
            (f(&w(a, b + hb)) - f(&w(a, b - hb))) / (2.0 * hb),
        )
    }

    fn rel_close(got: f64, want: f64, rel: f64, scale: f64) -> bool {
        (got - want).abs() <= rel * want.abs().max(scale)
    }

    #[test]
    fn spec_validation() {
        assert!(ObjectiveSpec::log_q(1.0).is_err());
        assert!(ObjectiveSpec::dpd(0.0).is_err());
        assert!(ObjectiveSpec::log_shift(-0.1).is_err());
        assert!(ObjectiveSpec::log_kappa(f64::NAN).is_err());
        assert!(ObjectiveSpec::log_q(-0.5).is_ok());
    }

    #[test]
    fn deformed_log_examples() {
        for q in [0.2, 0.8, 1.3, 3.0] {
            assert_eq!(deformed_log(1.0, &ObjectiveSpec::log_q(q).unwrap()).unwrap(), 0.0);
        }
        for q in [1.0 - 1e-8, 1.0 + 1e-8] {
            let v = deformed_log(0.5, &ObjectiveSpec::log_q(q).unwrap()).unwrap();
            assert!((v - 0.5f64.ln()).abs() < 1e-7);
        }
        let k = 0.3;
        let direct = (0.5f64.powf(k) - 0.5f64.powf(-k)) / (2.0 * k);
        let got = deformed_log(0.5, &ObjectiveSpec::log_kappa(k).unwrap()).unwrap();
        assert!((got - direct).abs() < 1e-15);
        // sinh series: L + κ²L³/6 + κ⁴L⁵/120 + …
        let l = 0.5f64.ln();
        let series: f64 = (0..10)
            .map(|j| k.powi(2 * j) * l.powi(2 * j + 1) / (1..=(2 * j + 1)).map(f64::from).product::<f64>())
            .sum();
        assert!((got - series).abs() < 1e-14);
        assert!(deformed_log(0.0, &ObjectiveSpec::log()).is_err());
        assert_eq!(deformed_log(0.0, &ObjectiveSpec::log_shift(1.0).unwrap()).unwrap(), 0.0);
        assert!(deformed_log(0.0, &ObjectiveSpec::log_shift(0.0).unwrap()).is_err());
    }

    #[test]
    fn deformed_log_neutral_limits() {
        for z in [0.01, 0.3, 1.0, 2.0, 40.0] {
            let want = f64::ln(z);
            let specs = [
                ObjectiveSpec::log_q(1.0 + 1e-9).unwrap(),
                ObjectiveSpec::log_q(1.0 - 1e-9).unwrap(),
                ObjectiveSpec::log_kappa(1e-7).unwrap(),
                ObjectiveSpec::log_shift(1e-9).unwrap(),
                ObjectiveSpec::dpd(1e-9).unwrap(),
            ];
            for s in &specs {
                let got = deformed_log(z, s).unwrap();
                assert!((got - want).abs() < 1e-6, "{s:?} {z}: {got}");
            }
        }
    }

    #[test]
    fn loglik_examples() {
        assert!((loglik(&w(1.0, 1.0), &[1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert!((loglik(&w(2.0, 2.0), &[2.0]).unwrap() + 1.0).abs() < 1e-15);
        let theta = w(4.0, 2.0);
        let data = draws(&theta, 20, 1);
        let want: f64 = data.iter().map(|&x| theta.pdf(x).unwrap().ln()).sum();
        assert!((loglik(&theta, &data).unwrap() - want).abs() < 1e-12);
        assert!(loglik(&theta, &[1.0, -1.0]).is_err());
        assert!(loglik(&theta, &[0.0]).is_err());
    }

    #[test]
    fn grad_loglik_examples() {
        let data = [0.4, 1.1, 2.7, 0.9];
        let mean = data.iter().sum::<f64>() / 4.0;
        assert!(grad_loglik(&w(1.0, mean), &data).unwrap().d_beta.abs() < 1e-14);
        let g = grad_loglik(&w(2.0, 1.0), &[1.0]).unwrap();
        assert!((g.d_alpha - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hessian_examples() {
        let h = hessian_loglik(&w(1.0, 1.0), &[1.0]).unwrap();
        assert!((h[1][1] + 1.0).abs() < 1e-15);
        let theta = w(2.3, 1.7);
        let data = draws(&theta, 30, 9);
        let h = hessian_loglik(&theta, &data).unwrap();
        assert_eq!(h[0][1].to_bits(), h[1][0].to_bits());
        let (a, b) = (theta.alpha(), theta.beta());
        let (ha, hb) = (1e-6 * a, 1e-6 * b);
        let ga_p = grad_loglik(&w(a + ha, b), &data).unwrap();
        let ga_m = grad_loglik(&w(a - ha, b), &data).unwrap();
        let gb_p = grad_loglik(&w(a, b + hb), &data).unwrap();
        let gb_m = grad_loglik(&w(a, b - hb), &data).unwrap();
        let faa = (ga_p.d_alpha - ga_m.d_alpha) / (2.0 * ha);
        let fab = (gb_p.d_alpha - gb_m.d_alpha) / (2.0 * hb);
        let fba = (ga_p.d_beta - ga_m.d_beta) / (2.0 * ha);
        let fbb = (gb_p.d_beta - gb_m.d_beta) / (2.0 * hb);
        assert!(rel_close(h[0][0], faa, 1e-4, 1.0));
        assert!(rel_close(h[0][1], fab, 1e-4, 1.0));
        assert!(rel_close(h[0][1], fba, 1e-4, 1.0));
        assert!(rel_close(h[1][1], fbb, 1e-4, 1.0));
    }

    #[test]
    fn logq_examples() {
        let theta = w(1.3, 0.8);
        let data = draws(&theta, 15, 2);
        let ll = loglik(&theta, &data).unwrap();
        for q in [1.0 - 1e-8, 1.0 + 1e-8] {
            assert!(rel_close(logq_lik(&theta, &data, q).unwrap(), ll, 1e-6, 1.0));
        }
        let v = logq_lik(&w(1.0, 1.0), &[0.5], 0.5).unwrap();
        assert!((v - ((-0.5f64).exp().powf(0.5) - 1.0) / 0.5).abs() < 1e-15);
        let theta = w(3.1, 2.2);
        let data = draws(&theta, 25, 3);
        let spec = ObjectiveSpec::log_q(0.8).unwrap();
        let want: f64 = data.iter().map(|&x| deformed_log(theta.pdf(x).unwrap(), &spec).unwrap()).sum();
        assert!((logq_lik(&theta, &data, 0.8).unwrap() - want).abs() < 1e-12);
        assert!(logq_lik(&theta, &data, 1.0).is_err());
    }

    #[test]
    fn score_psi_examples() {
        let theta = w(2.0, 1.5);
        let s = score_psi(1.5, &theta, 0.8).unwrap();
        assert_eq!(s.d_beta, 0.0);
        let f = theta.pdf(1.5).unwrap();
        assert!((s.d_alpha - f.powf(0.2) * 0.5).abs() < 1e-15);
        for &(x, q) in &[(0.3, 0.7), (2.2, 1.2), (1.0, 0.5)] {
            let spec = ObjectiveSpec::log_q(q).unwrap();
            let fd = fd_grad(|t| deformed_log(t.pdf(x).unwrap(), &spec).unwrap(), &theta);
            let s = score_psi(x, &theta, q).unwrap();
            assert!(rel_close(s.d_alpha, fd.d_alpha, 1e-5, 1e-3));
            assert!(rel_close(s.d_beta, fd.d_beta, 1e-5, 1e-3));
        }
        assert!(score_psi(0.0, &theta, 0.8).is_err());
    }

    #[test]
    fn grad_logq_examples() {
        let theta = w(2.6, 0.9);
        let s = score_psi(0.7, &theta, 0.75).unwrap();
        assert_eq!(grad_logq_lik(&theta, &[0.7], 0.75).unwrap(), s);
        let data = draws(&theta, 40, 4);
        let g1 = grad_loglik(&theta, &data).unwrap();
        let gq = grad_logq_lik(&theta, &data, 1.0 + 1e-9).unwrap();
        assert!(rel_close(gq.d_alpha, g1.d_alpha, 1e-6, 1.0));
        assert!(rel_close(gq.d_beta, g1.d_beta, 1e-6, 1.0));
        let fd = fd_grad(|t| logq_lik(t, &data, 0.85).unwrap(), &theta);
        let g = grad_logq_lik(&theta, &data, 0.85).unwrap();
        assert!(rel_close(g.d_alpha, fd.d_alpha, 1e-5, 1e-2));
        assert!(rel_close(g.d_beta, fd.d_beta, 1e-5, 1e-2));
    }

    #[test]
    fn weight_examples() {
        let theta = w(3.0, 2.0);
        for x in [0.2, 1.0, 5.0] {
            assert_eq!(weight(x, &theta, &ObjectiveSpec::log_shift(0.0).unwrap()).unwrap(), 1.0);
            assert_eq!(weight(x, &theta, &ObjectiveSpec::log_kappa(0.0).unwrap()).unwrap(), 1.0);
            if theta.pdf(x).unwrap() < 1.0 {
                assert!(weight(x, &theta, &ObjectiveSpec::log_q(1.2).unwrap()).unwrap() > 1.0);
            }
        }
    }

    #[test]
    fn ee_residual_kinds() {
        let theta = w(1.8, 1.2);
        let data = draws(&theta, 12, 5);
        assert_eq!(ee_residual(&theta, &data, &ObjectiveSpec::log()).unwrap(), grad_loglik(&theta, &data).unwrap());
        let spec = ObjectiveSpec::log_q(0.9).unwrap();
        let lhs = ee_residual(&theta, &data, &spec).unwrap();
        let rhs = grad_logq_lik(&theta, &data, 0.9).unwrap();
        assert_eq!(lhs.d_alpha.to_bits(), rhs.d_alpha.to_bits());
        assert_eq!(lhs.d_beta.to_bits(), rhs.d_beta.to_bits());
        for spec in [ObjectiveSpec::log_kappa(0.4).unwrap(), ObjectiveSpec::log_shift(0.3).unwrap()] {
            let fd = fd_grad(
                |t| data.iter().map(|&x| deformed_log(t.pdf(x).unwrap(), &spec).unwrap()).sum(),
                &theta,
            );
            let g = ee_residual(&theta, &data, &spec).unwrap();
            assert!(rel_close(g.d_alpha, fd.d_alpha, 1e-5, 1e-2), "{spec:?}");
            assert!(rel_close(g.d_beta, fd.d_beta, 1e-5, 1e-2), "{spec:?}");
        }
    }

    #[test]
    fn dpd_examples() {
        let v = dpd_objective(&w(1.0, 1.0), &[1.0], 1.0).unwrap();
        assert!((v - (0.5 - 2.0 * (-1.0f64).exp())).abs() < 1e-15);
        let theta = w(2.0, 1.0);
        let data = [0.3, 0.8, 1.1, 1.9];
        let gamma = 0.2;
        let fd = fd_grad(|t| dpd_objective(t, &data, gamma).unwrap(), &theta);
        let r = ee_residual(&theta, &data, &ObjectiveSpec::dpd(gamma).unwrap()).unwrap();
        // ∇DPD = −(1+γ) · residual
        assert!(rel_close(-(1.0 + gamma) * r.d_alpha, fd.d_alpha, 1e-4, 1e-3));
        assert!(rel_close(-(1.0 + gamma) * r.d_beta, fd.d_beta, 1e-4, 1e-3));
        assert!(dpd_objective(&w(0.1, 1.0), &data, 20.0).is_err());
    }

    #[test]
    fn dpd_small_gamma_tracks_loglik() {
        // (1 + 1/γ)(1/n)Σf^γ = (1 + 1/γ) + (1/n)Σ log f + O(γ)
        let theta = w(2.5, 1.4);
        let data = draws(&theta, 30, 8);
        let n = data.len() as f64;
        let g = 1e-4;
        let lhs = dpd_objective(&theta, &data, g).unwrap() - theta.weighted_moment(0.0, 1.0 + g).unwrap();
        let want = -(1.0 + 1.0 / g) - loglik(&theta, &data).unwrap() / n;
        assert!((lhs - want).abs() < 1e-2);
    }

    #[test]
    fn dpd_integral_against_quadrature() {
        use crate::quadrature::{integrate_to_infinity, Tolerance};
        for &(a, b, g) in &[(2.0, 1.0, 0.2), (3.5, 2.0, 0.5), (1.2, 0.7, 1.0)] {
            let theta = w(a, b);
            let want = integrate_to_infinity(|x| theta.pdf(x).unwrap().powf(1.0 + g), 0.0, Tolerance::default())
                .unwrap()
                .value;
            assert!((theta.weighted_moment(0.0, 1.0 + g).unwrap() - want).abs() < 1e-8);
            let e = dpd_score_expectation(&theta, g).unwrap();
            let za = integrate_to_infinity(
                |x| if x == 0.0 { 0.0 } else { score_psi(x, &theta, 1.0 - g).unwrap().d_alpha * theta.pdf(x).unwrap() },
                0.0,
                Tolerance::default(),
            )
            .unwrap()
            .value;
            let zb = integrate_to_infinity(
                |x| if x == 0.0 { 0.0 } else { score_psi(x, &theta, 1.0 - g).unwrap().d_beta * theta.pdf(x).unwrap() },
                0.0,
                Tolerance::default(),
            )
            .unwrap()
            .value;
            assert!((e.d_alpha - za).abs() < 1e-8, "{} vs {za}", e.d_alpha);
            assert!((e.d_beta - zb).abs() < 1e-8, "{} vs {zb}", e.d_beta);
        }
    }

    #[test]
    fn limit_examples() {
        let l = score_limit_class(&w(2.0, 1.0), 0.8).unwrap();
        assert_eq!(l.at_infinity, (Limit::Zero, Limit::Zero));
        let l = score_limit_class(&w(2.0, 1.0), 1.2).unwrap();
        assert_eq!(l.at_zero.1, Limit::NegInfinity);
        assert!(score_psi(1e8, &w(2.0, 1.0), 0.8).unwrap().d_alpha.abs() < 1e-6);
    }

    #[test]
    fn probes_agree_with_analytic_classes() {
        for a in [0.5, 0.8, 1.0, 2.0, 4.0] {
            for b in [0.5, 1.0, 3.0] {
                for q in [0.5, 0.8, 1.1, 1.5] {
                    let theta = w(a, b);
                    assert_eq!(
                        probe_score_limits(&theta, q).unwrap(),
                        score_limit_class(&theta, q).unwrap(),
                        "α={a} β={b} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn prepared_matches_free_functions() {
        let theta = w(3.3, 1.9);
        let data = draws(&theta, 50, 6);
        let prep = PreparedSample::new(&data).unwrap();
        let e = prep.evaluate(&theta, &ObjectiveSpec::log());
        assert!((e.value - loglik(&theta, &data).unwrap()).abs() < 1e-12);
        let e = prep.evaluate(&theta, &ObjectiveSpec::log_q(0.8).unwrap());
        assert!((e.value - logq_lik(&theta, &data, 0.8).unwrap()).abs() < 1e-12);
        assert!(!e.cliffed);
        let e = prep.evaluate(&theta, &ObjectiveSpec::dpd(0.3).unwrap());
        assert!((e.value + dpd_objective(&theta, &data, 0.3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn cliff_flagged_for_large_q() {
        let prep = PreparedSample::new(&[1.0, 2.0, 50.0]).unwrap();
        let e = prep.evaluate(&w(20.0, 1.0), &ObjectiveSpec::log_q(1.2).unwrap());
        assert!(e.cliffed);
        assert!(e.value.is_finite());
        let e = prep.evaluate(&w(20.0, 1.0), &ObjectiveSpec::log_q(0.8).unwrap());
        assert!(!e.cliffed);
    }

    #[test]
    fn affine_diagnostic_residual_is_integral() {
        let data = draws(&w(2.0, 1.0), 20, 7);
        let thetas = [w(1.5, 0.8), w(2.0, 1.0), w(3.0, 1.4)];
        let d = dpd_logq_affine_discrepancy(&data, 0.8, &thetas).unwrap();
        for (r, t) in d.residuals.iter().zip(&thetas) {
            assert!((r - t.weighted_moment(0.0, 1.2).unwrap()).abs() < 1e-10);
        }
        assert!(d.spread > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn weight_ranges(a in 0.3f64..8.0, b in 0.2f64..5.0, x in 0.01f64..10.0, t in 0.0f64..3.0) {
            let theta = w(a, b);
            let f = theta.pdf(x).unwrap();
            let ws = weight(x, &theta, &ObjectiveSpec::log_shift(t).unwrap()).unwrap();
            prop_assert!((0.0..=1.0).contains(&ws));
            let g = t + 0.01;
            let wg = weight(x, &theta, &ObjectiveSpec::dpd(g).unwrap()).unwrap();
            prop_assert!(wg >= 0.0);
            prop_assert!(wg <= (g * theta.ln_pdf_positive(x)).exp() * (1.0 + 1e-12));
            let wq = weight(x, &theta, &ObjectiveSpec::log_q(1.0 + g).unwrap()).unwrap();
            prop_assert!(wq >= 0.0);
            if f < 1.0 {
                prop_assert!(wq > 1.0);
            }
        }

        #[test]
        fn gradients_match_finite_differences(
            a in 0.5f64..6.0, b in 0.3f64..4.0, q in 0.5f64..1.5, seed in 0u64..1000,
        ) {
            prop_assume!((q - 1.0).abs() > 1e-3);
            let theta = w(a, b);
            let data = draws(&theta, 10, seed);
            let fd = fd_grad(|t| loglik(t, &data).unwrap(), &theta);
            let g = grad_loglik(&theta, &data).unwrap();
            let scale = g.norm_inf().max(1.0);
            prop_assert!((g.d_alpha - fd.d_alpha).abs() <= 1e-4 * scale);
            prop_assert!((g.d_beta - fd.d_beta).abs() <= 1e-4 * scale);
            let fd = fd_grad(|t| logq_lik(t, &data, q).unwrap(), &theta);
            let g = grad_logq_lik(&theta, &data, q).unwrap();
            let scale = g.norm_inf().max(1e-2);
            prop_assert!((g.d_alpha - fd.d_alpha).abs() <= 1e-4 * scale);
            prop_assert!((g.d_beta - fd.d_beta).abs() <= 1e-4 * scale);
        }
    }
}

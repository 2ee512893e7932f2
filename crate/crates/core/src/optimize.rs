//! Genetic-algorithm maximizer with a Nelder–Mead polish, and the MLE /
//! MLqE fit entry points built on it.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::WeibullParams;
use crate::error::{Error, Result};
use crate::objectives::{ee_residual, Evaluation, ObjectiveSpec, PreparedSample, ScoreVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossover {
    SinglePoint,
}

/// Settings of [`ga_maximize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover: Crossover,
    pub crossover_rate: f64,
    /// Initial mutation standard deviation as a fraction of each bound
    /// width; decays linearly to zero over the run.
    pub mutation_sigma_fraction: f64,
    pub elite_count: usize,
    pub tournament_size: usize,
    pub bounds_lo: Vec<f64>,
    pub bounds_hi: Vec<f64>,
    pub seed: u64,
    pub polish: bool,
    pub polish_tolerance: f64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 200,
            crossover: Crossover::SinglePoint,
            crossover_rate: 0.8,
            mutation_sigma_fraction: 0.05,
            elite_count: 2,
            tournament_size: 3,
            bounds_lo: vec![1e-6, 1e-6],
            bounds_hi: vec![1e10, 1e10],
            seed: 0,
            polish: true,
            polish_tolerance: 1e-10,
        }
    }
}

impl GaConfig {
    /// Default settings with the given seed.
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    /// Smaller population and fewer generations, for Monte Carlo loops where
    /// the polish does most of the local work.
    pub fn fast(seed: u64) -> Self {
        Self { population_size: 40, generations: 40, seed, ..Self::default() }
    }

    /// Box `[lo, hi]` in the given coordinates.
    pub fn with_bounds(mut self, lo: Vec<f64>, hi: Vec<f64>) -> Self {
        self.bounds_lo = lo;
        self.bounds_hi = hi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.population_size < 2 {
            return bad(format!("population size {} is below 2", self.population_size));
        }
        if self.elite_count >= self.population_size {
            return bad(format!("elite count {} must be below the population size", self.elite_count));
        }
        if !(self.crossover_rate > 0.0 && self.crossover_rate <= 1.0) {
            return bad(format!("crossover rate {} must lie in (0, 1]", self.crossover_rate));
        }
        if !(self.mutation_sigma_fraction >= 0.0 && self.mutation_sigma_fraction.is_finite()) {
            return bad(format!("mutation sigma fraction {} must be non-negative", self.mutation_sigma_fraction));
        }
        if self.tournament_size == 0 {
            return bad("tournament size must be at least 1".into());
        }
        if self.bounds_lo.is_empty() || self.bounds_lo.len() != self.bounds_hi.len() {
            return bad("lower and upper bounds must be non-empty and of equal length".into());
        }
        for (l, h) in self.bounds_lo.iter().zip(&self.bounds_hi) {
            if !(l.is_finite() && h.is_finite() && l < h) {
                return bad(format!("bounds [{l}, {h}] are not a finite non-empty interval"));
            }
        }
        if !(self.polish_tolerance > 0.0) {
            return bad(format!("polish tolerance {} must be positive", self.polish_tolerance));
        }
        Ok(())
    }

    /// Applies `key=value` pairs separated by commas or newlines. List values
    /// (bounds) separate their entries with `:`.
    pub fn apply_overrides(&mut self, text: &str) -> Result<()> {
        for item in text.split([',', '\n']).map(str::trim).filter(|s| !s.is_empty() && !s.starts_with('#')) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{item}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| -> Result<f64> {
                v.parse::<f64>().map_err(|_| Error::InvalidParameter(format!("`{key}`: `{v}` is not a number")))
            };
            let count = |v: &str| -> Result<usize> {
                v.parse::<usize>().map_err(|_| Error::InvalidParameter(format!("`{key}`: `{v}` is not a count")))
            };
            let list = |v: &str| -> Result<Vec<f64>> { v.split(':').map(|s| num(s.trim())).collect() };
            match key {
                "population_size" => self.population_size = count(value)?,
                "generations" => self.generations = count(value)?,
                "crossover" => {
                    if value != "single_point" {
                        return Err(Error::InvalidParameter(format!("unknown crossover `{value}`")));
                    }
                    self.crossover = Crossover::SinglePoint;
                }
                "crossover_rate" => self.crossover_rate = num(value)?,
                "mutation_sigma_fraction" => self.mutation_sigma_fraction = num(value)?,
                "elite_count" => self.elite_count = count(value)?,
                "tournament_size" => self.tournament_size = count(value)?,
                "bounds_lo" => self.bounds_lo = list(value)?,
                "bounds_hi" => self.bounds_hi = list(value)?,
                "seed" => {
                    self.seed = value
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("`seed`: `{value}` is not an integer")))?
                }
                "polish" => {
                    self.polish = value
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("`polish`: `{value}` is not a boolean")))?
                }
                "polish_tolerance" => self.polish_tolerance = num(value)?,
                _ => return Err(Error::InvalidParameter(format!("unknown GA setting `{key}`"))),
            }
        }
        self.validate()
    }
}

impl fmt::Display for GaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(":");
        writeln!(f, "population_size={}", self.population_size)?;
        writeln!(f, "generations={}", self.generations)?;
        writeln!(f, "crossover=single_point")?;
        writeln!(f, "crossover_rate={}", self.crossover_rate)?;
        writeln!(f, "mutation_sigma_fraction={}", self.mutation_sigma_fraction)?;
        writeln!(f, "elite_count={}", self.elite_count)?;
        writeln!(f, "tournament_size={}", self.tournament_size)?;
        writeln!(f, "bounds_lo={}", join(&self.bounds_lo))?;
        writeln!(f, "bounds_hi={}", join(&self.bounds_hi))?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "polish={}", self.polish)?;
        write!(f, "polish_tolerance={:e}", self.polish_tolerance)
    }
}

impl FromStr for GaConfig {
    type Err = Error;

    /// Parses a key=value block on top of the defaults.
    fn from_str(s: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_overrides(s)?;
        Ok(c)
    }
}

/// Objective value as seen by the optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fitness {
    pub value: f64,
    /// Penalty region: ranked below every regular point.
    pub cliffed: bool,
}

impl From<f64> for Fitness {
    fn from(value: f64) -> Self {
        Self { value, cliffed: !value.is_finite() }
    }
}

impl From<Evaluation> for Fitness {
    fn from(e: Evaluation) -> Self {
        Self { value: e.value, cliffed: e.cliffed || !e.value.is_finite() }
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    x: Vec<f64>,
    fit: Fitness,
}

/// `Greater` when `a` is the better candidate: regular beats cliffed, then
/// larger value, then the lexicographically smaller point.
fn better(a: &Candidate, b: &Candidate) -> Ordering {
    match (a.fit.cliffed, b.fit.cliffed) {
        (false, true) => return Ordering::Greater,
        (true, false) => return Ordering::Less,
        _ => {}
    }
    let va = if a.fit.value.is_nan() { f64::NEG_INFINITY } else { a.fit.value };
    let vb = if b.fit.value.is_nan() { f64::NEG_INFINITY } else { b.fit.value };
    va.total_cmp(&vb).then_with(|| {
        for (p, q) in a.x.iter().zip(&b.x) {
            match q.total_cmp(p) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Result of [`ga_maximize`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub cliffed: bool,
    pub evaluations: usize,
    /// Best value after each generation (index 0 is the initial population).
    pub history: Vec<f64>,
    pub ga_best_value: f64,
    pub polish_applied: bool,
    pub converged: bool,
}

/// Maximizes `objective` over the box of `config` by a generational GA with
/// elitism, tournament selection, single-point crossover and Gaussian
/// mutation, then polishes the incumbent with Nelder–Mead.
///
/// The random stream is consumed only by the serial generation loop, so the
/// outcome is a pure function of the seed even though fitness evaluations run
/// in parallel.
pub fn ga_maximize<F, T>(objective: F, config: &GaConfig) -> Result<GaOutcome>
where
    F: Fn(&[f64]) -> T + Sync,
    T: Into<Fitness>,
{
    config.validate()?;
    let eval = |x: &[f64]| -> Fitness { objective(x).into() };
    let lo = &config.bounds_lo;
    let hi = &config.bounds_hi;
    let dim = lo.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let evaluate_all = |xs: Vec<Vec<f64>>| -> Vec<Candidate> {
        xs.into_par_iter()
            .with_min_len(8)
            .map(|x| {
                let fit = eval(&x);
                Candidate { x, fit }
            })
            .collect()
    };

    let initial: Vec<Vec<f64>> = (0..config.population_size)
        .map(|_| (0..dim).map(|j| rng.random_range(lo[j]..=hi[j])).collect())
        .collect();
    let mut population = evaluate_all(initial);
    let mut evaluations = population.len();
    population.sort_by(|a, b| better(b, a));
    let mut best = population[0].clone();
    let mut history = vec![best.fit.value];

    for generation in 0..config.generations {
        let decay = 1.0 - generation as f64 / config.generations as f64;
        let sigmas: Vec<f64> =
            (0..dim).map(|j| config.mutation_sigma_fraction * (hi[j] - lo[j]) * decay).collect();
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(config.population_size);
        while next.len() + config.elite_count < config.population_size {
            let p1 = tournament(&population, config.tournament_size, &mut rng);
            let p2 = tournament(&population, config.tournament_size, &mut rng);
            let (mut c1, mut c2) = (p1.x.clone(), p2.x.clone());
            if dim > 1 && rng.random::<f64>() < config.crossover_rate {
                let cut = rng.random_range(1..dim);
                for j in cut..dim {
                    std::mem::swap(&mut c1[j], &mut c2[j]);
                }
            }
            for child in [&mut c1, &mut c2] {
                for j in 0..dim {
                    if sigmas[j] > 0.0 {
                        let z: f64 = Normal::new(0.0, sigmas[j]).expect("finite sigma").sample(&mut rng);
                        child[j] += z;
                    }
                    child[j] = child[j].clamp(lo[j], hi[j]);
                }
            }
            next.push(c1);
            if next.len() + config.elite_count < config.population_size {
                next.push(c2);
            }
        }
        let children = evaluate_all(next);
        evaluations += children.len();
        let mut merged: Vec<Candidate> = population[..config.elite_count].to_vec();
        merged.extend(children);
        merged.sort_by(|a, b| better(b, a));
        population = merged;
        if better(&population[0], &best) == Ordering::Greater {
            best = population[0].clone();
        }
        history.push(best.fit.value);
    }

    if best.fit.cliffed {
        return Err(Error::Fit(format!("every one of {evaluations} evaluated points fell in the penalty region")));
    }
    let ga_best_value = best.fit.value;
    let mut converged = true;
    let mut polish_applied = false;
    if config.polish {
        let nm = nelder_mead(&eval, &best.x, lo, hi, config.polish_tolerance);
        evaluations += nm.evaluations;
        converged = nm.converged;
        polish_applied = true;
        if better(&nm.best, &best) == Ordering::Greater {
            best = nm.best;
        }
    }
    Ok(GaOutcome {
        x: best.x,
        value: best.fit.value,
        cliffed: best.fit.cliffed,
        evaluations,
        history,
        ga_best_value,
        polish_applied,
        converged,
    })
}

fn tournament<'a, R: Rng>(population: &'a [Candidate], size: usize, rng: &mut R) -> &'a Candidate {
    let mut pick = population.choose(rng).expect("non-empty population");
    for _ in 1..size {
        let other = population.choose(rng).expect("non-empty population");
        if better(other, pick) == Ordering::Greater {
            pick = other;
        }
    }
    pick
}

struct SimplexOutcome {
    best: Candidate,
    evaluations: usize,
    converged: bool,
}

/// Box-projected Nelder–Mead ascent from `start`.
fn nelder_mead<F: Fn(&[f64]) -> Fitness>(f: &F, start: &[f64], lo: &[f64], hi: &[f64], tol: f64) -> SimplexOutcome {
    let dim = start.len();
    let project = |x: &mut Vec<f64>| {
        for j in 0..dim {
            x[j] = x[j].clamp(lo[j], hi[j]);
        }
    };
    let score = |c: &Candidate| if c.fit.cliffed || c.fit.value.is_nan() { f64::NEG_INFINITY } else { c.fit.value };
    let mut evaluations = 0;
    let make = |mut x: Vec<f64>, evaluations: &mut usize| {
        project(&mut x);
        *evaluations += 1;
        let fit = f(&x);
        Candidate { x, fit }
    };
    let mut simplex = vec![make(start.to_vec(), &mut evaluations)];
    for j in 0..dim {
        let mut x = start.to_vec();
        let step = 0.01 * (hi[j] - lo[j]);
        x[j] = if x[j] + step <= hi[j] { x[j] + step } else { x[j] - step };
        simplex.push(make(x, &mut evaluations));
    }
    let max_iter = 2000 * dim.max(1);
    let mut converged = false;
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| better(b, a));
        let (fb, fw) = (score(&simplex[0]), score(&simplex[dim]));
        let diameter = simplex[1..]
            .iter()
            .map(|c| c.x.iter().zip(&simplex[0].x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let scale = simplex[0].x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if fb.is_finite() && (fb - fw).abs() <= tol * (1.0 + fb.abs()) && diameter <= 1e3 * tol * scale {
            converged = true;
            break;
        }
        let centroid: Vec<f64> =
            (0..dim).map(|j| simplex[..dim].iter().map(|c| c.x[j]).sum::<f64>() / dim as f64).collect();
        let along = |t: f64, from: &[f64]| -> Vec<f64> {
            (0..dim).map(|j| centroid[j] + t * (from[j] - centroid[j])).collect()
        };
        let worst = simplex[dim].x.clone();
        let reflected = make(along(-1.0, &worst), &mut evaluations);
        let fr = score(&reflected);
        if fr > score(&simplex[0]) {
            let expanded = make(along(-2.0, &worst), &mut evaluations);
            simplex[dim] = if score(&expanded) > fr { expanded } else { reflected };
            continue;
        }
        if fr > score(&simplex[dim - 1]) {
            simplex[dim] = reflected;
            continue;
        }
        let contracted = if fr > fw {
            make(along(-0.5, &worst), &mut evaluations)
        } else {
            make(along(0.5, &worst), &mut evaluations)
        };
        if score(&contracted) > fr.max(fw) {
            simplex[dim] = contracted;
            continue;
        }
        let anchor = simplex[0].x.clone();
        for c in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = (0..dim).map(|j| anchor[j] + 0.5 * (c.x[j] - anchor[j])).collect();
            *c = make(x, &mut evaluations);
        }
    }
    simplex.sort_by(|a, b| better(b, a));
    SimplexOutcome { best: simplex.swap_remove(0), evaluations, converged }
}

/// Outcome of a Weibull fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub theta_hat: WeibullParams,
    pub objective_value: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub polish_applied: bool,
    /// Estimating-equation residual (gradient of the objective) at the
    /// estimate.
    pub residual: ScoreVector,
}

/// Maximizes an objective of θ over the box of `config`, given in natural
/// (α, β) units; the search runs on (log α, log β).
pub fn fit_objective<F, T>(objective: F, config: &GaConfig) -> Result<(WeibullParams, GaOutcome)>
where
    F: Fn(&WeibullParams) -> T + Sync,
    T: Into<Fitness>,
{
    if config.bounds_lo.len() != 2 || config.bounds_hi.len() != 2 {
        return Err(Error::InvalidParameter("Weibull fits need two-dimensional bounds".into()));
    }
    if config.bounds_lo.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidParameter("Weibull fit bounds must be strictly positive".into()));
    }
    let mut log_config = config.clone();
    log_config.bounds_lo = config.bounds_lo.iter().map(|v| v.ln()).collect();
    log_config.bounds_hi = config.bounds_hi.iter().map(|v| v.ln()).collect();
    let outcome = ga_maximize(
        |v: &[f64]| match WeibullParams::new(v[0].exp(), v[1].exp()) {
            Ok(theta) => objective(&theta).into(),
            Err(_) => Fitness { value: f64::NEG_INFINITY, cliffed: true },
        },
        &log_config,
    )?;
    let theta = WeibullParams::new(outcome.x[0].exp(), outcome.x[1].exp())
        .map_err(|e| Error::Fit(format!("optimizer left the parameter space: {e}")))?;
    Ok((theta, outcome))
}

fn check_fit_data(data: &[f64]) -> Result<()> {
    if data.len() < 2 {
        return Err(Error::Data(format!("a fit needs at least 2 observations, got {}", data.len())));
    }
    if data.iter().all(|&x| x == data[0]) {
        return Err(Error::Data("all observations are equal; the scale-shape fit is degenerate".into()));
    }
    Ok(())
}

/// Maximizes the objective `spec` on `data`.
pub fn fit_spec(data: &[f64], spec: &ObjectiveSpec, config: &GaConfig) -> Result<FitResult> {
    check_fit_data(data)?;
    let prepared = PreparedSample::new(data)?;
    let (theta, outcome) = fit_objective(|theta| prepared.evaluate(theta, spec), config)?;
    if !outcome.value.is_finite() {
        return Err(Error::Fit(format!("objective is not finite at the optimum: {}", outcome.value)));
    }
    let (theta, value) = if config.polish {
        newton_refine(&prepared, data, spec, config, theta, outcome.value)
    } else {
        (theta, outcome.value)
    };
    let residual = ee_residual(&theta, data, spec)?;
    Ok(FitResult {
        theta_hat: theta,
        objective_value: value,
        evaluations: outcome.evaluations,
        converged: outcome.converged,
        polish_applied: outcome.polish_applied,
        residual,
    })
}

/// Newton iterations on the estimating equations from the polished
/// incumbent, with a central-difference Jacobian. A step is kept only when
/// it stays in the box, shrinks the residual and costs at most 1e-12
/// (relative) of objective value.
fn newton_refine(
    prepared: &PreparedSample,
    data: &[f64],
    spec: &ObjectiveSpec,
    config: &GaConfig,
    mut theta: WeibullParams,
    mut value: f64,
) -> (WeibullParams, f64) {
    let residual = |t: &WeibullParams| ee_residual(t, data, spec).ok().filter(ScoreVector::is_finite);
    let Some(mut r) = residual(&theta) else { return (theta, value) };
    let floor = value - 1e-12 * (1.0 + value.abs());
    for _ in 0..NEWTON_STEPS {
        let (a, b) = (theta.alpha(), theta.beta());
        let (ha, hb) = (1e-6 * a, 1e-6 * b);
        let col = |da: f64, db: f64, h: f64| -> Option<(f64, f64)> {
            let up = residual(&WeibullParams::new(a + da, b + db).ok()?)?;
            let down = residual(&WeibullParams::new(a - da, b - db).ok()?)?;
            Some(((up.d_alpha - down.d_alpha) / (2.0 * h), (up.d_beta - down.d_beta) / (2.0 * h)))
        };
        let (Some((j11, j21)), Some((j12, j22))) = (col(ha, 0.0, ha), col(0.0, hb, hb)) else { break };
        let det = j11 * j22 - j12 * j21;
        if !(det.abs() > 0.0) || !det.is_finite() {
            break;
        }
        let step_a = (j22 * r.d_alpha - j12 * r.d_beta) / det;
        let step_b = (j11 * r.d_beta - j21 * r.d_alpha) / det;
        let (na, nb) = (a - step_a, b - step_b);
        let inside = na >= config.bounds_lo[0]
            && na <= config.bounds_hi[0]
            && nb >= config.bounds_lo[1]
            && nb <= config.bounds_hi[1];
        let Ok(next) = WeibullParams::new(na, nb) else { break };
        if !inside {
            break;
        }
        let eval = prepared.evaluate(&next, spec);
        let Some(next_r) = residual(&next) else { break };
        if eval.cliffed || !(eval.value >= floor) || !(next_r.norm_inf() < r.norm_inf()) {
            break;
        }
        theta = next;
        value = eval.value;
        r = next_r;
    }
    (theta, value)
}

const NEWTON_STEPS: usize = 8;

/// Maximum likelihood fit.
pub fn fit_mle(data: &[f64], config: &GaConfig) -> Result<FitResult> {
    fit_spec(data, &ObjectiveSpec::log(), config)
}

/// Maximum log_q likelihood fit; requires q > 0, q ≠ 1.
pub fn fit_mlqe(data: &[f64], q: f64, config: &GaConfig) -> Result<FitResult> {
    if !(q > 0.0) || q == 1.0 || !q.is_finite() {
        return Err(Error::InvalidParameter(format!("MLqE needs q > 0 and q ≠ 1, got {q}")));
    }
    fit_spec(data, &ObjectiveSpec::log_q(q)?, config)
}

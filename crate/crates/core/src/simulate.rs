//! Contaminated-sample generation and Monte Carlo summaries of MLE / MLqE.

use std::fmt;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{BurrIIIParams, UniformParams, WeibullParams};
use crate::error::{Error, Result};
use crate::optimize::{fit_mle, fit_mlqe, FitResult, GaConfig};
use crate::summation::CompensatedSum;

/// Contaminating density of a mixture design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contaminant {
    Weibull(WeibullParams),
    Uniform(UniformParams),
    BurrIII(BurrIIIParams),
}

impl Contaminant {
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        match self {
            Contaminant::Weibull(p) => p.sample(n, rng),
            Contaminant::Uniform(p) => p.sample(n, rng),
            Contaminant::BurrIII(p) => p.sample(n, rng),
        }
    }
}

impl fmt::Display for Contaminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Contaminant::Weibull(p) => write!(f, "W({}, {})", p.alpha(), p.beta()),
            Contaminant::Uniform(p) => write!(f, "U({}, {})", p.a(), p.b()),
            Contaminant::BurrIII(p) => write!(f, "B({}, {})", p.c(), p.k()),
        }
    }
}

/// Two-component mixture `(1-ε) f0 + ε f1` with a fixed sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContaminationDesign {
    pub f0: WeibullParams,
    pub f1: Contaminant,
    pub epsilon: f64,
    pub n: usize,
}

impl ContaminationDesign {
    pub fn new(f0: WeibullParams, f1: Contaminant, epsilon: f64, n: usize) -> Result<Self> {
        let d = Self { f0, f1, epsilon, n };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::InvalidParameter(format!("contamination rate {} must lie in [0, 1)", self.epsilon)));
        }
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("sample size {} is below 2", self.n)));
        }
        if let Contaminant::Uniform(u) = self.f1 {
            if u.a() <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "uniform contaminant must be supported on positive values, got a = {}",
                    u.a()
                )));
            }
        }
        Ok(())
    }

    /// Number of contaminating draws, `round(ε n)`.
    pub fn n_contaminated(&self) -> usize {
        (self.epsilon * self.n as f64).round() as usize
    }

    pub fn n_clean(&self) -> usize {
        self.n - self.n_contaminated()
    }
}

impl fmt::Display for ContaminationDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.2}·W({}, {}) + {:.2}·{}, n={}",
            1.0 - self.epsilon,
            self.f0.alpha(),
            self.f0.beta(),
            self.epsilon,
            self.f1,
            self.n
        )
    }
}

/// `n0` draws from `f0` and `n1` from `f1`, shuffled together.
pub fn contaminated_sample<R: Rng + ?Sized>(design: &ContaminationDesign, rng: &mut R) -> Result<Vec<f64>> {
    design.validate()?;
    let mut data = design.f0.sample(design.n_clean(), rng);
    data.extend(design.f1.sample(design.n_contaminated(), rng));
    data.shuffle(rng);
    Ok(data)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Method {
    Mle,
    Mlqe(f64),
}

impl Method {
    pub fn fit(&self, data: &[f64], config: &GaConfig) -> Result<FitResult> {
        match *self {
            Method::Mle => fit_mle(data, config),
            Method::Mlqe(q) => fit_mlqe(data, q, config),
        }
    }

    pub fn q(&self) -> Option<f64> {
        match *self {
            Method::Mle => None,
            Method::Mlqe(q) => Some(q),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Mle => write!(f, "MLE"),
            Method::Mlqe(q) => write!(f, "MLqE(q={q})"),
        }
    }
}

/// Mean, variance, bias and MSE of replicated estimates against the
/// uncontaminated parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub method: Method,
    pub mean_alpha: f64,
    pub mean_beta: f64,
    pub var_alpha: f64,
    pub var_beta: f64,
    pub bias_alpha: f64,
    pub bias_beta: f64,
    pub mse_alpha: f64,
    pub mse_beta: f64,
    pub replications: usize,
    /// Replicates that needed a retry.
    pub retries: usize,
}

impl SimSummary {
    pub fn mse_total(&self) -> f64 {
        self.mse_alpha + self.mse_beta
    }

    pub const CSV_HEADER: &'static str =
        "method,q,alpha_hat,beta_hat,var_alpha,var_beta,mse_alpha,mse_beta,bias_alpha,bias_beta,replications";

    pub fn csv_row(&self) -> String {
        let (name, q) = match self.method {
            Method::Mle => ("MLE", String::new()),
            Method::Mlqe(q) => ("MLqE", format!("{q}")),
        };
        format!(
            "{name},{q},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
            self.mean_alpha,
            self.mean_beta,
            self.var_alpha,
            self.var_beta,
            self.mse_alpha,
            self.mse_beta,
            self.bias_alpha,
            self.bias_beta,
            self.replications
        )
    }
}

/// Writes summaries as CSV with [`SimSummary::CSV_HEADER`].
pub fn write_summaries_csv<W: Write>(mut out: W, rows: &[SimSummary]) -> Result<()> {
    writeln!(out, "{}", SimSummary::CSV_HEADER)?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

fn mean_var(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let mut sum = CompensatedSum::default();
    let mut count = 0usize;
    for v in values.clone() {
        sum.add(v);
        count += 1;
    }
    let mean = sum.value() / count as f64;
    let mut sq = CompensatedSum::default();
    for v in values {
        sq.add((v - mean) * (v - mean));
    }
    (mean, sq.value() / count as f64)
}

/// Summarizes estimates against `truth`; variance uses the `1/R` divisor.
pub fn summarize(method: Method, estimates: &[WeibullParams], truth: &WeibullParams) -> Result<SimSummary> {
    if estimates.is_empty() {
        return Err(Error::InvalidParameter("no estimates to summarize".into()));
    }
    let (mean_alpha, var_alpha) = mean_var(estimates.iter().map(|t| t.alpha()));
    let (mean_beta, var_beta) = mean_var(estimates.iter().map(|t| t.beta()));
    let bias_alpha = mean_alpha - truth.alpha();
    let bias_beta = mean_beta - truth.beta();
    Ok(SimSummary {
        method,
        mean_alpha,
        mean_beta,
        var_alpha,
        var_beta,
        bias_alpha,
        bias_beta,
        mse_alpha: var_alpha + bias_alpha * bias_alpha,
        mse_beta: var_beta + bias_beta * bias_beta,
        replications: estimates.len(),
        retries: 0,
    })
}

const RETRY_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

fn replicate(design: &ContaminationDesign, method: Method, seed: u64, config: &GaConfig) -> Result<WeibullParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = contaminated_sample(design, &mut rng)?;
    let cfg = GaConfig { seed, ..config.clone() };
    Ok(method.fit(&data, &cfg)?.theta_hat)
}

/// Replicates `design` and fits each sample with `method`. Replicate `i`
/// draws its sample and GA stream from seed `base_seed + i`; a failed fit is
/// retried once on a fresh seed, and more than 1% of replicates failing
/// twice aborts the run.
pub fn monte_carlo(
    design: &ContaminationDesign,
    method: Method,
    replications: usize,
    base_seed: u64,
    config: &GaConfig,
) -> Result<SimSummary> {
    design.validate()?;
    if replications < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 replications, got {replications}")));
    }
    let outcomes: Vec<(Option<WeibullParams>, bool, Option<String>)> = (0..replications as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            match replicate(design, method, seed, config) {
                Ok(t) => (Some(t), false, None),
                Err(_) => match replicate(design, method, seed ^ RETRY_OFFSET, config) {
                    Ok(t) => (Some(t), true, None),
                    Err(e) => (None, true, Some(format!("replicate {i}: {e}"))),
                },
            }
        })
        .collect();
    let failures: Vec<&String> = outcomes.iter().filter_map(|o| o.2.as_ref()).collect();
    if failures.len() * 100 > replications {
        return Err(Error::Fit(format!(
            "{} of {replications} replicates failed for {method} on {design}; first: {}",
            failures.len(),
            failures[0]
        )));
    }
    let estimates: Vec<WeibullParams> = outcomes.iter().filter_map(|o| o.0).collect();
    let mut s = summarize(method, &estimates, &design.f0)?;
    s.retries = outcomes.iter().filter(|o| o.1).count();
    Ok(s)
}

/// Result of [`q_grid_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridSearch {
    pub q_star: f64,
    pub table: Vec<SimSummary>,
}

/// Runs [`monte_carlo`] for each q (common seeds across the grid) and
/// returns the q with the smallest `mse_alpha + mse_beta`.
pub fn q_grid_search(
    design: &ContaminationDesign,
    grid: &[f64],
    replications: usize,
    base_seed: u64,
    config: &GaConfig,
) -> Result<GridSearch> {
    check_grid(grid)?;
    let table = grid
        .iter()
        .map(|&q| monte_carlo(design, Method::Mlqe(q), replications, base_seed, config))
        .collect::<Result<Vec<_>>>()?;
    let best = table
        .iter()
        .min_by(|a, b| a.mse_total().total_cmp(&b.mse_total()))
        .expect("non-empty grid");
    let q_star = best.method.q().expect("grid rows are MLqE");
    Ok(GridSearch { q_star, table })
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("q grid is empty".into()));
    }
    if let Some(q) = grid.iter().find(|&&q| !(q > 0.0 && q.is_finite()) || q == 1.0) {
        return Err(Error::InvalidParameter(format!("grid value q = {q} must be positive and different from 1")));
    }
    Ok(())
}

/// `lo, lo+step, ..., hi` rounded to 1e-9, skipping q = 1.
pub fn q_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidParameter(format!("bad grid {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    let grid: Vec<f64> = (0..=count)
        .map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9)
        .filter(|&q| q != 1.0)
        .collect();
    check_grid(&grid)?;
    Ok(grid)
}

/// Parses `LO:HI:STEP`.
pub fn parse_q_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidParameter(format!("q grid `{text}` is not LO:HI:STEP")))?;
    match parts[..] {
        [lo, hi, step] => q_grid(lo, hi, step),
        _ => Err(Error::InvalidParameter(format!("q grid `{text}` is not LO:HI:STEP"))),
    }
}

/// 0.60 to 0.98 and 1.02 to 1.15, both in steps of 0.01.
pub fn default_q_grid() -> Vec<f64> {
    let mut g = q_grid(0.60, 0.98, 0.01).expect("valid grid");
    g.extend(q_grid(1.02, 1.15, 0.01).expect("valid grid"));
    g
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeibullSpec {
    alpha: f64,
    beta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum ContaminantSpec {
    Weibull { alpha: f64, beta: f64 },
    Uniform { a: f64, b: f64 },
    #[serde(alias = "burr3")]
    BurrIii { c: f64, k: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum GridSpec {
    Values(Vec<f64>),
    Range(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyMethod {
    Mle,
    Mlqe,
    Both,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct StudyFile {
    epsilon: f64,
    n: usize,
    #[serde(default = "default_method")]
    method: StudyMethod,
    q: Option<f64>,
    q_grid: Option<GridSpec>,
    #[serde(default = "default_replications")]
    replications: usize,
    #[serde(default)]
    seed: u64,
    ga: Option<String>,
    f0: WeibullSpec,
    f1: ContaminantSpec,
}

fn default_method() -> StudyMethod {
    StudyMethod::Both
}

fn default_replications() -> usize {
    1000
}

/// A simulation study read from a TOML design file.
///
/// ```toml
/// epsilon = 0.1
/// n = 100
/// method = "both"        # mle | mlqe | both
/// q = 0.84               # or q_grid = "0.7:0.95:0.01" / [0.8, 0.84]
/// replications = 1000
/// seed = 7
/// ga = "population_size=60"
///
/// [f0]
/// alpha = 4.0
/// beta = 2.0
///
/// [f1]
/// family = "weibull"     # weibull (alpha, beta) | uniform (a, b) | burr_iii (c, k)
/// alpha = 1.0
/// beta = 5.0
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct Study {
    pub design: ContaminationDesign,
    pub method: StudyMethod,
    pub q: Option<f64>,
    pub q_grid: Option<Vec<f64>>,
    pub replications: usize,
    pub seed: u64,
    pub ga: GaConfig,
}

impl Study {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: StudyFile = toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("design file: {e}")))?;
        let f0 = WeibullParams::new(raw.f0.alpha, raw.f0.beta)?;
        let f1 = match raw.f1 {
            ContaminantSpec::Weibull { alpha, beta } => Contaminant::Weibull(WeibullParams::new(alpha, beta)?),
            ContaminantSpec::Uniform { a, b } => Contaminant::Uniform(UniformParams::new(a, b)?),
            ContaminantSpec::BurrIii { c, k } => Contaminant::BurrIII(BurrIIIParams::new(c, k)?),
        };
        let design = ContaminationDesign::new(f0, f1, raw.epsilon, raw.n)?;
        let q_grid = match raw.q_grid {
            None => None,
            Some(GridSpec::Values(v)) => {
                check_grid(&v)?;
                Some(v)
            }
            Some(GridSpec::Range(s)) => Some(parse_q_grid(&s)?),
        };
        if let Some(q) = raw.q {
            check_grid(&[q])?;
        }
        if raw.method != StudyMethod::Mle && raw.q.is_none() && q_grid.is_none() {
            return Err(Error::InvalidParameter("an MLqE study needs `q` or `q_grid`".into()));
        }
        let mut ga = GaConfig::default();
        if let Some(over) = &raw.ga {
            ga.apply_overrides(over)?;
        }
        Ok(Self { design, method: raw.method, q: raw.q, q_grid, replications: raw.replications, seed: raw.seed, ga })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Runs the study: MLE and/or MLqE at `q`, or at the grid minimizer when
    /// a grid is given. Returns the rows to report and the grid minimizer.
    pub fn run(&self) -> Result<(Vec<SimSummary>, Option<f64>)> {
        let mut rows = Vec::new();
        let mut q_star = None;
        if self.method != StudyMethod::Mle {
            if let Some(grid) = &self.q_grid {
                let search = q_grid_search(&self.design, grid, self.replications, self.seed, &self.ga)?;
                q_star = Some(search.q_star);
                rows.extend(search.table);
            } else if let Some(q) = self.q {
                rows.push(monte_carlo(&self.design, Method::Mlqe(q), self.replications, self.seed, &self.ga)?);
            }
        }
        if self.method != StudyMethod::Mlqe {
            rows.insert(0, monte_carlo(&self.design, Method::Mle, self.replications, self.seed, &self.ga)?);
        }
        Ok((rows, q_star))
    }
}

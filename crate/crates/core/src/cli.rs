//! Command-line plumbing: data loading, contamination injection, reports and
//! plot data. The `weibull-mlqe` binary is a thin wrapper over [`run`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::{UniformParams, WeibullParams};
use crate::error::{Error, Result};
use crate::gof::{ks_test, select_q_by_ks};
use crate::optimize::{fit_mle, fit_mlqe, FitResult, GaConfig};
use crate::simulate::{default_q_grid, parse_q_grid, write_summaries_csv, Study};

/// Input layout of a data file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataFormat {
    /// One value per line; blank lines and `#` comments are skipped.
    Lines,
    /// Comma-separated with a header row; the named column is read.
    Csv(String),
}

impl FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lines" => Ok(DataFormat::Lines),
            _ => match s.strip_prefix("csv:") {
                Some(col) if !col.is_empty() => Ok(DataFormat::Csv(col.to_string())),
                _ => Err(Error::InvalidParameter(format!("format `{s}` is not `lines` or `csv:COLUMN`"))),
            },
        }
    }
}

fn parse_positive(field: &str, path: &Path, line: usize) -> Result<f64> {
    let perr = |message: String| Error::Parse { path: path.display().to_string(), line, message };
    let v: f64 = field.trim().parse().map_err(|_| perr(format!("`{}` is not a number", field.trim())))?;
    if !v.is_finite() || v <= 0.0 {
        return Err(perr(format!("{v} is outside the Weibull support (x > 0)")));
    }
    Ok(v)
}

/// Reads positive finite observations from `path`.
pub fn load_data(path: &Path, format: &DataFormat) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    match format {
        DataFormat::Lines => {
            for (i, line) in text.lines().enumerate() {
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                out.push(parse_positive(t, path, i + 1)?);
            }
        }
        DataFormat::Csv(column) => {
            let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
            let (_, header) = lines.next().ok_or_else(|| Error::Data(format!("{} is empty", path.display())))?;
            let unquote = |s: &str| s.trim().trim_matches('"').to_string();
            let idx = header.split(',').map(unquote).position(|h| h == *column).ok_or_else(|| {
                Error::Data(format!("{}: no column named `{column}` in header `{header}`", path.display()))
            })?;
            for (i, line) in lines {
                let field = line.split(',').nth(idx).map(unquote).ok_or_else(|| Error::Parse {
                    path: path.display().to_string(),
                    line: i + 1,
                    message: format!("missing column `{column}`"),
                })?;
                out.push(parse_positive(&field, path, i + 1)?);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Data(format!("{} contains no observations", path.display())));
    }
    Ok(out)
}

/// Contamination added to a real sample before fitting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contamination {
    None,
    /// `count` Uniform[a, b] draws.
    Inliers { a: f64, b: f64, count: usize },
    /// 2, 3, 4 and 5 times the sample maximum.
    Outliers,
    /// Outliers, then inliers.
    Both { a: f64, b: f64, count: usize },
}

/// Inlier preset of the gene-expression example: 100 Uniform[5, 10] draws.
pub const EXAMPLE_ONE_INLIERS: (f64, f64, usize) = (5.0, 10.0, 100);

/// `(min + 0.5, max - 0.5, 10)`.
pub fn default_inlier_range(data: &[f64]) -> (f64, f64, usize) {
    let min = data.iter().copied().fold(f64::INFINITY, f64::min);
    let max = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min + 0.5, max - 0.5, 10)
}

/// Returns a copy of `data` with the contamination appended.
pub fn inject_contamination(data: &[f64], mode: Contamination, seed: u64) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::Data("cannot contaminate an empty sample".into()));
    }
    let max = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = data.to_vec();
    let inliers = |out: &mut Vec<f64>, a: f64, b: f64, count: usize| -> Result<()> {
        if count == 0 {
            return Err(Error::InvalidParameter("inlier count must be at least 1".into()));
        }
        let u = UniformParams::new(a, b)?;
        out.extend(u.sample(count, &mut ChaCha8Rng::seed_from_u64(seed)));
        Ok(())
    };
    match mode {
        Contamination::None => {}
        Contamination::Inliers { a, b, count } => inliers(&mut out, a, b, count)?,
        Contamination::Outliers => out.extend([2.0, 3.0, 4.0, 5.0].map(|k| k * max)),
        Contamination::Both { a, b, count } => {
            out.extend([2.0, 3.0, 4.0, 5.0].map(|k| k * max));
            inliers(&mut out, a, b, count)?;
        }
    }
    Ok(out)
}

fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor() as i32;
    let p = digits - 1 - mag;
    let s = 10f64.powi(p.abs());
    let r = if p >= 0 { (x * s).round() / s } else { (x / s).round() * s };
    // Reparse through the shortest decimal so the JSON text is exact.
    format!("{r:.*e}", (digits - 1) as usize).parse().unwrap_or(r)
}

/// Summary of one fit, serialized as a flat JSON object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub method: String,
    pub q: Option<f64>,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub objective_value: f64,
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    pub n: usize,
    pub seed: u64,
    pub timing_ms: f64,
}

impl FitReport {
    /// Builds a report with every real rounded to 6 significant digits.
    pub fn new(q: Option<f64>, fit: &FitResult, data: &[f64], seed: u64, timing_ms: f64) -> Result<Self> {
        let ks = ks_test(data, &fit.theta_hat)?;
        let r = |x| round_sig(x, 6);
        Ok(Self {
            method: if q.is_some() { "MLqE".into() } else { "MLE".into() },
            q: q.map(r),
            alpha_hat: r(fit.theta_hat.alpha()),
            beta_hat: r(fit.theta_hat.beta()),
            objective_value: r(fit.objective_value),
            ks_statistic: r(ks.statistic),
            ks_p_value: r(ks.p_value),
            n: data.len(),
            seed,
            timing_ms: r(timing_ms),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let (lo, hi) = (h.floor() as usize, h.ceil() as usize);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Histogram edges by the Freedman–Diaconis rule, falling back to
/// `⌈√n⌉` bins when the interquartile range is zero.
pub fn freedman_diaconis_edges(data: &[f64]) -> Vec<f64> {
    let mut s = data.to_vec();
    s.sort_by(f64::total_cmp);
    let (min, max) = (s[0], s[s.len() - 1]);
    if max <= min {
        return vec![min - 0.5, min + 0.5];
    }
    let iqr = quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25);
    let n = s.len() as f64;
    let bins = if iqr > 0.0 {
        ((max - min) / (2.0 * iqr * n.cbrt())).ceil().max(1.0) as usize
    } else {
        n.sqrt().ceil() as usize
    };
    let width = (max - min) / bins as f64;
    (0..=bins).map(|i| if i == bins { max } else { min + i as f64 * width }).collect()
}

/// Writes `x, empirical_cdf, fitted_cdf_mle, fitted_cdf_mlqe` to `path` and
/// histogram bins with fitted pdf overlays to `<stem>.hist.csv` beside it.
/// Returns the histogram path.
pub fn write_plot_data(
    path: &Path,
    data: &[f64],
    mle: &WeibullParams,
    mlqe: Option<&WeibullParams>,
) -> Result<PathBuf> {
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let blank = |o: Option<f64>| o.map(|v| format!("{v:.8}")).unwrap_or_default();
    let mut out = fs::File::create(path)?;
    writeln!(out, "x,empirical_cdf,fitted_cdf_mle,fitted_cdf_mlqe")?;
    for (i, &x) in sorted.iter().enumerate() {
        writeln!(
            out,
            "{x},{:.8},{:.8},{}",
            (i + 1) as f64 / n,
            mle.cdf(x)?,
            blank(mlqe.map(|t| t.cdf(x)).transpose()?)
        )?;
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "plot".into());
    let hist_path = path.with_file_name(format!("{stem}.hist.csv"));
    let edges = freedman_diaconis_edges(data);
    let mut out = fs::File::create(&hist_path)?;
    writeln!(out, "bin_lo,bin_hi,density,fitted_pdf_mle,fitted_pdf_mlqe")?;
    let last = edges.len() - 2;
    for (j, w) in edges.windows(2).enumerate() {
        let (lo, hi) = (w[0], w[1]);
        let count = sorted.iter().filter(|&&x| x >= lo && (x < hi || (j == last && x <= hi))).count();
        let mid = 0.5 * (lo + hi);
        writeln!(
            out,
            "{lo:.8},{hi:.8},{:.8},{:.8},{}",
            count as f64 / (n * (hi - lo)),
            mle.pdf(mid)?,
            blank(mlqe.map(|t| t.pdf(mid)).transpose()?)
        )?;
    }
    Ok(hist_path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ContaminateArg {
    None,
    Inliers,
    Outliers,
    Both,
}

/// Options shared by the subcommands that read a data file.
#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Data file.
    #[arg(long)]
    pub data: PathBuf,
    /// `lines` or `csv:COLUMN`.
    #[arg(long, default_value = "lines")]
    pub format: String,
    #[arg(long, value_enum, default_value = "none")]
    pub contaminate: ContaminateArg,
    /// Inlier range and count as `A,B,COUNT`; defaults to min+0.5, max-0.5, 10.
    #[arg(long, value_name = "A,B,COUNT")]
    pub inlier_range: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl DataArgs {
    /// Loads the file and applies the requested contamination.
    pub fn load(&self) -> Result<Vec<f64>> {
        let format: DataFormat = self.format.parse()?;
        let data = load_data(&self.data, &format)?;
        let (a, b, count) = match &self.inlier_range {
            Some(text) => parse_inlier_range(text)?,
            None => default_inlier_range(&data),
        };
        let mode = match self.contaminate {
            ContaminateArg::None => Contamination::None,
            ContaminateArg::Inliers => Contamination::Inliers { a, b, count },
            ContaminateArg::Outliers => Contamination::Outliers,
            ContaminateArg::Both => Contamination::Both { a, b, count },
        };
        inject_contamination(&data, mode, self.seed)
    }
}

fn parse_inlier_range(text: &str) -> Result<(f64, f64, usize)> {
    let bad = || Error::InvalidParameter(format!("inlier range `{text}` is not A,B,COUNT"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
        parts[2].parse().map_err(|_| bad())?,
    ))
}

fn ga_config(seed: u64, overrides: Option<&str>) -> Result<GaConfig> {
    let mut c = GaConfig::with_seed(seed);
    if let Some(o) = overrides {
        c.apply_overrides(o)?;
    }
    Ok(c)
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: DataArgs,
    /// Maximum likelihood.
    #[arg(long, conflicts_with = "q")]
    pub mle: bool,
    /// Tuning constant of the log_q likelihood.
    #[arg(long)]
    pub q: Option<f64>,
    /// JSON report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CDF plot data; histogram bins go to `<stem>.hist.csv` beside it.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
    /// GA overrides, `KEY=VAL,...`.
    #[arg(long, value_name = "KEY=VAL,...")]
    pub ga: Option<String>,
}

pub fn run_fit(args: &FitArgs) -> Result<FitReport> {
    if !args.mle && args.q.is_none() {
        return Err(Error::InvalidParameter("choose --mle or --q Q".into()));
    }
    let data = args.input.load()?;
    let config = ga_config(args.input.seed, args.ga.as_deref())?;
    let start = Instant::now();
    let fit = match args.q {
        Some(q) => fit_mlqe(&data, q, &config)?,
        None => fit_mle(&data, &config)?,
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let report = FitReport::new(args.q, &fit, &data, args.input.seed, ms)?;
    if let Some(path) = &args.plot_data {
        let (mle, mlqe) = match args.q {
            Some(_) => (fit_mle(&data, &config)?.theta_hat, Some(fit.theta_hat)),
            None => (fit.theta_hat, None),
        };
        write_plot_data(path, &data, &mle, mlqe.as_ref())?;
    }
    emit(args.out.as_deref(), &report.to_json())?;
    Ok(report)
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// TOML design file.
    #[arg(long)]
    pub design: PathBuf,
    /// Overrides the design's replication count.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Overrides the design's base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the design's q with a grid `LO:HI:STEP`.
    #[arg(long, value_name = "LO:HI:STEP")]
    pub q_grid: Option<String>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "KEY=VAL,...")]
    pub ga: Option<String>,
}

/// Returns the CSV table and the grid minimizer, if a grid was searched.
pub fn run_simulate(args: &SimulateArgs) -> Result<(String, Option<f64>)> {
    let mut study = Study::from_path(&args.design)?;
    if let Some(r) = args.reps {
        study.replications = r;
    }
    if let Some(s) = args.seed {
        study.seed = s;
    }
    if let Some(g) = &args.q_grid {
        study.q_grid = Some(parse_q_grid(g)?);
    }
    if let Some(o) = &args.ga {
        study.ga.apply_overrides(o)?;
    }
    let (rows, q_star) = study.run()?;
    let mut buf = Vec::new();
    write_summaries_csv(&mut buf, &rows)?;
    let csv = String::from_utf8(buf).expect("ascii csv");
    emit(args.out.as_deref(), &csv)?;
    if let Some(q) = q_star {
        eprintln!("q* = {q}");
    }
    Ok((csv, q_star))
}

#[derive(Debug, Clone, Args)]
pub struct SelectQArgs {
    #[command(flatten)]
    pub input: DataArgs,
    /// Grid `LO:HI:STEP`; defaults to 0.60..0.98 and 1.02..1.15 by 0.01.
    #[arg(long, value_name = "LO:HI:STEP")]
    pub q_grid: Option<String>,
    /// Per-q CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
    #[arg(long, value_name = "KEY=VAL,...")]
    pub ga: Option<String>,
}

/// Returns the per-q CSV table and the report of the selected fit.
pub fn run_select_q(args: &SelectQArgs) -> Result<(String, FitReport)> {
    let data = args.input.load()?;
    let grid = match &args.q_grid {
        Some(g) => parse_q_grid(g)?,
        None => default_q_grid(),
    };
    let config = ga_config(args.input.seed, args.ga.as_deref())?;
    let start = Instant::now();
    let sel = select_q_by_ks(&data, &grid, &config)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    for (q, why) in &sel.failed {
        eprintln!("q = {q}: fit failed: {why}");
    }
    let best = sel.best();
    let report = FitReport::new(Some(best.q), &best.fit, &data, args.input.seed, ms)?;
    let mut buf = Vec::new();
    sel.write_csv(&mut buf)?;
    let csv = String::from_utf8(buf).expect("ascii csv");
    if let Some(path) = &args.plot_data {
        let mle = fit_mle(&data, &config)?.theta_hat;
        write_plot_data(path, &data, &mle, Some(&best.fit.theta_hat))?;
    }
    match &args.out {
        Some(p) => {
            fs::write(p, &csv)?;
            println!("{}", report.to_json());
        }
        None => {
            print!("{csv}");
            println!("{}", report.to_json());
        }
    }
    Ok((csv, report))
}

#[derive(Debug, Clone, Args)]
pub struct InjectArgs {
    #[command(flatten)]
    pub input: DataArgs,
    /// Destination for the contaminated sample, one value per line.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run_inject(args: &InjectArgs) -> Result<Vec<f64>> {
    let data = args.input.load()?;
    let text: String = data.iter().map(|x| format!("{x}\n")).collect();
    emit(args.out.as_deref(), &text)?;
    Ok(data)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                writeln!(s)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Parser)]
#[command(name = "weibull-mlqe", version, about = "Robust Weibull fitting by maximum log_q likelihood")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a Weibull by MLE or MLqE and report the KS test.
    Fit(FitArgs),
    /// Run a Monte Carlo contamination study from a design file.
    Simulate(SimulateArgs),
    /// Choose q by the largest KS p-value.
    SelectQ(SelectQArgs),
    /// Write a contaminated copy of a data file.
    Inject(InjectArgs),
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) => 2,
        Error::Data(_) | Error::Parse { .. } | Error::Io(_) => 3,
        Error::Fit(_) | Error::Numerical(_) | Error::Domain(_) => 4,
    }
}

/// Parses `args` and runs the subcommand; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Fit(a) => run_fit(a).map(drop),
        Command::Simulate(a) => run_simulate(a).map(drop),
        Command::SelectQ(a) => run_select_q(a).map(drop),
        Command::Inject(a) => run_inject(a).map(drop),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn loads_lines_and_csv() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.txt", "1.0\n2.5\n");
        assert_eq!(load_data(&p, &DataFormat::Lines).unwrap(), vec![1.0, 2.5]);
        let p = write(&dir, "b.csv", "id,strength\n1,0.5\n2,\"1.5\"\n");
        assert_eq!(load_data(&p, &"csv:strength".parse().unwrap()).unwrap(), vec![0.5, 1.5]);
        let p = write(&dir, "c.txt", "-1\n");
        match load_data(&p, &DataFormat::Lines) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        let p = write(&dir, "d.txt", "1\nabc\n");
        assert!(matches!(load_data(&p, &DataFormat::Lines), Err(Error::Parse { line: 2, .. })));
        assert!("csv:".parse::<DataFormat>().is_err());
    }

    #[test]
    fn injection_examples() {
        let out = inject_contamination(&[1.0, 2.0], Contamination::Outliers, 0).unwrap();
        assert_eq!(out, vec![1.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        let both = inject_contamination(&[1.0, 2.0], Contamination::Both { a: 1.2, b: 1.8, count: 1 }, 0).unwrap();
        assert_eq!(both.len(), 7);
        assert_eq!(&both[..6], &out[..]);
        let data = [0.55, 1.2, 1.6, 2.24];
        let (a, b, count) = default_inlier_range(&data);
        let inl = inject_contamination(&data, Contamination::Inliers { a, b, count }, 3).unwrap();
        assert_eq!(inl.len(), 14);
        assert!(inl[4..].iter().all(|x| (1.05..=1.74).contains(x)));
        assert!(inject_contamination(&[], Contamination::Outliers, 0).is_err());
        assert!(inject_contamination(&[1.0], Contamination::Inliers { a: 2.0, b: 1.0, count: 1 }, 0).is_err());
    }

    #[test]
    fn report_round_trip() {
        let data = [1.0, 1.5, 2.0, 2.2, 3.1];
        let fit = fit_mle(&data, &GaConfig::fast(1)).unwrap();
        let r = FitReport::new(None, &fit, &data, 1, 12.345678901).unwrap();
        let back: FitReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.timing_ms, 12.3457);
    }

    proptest! {
        #[test]
        fn rounding_is_stable(x in -1e12f64..1e12) {
            let r = round_sig(x, 6);
            prop_assert_eq!(round_sig(r, 6), r);
            prop_assert!((r - x).abs() <= 5e-6 * x.abs() + 1e-300);
            let back: f64 = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
            prop_assert_eq!(back, r);
        }
    }

    #[test]
    fn plot_data_is_valid() {
        let dir = tempfile::tempdir().unwrap();
        let theta = WeibullParams::new(3.0, 2.0).unwrap();
        let data = theta.sample(50, &mut ChaCha8Rng::seed_from_u64(1));
        let p = dir.path().join("plot.csv");
        let hist = write_plot_data(&p, &data, &theta, Some(&theta)).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        let ecdf: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert!(ecdf.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(*ecdf.last().unwrap(), 1.0);
        let h = fs::read_to_string(hist).unwrap();
        let mass: f64 = h
            .lines()
            .skip(1)
            .map(|l| {
                let v: Vec<f64> = l.split(',').take(3).map(|s| s.parse().unwrap()).collect();
                v[2] * (v[1] - v[0])
            })
            .sum();
        assert!((mass - 1.0).abs() < 1e-6);
    }

    #[test]
    fn injection_leaves_input_file_alone() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "x.txt", "1\n2\n3\n");
        let out = dir.path().join("y.txt");
        let code = run([
            "weibull-mlqe",
            "inject",
            "--data",
            p.to_str().unwrap(),
            "--contaminate",
            "both",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(fs::read_to_string(&p).unwrap(), "1\n2\n3\n");
        assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3 + 4 + 10);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["weibull-mlqe", "frobnicate"]), 2);
        assert_eq!(run(["weibull-mlqe", "fit", "--data", "x", "--mle", "--q", "0.8"]), 2);
        assert_eq!(run(["weibull-mlqe", "fit", "--data", "/nonexistent/file", "--mle"]), 3);
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "x.txt", "1\n2\n");
        assert_eq!(run(["weibull-mlqe", "fit", "--data", p.to_str().unwrap()]), 2);
    }
}

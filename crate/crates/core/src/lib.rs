//! Robust Weibull fitting by maximum log_q likelihood.
//!
//! The crate covers the Weibull law and its closed-form moments
//! ([`distributions`]), likelihood-type objectives and score functions
//! ([`objectives`]), Fisher-type information matrices ([`information`]), a
//! genetic-algorithm maximizer with simplex polish ([`optimize`]), contamination
//! Monte Carlo studies ([`simulate`]) and Kolmogorov–Smirnov based selection of
//! the tuning constant ([`gof`]).
//!
//! ```
//! use weibull_mlqe::{fit_mlqe, GaConfig, WeibullParams};
//! use rand::SeedableRng;
//!
//! let truth = WeibullParams::new(4.0, 2.0).unwrap();
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let data = truth.sample(200, &mut rng);
//! let fit = fit_mlqe(&data, 0.9, &GaConfig::fast(1)).unwrap();
//! assert!((fit.theta_hat.alpha() - 4.0).abs() < 1.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod distributions;
pub mod error;
pub mod gof;
pub mod information;
pub mod objectives;
pub mod optimize;
pub mod quadrature;
pub mod simulate;
pub mod special;
mod summation;

pub use distributions::{BurrIIIParams, ShapeAnalysis, UniformParams, WeibullParams};
pub use error::{Error, Result};
pub use gof::{ks_pvalue, ks_statistic, select_q_by_ks, KsResult};
pub use information::{InfoMatrix, MatrixConvention};
pub use objectives::{ObjectiveKind, ObjectiveSpec, ScoreVector};
pub use optimize::{fit_mle, fit_mlqe, ga_maximize, FitResult, GaConfig};
pub use simulate::{monte_carlo, q_grid_search, Contaminant, ContaminationDesign, Method, SimSummary};

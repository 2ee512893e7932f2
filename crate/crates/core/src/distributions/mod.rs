//! Weibull density machinery plus the Uniform and BurrIII laws used as
//! contaminants.

mod contaminants;
mod moments;
mod weibull;

pub use contaminants::{BurrIIIParams, UniformParams};
pub use moments::{SeriesValue, MGF_DEFAULT_TERMS};
pub use weibull::{ShapeAnalysis, WeibullParams};

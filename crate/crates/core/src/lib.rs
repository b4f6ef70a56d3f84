//! ABM and LM exponential dispersion models for count data.
//!
//! Models are specified by their variance functions, `m (1 + m/p)^r` (ABM)
//! and `m / (1 - m/p)^r` (LM). The crate evaluates their probabilities
//! through the generating measure, fits them by maximum likelihood or
//! moments, and scores them against classical count models.
//!
//! ```
//! use edm_counts::{fit::fit_mle, gof, Family, FrequencyTable, GofReport};
//!
//! let data = FrequencyTable::zaire_1974();
//! let fit = fit_mle(Family::Lm, 4, &data).unwrap();
//! let report = GofReport::for_fit(&fit, &data, gof::DEFAULT_POOL_THRESHOLD).unwrap();
//! assert_eq!(report.chi_square.df, 2);
//! ```

pub mod baselines;
pub mod data;
pub mod edm;
pub mod error;
pub mod fit;
pub mod gof;
pub mod lagrange;
pub mod series;

pub use baselines::{BaselineModel, BaselineSpec};
pub use data::FrequencyTable;
pub use edm::{CountDistribution, Family, GeneratingMeasure, ModelSpec, Truncation};
pub use error::{Error, Result};
pub use fit::{FitResult, FittedModel, Method};
pub use gof::{DescriptiveStats, GofReport};
pub use series::TruncatedSeries;

/// The guide's code samples, compiled and run as doc-tests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/data.md")]
    pub struct Data;
    #[doc = include_str!("../../../book/src/series.md")]
    pub struct Series;
    #[doc = include_str!("../../../book/src/classes.md")]
    pub struct Classes;
    #[doc = include_str!("../../../book/src/measure.md")]
    pub struct Measure;
    #[doc = include_str!("../../../book/src/cumulants.md")]
    pub struct Cumulants;
    #[doc = include_str!("../../../book/src/lagrange.md")]
    pub struct Lagrange;
    #[doc = include_str!("../../../book/src/baselines.md")]
    pub struct Baselines;
    #[doc = include_str!("../../../book/src/fitting.md")]
    pub struct Fitting;
    #[doc = include_str!("../../../book/src/gof.md")]
    pub struct Gof;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}

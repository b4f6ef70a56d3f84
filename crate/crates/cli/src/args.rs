//! Command-line grammar.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edm_counts::{Family, Method};

#[derive(Debug, Parser)]
#[command(name = "edm-counts", version, about = "Fit ABM and LM count models and compare them with classical baselines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Descriptive statistics of a frequency table.
    Stats(StatsArgs),
    /// Fit one model family at one or more r, or named baselines.
    Fit(FitArgs),
    /// Fit ABM and LM over a range of r next to the baselines.
    Compare(CompareArgs),
    /// Probabilities of one model.
    Pmf(PmfArgs),
    /// Generating measure of one model.
    Measure(MeasureArgs),
    /// Run the numerical oracle suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// `value,frequency` CSV; the bundled Zaire 1974 data when omitted.
    #[arg(long, value_name = "PATH")]
    pub data: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: Common,

    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,

    #[arg(long, conflicts_with = "r_range")]
    pub r: Option<u32>,

    /// Inclusive range such as `1..10`.
    #[arg(long, value_name = "A..B")]
    pub r_range: Option<RRange>,

    /// Comma-separated baseline tokens, for example `pig,gdp`.
    #[arg(long, value_name = "LIST")]
    pub models: Option<String>,

    #[arg(long, value_parser = parse_method, default_value = "mle")]
    pub method: Method,

    /// Minimum expected count per χ² cell.
    #[arg(long, default_value_t = 1.0)]
    pub pool_threshold: f64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,

    /// Restrict the EDM rows to one family; both when omitted.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,

    #[arg(long, value_name = "A..B", default_value = "1..10")]
    pub r_range: RRange,

    /// Comma-separated model tokens; `abm` and `lm` select the EDM families.
    #[arg(long, value_name = "LIST", default_value = "abm,lm,pig,nld,plb,gdp,btd")]
    pub models: String,

    /// Applies to the ABM and LM rows; baselines are always fitted by MLE.
    #[arg(long, value_parser = parse_method, default_value = "mle")]
    pub method: Method,

    #[arg(long, default_value_t = 1.0)]
    pub pool_threshold: f64,
}

#[derive(Debug, Args)]
pub struct PmfArgs {
    #[command(flatten)]
    pub common: Common,

    #[arg(long, value_parser = parse_family)]
    pub family: Family,

    #[arg(long)]
    pub r: u32,

    /// Dispersion; fitted to the data when omitted.
    #[arg(long)]
    pub p: Option<f64>,

    /// Mean; the sample mean when omitted.
    #[arg(long)]
    pub m: Option<f64>,

    #[arg(long, default_value_t = 10)]
    pub n_max: usize,

    /// Used when `--p` is fitted.
    #[arg(long, value_parser = parse_method, default_value = "mle")]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,

    #[arg(long, value_parser = parse_family)]
    pub family: Family,

    #[arg(long)]
    pub r: u32,

    #[arg(long)]
    pub p: f64,

    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,

    /// Test hook: perturbs every value computed by the named module.
    #[arg(long, hide = true, value_name = "MODULE")]
    pub perturb: Option<String>,
}

/// An inclusive range of `r` written `A..B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RRange(pub RangeInclusive<u32>);

impl FromStr for RRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected A..B, got `{s}`"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: u32 = a.trim().parse().map_err(|_| format!("bad lower bound in `{s}`"))?;
        let b: u32 = b.trim().parse().map_err(|_| format!("bad upper bound in `{s}`"))?;
        if a > b {
            return Err(format!("empty range `{s}`"));
        }
        Ok(Self(a..=b))
    }
}

impl fmt::Display for RRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.0.start(), self.0.end())
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: edm_counts::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: edm_counts::Error| e.to_string())
}

//! One function per subcommand, each returning the text to print.

use std::path::Path;

use serde::Serialize;

use edm_counts::fit::{fit_mle, fit_moments};
use edm_counts::{gof, BaselineModel, DescriptiveStats, Error, Family, FrequencyTable, Method, ModelSpec};

use crate::args::{CompareArgs, FitArgs, Format, MeasureArgs, PmfArgs, StatsArgs, ValidateArgs};
use crate::output::{exact, pretty, render, Grid};
use crate::report::{csv_grid, rows_or_errors, run_jobs, table_grid, FitRow, Job};
use crate::validate;

/// Why a command did not succeed, with its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Report to print before the message, if any was produced.
    pub output: Option<String>,
}

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into(), output: None }
    }
}

/// Usage errors for bad model choices, data errors for bad input, numerical
/// errors for everything the algorithms gave up on.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidModel(_)
        | Error::InvalidParameters(_)
        | Error::MeanOutOfDomain { .. }
        | Error::UnboundedMeasure(_) => EXIT_USAGE,
        Error::EmptyData
        | Error::TooFewValues { .. }
        | Error::DuplicateValue { .. }
        | Error::NegativeCount { .. }
        | Error::Parse { .. }
        | Error::Underdispersed { .. } => EXIT_DATA,
        Error::NonPositiveConstantTerm(_)
        | Error::IndexBeyondOrder { .. }
        | Error::MeasureOverflow { .. }
        | Error::TailNotReached { .. }
        | Error::NoInteriorMaximum
        | Error::NonConvergence(_)
        | Error::DegeneratePooling { .. }
        | Error::ModelZeroOnSupport(_) => EXIT_NUMERICAL,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { code: exit_code(&e), message: e.to_string(), output: None }
    }
}

type Outcome = Result<String, Failure>;

const BUNDLED: &str = "bundled:zaire_1974";

fn load(path: Option<&Path>) -> Result<(FrequencyTable, String), Failure> {
    match path {
        None => Ok((FrequencyTable::zaire_1974(), BUNDLED.to_string())),
        Some(p) => Ok((FrequencyTable::from_path(p)?, p.display().to_string())),
    }
}

fn check_threshold(t: f64) -> Result<(), Failure> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Failure::usage(format!("--pool-threshold must be a non-negative number, got {t}")))
    }
}

#[derive(Serialize)]
struct StatsReport<'a> {
    data: &'a str,
    stats: DescriptiveStats,
}

pub fn stats(a: &StatsArgs) -> Outcome {
    let (data, source) = load(a.common.data.as_deref())?;
    let s = gof::descriptive(&data)?;
    let mut g = Grid::new(["statistic", "value"]);
    let show = |x: f64| if a.common.format == Format::Csv { exact(x) } else { format!("{x:.6}") };
    for (k, v) in [
        ("n", s.n.to_string()),
        ("mean", show(s.mean)),
        ("variance", show(s.variance)),
        ("skewness", show(s.skewness)),
        ("kurtosis", show(s.kurtosis)),
        ("fraction_zeros", show(s.fraction_zeros)),
        ("dispersion_index", show(s.dispersion_index)),
    ] {
        g.push(vec![k.to_string(), v]);
    }
    Ok(render(a.common.format, &g, &StatsReport { data: &source, stats: s }))
}

fn parse_models(list: &str) -> Result<(Vec<Family>, Vec<BaselineModel>), Failure> {
    let mut families = Vec::new();
    let mut baselines = Vec::new();
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Ok(f) = tok.parse::<Family>() {
            if !families.contains(&f) {
                families.push(f);
            }
        } else {
            let b = tok.parse::<BaselineModel>().map_err(|e| Failure::usage(e.to_string()))?;
            if !baselines.contains(&b) {
                baselines.push(b);
            }
        }
    }
    Ok((families, baselines))
}

#[derive(Serialize)]
struct FitReport<'a> {
    command: &'a str,
    data: &'a str,
    method: Method,
    pool_threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_range: Option<String>,
    rows: &'a [FitRow],
}

fn render_rows(format: Format, report: &FitReport) -> String {
    let grid = match format {
        Format::Csv => csv_grid(report.rows),
        _ => table_grid(report.rows),
    };
    render(format, &grid, report)
}

pub fn fit(a: &FitArgs) -> Outcome {
    check_threshold(a.pool_threshold)?;
    let (data, source) = load(a.common.data.as_deref())?;
    let (mut families, baselines) = match &a.models {
        Some(list) => parse_models(list)?,
        None => (Vec::new(), Vec::new()),
    };
    if let Some(f) = a.family {
        families = vec![f];
    }
    let rs: Vec<u32> = match (a.r, &a.r_range) {
        (Some(r), _) => vec![r],
        (None, Some(range)) => range.0.clone().collect(),
        (None, None) if !families.is_empty() => return Err(Failure::usage("--family needs --r or --r-range")),
        (None, None) => Vec::new(),
    };
    if families.is_empty() && !rs.is_empty() {
        return Err(Failure::usage("--r needs --family"));
    }
    let mut jobs: Vec<Job> = families.iter().flat_map(|&f| rs.iter().map(move |&r| Job::Edm(f, r))).collect();
    jobs.extend(baselines.into_iter().map(Job::Baseline));
    if jobs.is_empty() {
        return Err(Failure::usage("nothing to fit: give --family with --r, or --models"));
    }

    let results = run_jobs(&jobs, &data, a.method, a.pool_threshold);
    let first_error = results.iter().find_map(|r| r.as_ref().err().cloned());
    let rows = rows_or_errors(&jobs, results);
    let report = FitReport {
        command: "fit",
        data: &source,
        method: a.method,
        pool_threshold: a.pool_threshold,
        r_range: None,
        rows: &rows,
    };
    let text = render_rows(a.common.format, &report);
    match first_error {
        None => Ok(text),
        Some(e) => Err(Failure { output: Some(text), ..Failure::from(e) }),
    }
}

/// Failed rows are reported in place; the exit code stays 0.
pub fn compare(a: &CompareArgs) -> Outcome {
    check_threshold(a.pool_threshold)?;
    let (data, source) = load(a.common.data.as_deref())?;
    let (mut families, baselines) = parse_models(&a.models)?;
    if let Some(f) = a.family {
        families = vec![f];
    }
    let mut jobs: Vec<Job> = families
        .iter()
        .flat_map(|&f| a.r_range.0.clone().map(move |r| Job::Edm(f, r)))
        .collect();
    jobs.extend(baselines.into_iter().map(Job::Baseline));
    if jobs.is_empty() {
        return Err(Failure::usage("--models selects nothing"));
    }
    let rows = rows_or_errors(&jobs, run_jobs(&jobs, &data, a.method, a.pool_threshold));
    let report = FitReport {
        command: "compare",
        data: &source,
        method: a.method,
        pool_threshold: a.pool_threshold,
        r_range: Some(a.r_range.to_string()),
        rows: &rows,
    };
    Ok(render_rows(a.common.format, &report))
}

#[derive(Serialize)]
struct PmfReport {
    family: Family,
    r: u32,
    p: f64,
    m: f64,
    probabilities: Vec<f64>,
}

pub fn pmf(a: &PmfArgs) -> Outcome {
    let (p, m) = match a.p {
        Some(p) => (p, a.m.unwrap_or(load(a.common.data.as_deref())?.0.sample_mean())),
        None => {
            let (data, _) = load(a.common.data.as_deref())?;
            let fit = match a.method {
                Method::Mle => fit_mle(a.family, a.r, &data)?,
                Method::Moments => fit_moments(a.family, a.r, &data)?,
            };
            (fit.model_params()[0], a.m.unwrap_or(fit.m_hat))
        }
    };
    let spec = ModelSpec::new(a.family, a.r, p)?;
    let probs = spec.pmf(m, a.n_max)?.probabilities();
    let mut g = Grid::new(["n", "probability"]);
    for (n, q) in probs.iter().enumerate() {
        let v = if a.common.format == Format::Csv { exact(*q) } else { format!("{q:.10e}") };
        g.push(vec![n.to_string(), v]);
    }
    let report = PmfReport { family: a.family, r: a.r, p, m, probabilities: probs };
    let mut out = render(a.common.format, &g, &report);
    if a.common.format == Format::Table {
        out.insert_str(0, &format!("{spec}, m = {}\n\n", pretty(m)));
    }
    Ok(out)
}

#[derive(Serialize)]
struct MeasureReport {
    family: Family,
    r: u32,
    p: f64,
    log_mass: Vec<f64>,
}

pub fn measure(a: &MeasureArgs) -> Outcome {
    let spec = ModelSpec::new(a.family, a.r, a.p)?;
    let mu = spec.generating_measure(a.n_max)?;
    let mut g = Grid::new(["n", "mass", "log_mass"]);
    let show = |x: f64| if a.format == Format::Csv { exact(x) } else { format!("{x:.10e}") };
    let log_mass: Vec<f64> = (0..=a.n_max).map(|n| mu.log_mass(n)).collect();
    for (n, l) in log_mass.iter().enumerate() {
        let lm = if a.format == Format::Csv { exact(*l) } else { format!("{l:.10}") };
        g.push(vec![n.to_string(), show(l.exp()), lm]);
    }
    let report = MeasureReport { family: a.family, r: a.r, p: a.p, log_mass };
    Ok(render(a.format, &g, &report))
}

#[derive(Serialize)]
struct ValidateReport<'a> {
    passed: bool,
    checks: &'a [validate::CheckResult],
}

pub fn validate(a: &ValidateArgs) -> Outcome {
    if let Some(m) = &a.perturb {
        if !validate::MODULES.contains(&m.as_str()) {
            return Err(Failure::usage(format!("unknown module `{m}`")));
        }
    }
    let results = validate::run(a.perturb.as_deref());
    let passed = results.iter().all(|r| r.passed);
    let text = render(a.format, &validate::grid(&results), &ValidateReport { passed, checks: &results });
    if passed {
        return Ok(text);
    }
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{}: {}", r.module, r.check))
        .collect();
    Err(Failure {
        code: EXIT_NUMERICAL,
        message: format!("{} check(s) failed: {}", failed.len(), failed.join("; ")),
        output: Some(text),
    })
}

//! Parameter estimation.
//!
//! For a fixed `p` the mean parameterization makes the sample mean the
//! maximum likelihood estimate of `m`, so ABM and LM fits are profile fits:
//! `m̂ = x̄` and a one-dimensional search over `log p`. Baselines are fitted
//! jointly with Nelder–Mead in an unconstrained reparameterization.

pub mod optimize;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::baselines::{baseline_pmf, BaselineModel, BaselineSpec};
use crate::data::FrequencyTable;
use crate::edm::{Family, ModelSpec};
use crate::error::{Error, Result};

/// Absolute tolerance on `log p` for profile fits.
pub const LOG_P_TOL: f64 = 1e-8;
/// Bracket expansion limit for profile fits.
pub const MAX_DOUBLINGS: usize = 40;
/// Simplex diameter at which Nelder–Mead stops.
pub const SIMPLEX_TOL: f64 = 1e-9;
pub const MAX_SIMPLEX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mle,
    Moments,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Mle => "mle",
            Method::Moments => "moments",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mle" => Ok(Method::Mle),
            "moments" => Ok(Method::Moments),
            other => Err(Error::InvalidModel(format!("unknown method `{other}`"))),
        }
    }
}

/// What was fitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FittedModel {
    Edm(ModelSpec),
    Baseline(BaselineSpec),
}

impl FittedModel {
    /// Row label such as `ABM(r=10)` or `PIG`.
    pub fn label(&self) -> String {
        match self {
            FittedModel::Edm(s) => format!("{}(r={})", s.family(), s.r()),
            FittedModel::Baseline(b) => b.model().label().to_string(),
        }
    }
}

impl fmt::Display for FittedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FittedModel::Edm(s) => s.fmt(f),
            FittedModel::Baseline(b) => b.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FittedModel,
    /// The fitted mean; the sample mean for ABM and LM.
    pub m_hat: f64,
    pub log_likelihood: f64,
    pub method: Method,
    pub iterations: usize,
    /// Number of parameters estimated from the data.
    pub n_params: usize,
}

impl FitResult {
    /// Model probabilities on `0..=n_max`.
    pub fn pmf(&self, n_max: usize) -> Result<Vec<f64>> {
        match &self.model {
            FittedModel::Edm(s) => Ok(s.pmf(self.m_hat, n_max)?.probabilities()),
            FittedModel::Baseline(b) => baseline_pmf(b, n_max),
        }
    }
}

pub fn sample_mean(data: &FrequencyTable) -> f64 {
    data.sample_mean()
}

/// `Σ count · log P(value)`; zero-count cells contribute nothing.
pub fn log_likelihood(spec: &ModelSpec, m: f64, data: &FrequencyTable) -> Result<f64> {
    let dist = spec.pmf(m, data.max_value() as usize)?;
    Ok(weighted_log(dist.log_pmf(), data, true))
}

/// Log-likelihood of a baseline; `-∞` if an observed value has zero probability.
pub fn baseline_log_likelihood(spec: &BaselineSpec, data: &FrequencyTable) -> Result<f64> {
    let pmf = baseline_pmf(spec, data.max_value() as usize)?;
    Ok(weighted_log(&pmf, data, false))
}

fn weighted_log(values: &[f64], data: &FrequencyTable, is_log: bool) -> f64 {
    data.cells()
        .iter()
        .filter(|c| c.1 > 0)
        .map(|&(v, c)| {
            let x = values[v as usize];
            c as f64 * if is_log { x } else { x.ln() }
        })
        .sum()
}

fn check_fittable(data: &FrequencyTable) -> Result<()> {
    let found = data.distinct_observed();
    if found < 2 {
        return Err(Error::TooFewValues { needed: 2, found });
    }
    Ok(())
}

/// Profile maximum likelihood: `m̂ = x̄`, then Brent's method on `log p`.
///
/// ```
/// use edm_counts::{fit::fit_mle, Family, FrequencyTable};
/// let fit = fit_mle(Family::Lm, 4, &FrequencyTable::zaire_1974()).unwrap();
/// assert_eq!(fit.m_hat, 0.0865);
/// ```
pub fn fit_mle(family: Family, r: u32, data: &FrequencyTable) -> Result<FitResult> {
    check_fittable(data)?;
    let m = data.sample_mean();
    if r == 0 {
        let spec = ModelSpec::new(family, 0, 1.0)?;
        return Ok(FitResult {
            model: FittedModel::Edm(spec),
            m_hat: m,
            log_likelihood: log_likelihood(&spec, m, data)?,
            method: Method::Mle,
            iterations: 0,
            n_params: 1,
        });
    }
    ModelSpec::new(family, r, 1.0)?;

    let lower = match family {
        Family::Abm => f64::NEG_INFINITY,
        Family::Lm => (m * (1.0 + 1e-6)).ln(),
    };
    let mut objective = |log_p: f64| -> f64 {
        ModelSpec::new(family, r, log_p.exp())
            .and_then(|s| log_likelihood(&s, m, data))
            .map_or(f64::INFINITY, |ll| -ll)
    };

    let p0 = moment_estimate(family, r, m, data.sample_variance()).unwrap_or(match family {
        Family::Abm => 1.0,
        Family::Lm => 2.0 * m,
    });
    let (a, b, c) = bracket(&mut objective, p0.ln().max(lower), lower)?;
    let best = optimize::brent(&mut objective, a, b, c, LOG_P_TOL, 500).ok_or(Error::NonConvergence(500))?;
    let spec = ModelSpec::new(family, r, best.x.exp())?;
    Ok(FitResult {
        model: FittedModel::Edm(spec),
        m_hat: m,
        log_likelihood: log_likelihood(&spec, m, data)?,
        method: Method::Mle,
        iterations: best.iterations,
        n_params: 2,
    })
}

/// Walks from `x0` in steps of `log 2` until the objective turns up.
fn bracket<F: FnMut(f64) -> f64>(f: &mut F, x0: f64, lower: f64) -> Result<(f64, f64, f64)> {
    let step = std::f64::consts::LN_2;
    let f0 = f(x0);
    let up = x0 + step;
    let f_up = f(up);
    let (mut prev, mut cur, mut f_cur, dir) = if f_up < f0 {
        (x0, up, f_up, 1.0)
    } else {
        let down = (x0 - step).max(lower);
        let f_down = f(down);
        if !(f_down < f0) {
            return Ok((down, x0, up));
        }
        if down == lower {
            return Err(Error::NoInteriorMaximum);
        }
        (x0, down, f_down, -1.0)
    };
    for _ in 0..MAX_DOUBLINGS {
        let next = (cur + dir * step).max(lower);
        let f_next = f(next);
        if !(f_next < f_cur) {
            return Ok(if dir > 0.0 { (prev, cur, next) } else { (next, cur, prev) });
        }
        if next == lower {
            return Err(Error::NoInteriorMaximum);
        }
        (prev, cur, f_cur) = (cur, next, f_next);
    }
    Err(Error::NoInteriorMaximum)
}

fn moment_estimate(family: Family, r: u32, mean: f64, variance: f64) -> Result<f64> {
    if !(variance > mean) {
        return Err(Error::Underdispersed { mean, variance });
    }
    let k = 1.0 / r as f64;
    let p = match family {
        Family::Abm => mean / ((variance / mean).powf(k) - 1.0),
        Family::Lm => mean / (1.0 - (mean / variance).powf(k)),
    };
    if p.is_finite() && p > 0.0 {
        Ok(p)
    } else {
        Err(Error::Underdispersed { mean, variance })
    }
}

/// Method of moments: `m̂ = x̄` and `p̂` solving `V_p(x̄) = s²`.
pub fn fit_moments(family: Family, r: u32, data: &FrequencyTable) -> Result<FitResult> {
    let m = data.sample_mean();
    let p = if r == 0 {
        1.0
    } else {
        moment_estimate(family, r, m, data.sample_variance())?
    };
    let spec = ModelSpec::new(family, r, p)?;
    Ok(FitResult {
        model: FittedModel::Edm(spec),
        m_hat: m,
        log_likelihood: log_likelihood(&spec, m, data)?,
        method: Method::Moments,
        iterations: 0,
        n_params: if r == 0 { 1 } else { 2 },
    })
}

fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn logit(x: f64) -> f64 {
    (x / (1.0 - x)).ln()
}

/// Maps an unconstrained coordinate to parameter `i` of `model`, and back.
fn to_natural(model: BaselineModel, i: usize, z: f64) -> f64 {
    use BaselineModel::*;
    match (model, i) {
        (Nb, 1) | (Dld, 0) | (Nld, 1) | (Gdp, 0) => logistic(z),
        (Nld, 0) => -z.exp_m1(),
        _ => z.exp(),
    }
}

fn to_free(model: BaselineModel, i: usize, x: f64) -> f64 {
    use BaselineModel::*;
    match (model, i) {
        (Nb, 1) | (Dld, 0) | (Nld, 1) | (Gdp, 0) => logit(x),
        (Nld, 0) => (1.0 - x).ln(),
        _ => x.ln(),
    }
}

fn baseline_start(model: BaselineModel, mean: f64, variance: f64) -> Vec<f64> {
    let excess = (variance - mean).max(0.1 * mean);
    match model {
        BaselineModel::Poisson => vec![mean],
        BaselineModel::Nb => {
            let size = mean * mean / excess;
            vec![size, size / (size + mean)]
        }
        BaselineModel::Pig => vec![excess / mean, mean],
        BaselineModel::Dld => vec![mean / (1.0 + mean)],
        BaselineModel::Nld => vec![-1.0, 0.2],
        BaselineModel::Plb => vec![7.0, 1.0],
        BaselineModel::Gdp => vec![0.12, 1.0],
        BaselineModel::Btd => vec![0.14, 0.14],
    }
}

/// Maximum likelihood for a baseline with all parameters free.
pub fn fit_baseline(model: BaselineModel, data: &FrequencyTable) -> Result<FitResult> {
    fit_baseline_with(model, data, &[])
}

/// Maximum likelihood for a baseline; `fixed[i] = Some(v)` pins parameter `i`.
///
/// ```
/// use edm_counts::{fit::fit_baseline_with, BaselineModel, FrequencyTable};
/// let data = FrequencyTable::zaire_1974();
/// let geometric = fit_baseline_with(BaselineModel::Gdp, &data, &[None, Some(0.0)]).unwrap();
/// let q = geometric.model_params()[0];
/// assert!((q - 0.0865 / 1.0865).abs() < 1e-7);
/// ```
pub fn fit_baseline_with(model: BaselineModel, data: &FrequencyTable, fixed: &[Option<f64>]) -> Result<FitResult> {
    check_fittable(data)?;
    let k = model.n_params();
    let pinned = |i: usize| fixed.get(i).copied().flatten();
    let start = baseline_start(model, data.sample_mean(), data.sample_variance());
    let free: Vec<usize> = (0..k).filter(|&i| pinned(i).is_none()).collect();
    let assemble = |z: &[f64]| -> Vec<f64> {
        let mut it = z.iter();
        (0..k)
            .map(|i| pinned(i).unwrap_or_else(|| to_natural(model, i, *it.next().expect("one coordinate per free parameter"))))
            .collect()
    };
    let objective = |z: &[f64]| -> f64 {
        BaselineSpec::from_params(model, &assemble(z))
            .and_then(|s| baseline_log_likelihood(&s, data))
            .map_or(f64::INFINITY, |ll| -ll)
    };

    if free.is_empty() {
        let spec = BaselineSpec::from_params(model, &assemble(&[]))?;
        return finish_baseline(spec, data, 0, 0);
    }

    let z0: Vec<f64> = free.iter().map(|&i| to_free(model, i, start[i])).collect();
    let mut best = optimize::nelder_mead(objective, &z0, 0.5, SIMPLEX_TOL, MAX_SIMPLEX_ITERATIONS);
    if !best.converged {
        return Err(Error::NonConvergence(MAX_SIMPLEX_ITERATIONS));
    }
    // one restart guards against a collapsed simplex
    let again = optimize::nelder_mead(objective, &best.x, 0.05, SIMPLEX_TOL, MAX_SIMPLEX_ITERATIONS);
    let iterations = best.iterations + again.iterations;
    if again.converged && again.fx <= best.fx {
        best = again;
    }
    let spec = BaselineSpec::from_params(model, &assemble(&best.x))?;
    finish_baseline(spec, data, free.len(), iterations)
}

fn finish_baseline(spec: BaselineSpec, data: &FrequencyTable, n_params: usize, iterations: usize) -> Result<FitResult> {
    let pmf = baseline_pmf(&spec, 4096)?;
    let mean = pmf.iter().enumerate().map(|(n, q)| n as f64 * q).sum();
    Ok(FitResult {
        model: FittedModel::Baseline(spec),
        m_hat: mean,
        log_likelihood: baseline_log_likelihood(&spec, data)?,
        method: Method::Mle,
        iterations,
        n_params,
    })
}

impl FitResult {
    /// The fitted parameters: `[p]` for ABM/LM, the model's own otherwise.
    pub fn model_params(&self) -> Vec<f64> {
        match &self.model {
            FittedModel::Edm(s) => vec![s.p()],
            FittedModel::Baseline(b) => b.params(),
        }
    }
}

/// Whether moving any parameter by `±rel` (relative) fails to raise the
/// log-likelihood by more than `slack`.
pub fn is_local_maximum(fit: &FitResult, data: &FrequencyTable, rel: f64, slack: f64) -> Result<bool> {
    let at = fit.log_likelihood;
    let params = fit.model_params();
    for i in 0..params.len() {
        for sign in [-1.0, 1.0] {
            let mut q = params.clone();
            q[i] *= 1.0 + sign * rel;
            let ll = match &fit.model {
                FittedModel::Edm(s) => ModelSpec::new(s.family(), s.r(), q[0]).and_then(|t| log_likelihood(&t, fit.m_hat, data)),
                FittedModel::Baseline(b) => {
                    BaselineSpec::from_params(b.model(), &q).and_then(|t| baseline_log_likelihood(&t, data))
                }
            };
            if let Ok(ll) = ll {
                if ll > at + slack {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

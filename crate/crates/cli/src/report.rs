//! Fitted-model rows shared by `fit` and `compare`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use edm_counts::fit::{fit_baseline, fit_mle, fit_moments, FitResult, FittedModel};
use edm_counts::{BaselineModel, Error, Family, FrequencyTable, GofReport, Method};

use crate::output::{exact, pretty, Grid};

/// One model to fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Job {
    Edm(Family, u32),
    Baseline(BaselineModel),
}

impl Job {
    pub fn label(&self) -> String {
        match self {
            Job::Edm(f, r) => format!("{f}(r={r})"),
            Job::Baseline(b) => b.label().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub value: f64,
}

/// A fitted model with its fit measures, or the error that stopped it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub model: String,
    pub family: Option<Family>,
    pub r: Option<u32>,
    pub method: Option<Method>,
    pub params: Vec<Param>,
    pub m_hat: Option<f64>,
    pub log_likelihood: Option<f64>,
    pub chi2: Option<f64>,
    pub df: Option<usize>,
    pub p_value: Option<f64>,
    pub rmse: Option<f64>,
    pub kl: Option<f64>,
    /// Pooled χ² cells joined by `|`, e.g. `0|1|2|3|>=4`.
    pub cells: Option<String>,
    pub error: Option<String>,
}

impl FitRow {
    fn failed(job: Job, error: &Error) -> Self {
        let (family, r) = match job {
            Job::Edm(f, r) => (Some(f), Some(r)),
            Job::Baseline(_) => (None, None),
        };
        Self {
            model: job.label(),
            family,
            r,
            method: None,
            params: Vec::new(),
            m_hat: None,
            log_likelihood: None,
            chi2: None,
            df: None,
            p_value: None,
            rmse: None,
            kl: None,
            cells: None,
            error: Some(error.to_string()),
        }
    }

    fn fitted(fit: &FitResult, gof: &GofReport) -> Self {
        let (family, r, names): (_, _, &[&str]) = match &fit.model {
            FittedModel::Edm(s) => (Some(s.family()), Some(s.r()), &["p"]),
            FittedModel::Baseline(b) => (None, None, b.model().param_names()),
        };
        let params = names
            .iter()
            .zip(fit.model_params())
            .map(|(n, v)| Param { name: n.to_string(), value: v })
            .collect();
        let cells: Vec<String> = gof.chi_square.cells.iter().map(|c| c.label()).collect();
        Self {
            model: fit.model.label(),
            family,
            r,
            method: Some(fit.method),
            params,
            m_hat: Some(fit.m_hat),
            log_likelihood: Some(fit.log_likelihood),
            chi2: Some(gof.chi_square.statistic),
            df: Some(gof.chi_square.df),
            p_value: Some(gof.chi_square.p_value),
            rmse: Some(gof.rmse),
            kl: Some(gof.kl),
            cells: Some(cells.join("|")),
            error: None,
        }
    }
}

pub fn run_job(job: Job, data: &FrequencyTable, method: Method, threshold: f64) -> Result<FitRow, Error> {
    let fit = match (job, method) {
        (Job::Edm(f, r), Method::Mle) => fit_mle(f, r, data)?,
        (Job::Edm(f, r), Method::Moments) => fit_moments(f, r, data)?,
        (Job::Baseline(b), _) => fit_baseline(b, data)?,
    };
    let gof = GofReport::for_fit(&fit, data, threshold)?;
    Ok(FitRow::fitted(&fit, &gof))
}

/// Fits all jobs in parallel; results keep the order of `jobs`.
pub fn run_jobs(jobs: &[Job], data: &FrequencyTable, method: Method, threshold: f64) -> Vec<Result<FitRow, Error>> {
    jobs.par_iter().map(|&j| run_job(j, data, method, threshold)).collect()
}

/// Failed jobs become rows carrying their error message.
pub fn rows_or_errors(jobs: &[Job], results: Vec<Result<FitRow, Error>>) -> Vec<FitRow> {
    jobs.iter()
        .zip(results)
        .map(|(&j, r)| r.unwrap_or_else(|e| FitRow::failed(j, &e)))
        .collect()
}

const HEADERS: [&str; 14] = [
    "model", "family", "r", "method", "params", "m_hat", "loglik", "chi2", "df", "p_value", "rmse", "kl", "cells", "error",
];

fn opt<T>(x: Option<T>, f: impl Fn(T) -> String) -> String {
    x.map(f).unwrap_or_default()
}

fn params_string(params: &[Param], fmt: impl Fn(f64) -> String) -> String {
    params
        .iter()
        .map(|p| format!("{}={}", p.name, fmt(p.value)))
        .collect::<Vec<_>>()
        .join(";")
}

/// CSV grid with exact floats; parsed back by [`parse_rows_csv`].
pub fn csv_grid(rows: &[FitRow]) -> Grid {
    let mut g = Grid::new(HEADERS);
    for r in rows {
        g.push(vec![
            r.model.clone(),
            opt(r.family, |f| f.as_str().to_string()),
            opt(r.r, |r| r.to_string()),
            opt(r.method, |m| m.to_string()),
            params_string(&r.params, exact),
            opt(r.m_hat, exact),
            opt(r.log_likelihood, exact),
            opt(r.chi2, exact),
            opt(r.df, |d| d.to_string()),
            opt(r.p_value, exact),
            opt(r.rmse, exact),
            opt(r.kl, exact),
            r.cells.clone().unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    g
}

/// Rounded display grid.
pub fn table_grid(rows: &[FitRow]) -> Grid {
    let mut g = Grid::new(["model", "params", "loglik", "chi2", "df", "p-value", "RMSE", "KL", "cells"]);
    for r in rows {
        if let Some(e) = &r.error {
            let mut cells = vec![r.model.clone(), format!("error: {e}")];
            cells.resize(9, String::new());
            g.push(cells);
            continue;
        }
        g.push(vec![
            r.model.clone(),
            params_string(&r.params, pretty),
            opt(r.log_likelihood, |x| format!("{x:.4}")),
            opt(r.chi2, pretty),
            opt(r.df, |d| d.to_string()),
            opt(r.p_value, pretty),
            opt(r.rmse, pretty),
            opt(r.kl, |x| format!("{x:.4e}")),
            r.cells.clone().unwrap_or_default(),
        ]);
    }
    g
}

fn parse_opt<T: std::str::FromStr>(s: &str) -> Result<Option<T>, String> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| format!("cannot parse `{s}`"))
}

fn non_empty(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_string())
}

/// Reads the CSV written for [`csv_grid`].
pub fn parse_rows_csv(text: &str) -> Result<Vec<FitRow>, String> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| e.to_string())?;
    if headers.iter().ne(HEADERS) {
        return Err(format!("unexpected header {headers:?}"));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let params = if rec[4].is_empty() {
            Vec::new()
        } else {
            rec[4]
                .split(';')
                .map(|kv| {
                    let (name, value) = kv.split_once('=').ok_or_else(|| format!("bad parameter `{kv}`"))?;
                    let value = value.parse().map_err(|_| format!("bad value in `{kv}`"))?;
                    Ok(Param { name: name.to_string(), value })
                })
                .collect::<Result<_, String>>()?
        };
        rows.push(FitRow {
            model: rec[0].to_string(),
            family: parse_opt::<String>(&rec[1])?
                .map(|f| f.parse().map_err(|e: Error| e.to_string()))
                .transpose()?,
            r: parse_opt(&rec[2])?,
            method: parse_opt::<String>(&rec[3])?
                .map(|m| m.parse().map_err(|e: Error| e.to_string()))
                .transpose()?,
            params,
            m_hat: parse_opt(&rec[5])?,
            log_likelihood: parse_opt(&rec[6])?,
            chi2: parse_opt(&rec[7])?,
            df: parse_opt(&rec[8])?,
            p_value: parse_opt(&rec[9])?,
            rmse: parse_opt(&rec[10])?,
            kl: parse_opt(&rec[11])?,
            cells: non_empty(&rec[12]),
            error: non_empty(&rec[13]),
        });
    }
    Ok(rows)
}

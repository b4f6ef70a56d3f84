//! Goodness of fit: descriptive statistics, pooled χ², RMSE and
//! Kullback–Leibler divergence.
//!
//! Every measure compares a [`FrequencyTable`] with model probabilities
//! `pmf[k] = P(X = k)` given at least on `0..=K`, where `K` is the largest
//! observed value. Mass beyond `K` enters the χ² test as an open tail cell.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::checked_gamma_ur;

use crate::data::FrequencyTable;
use crate::error::{Error, Result};
use crate::fit::FitResult;

/// Default minimum expected count for a χ² cell.
pub const DEFAULT_POOL_THRESHOLD: f64 = 1.0;

/// Sample summary of a frequency table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub n: u64,
    pub mean: f64,
    /// With the `N - 1` denominator.
    pub variance: f64,
    /// `m3 / m2^{3/2}` with population central moments.
    pub skewness: f64,
    /// `m4 / m2^2` with population central moments, not in excess of 3.
    pub kurtosis: f64,
    pub fraction_zeros: f64,
    /// `variance / mean`.
    pub dispersion_index: f64,
}

/// Needs at least two observations.
///
/// ```
/// use edm_counts::{gof, FrequencyTable};
/// let s = gof::descriptive(&FrequencyTable::zaire_1974()).unwrap();
/// assert_eq!(s.mean, 0.0865);
/// assert!((s.variance - 0.122548).abs() < 1e-6);
/// ```
pub fn descriptive(data: &FrequencyTable) -> Result<DescriptiveStats> {
    let n = data.total();
    if n < 2 {
        return Err(Error::EmptyData);
    }
    let nf = n as f64;
    let mean = data.sample_mean();
    let variance = data.sample_variance();
    let m2 = data.central_sum(2) / nf;
    let m3 = data.central_sum(3) / nf;
    let m4 = data.central_sum(4) / nf;
    Ok(DescriptiveStats {
        n,
        mean,
        variance,
        skewness: m3 / m2.powf(1.5),
        kurtosis: m4 / (m2 * m2),
        fraction_zeros: data.count(0) as f64 / nf,
        dispersion_index: variance / mean,
    })
}

/// A χ² cell covering `lo..=hi`, or `lo..` when `hi` is `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PooledCell {
    pub lo: u64,
    pub hi: Option<u64>,
    pub observed: f64,
    pub expected: f64,
}

impl PooledCell {
    /// `"3"`, `"2-4"` or `">=4"`.
    pub fn label(&self) -> String {
        match self.hi {
            None => format!(">={}", self.lo),
            Some(hi) if hi == self.lo => hi.to_string(),
            Some(hi) => format!("{}-{hi}", self.lo),
        }
    }

    fn absorb(&mut self, right: &PooledCell) {
        self.hi = right.hi;
        self.observed += right.observed;
        self.expected += right.expected;
    }
}

fn check_pmf(data: &FrequencyTable, pmf: &[f64]) -> Result<usize> {
    let k = data.max_value() as usize;
    if pmf.len() <= k {
        return Err(Error::InvalidParameters(format!(
            "pmf covers 0..={} but data reach {k}",
            pmf.len() as isize - 1
        )));
    }
    Ok(k)
}

/// Point cells `0..=K` and a tail cell `K+1..`, pooled from the right.
///
/// While the rightmost remaining original cell has expected count below
/// `threshold`, it is merged into its left neighbour. The test is on the
/// cell's own expectation, not on what has accumulated to its right.
///
/// ```
/// use edm_counts::{gof, FrequencyTable, ModelSpec};
/// let data = FrequencyTable::zaire_1974();
/// let pmf = ModelSpec::lm(4, 1.0).unwrap().pmf(data.sample_mean(), 5).unwrap().probabilities();
/// let cells = gof::pool_cells(&data, &pmf, 1.0).unwrap();
/// let labels: Vec<_> = cells.iter().map(|c| c.label()).collect();
/// assert_eq!(labels, ["0", "1", "2", "3", ">=4"]);
/// ```
pub fn pool_cells(data: &FrequencyTable, pmf: &[f64], threshold: f64) -> Result<Vec<PooledCell>> {
    let k = check_pmf(data, pmf)?;
    let nf = data.total() as f64;
    let mut cells: Vec<PooledCell> = (0..=k)
        .map(|v| PooledCell {
            lo: v as u64,
            hi: Some(v as u64),
            observed: data.count(v as u64) as f64,
            expected: nf * pmf[v],
        })
        .collect();
    let head: f64 = pmf[..=k].iter().sum();
    cells.push(PooledCell {
        lo: k as u64 + 1,
        hi: None,
        observed: 0.0,
        expected: nf * (1.0 - head).max(0.0),
    });

    // own expectation of each original cell, before anything was merged in
    let own: Vec<f64> = cells.iter().map(|c| c.expected).collect();
    while cells.len() > 1 && own[cells.len() - 1] < threshold {
        let last = cells.pop().expect("length checked");
        cells.last_mut().expect("length checked").absorb(&last);
    }
    // the surviving rightmost cell collects the whole tail
    if let Some(last) = cells.last_mut() {
        last.hi = None;
    }
    if cells.len() < 3 {
        return Err(Error::DegeneratePooling { cells: cells.len(), needed: 3 });
    }
    Ok(cells)
}

/// Upper regularized incomplete gamma function `Q(s, x)`.
pub fn gamma_q(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    checked_gamma_ur(s, x).unwrap_or(f64::NAN)
}

/// Outcome of a pooled χ² test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub cells: Vec<PooledCell>,
}

/// Pearson χ² on [`pool_cells`], with `cells - 1 - n_params` degrees of freedom.
pub fn chi_square(data: &FrequencyTable, pmf: &[f64], n_params: usize, threshold: f64) -> Result<ChiSquare> {
    let cells = pool_cells(data, pmf, threshold)?;
    if cells.len() < n_params + 2 {
        return Err(Error::DegeneratePooling {
            cells: cells.len(),
            needed: n_params + 2,
        });
    }
    let df = cells.len() - 1 - n_params;
    let mut statistic = 0.0;
    for c in &cells {
        if c.expected <= 0.0 {
            if c.observed > 0.0 {
                return Err(Error::ModelZeroOnSupport(c.lo));
            }
            continue;
        }
        statistic += (c.observed - c.expected).powi(2) / c.expected;
    }
    Ok(ChiSquare {
        statistic,
        df,
        p_value: gamma_q(df as f64 / 2.0, statistic / 2.0),
        cells,
    })
}

/// Root mean squared difference between observed and expected counts over
/// the raw cells `0..=K`.
pub fn rmse(data: &FrequencyTable, pmf: &[f64]) -> Result<f64> {
    let k = check_pmf(data, pmf)?;
    let nf = data.total() as f64;
    let ss: f64 = (0..=k)
        .map(|v| (data.count(v as u64) as f64 - nf * pmf[v]).powi(2))
        .sum();
    Ok((ss / (k + 1) as f64).sqrt())
}

/// `Σ p̂_k ln(p̂_k / p_k)` over observed values, natural log.
pub fn kl_divergence(data: &FrequencyTable, pmf: &[f64]) -> Result<f64> {
    check_pmf(data, pmf)?;
    let nf = data.total() as f64;
    let mut kl = 0.0;
    for &(v, c) in data.cells() {
        if c == 0 {
            continue;
        }
        let q = pmf[v as usize];
        if q <= 0.0 {
            return Err(Error::ModelZeroOnSupport(v));
        }
        let p = c as f64 / nf;
        kl += p * (p / q).ln();
    }
    Ok(kl)
}

/// All three measures for one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub chi_square: ChiSquare,
    pub rmse: f64,
    pub kl: f64,
}

impl GofReport {
    pub fn new(data: &FrequencyTable, pmf: &[f64], n_params: usize, threshold: f64) -> Result<Self> {
        Ok(Self {
            chi_square: chi_square(data, pmf, n_params, threshold)?,
            rmse: rmse(data, pmf)?,
            kl: kl_divergence(data, pmf)?,
        })
    }

    /// Evaluates a fitted model, charging the parameters it estimated.
    pub fn for_fit(fit: &FitResult, data: &FrequencyTable, threshold: f64) -> Result<Self> {
        let pmf = fit.pmf(data.max_value() as usize)?;
        Self::new(data, &pmf, fit.n_params, threshold)
    }
}

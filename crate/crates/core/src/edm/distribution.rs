use serde::{Deserialize, Serialize};

use super::{GeneratingMeasure, MeanParam, ModelSpec};
use crate::error::{Error, Result};

/// Stopping rule for adaptive truncation of a count distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Stop once a probability falls below this...
    pub term_tol: f64,
    /// ...and the cumulative mass is at least `1 - mass_tol`.
    pub mass_tol: f64,
    /// Largest support point ever evaluated.
    pub cap: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            term_tol: 1e-12,
            mass_tol: 1e-10,
            cap: 10_000,
        }
    }
}

/// Log-probabilities `log P(X = n)` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    spec: ModelSpec,
    mean: MeanParam,
    log_pmf: Vec<f64>,
}

impl CountDistribution {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn mean_param(&self) -> MeanParam {
        self.mean
    }

    pub fn n_max(&self) -> usize {
        self.log_pmf.len() - 1
    }

    pub fn log_pmf(&self) -> &[f64] {
        &self.log_pmf
    }

    pub fn pmf(&self, n: usize) -> f64 {
        self.log_pmf.get(n).map_or(0.0, |l| l.exp())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.log_pmf.iter().map(|l| l.exp()).collect()
    }

    /// Mass captured by the truncated support.
    pub fn total(&self) -> f64 {
        self.probabilities().iter().sum()
    }

    /// Mean of the truncated pmf.
    pub fn mean(&self) -> f64 {
        self.raw_moment(1)
    }

    pub fn raw_moment(&self, k: i32) -> f64 {
        self.probabilities()
            .iter()
            .enumerate()
            .map(|(n, q)| q * (n as f64).powi(k))
            .sum()
    }

    /// `Σ (n - m)^k P(n)` about the model mean `m`.
    pub fn central_moment(&self, k: i32) -> f64 {
        let m = self.mean.value();
        self.probabilities()
            .iter()
            .enumerate()
            .map(|(n, q)| q * (n as f64 - m).powi(k))
            .sum()
    }

    pub fn variance(&self) -> f64 {
        self.central_moment(2)
    }
}

impl ModelSpec {
    /// `P(X = n)` for `n = 0..=n_max` at mean `m`.
    pub fn pmf(&self, m: f64, n_max: usize) -> Result<CountDistribution> {
        let mean = self.mean(m)?;
        let measure = self.generating_measure(n_max)?;
        Ok(self.pmf_from_measure(mean, &measure))
    }

    /// Evaluates the pmf on a precomputed measure (which need not match `n_max`
    /// of any particular call; its own length is used).
    pub fn pmf_from_measure(&self, mean: MeanParam, measure: &GeneratingMeasure) -> CountDistribution {
        let m = mean.value();
        let u = m / self.p();
        // n (log p + ψ_p(m)) = n (log m - Λ(u)); the p^n of μ* cancels here.
        let slope = m.ln() - self.log_g_scaled(u);
        let phi = self.phi(m).expect("mean already validated");
        let log_pmf = measure
            .log_scaled()
            .iter()
            .enumerate()
            .map(|(n, lm)| lm + n as f64 * slope - phi)
            .collect();
        CountDistribution {
            spec: *self,
            mean,
            log_pmf,
        }
    }

    /// The pmf truncated adaptively under the default [`Truncation`].
    pub fn distribution(&self, m: f64) -> Result<CountDistribution> {
        self.distribution_with(m, Truncation::default())
    }

    /// Evaluates on supports of doubling size until a term drops below
    /// `term_tol` with cumulative mass at least `1 - mass_tol`.
    pub fn distribution_with(&self, m: f64, rule: Truncation) -> Result<CountDistribution> {
        let mean = self.mean(m)?;
        let mut n_max = 32.min(rule.cap);
        loop {
            let measure = self.generating_measure(n_max)?;
            let mut dist = self.pmf_from_measure(mean, &measure);
            let mut cumulative = 0.0;
            for (n, lp) in dist.log_pmf.iter().enumerate() {
                let q = lp.exp();
                cumulative += q;
                if q < rule.term_tol && cumulative >= 1.0 - rule.mass_tol {
                    dist.log_pmf.truncate(n + 1);
                    return Ok(dist);
                }
            }
            if n_max >= rule.cap {
                return Err(Error::TailNotReached { cap: rule.cap });
            }
            n_max = (n_max * 2).min(rule.cap);
        }
    }
}

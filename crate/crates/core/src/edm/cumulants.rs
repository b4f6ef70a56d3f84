//! Cumulants in the mean parameterization.
//!
//! `κ_1 = m`, `κ_2 = V(m)` and `κ_{j+1} = V(m) · dκ_j/dm`. We never expand
//! the closed forms; instead `V` is expanded as a Taylor series around the
//! evaluation point and the operator `f ↦ V f'` is applied to series, losing
//! one order per step.

use super::ModelSpec;
use crate::error::{Error, Result};

impl ModelSpec {
    /// The `j`-th cumulant (`j ≥ 1`) at mean `m`.
    pub fn cumulant(&self, m: f64, j: usize) -> Result<f64> {
        self.check_mean(m)?;
        match j {
            0 => Err(Error::InvalidParameters("cumulant order starts at 1".into())),
            1 => Ok(m),
            _ => {
                let steps = j - 2;
                let v = self.variance_series_at(m, steps)?;
                let mut f = v.clone();
                for _ in 0..steps {
                    let d = f.derivative();
                    f = v.mul(&d, d.order());
                }
                f.coeff(0)
            }
        }
    }

    pub fn skewness(&self, m: f64) -> Result<f64> {
        Ok(self.cumulant(m, 3)? / self.cumulant(m, 2)?.powf(1.5))
    }

    /// `κ_4 / κ_2²`.
    pub fn excess_kurtosis(&self, m: f64) -> Result<f64> {
        Ok(self.cumulant(m, 4)? / self.cumulant(m, 2)?.powi(2))
    }
}

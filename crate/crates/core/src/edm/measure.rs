//! The generating measure `μ*` of an ABM or LM family.
//!
//! For `n ≥ 1`,
//!
//! ```text
//! μ*_n = (1/n!) (d/dm)^{n-1} [ exp(φ_p(m)) φ_p'(m) G_p(m)^n ] at m = 0
//!      = (1/n) [m^{n-1}] exp(φ_p(m)) φ_p'(m) G_p(m)^n
//! ```
//!
//! and `μ*_0 = exp(φ_p(0)) = 1`. The masses scale like `p^n`, so we keep
//! `μ̃_n = μ*_n / p^n` in log form.
//!
//! Two evaluations are provided. [`ModelSpec::extracted_measure`] expands the
//! bracket literally in `u = m/p` and reads off `[u^{n-1}]`. The series of
//! `exp(φ)` and `Ĝ^n` carry alternating signs, so this route loses about
//! `n log 2` bits and is only trusted for small `n`.
//!
//! [`ModelSpec::generating_measure`] evaluates the same coefficients through
//! the inverse series. With `w = e^θ` the mean `u(w)` solves
//! `w u'(w) = V(pu)/p` and the Laplace transform `L(w) = Σ μ*_n w^n`
//! solves `w L' = p u L`. For both families every term of both
//! recurrences is positive, so the error grows only linearly in `n`.
//! The recurrences are run in `z = w / R`, `R` the radius of convergence,
//! which keeps the coefficients of polynomial size.

use super::{Family, ModelSpec};
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingMeasure {
    spec: ModelSpec,
    log_scaled: Vec<f64>,
}

impl GeneratingMeasure {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn n_max(&self) -> usize {
        self.log_scaled.len() - 1
    }

    /// `G_p(0) = p`, the per-atom scale divided out of `μ̃`.
    pub fn g0(&self) -> f64 {
        self.spec.p()
    }

    /// `log μ̃_n` for `n = 0..=n_max`.
    pub fn log_scaled(&self) -> &[f64] {
        &self.log_scaled
    }

    /// `μ̃_n = μ*_n / p^n`.
    pub fn scaled(&self, n: usize) -> f64 {
        self.log_scaled[n].exp()
    }

    /// `log μ*_n`.
    pub fn log_mass(&self, n: usize) -> f64 {
        self.log_scaled[n] + n as f64 * self.spec.p().ln()
    }

    /// `μ*_n`; may overflow to infinity for large `n`.
    pub fn mass(&self, n: usize) -> f64 {
        self.log_mass(n).exp()
    }

    pub fn masses(&self) -> Vec<f64> {
        (0..=self.n_max()).map(|n| self.mass(n)).collect()
    }
}

impl ModelSpec {
    /// `μ*_0, ..., μ*_{n_max}` through the inverse-series recurrences.
    pub fn generating_measure(&self, n_max: usize) -> Result<GeneratingMeasure> {
        let log_p = self.p().ln();
        if self.is_poisson() {
            let mut log_fact = 0.0;
            let log_scaled = (0..=n_max)
                .map(|n| {
                    if n > 0 {
                        log_fact += (n as f64).ln();
                    }
                    -log_fact
                })
                .collect();
            return Ok(GeneratingMeasure { spec: *self, log_scaled });
        }

        let r = self.r() as usize;
        let log_radius = -harmonic(match self.family() {
            Family::Abm => r - 1,
            Family::Lm => r,
        });
        let radius = log_radius.exp();
        // All sequences are coefficients in z = w / R.
        let mut a = vec![0.0; n_max + 1]; // u
        let mut b = vec![0.0; n_max + 1]; // 1 + u, or 1 / (1 - u)
        let mut pows = vec![vec![0.0; n_max + 1]; r + 1]; // b^k
        let mut l = vec![0.0; n_max + 1];
        b[0] = 1.0;
        for pw in pows.iter_mut() {
            pw[0] = 1.0;
        }
        l[0] = 1.0;

        let mut log_scaled = Vec::with_capacity(n_max + 1);
        log_scaled.push(0.0);
        for j in 1..=n_max {
            a[j] = if j == 1 {
                radius
            } else {
                (1..j).map(|k| a[k] * pows[r][j - k]).sum::<f64>() / (j - 1) as f64
            };
            b[j] = match self.family() {
                Family::Abm => a[j],
                Family::Lm => (1..=j).map(|k| a[k] * b[j - k]).sum(),
            };
            for k in 1..=r {
                let (lower, upper) = pows.split_at_mut(k);
                let prev = &lower[k - 1];
                upper[0][j] = (0..=j).map(|i| b[i] * prev[j - i]).sum();
            }
            l[j] = self.p() * (1..=j).map(|k| a[k] * l[j - k]).sum::<f64>() / j as f64;

            let log_mu = l[j].ln() - j as f64 * (log_radius + log_p);
            if !(l[j] > 0.0) || !log_mu.is_finite() || !pows[r][j].is_finite() {
                return Err(Error::MeasureOverflow { n: j });
            }
            log_scaled.push(log_mu);
        }
        Ok(GeneratingMeasure { spec: *self, log_scaled })
    }

    /// `μ*_0, ..., μ*_{n_max}` by literal coefficient extraction of the
    /// bracket above. Cancellation limits this to small `n_max`.
    pub fn extracted_measure(&self, n_max: usize) -> Result<GeneratingMeasure> {
        let mut log_scaled = Vec::with_capacity(n_max + 1);
        log_scaled.push(0.0);
        if n_max == 0 {
            return Ok(GeneratingMeasure { spec: *self, log_scaled });
        }

        let order = n_max - 1;
        let p = self.p();
        let log_p = p.ln();
        let prefactor = self
            .phi_series(order)
            .scale(p)
            .exp(order)
            .mul(&self.phi_prime_series(order), order);
        let g_hat: TruncatedSeries = self.log_g_series(order).exp(order);

        let mut power = g_hat.clone();
        let mut log_scale = 0.0;
        for n in 1..=n_max {
            let c = prefactor.product_coeff(&power, n - 1);
            let log_mu = c.ln() + log_scale - (n - 1) as f64 * log_p - (n as f64).ln();
            if !(c > 0.0) || !log_mu.is_finite() {
                return Err(Error::MeasureOverflow { n });
            }
            log_scaled.push(log_mu);

            if n < n_max {
                power = power.mul(&g_hat, order);
                let norm = power.max_abs();
                if !(norm > 0.0 && norm.is_finite()) {
                    return Err(Error::MeasureOverflow { n: n + 1 });
                }
                power = power.scale(1.0 / norm);
                log_scale += norm.ln();
            }
        }
        Ok(GeneratingMeasure { spec: *self, log_scaled })
    }

    /// Shift `a` such that `μ*_n e^{-a n}` is the generating measure whose
    /// natural parameter space is `(-∞, 0)`. ABM with `r ≥ 2` only.
    fn boundary_shift(&self) -> Result<f64> {
        if self.family() != Family::Abm || self.r() < 2 {
            return Err(Error::UnboundedMeasure(format!(
                "{self}: total mass is finite only for ABM with r >= 2"
            )));
        }
        // sup ψ_p = lim_{m→∞} ψ_p(m) = -H_{r-1}
        Ok(harmonic(self.r() as usize - 1))
    }

    /// `Σ_{n ≤ n_max} μ_n` for the generating measure normalized to have
    /// natural parameter space `(-∞, 0)`; this partial sum tends to
    /// `exp(p/(r-1))`.
    ///
    /// `μ*` itself has parameter space `(-∞, -H_{r-1})` and unbounded mass,
    /// so the sum runs over the exponential shift `μ*_n exp(n H_{r-1})^{-1}`.
    pub fn total_mass(&self, n_max: usize) -> Result<f64> {
        Ok(self.shifted_masses(n_max)?.iter().sum())
    }

    /// [`ModelSpec::total_mass`] plus an estimate of the neglected tail.
    ///
    /// At the boundary the masses decay like `A n^{-β} (1 + B/n)` with
    /// `β = 2 - 1/r`; `A` and `B` are fitted to the terms at `n_max/2` and
    /// `n_max`, and the tail sum is taken by Euler–Maclaurin.
    pub fn total_mass_extrapolated(&self, n_max: usize) -> Result<f64> {
        let terms = self.shifted_masses(n_max)?;
        let partial: f64 = terms.iter().sum();
        if n_max < 8 {
            return Ok(partial);
        }
        let beta = 2.0 - 1.0 / self.r() as f64;
        let (n1, n2) = ((n_max / 2) as f64, n_max as f64);
        let y1 = terms[n_max / 2] * n1.powf(beta);
        let y2 = terms[n_max] * n2.powf(beta);
        // y_i = A (1 + B / n_i)
        let b = (y1 - y2) / (y2 / n2 - y1 / n1);
        let a = y2 / (1.0 + b / n2);
        let tail = a * (zeta_tail(beta, n2) + b * zeta_tail(beta + 1.0, n2));
        Ok(partial + tail)
    }

    fn shifted_masses(&self, n_max: usize) -> Result<Vec<f64>> {
        let shift = self.boundary_shift()?;
        let measure = self.generating_measure(n_max)?;
        Ok((0..=n_max)
            .map(|n| (measure.log_mass(n) - shift * n as f64).exp())
            .collect())
    }
}

fn harmonic(k: usize) -> f64 {
    (1..=k).map(|j| 1.0 / j as f64).sum()
}

/// `Σ_{n > N} n^{-s}` to second Euler–Maclaurin order.
fn zeta_tail(s: f64, n: f64) -> f64 {
    n.powf(1.0 - s) / (s - 1.0) - 0.5 * n.powf(-s) + s / 12.0 * n.powf(-s - 1.0)
}

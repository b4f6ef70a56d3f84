//! Closed forms for `V_p`, `ψ_p`, `φ_p` and `G_p`, plus their Taylor series
//! in the scaled mean `u = m/p`.
//!
//! Both classes satisfy `V_p(m) = p V_1(m/p)`, so `ψ_p(m) = ψ_1(u)` and
//! `φ_p(m) = p φ_1(u)`. We write `G_p(m) = m exp(-ψ_p(m)) = p exp(Λ(u))`; the
//! exponent `Λ` is the one quantity both `ψ` and `G` are built from:
//!
//! * ABM: `Λ(u) = log(1+u) + Σ_{j=1}^{r-1} (1 - (1+u)^{-j}) / j`
//! * LM:  `Λ(u) = -Σ_{i=1}^{r} (-1)^i C(r,i) u^i / i = Σ_{k=1}^{r} (1 - (1-u)^k) / k`
//!
//! and `ψ_p(m) = log u - Λ(u)`. The second LM form has no alternating signs
//! and is the one evaluated.

use super::{Family, ModelSpec};
use crate::error::Result;
use crate::series::TruncatedSeries;

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `1 - (1+u)^{-k}` without cancellation for small `u`.
fn one_minus_inv_pow(u: f64, k: f64) -> f64 {
    -(-k * u.ln_1p()).exp_m1()
}

impl ModelSpec {
    pub(crate) fn is_poisson(&self) -> bool {
        self.r == 0
    }

    /// `V_p(m)`.
    pub fn variance(&self, m: f64) -> Result<f64> {
        self.check_mean(m)?;
        let u = m / self.p;
        let r = self.r as i32;
        Ok(match self.family {
            Family::Abm => m * (1.0 + u).powi(r),
            Family::Lm => m / (1.0 - u).powi(r),
        })
    }

    /// `Λ(u)`, so that `G_p(m) = p exp(Λ(m/p))`.
    pub(crate) fn log_g_scaled(&self, u: f64) -> f64 {
        if self.is_poisson() {
            return 0.0;
        }
        match self.family {
            Family::Abm => {
                let tail: f64 = (1..self.r)
                    .map(|j| one_minus_inv_pow(u, j as f64) / j as f64)
                    .sum();
                u.ln_1p() + tail
            }
            Family::Lm => (1..=self.r)
                .map(|k| -(k as f64 * (-u).ln_1p()).exp_m1() / k as f64)
                .sum(),
        }
    }

    /// The primitive `ψ_p` of `1/V_p`.
    pub fn psi(&self, m: f64) -> Result<f64> {
        self.check_mean(m)?;
        let u = m / self.p;
        Ok(u.ln() - self.log_g_scaled(u))
    }

    /// The primitive `φ_p` of `m/V_p`, with `φ_p(0) = 0`.
    pub fn phi(&self, m: f64) -> Result<f64> {
        self.check_mean_or_zero(m)?;
        let p = self.p;
        let u = m / p;
        if self.is_poisson() {
            return Ok(m);
        }
        Ok(match self.family {
            Family::Abm if self.r == 1 => p * u.ln_1p(),
            Family::Abm => {
                let k = (self.r - 1) as f64;
                p / k * one_minus_inv_pow(u, k)
            }
            Family::Lm => {
                let k = (self.r + 1) as f64;
                p / k * -(k * (-u).ln_1p()).exp_m1()
            }
        })
    }

    /// `G_p(m) = m exp(-ψ_p(m))`, extended to `m = 0` by its limit `p`.
    pub fn g_func(&self, m: f64) -> Result<f64> {
        self.check_mean_or_zero(m)?;
        Ok(self.p * self.log_g_scaled(m / self.p).exp())
    }

    /// Probability of zero, `exp(-φ_p(m))`.
    pub fn zero_prob(&self, m: f64) -> Result<f64> {
        self.check_mean(m)?;
        Ok((-self.phi(m)?).exp())
    }

    /// Taylor series of `φ_1(u)` at `u = 0`.
    pub(crate) fn phi_series(&self, n: usize) -> TruncatedSeries {
        if self.is_poisson() {
            return TruncatedSeries::variable(n);
        }
        let mut s = match self.family {
            Family::Abm if self.r == 1 => log1p_series(n),
            Family::Abm => {
                let k = (self.r - 1) as f64;
                TruncatedSeries::binomial(-k, n).scale(-1.0 / k)
            }
            Family::Lm => {
                let k = (self.r + 1) as f64;
                TruncatedSeries::binomial(k, n).dilate(-1.0).scale(-1.0 / k)
            }
        }
        .into_coeffs();
        s[0] = 0.0;
        TruncatedSeries::new(s)
    }

    /// Taylor series of `φ_1'(u) = u / V_1(u)`.
    pub(crate) fn phi_prime_series(&self, n: usize) -> TruncatedSeries {
        let r = self.r as f64;
        match self.family {
            Family::Abm => TruncatedSeries::binomial(-r, n),
            Family::Lm => TruncatedSeries::binomial(r, n).dilate(-1.0),
        }
    }

    /// Taylor series of `Λ(u) = log(G_p(pu) / p)`.
    pub(crate) fn log_g_series(&self, n: usize) -> TruncatedSeries {
        if self.is_poisson() {
            return TruncatedSeries::zero(n);
        }
        match self.family {
            Family::Abm => {
                let mut acc = log1p_series(n).into_coeffs();
                for j in 1..self.r {
                    let b = TruncatedSeries::binomial(-(j as f64), n);
                    for (k, c) in b.coeffs().iter().enumerate().skip(1) {
                        acc[k] -= c / j as f64;
                    }
                }
                TruncatedSeries::new(acc)
            }
            Family::Lm => TruncatedSeries::from_fn(n, |i| {
                if i == 0 || i as u32 > self.r {
                    0.0
                } else {
                    let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
                    sign * binom(self.r, i as u32) / i as f64
                }
            }),
        }
    }

    /// Taylor series of `t -> V_p(m + t)` at `t = 0`.
    pub(crate) fn variance_series_at(&self, m: f64, n: usize) -> Result<TruncatedSeries> {
        let v_m = self.variance(m)?;
        let r = self.r as f64;
        let shape = match self.family {
            Family::Abm => TruncatedSeries::binomial(r, n).dilate(1.0 / (m + self.p)),
            Family::Lm => TruncatedSeries::binomial(-r, n).dilate(-1.0 / (self.p - m)),
        };
        // V(m+t) = (m + t) · [V(m)/m] · shape(t)
        let linear = TruncatedSeries::new(vec![1.0, 1.0 / m]);
        Ok(shape.mul(&linear, n).scale(v_m))
    }
}

fn log1p_series(n: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(n, |k| match k {
        0 => 0.0,
        k if k % 2 == 1 => 1.0 / k as f64,
        k => -1.0 / k as f64,
    })
}

//! An independent route to the LM generating measure.
//!
//! For `V(m) = m / (1 - m)^r` one has `θ = log m - P(m)` with
//! `P(m) = -Σ_k (-r)_k m^k / (k! k)`, so `m = w e^{P(m)}` for `w = e^θ` and
//! Lagrange inversion gives the cumulant transform as `Σ ν(n) w^n` with
//!
//! ```text
//! ν(n) = (1 / (n! n)) (d/dm)^{n-1} e^{n P(m)} at m = 0
//!      = [m^{n-1}] e^{n P(m)} / n².
//! ```
//!
//! The dispersion-`p` member is generated by the convolution exponential
//! `e^{pν} = δ_0 + Σ_k p^k ν^{*k} / k!`. Nothing here shares code with the
//! coefficient-extraction route in [`crate::edm`], which makes it a useful
//! cross-check. For `r = 2` the derivatives also have a closed form in
//! physicists' Hermite polynomials.

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Largest support point this module evaluates.
pub const MAX_N: usize = 64;

/// `ν(1), ..., ν(n_max)` for the LM power `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct NuMeasure {
    r: u32,
    values: Vec<f64>,
}

impl NuMeasure {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// `ν(n)` for `n ≥ 1`; there is no atom at zero.
    pub fn get(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.values[n - 1]
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_r(r: u32) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidParameters("the ν measure needs r >= 1".into()));
    }
    Ok(())
}

fn check_n(n_max: usize) -> Result<()> {
    if n_max > MAX_N {
        return Err(Error::InvalidParameters(format!(
            "n_max = {n_max} exceeds the validation cap {MAX_N}"
        )));
    }
    Ok(())
}

/// Series of `P(m)`, straight from the Pochhammer definition.
pub fn p_series(r: u32, n: usize) -> Result<TruncatedSeries> {
    check_r(r)?;
    let rf = r as f64;
    // (-r)_k / k!, built up one factor at a time
    let mut poch_over_fact = 1.0;
    Ok(TruncatedSeries::from_fn(n, |k| {
        if k == 0 {
            return 0.0;
        }
        poch_over_fact *= (-rf + (k - 1) as f64) / k as f64;
        -poch_over_fact / k as f64
    }))
}

pub fn nu_measure(r: u32, n_max: usize) -> Result<NuMeasure> {
    check_n(n_max)?;
    let values = (1..=n_max)
        .map(|n| {
            let order = n - 1;
            let p = p_series(r, order)?;
            let c = p.scale(n as f64).exp(order).coeff(order)?;
            Ok(c / (n * n) as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NuMeasure { r, values })
}

/// Physicists' Hermite polynomial `H_k(x)` by the three-term recurrence.
pub fn hermite(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if k == 0 {
        return prev;
    }
    for j in 1..k {
        let next = 2.0 * x * cur - 2.0 * j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `ν(n)` for `r = 2` through `H_{n-1}(√(2n)) (n/2)^{(n-1)/2} / (n! n)`.
pub fn hermite_nu(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameters("hermite_nu is defined for n >= 1".into()));
    }
    let nf = n as f64;
    let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    let scale = ((nf - 1.0) / 2.0 * (nf / 2.0).ln() - log_fact - nf.ln()).exp();
    Ok(hermite(n - 1, (2.0 * nf).sqrt()) * scale)
}

/// `e^{pν}` on `0..=n_max`: `δ_0 + Σ_k p^k ν^{*k} / k!`.
pub fn conv_exponential(nu: &NuMeasure, p: f64, n_max: usize) -> Result<Vec<f64>> {
    check_n(n_max)?;
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameters(format!("p must be positive, got {p}")));
    }
    if nu.n_max() < n_max {
        return Err(Error::InvalidParameters(format!(
            "ν is known up to {}, need {n_max}",
            nu.n_max()
        )));
    }
    let base: Vec<f64> = (0..=n_max).map(|n| nu.get(n)).collect();
    let mut out = vec![0.0; n_max + 1];
    out[0] = 1.0;
    // term_k = p^k ν^{*k} / k!, vanishing below index k
    let mut term = base.iter().map(|v| p * v).collect::<Vec<_>>();
    for k in 1..=n_max {
        for (o, t) in out.iter_mut().zip(&term) {
            *o += t;
        }
        if k == n_max {
            break;
        }
        let mut next = vec![0.0; n_max + 1];
        for i in k..=n_max {
            if term[i] == 0.0 {
                continue;
            }
            for j in 1..=(n_max - i) {
                next[i + j] += term[i] * base[j];
            }
        }
        let f = p / (k + 1) as f64;
        term = next.into_iter().map(|x| x * f).collect();
    }
    Ok(out)
}

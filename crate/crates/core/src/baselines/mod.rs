//! Competing count models: Poisson, negative binomial, Poisson–inverse
//! Gaussian, discrete Lindley, new logarithmic, Poisson–Lindley–Beta prime,
//! geometric discrete Pareto and Bell–Touchard.

pub mod quadrature;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which baseline, without parameters. Tokens match the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineModel {
    Poisson,
    Nb,
    Pig,
    Dld,
    Nld,
    Plb,
    Gdp,
    Btd,
}

impl BaselineModel {
    pub const ALL: [BaselineModel; 8] = [
        BaselineModel::Poisson,
        BaselineModel::Nb,
        BaselineModel::Pig,
        BaselineModel::Dld,
        BaselineModel::Nld,
        BaselineModel::Plb,
        BaselineModel::Gdp,
        BaselineModel::Btd,
    ];

    /// The two-parameter competitors compared by default.
    pub const DEFAULT_COMPARISON: [BaselineModel; 5] = [
        BaselineModel::Pig,
        BaselineModel::Nld,
        BaselineModel::Plb,
        BaselineModel::Gdp,
        BaselineModel::Btd,
    ];

    pub fn token(self) -> &'static str {
        match self {
            BaselineModel::Poisson => "poisson",
            BaselineModel::Nb => "nb",
            BaselineModel::Pig => "pig",
            BaselineModel::Dld => "dld",
            BaselineModel::Nld => "nld",
            BaselineModel::Plb => "plb",
            BaselineModel::Gdp => "gdp",
            BaselineModel::Btd => "btd",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BaselineModel::Poisson => "Poisson",
            BaselineModel::Nb => "NB",
            BaselineModel::Pig => "PIG",
            BaselineModel::Dld => "DLD",
            BaselineModel::Nld => "NLD",
            BaselineModel::Plb => "PLB",
            BaselineModel::Gdp => "GDP",
            BaselineModel::Btd => "BTD",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            BaselineModel::Poisson => &["lambda"],
            BaselineModel::Nb => &["size", "prob"],
            BaselineModel::Pig => &["beta", "mu"],
            BaselineModel::Dld => &["lambda"],
            BaselineModel::Nld => &["alpha", "theta"],
            BaselineModel::Plb => &["alpha", "beta"],
            BaselineModel::Gdp => &["q", "alpha"],
            BaselineModel::Btd => &["alpha", "theta"],
        }
    }

    pub fn n_params(self) -> usize {
        self.param_names().len()
    }
}

impl fmt::Display for BaselineModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BaselineModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|m| m.token() == t)
            .ok_or_else(|| Error::InvalidModel(format!("unknown baseline `{t}`")))
    }
}

/// A baseline with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum BaselineSpec {
    Poisson { lambda: f64 },
    Nb { size: f64, prob: f64 },
    /// Poisson mixed over an inverse Gaussian with mean `mu` and shape `mu²/beta`.
    Pig { beta: f64, mu: f64 },
    Dld { lambda: f64 },
    Nld { alpha: f64, theta: f64 },
    Plb { alpha: f64, beta: f64 },
    Gdp { q: f64, alpha: f64 },
    Btd { alpha: f64, theta: f64 },
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("{name} must be positive, got {x}")))
    }
}

fn unit_open(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("{name} must lie in (0, 1), got {x}")))
    }
}

impl BaselineSpec {
    /// Builds and validates a spec from parameters in [`BaselineModel::param_names`] order.
    pub fn from_params(model: BaselineModel, params: &[f64]) -> Result<Self> {
        if params.len() != model.n_params() {
            return Err(Error::InvalidParameters(format!(
                "{model} takes {} parameters, got {}",
                model.n_params(),
                params.len()
            )));
        }
        let (a, b) = (params[0], params.get(1).copied().unwrap_or(f64::NAN));
        let spec = match model {
            BaselineModel::Poisson => BaselineSpec::Poisson { lambda: a },
            BaselineModel::Nb => BaselineSpec::Nb { size: a, prob: b },
            BaselineModel::Pig => BaselineSpec::Pig { beta: a, mu: b },
            BaselineModel::Dld => BaselineSpec::Dld { lambda: a },
            BaselineModel::Nld => BaselineSpec::Nld { alpha: a, theta: b },
            BaselineModel::Plb => BaselineSpec::Plb { alpha: a, beta: b },
            BaselineModel::Gdp => BaselineSpec::Gdp { q: a, alpha: b },
            BaselineModel::Btd => BaselineSpec::Btd { alpha: a, theta: b },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn model(&self) -> BaselineModel {
        match self {
            BaselineSpec::Poisson { .. } => BaselineModel::Poisson,
            BaselineSpec::Nb { .. } => BaselineModel::Nb,
            BaselineSpec::Pig { .. } => BaselineModel::Pig,
            BaselineSpec::Dld { .. } => BaselineModel::Dld,
            BaselineSpec::Nld { .. } => BaselineModel::Nld,
            BaselineSpec::Plb { .. } => BaselineModel::Plb,
            BaselineSpec::Gdp { .. } => BaselineModel::Gdp,
            BaselineSpec::Btd { .. } => BaselineModel::Btd,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            BaselineSpec::Poisson { lambda } | BaselineSpec::Dld { lambda } => vec![lambda],
            BaselineSpec::Nb { size, prob } => vec![size, prob],
            BaselineSpec::Pig { beta, mu } => vec![beta, mu],
            BaselineSpec::Nld { alpha, theta } | BaselineSpec::Btd { alpha, theta } => vec![alpha, theta],
            BaselineSpec::Plb { alpha, beta } => vec![alpha, beta],
            BaselineSpec::Gdp { q, alpha } => vec![q, alpha],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BaselineSpec::Poisson { lambda } => positive("lambda", lambda),
            BaselineSpec::Nb { size, prob } => {
                positive("size", size)?;
                unit_open("prob", prob)
            }
            BaselineSpec::Pig { beta, mu } => {
                positive("beta", beta)?;
                positive("mu", mu)
            }
            BaselineSpec::Dld { lambda } => unit_open("lambda", lambda),
            BaselineSpec::Nld { alpha, theta } => {
                if !(alpha < 1.0 && alpha != 0.0 && alpha.is_finite()) {
                    return Err(Error::InvalidParameters(format!(
                        "alpha must be below 1 and nonzero, got {alpha}"
                    )));
                }
                unit_open("theta", theta)
            }
            BaselineSpec::Plb { alpha, beta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)
            }
            BaselineSpec::Gdp { q, alpha } => {
                if !(q > 0.0 && q <= 1.0) {
                    return Err(Error::InvalidParameters(format!("q must lie in (0, 1], got {q}")));
                }
                if !(alpha >= 0.0 && alpha.is_finite()) || (q == 1.0 && alpha == 0.0) {
                    return Err(Error::InvalidParameters(format!(
                        "alpha must be non-negative (positive when q = 1), got {alpha}"
                    )));
                }
                Ok(())
            }
            BaselineSpec::Btd { alpha, theta } => {
                positive("alpha", alpha)?;
                positive("theta", theta)
            }
        }
    }

    /// `P(X = n)` for `n = 0..=n_max`.
    pub fn pmf(&self, n_max: usize) -> Result<Vec<f64>> {
        baseline_pmf(self, n_max)
    }
}

impl fmt::Display for BaselineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let model = self.model();
        write!(f, "{model}(")?;
        for (i, (name, v)) in model.param_names().iter().zip(self.params()).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={v}")?;
        }
        f.write_str(")")
    }
}

/// `log Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Touchard polynomial `T_n(θ)` by `T_{k+1} = θ Σ_j C(k, j) T_j`.
pub fn touchard(n: usize, theta: f64) -> f64 {
    let mut t = vec![1.0];
    for k in 0..n {
        let mut binom = 1.0;
        let mut acc = 0.0;
        for (j, tj) in t.iter().enumerate() {
            acc += binom * tj;
            binom *= (k - j) as f64 / (j + 1) as f64;
        }
        t.push(theta * acc);
    }
    t[n]
}

/// `P(X = n)` for `n = 0..=n_max`.
pub fn baseline_pmf(spec: &BaselineSpec, n_max: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    let ns = 0..=n_max;
    Ok(match *spec {
        BaselineSpec::Poisson { lambda } => {
            let mut q = (-lambda).exp();
            ns.map(|n| {
                if n > 0 {
                    q *= lambda / n as f64;
                }
                q
            })
            .collect()
        }
        BaselineSpec::Nb { size, prob } => {
            let mut q = prob.powf(size);
            ns.map(|n| {
                if n > 0 {
                    q *= (size + (n - 1) as f64) / n as f64 * (1.0 - prob);
                }
                q
            })
            .collect()
        }
        BaselineSpec::Pig { beta, mu } => ns.map(|n| pig_term(beta, mu, n)).collect(),
        BaselineSpec::Dld { lambda } => {
            let ll = lambda.ln();
            ns.map(|n| {
                let nf = n as f64;
                lambda.powi(n as i32) / (1.0 - ll)
                    * (lambda * ll + (1.0 - lambda) * (1.0 - (nf + 1.0) * ll))
            })
            .collect()
        }
        BaselineSpec::Nld { alpha, theta } => {
            let denom = (-alpha).ln_1p();
            ns.map(|n| {
                let a = (-alpha * theta.powi(n as i32)).ln_1p();
                let b = (-alpha * theta.powi(n as i32 + 1)).ln_1p();
                (a - b) / denom
            })
            .collect()
        }
        BaselineSpec::Plb { alpha, beta } => {
            let head = alpha.ln() + alpha.ln_1p() + log_gamma(alpha + beta) - log_gamma(beta);
            ns.map(|n| {
                let nf = n as f64;
                let lg = log_gamma(beta + nf) - log_gamma(alpha + beta + nf + 3.0);
                (head + lg).exp() * ((beta + nf) * (2.0 + nf) + alpha + 2.0)
            })
            .collect()
        }
        BaselineSpec::Gdp { q, alpha } => ns
            .map(|n| {
                let nf = n as f64;
                let a = nf * q.ln() - alpha * (nf + 1.0).ln();
                let b = (nf + 1.0) * q.ln() - alpha * (nf + 2.0).ln();
                // e^a - e^b with a > b
                a.exp() * -(b - a).exp_m1()
            })
            .collect(),
        BaselineSpec::Btd { alpha, theta } => {
            // c_n = α^n T_n(θ) / n!, c_{n+1} = αθ/(n+1) Σ_k c_k α^{n-k}/(n-k)!
            let mut c: Vec<f64> = vec![1.0];
            let mut inv = vec![1.0]; // α^j / j!
            for n in 0..n_max {
                inv.push(inv[n] * alpha / (n + 1) as f64);
                let acc: f64 = (0..=n).map(|k| c[k] * inv[n - k]).sum();
                c.push(alpha * theta / (n + 1) as f64 * acc);
            }
            let scale = (-theta * alpha.exp_m1()).exp();
            c.into_iter().map(|x| x * scale).collect()
        }
    })
}

/// `∫ e^{-x} x^n / n! · IG(x; β, μ) dx` by adaptive quadrature.
fn pig_term(beta: f64, mu: f64, n: usize) -> f64 {
    let nf = n as f64;
    let head = mu.ln() - 0.5 * (2.0 * std::f64::consts::PI * beta).ln() - log_gamma(nf + 1.0);
    let integrand = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let d = x - mu;
        (head - x + (nf - 1.5) * x.ln() - d * d / (2.0 * beta * x)).exp()
    };
    quadrature::integrate_half_line(integrand, 0.0, 1e-10).value
}

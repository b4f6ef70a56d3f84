//! The ABM and LM exponential dispersion models for counts.
//!
//! Both classes are indexed by a power `r` and a dispersion `p > 0`:
//!
//! * ABM: `V_p(m) = m (1 + m/p)^r` on `m > 0`;
//! * LM:  `V_p(m) = m / (1 - m/p)^r` on `0 < m < p`.
//!
//! `r = 0` is the Poisson family in both. Everything here works in the mean
//! parameterization `P(X = n) = μ*_n exp(n ψ_p(m) - φ_p(m))`, where `ψ_p` and
//! `φ_p` are the primitives of `1/V_p` and `m/V_p` normalized so that
//! `φ_p(0) = 0` and `m exp(-ψ_p(m)) -> p` as `m -> 0`.

mod cumulants;
mod distribution;
mod functions;
mod measure;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use distribution::{CountDistribution, Truncation};
pub use measure::GeneratingMeasure;

/// Largest power accepted by [`ModelSpec::new`].
pub const DEFAULT_R_MAX: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Abm,
    Lm,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Abm => "abm",
            Family::Lm => "lm",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Abm => f.write_str("ABM"),
            Family::Lm => f.write_str("LM"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "abm" => Ok(Family::Abm),
            "lm" => Ok(Family::Lm),
            other => Err(Error::InvalidModel(format!("unknown family `{other}`"))),
        }
    }
}

/// One member of an EDM class: family, power `r` and dispersion `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    family: Family,
    r: u32,
    p: f64,
}

impl ModelSpec {
    pub fn new(family: Family, r: u32, p: f64) -> Result<Self> {
        Self::with_r_max(family, r, p, DEFAULT_R_MAX)
    }

    /// Like [`ModelSpec::new`] with a caller-chosen cap on `r`.
    pub fn with_r_max(family: Family, r: u32, p: f64, r_max: u32) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidModel(format!(
                "dispersion p must be positive and finite, got {p}"
            )));
        }
        if r > r_max {
            return Err(Error::InvalidModel(format!("power r = {r} exceeds r_max = {r_max}")));
        }
        Ok(Self { family, r, p })
    }

    pub fn abm(r: u32, p: f64) -> Result<Self> {
        Self::new(Family::Abm, r, p)
    }

    pub fn lm(r: u32, p: f64) -> Result<Self> {
        Self::new(Family::Lm, r, p)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// The open mean domain: `(0, ∞)` for ABM and Poisson, `(0, p)` for LM.
    pub fn mean_domain(&self) -> MeanDomain {
        let hi = match self.family {
            Family::Lm if self.r > 0 => self.p,
            _ => f64::INFINITY,
        };
        MeanDomain { lo: 0.0, hi }
    }

    /// Validates `m` against the mean domain.
    pub fn mean(&self, m: f64) -> Result<MeanParam> {
        let dom = self.mean_domain();
        if dom.contains(m) {
            Ok(MeanParam(m))
        } else {
            Err(dom.out_of_domain(m))
        }
    }

    pub(crate) fn check_mean(&self, m: f64) -> Result<()> {
        self.mean(m).map(|_| ())
    }

    /// Accepts the lower endpoint 0 as well, for functions with an analytic
    /// limit there.
    pub(crate) fn check_mean_or_zero(&self, m: f64) -> Result<()> {
        if m == 0.0 {
            Ok(())
        } else {
            self.check_mean(m)
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(r={}, p={})", self.family, self.r, self.p)
    }
}

/// Open interval `(lo, hi)` of admissible means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanDomain {
    pub lo: f64,
    pub hi: f64,
}

impl MeanDomain {
    pub fn contains(&self, m: f64) -> bool {
        m > self.lo && m < self.hi
    }

    fn out_of_domain(&self, m: f64) -> Error {
        Error::MeanOutOfDomain {
            m,
            lo: self.lo,
            hi: self.hi,
        }
    }
}

/// A mean already checked against its model's mean domain.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct MeanParam(f64);

impl MeanParam {
    pub fn value(self) -> f64 {
        self.0
    }
}

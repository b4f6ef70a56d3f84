//! Cross-module oracle suite behind `edm-counts validate`.

use serde::Serialize;

use edm_counts::baselines::{baseline_pmf, log_gamma};
use edm_counts::lagrange::{conv_exponential, hermite_nu, nu_measure};
use edm_counts::series::TruncatedSeries;
use edm_counts::{fit, gof, BaselineSpec, Error, Family, FrequencyTable, ModelSpec};

use crate::output::Grid;

pub const MODULES: [&str; 6] = ["series", "edm_core", "lagrange", "baselines", "fit", "gof"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub module: &'static str,
    pub check: String,
    pub scale: Scale,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// A sample value, or the error that stopped the check.
    pub note: String,
}

/// Computed values next to the values they must reproduce.
struct Pairs {
    got: Vec<f64>,
    want: Vec<f64>,
    note: String,
}

impl Pairs {
    fn new() -> Self {
        Self { got: Vec::new(), want: Vec::new(), note: String::new() }
    }

    fn push(&mut self, got: f64, want: f64) {
        self.got.push(got);
        self.want.push(want);
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

type Oracle = fn() -> Result<Pairs, Error>;

struct Spec {
    module: &'static str,
    check: &'static str,
    scale: Scale,
    tolerance: f64,
    oracle: Oracle,
}

const SUITE: [Spec; 14] = [
    Spec { module: "series", check: "log inverts exp", scale: Scale::Absolute, tolerance: 1e-13, oracle: series_log_exp },
    Spec { module: "edm_core", check: "r = 0 is Poisson", scale: Scale::Absolute, tolerance: 1e-12, oracle: poisson_reduction },
    Spec { module: "edm_core", check: "ABM r = 1 is negative binomial", scale: Scale::Relative, tolerance: 1e-10, oracle: nb_reduction },
    Spec { module: "edm_core", check: "pmf sums to one", scale: Scale::Absolute, tolerance: 1e-8, oracle: normalization },
    Spec { module: "edm_core", check: "reversion matches coefficient extraction", scale: Scale::Relative, tolerance: 1e-9, oracle: measure_routes },
    Spec { module: "edm_core", check: "ABM total mass exp(p/(r-1))", scale: Scale::Absolute, tolerance: 1e-3, oracle: total_mass },
    Spec { module: "lagrange", check: "r = 1 measure n^(n-2)/n!", scale: Scale::Relative, tolerance: 1e-12, oracle: cayley },
    Spec { module: "lagrange", check: "Hermite form of the r = 2 measure", scale: Scale::Relative, tolerance: 1e-10, oracle: hermite },
    Spec { module: "lagrange", check: "convolution exponential equals LM measure", scale: Scale::Relative, tolerance: 1e-9, oracle: convolution },
    Spec { module: "baselines", check: "NLD, GDP and BTD sum to one", scale: Scale::Absolute, tolerance: 1e-9, oracle: baseline_mass },
    Spec { module: "fit", check: "Zaire estimates of p", scale: Scale::Relative, tolerance: 1e-3, oracle: zaire_fits },
    Spec { module: "gof", check: "Q(1, x) = exp(-x)", scale: Scale::Relative, tolerance: 1e-12, oracle: gamma_exponential },
    Spec { module: "gof", check: "Q(1.5, 2)", scale: Scale::Relative, tolerance: 1e-5, oracle: gamma_value },
    Spec { module: "gof", check: "Zaire descriptive statistics", scale: Scale::Relative, tolerance: 1e-5, oracle: descriptive },
];

/// Runs every check. Values computed in `perturb` are shifted by `1e-3`
/// relative before comparison, which must make that module fail.
pub fn run(perturb: Option<&str>) -> Vec<CheckResult> {
    SUITE
        .iter()
        .map(|s| {
            let mut res = CheckResult {
                module: s.module,
                check: s.check.to_string(),
                scale: s.scale,
                max_deviation: f64::NAN,
                tolerance: s.tolerance,
                passed: false,
                note: String::new(),
            };
            match (s.oracle)() {
                Err(e) => res.note = e.to_string(),
                Ok(pairs) => {
                    let shift = if perturb == Some(s.module) { 1e-3 } else { 0.0 };
                    let dev = pairs
                        .got
                        .iter()
                        .zip(&pairs.want)
                        .map(|(&g, &w)| {
                            let g = g * (1.0 + shift) + shift;
                            match s.scale {
                                Scale::Absolute => (g - w).abs(),
                                Scale::Relative => ((g - w) / w).abs(),
                            }
                        })
                        .fold(0.0, f64::max);
                    res.max_deviation = dev;
                    res.passed = dev <= s.tolerance;
                    res.note = pairs.note;
                }
            }
            res
        })
        .collect()
}

pub fn grid(results: &[CheckResult]) -> Grid {
    let mut g = Grid::new(["status", "module", "check", "max_dev", "tolerance", "note"]);
    for r in results {
        g.push(vec![
            if r.passed { "PASS" } else { "FAIL" }.to_string(),
            r.module.to_string(),
            r.check.clone(),
            format!("{:.2e}", r.max_deviation),
            format!("{:.0e} {}", r.tolerance, if r.scale == Scale::Absolute { "abs" } else { "rel" }),
            r.note.clone(),
        ]);
    }
    g
}

fn series_log_exp() -> Result<Pairs, Error> {
    let s = TruncatedSeries::new(vec![0.3, -1.0, 0.5, 2.0, -0.25, 0.1, 0.0, 1.5]);
    let back = s.exp(7).log(7)?;
    let mut p = Pairs::new();
    for (g, w) in back.coeffs().iter().zip(s.coeffs()) {
        p.push(*g, *w);
    }
    Ok(p)
}

fn poisson_reduction() -> Result<Pairs, Error> {
    let mut p = Pairs::new();
    for family in [Family::Abm, Family::Lm] {
        let spec = ModelSpec::new(family, 0, 1.0)?;
        for m in [0.1, 0.5, 1.0, 5.0] {
            let d = spec.pmf(m, 30)?;
            for n in 0..=30 {
                p.push(d.pmf(n), (n as f64 * m.ln() - m - log_gamma(n as f64 + 1.0)).exp());
            }
        }
    }
    Ok(p)
}

fn nb_reduction() -> Result<Pairs, Error> {
    let mut out = Pairs::new();
    for p in [0.2166, 1.0, 4.0] {
        for m in [0.0865, 0.7, 3.0] {
            let d = ModelSpec::abm(1, p)?.pmf(m, 30)?;
            for n in 0..=30 {
                let nf = n as f64;
                let lw = log_gamma(p + nf) - log_gamma(p) - log_gamma(nf + 1.0)
                    + p * (p / (p + m)).ln()
                    + nf * (m / (p + m)).ln();
                out.push(d.pmf(n), lw.exp());
            }
        }
    }
    Ok(out)
}

fn normalization() -> Result<Pairs, Error> {
    let mut out = Pairs::new();
    for family in [Family::Abm, Family::Lm] {
        for r in [0, 1, 2, 5, 10] {
            for p in [0.25, 1.0, 4.0] {
                let spec = ModelSpec::new(family, r, p)?;
                for m in [0.05 * p, 0.2 * p] {
                    out.push(spec.distribution(m)?.total(), 1.0);
                }
            }
        }
    }
    Ok(out)
}

fn measure_routes() -> Result<Pairs, Error> {
    let mut out = Pairs::new();
    for family in [Family::Abm, Family::Lm] {
        for r in [1, 3, 6] {
            let spec = ModelSpec::new(family, r, 1.0)?;
            let a = spec.generating_measure(20)?;
            let b = spec.extracted_measure(20)?;
            for n in 0..=20 {
                out.push(a.mass(n), b.mass(n));
            }
        }
    }
    Ok(out)
}

fn total_mass() -> Result<Pairs, Error> {
    let mut out = Pairs::new();
    for (r, p) in [(2, 0.5), (2, 1.0), (3, 1.0)] {
        let got = ModelSpec::abm(r, p)?.total_mass_extrapolated(512)?;
        out.push(got, (p / (r as f64 - 1.0)).exp());
    }
    let last = out.got[2];
    Ok(out.note(format!("r=3, p=1: {last:.6} vs e^(1/2) = {:.6}", 0.5f64.exp())))
}

fn cayley() -> Result<Pairs, Error> {
    let nu = nu_measure(1, 15)?;
    let mut out = Pairs::new();
    for n in 1..=15 {
        let nf = n as f64;
        out.push(nu.get(n), ((nf - 2.0) * nf.ln() - log_gamma(nf + 1.0)).exp());
    }
    Ok(out.note(format!("nu(3) = {} = 3^1/3!", nu.get(3))))
}

fn hermite() -> Result<Pairs, Error> {
    let nu = nu_measure(2, 12)?;
    let mut out = Pairs::new();
    for n in 1..=12 {
        out.push(hermite_nu(n)?, nu.get(n));
    }
    Ok(out)
}

fn convolution() -> Result<Pairs, Error> {
    let mut out = Pairs::new();
    for r in [1, 2] {
        let nu = nu_measure(r, 15)?;
        for p in [0.5, 1.0, 2.0] {
            let lhs = conv_exponential(&nu, p, 15)?;
            let mu = ModelSpec::lm(r, p)?.generating_measure(15)?;
            for (n, v) in lhs.iter().enumerate() {
                out.push(*v, mu.mass(n));
            }
        }
    }
    Ok(out)
}

fn baseline_mass() -> Result<Pairs, Error> {
    let specs = [
        (BaselineSpec::Nld { alpha: 0.95, theta: 0.25 }, 400),
        (BaselineSpec::Nld { alpha: -2.0, theta: 0.3 }, 400),
        (BaselineSpec::Gdp { q: 0.58, alpha: 3.04 }, 2000),
        (BaselineSpec::Gdp { q: 0.9, alpha: 0.5 }, 2000),
        (BaselineSpec::Btd { alpha: 0.35, theta: 0.18 }, 200),
        (BaselineSpec::Btd { alpha: 0.5, theta: 3.0 }, 200),
    ];
    let mut out = Pairs::new();
    for (s, n) in specs {
        out.push(baseline_pmf(&s, n)?.iter().sum(), 1.0);
    }
    Ok(out)
}

fn zaire_fits() -> Result<Pairs, Error> {
    let data = FrequencyTable::zaire_1974();
    let mut out = Pairs::new();
    for (family, r, want) in [(Family::Abm, 10, 2.415385), (Family::Lm, 4, 1.009018), (Family::Abm, 1, 0.2166)] {
        out.push(fit::fit_mle(family, r, &data)?.model_params()[0], want);
    }
    Ok(out)
}

fn gamma_exponential() -> Result<Pairs, Error> {
    let mut out = Pairs::new();
    for x in [0.01, 0.5, 1.0, 4.0, 20.0] {
        out.push(gof::gamma_q(1.0, x), (-x).exp());
    }
    Ok(out)
}

fn gamma_value() -> Result<Pairs, Error> {
    let mut out = Pairs::new();
    out.push(gof::gamma_q(1.5, 2.0), 0.261464);
    Ok(out)
}

fn descriptive() -> Result<Pairs, Error> {
    let s = gof::descriptive(&FrequencyTable::zaire_1974())?;
    let mut out = Pairs::new();
    out.push(s.mean, 0.0865);
    out.push(s.variance, 0.122548);
    out.push(s.dispersion_index, 1.41674);
    out.push(s.kurtosis, 41.0067);
    Ok(out)
}

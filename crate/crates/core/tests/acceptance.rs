//! End-to-end acceptance run on the Zaire 1974 claim counts.
//!
//! Prints one `PASS` or `FAIL` line per criterion and exits non-zero if any
//! criterion fails. Built with `harness = false`.

use std::time::{Duration, Instant};

use edm_counts::baselines::{baseline_pmf, log_gamma};
use edm_counts::fit::{fit_baseline, fit_mle, is_local_maximum};
use edm_counts::lagrange::{conv_exponential, hermite_nu, nu_measure};
use edm_counts::{gof, BaselineModel, BaselineSpec, Family, FrequencyTable, GofReport, ModelSpec, Truncation};

/// Moments weight the tail by `n^4`, so truncate far beyond the default.
const DEEP: Truncation = Truncation {
    term_tol: 1e-16,
    mass_tol: 1e-9,
    cap: 20_000,
};

type Check = std::result::Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn within(what: &str, got: f64, want: f64, tol: f64) -> Result<f64, String> {
    let d = rel(got, want);
    if d <= tol {
        Ok(d)
    } else {
        Err(format!("{what}: got {got}, want {want} (rel {d:.2e} > {tol:.0e})"))
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let t = Instant::now();
    let out = f()?;
    let dt = t.elapsed();
    if dt > limit {
        return Err(format!("{out}; took {dt:.2?}, limit {limit:?}"));
    }
    Ok(format!("{out}; {dt:.2?}"))
}

fn descriptive_table() -> Check {
    timed(Duration::from_secs(1), || {
        let s = gof::descriptive(&FrequencyTable::zaire_1974()).map_err(|e| e.to_string())?;
        if s.mean != 0.0865 {
            return Err(format!("mean {}", s.mean));
        }
        if s.fraction_zeros != 3719.0 / 4000.0 {
            return Err(format!("fraction zeros {}", s.fraction_zeros));
        }
        if (s.variance - 0.122548).abs() > 1e-6 {
            return Err(format!("variance {}", s.variance));
        }
        if (s.dispersion_index - 1.41674).abs() > 1e-5 {
            return Err(format!("dispersion {}", s.dispersion_index));
        }
        within("kurtosis", s.kurtosis, 41.0067, 1e-3)?;
        let sk = within("skewness", s.skewness, 5.31602, 2e-3)?;
        Ok(format!("skewness {:.5} (rel {sk:.1e})", s.skewness))
    })
}

const TABLE3: [(u32, f64, f64); 10] = [
    (1, 0.216600, 0.277098),
    (2, 0.459964, 0.520502),
    (3, 0.704120, 0.764666),
    (4, 0.948471, 1.009018),
    (5, 1.192899, 1.253448),
    (6, 1.437365, 1.497914),
    (7, 1.681853, 1.742403),
    (8, 1.926354, 1.986905),
    (9, 2.170867, 2.231417),
    (10, 2.415385, 2.475934),
];

fn parameter_table() -> Check {
    timed(Duration::from_secs(60), || {
        let data = FrequencyTable::zaire_1974();
        let mut worst: f64 = 0.0;
        for (r, abm, lm) in TABLE3 {
            for (family, want) in [(Family::Abm, abm), (Family::Lm, lm)] {
                let fit = fit_mle(family, r, &data).map_err(|e| format!("{family} r={r}: {e}"))?;
                if fit.m_hat != 0.0865 {
                    return Err(format!("{family} r={r}: m_hat {}", fit.m_hat));
                }
                let p = fit.model_params()[0];
                worst = worst.max(within(&format!("{family} r={r} p"), p, want, 1e-3)?);
            }
        }
        Ok(format!("20 fits, max rel dev {worst:.1e}"))
    })
}

fn edm_rows() -> Check {
    let data = FrequencyTable::zaire_1974();
    let rows = [
        (Family::Abm, 10, 0.444362, 0.800770, 0.726298, 1.5896e-4),
        (Family::Lm, 4, 0.382901, 0.825760, 1.044667, 1.6972e-4),
    ];
    let mut out = Vec::new();
    for (family, r, chi, pv, rmse, kl) in rows {
        let fit = fit_mle(family, r, &data).map_err(|e| e.to_string())?;
        let g = GofReport::for_fit(&fit, &data, gof::DEFAULT_POOL_THRESHOLD).map_err(|e| e.to_string())?;
        let label = fit.model.label();
        if g.chi_square.cells.len() != 5 || g.chi_square.df != 2 {
            return Err(format!("{label}: {} cells, df {}", g.chi_square.cells.len(), g.chi_square.df));
        }
        within(&format!("{label} chi2"), g.chi_square.statistic, chi, 5e-3)?;
        within(&format!("{label} p-value"), g.chi_square.p_value, pv, 5e-3)?;
        within(&format!("{label} RMSE"), g.rmse, rmse, 5e-3)?;
        within(&format!("{label} KL"), g.kl, kl, 1e-2)?;
        out.push(format!("{label} chi2 {:.6}", g.chi_square.statistic));
    }
    Ok(out.join(", "))
}

fn baseline_rows() -> Check {
    let data = FrequencyTable::zaire_1974();
    let table = [
        (BaselineModel::Pig, 0.543789),
        (BaselineModel::Nld, 2.312184),
        (BaselineModel::Plb, 0.370556),
        (BaselineModel::Gdp, 0.383445),
        (BaselineModel::Btd, 9.251567),
    ];
    let mut chis = Vec::new();
    for (model, published) in table {
        let fit = fit_baseline(model, &data).map_err(|e| format!("{model}: {e}"))?;
        if !is_local_maximum(&fit, &data, 1e-3, 1e-9).map_err(|e| e.to_string())? {
            return Err(format!("{model}: fit is not a local maximum"));
        }
        let g = GofReport::for_fit(&fit, &data, gof::DEFAULT_POOL_THRESHOLD).map_err(|e| e.to_string())?;
        let chi = g.chi_square.statistic;
        if chi > 1.2 * published {
            return Err(format!("{model}: chi2 {chi} above {published} + 20%"));
        }
        chis.push((model, chi));
    }
    let worst = chis.iter().max_by(|a, b| a.1.total_cmp(&b.1)).expect("five rows");
    if worst.0 != BaselineModel::Btd {
        return Err(format!("worst fit is {}, not BTD", worst.0));
    }
    let list: Vec<String> = chis.iter().map(|(m, c)| format!("{} {c:.4}", m.label())).collect();
    Ok(format!("{}; BTD worst", list.join(", ")))
}

fn reductions() -> Check {
    let mut worst_poisson: f64 = 0.0;
    for family in [Family::Abm, Family::Lm] {
        let spec = ModelSpec::new(family, 0, 1.0).map_err(|e| e.to_string())?;
        for m in [0.1, 0.5, 1.0, 5.0] {
            let dist = spec.pmf(m, 30).map_err(|e| e.to_string())?;
            for n in 0..=30 {
                let want = (n as f64 * m.ln() - m - log_gamma(n as f64 + 1.0)).exp();
                worst_poisson = worst_poisson.max((dist.pmf(n) - want).abs());
            }
        }
    }
    if worst_poisson > 1e-12 {
        return Err(format!("Poisson abs dev {worst_poisson:.2e}"));
    }
    let mut worst_nb: f64 = 0.0;
    for p in [0.2166, 1.0, 4.0] {
        for m in [0.0865, 0.7, 3.0] {
            let spec = ModelSpec::abm(1, p).map_err(|e| e.to_string())?;
            let dist = spec.pmf(m, 30).map_err(|e| e.to_string())?;
            for n in 0..=30 {
                let nf = n as f64;
                let want = (log_gamma(p + nf) - log_gamma(p) - log_gamma(nf + 1.0)
                    + p * (p / (p + m)).ln()
                    + nf * (m / (p + m)).ln())
                .exp();
                worst_nb = worst_nb.max(rel(dist.pmf(n), want));
            }
        }
    }
    if worst_nb > 1e-10 {
        return Err(format!("negative binomial rel dev {worst_nb:.2e}"));
    }
    Ok(format!("Poisson abs {worst_poisson:.1e}, NB rel {worst_nb:.1e}"))
}

/// Three interior means, the same fraction of `p` for both families.
///
/// Near the top of the grid the tail decays per term by about
/// `Σ_{j>r} (1 - m/p)^j / j` (LM) or `Σ_{j≥r} (1 + m/p)^{-j} / j` (ABM),
/// so at `r = 10` and `m = p/2` it takes some 10^5 terms to exhaust.
fn grid_means(_family: Family, p: f64) -> [f64; 3] {
    [0.05 * p, 0.1 * p, 0.2 * p]
}

fn normalization() -> Check {
    let (mut mass, mut mean, mut var): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for family in [Family::Abm, Family::Lm] {
        for r in 0..=10 {
            for p in [0.25, 1.0, 4.0] {
                let spec = ModelSpec::new(family, r, p).map_err(|e| e.to_string())?;
                for m in grid_means(family, p) {
                    let d = spec.distribution_with(m, DEEP).map_err(|e| format!("{spec} m={m}: {e}"))?;
                    let v = spec.variance(m).map_err(|e| e.to_string())?;
                    mass = mass.max((d.total() - 1.0).abs());
                    mean = mean.max(rel(d.mean(), m));
                    var = var.max(rel(d.variance(), v));
                    if mass > 1e-8 || mean > 1e-6 || var > 1e-6 {
                        return Err(format!(
                            "{spec} m={m}: mass {:.3e} mean {:.3e} variance {:.3e}",
                            d.total() - 1.0,
                            rel(d.mean(), m),
                            rel(d.variance(), v)
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("198 points, mass {mass:.1e}, mean {mean:.1e}, variance {var:.1e}"))
}

fn zero_inflation() -> Check {
    for family in [Family::Abm, Family::Lm] {
        for p in [0.25, 1.0, 4.0] {
            for m in grid_means(family, p) {
                let mut prev = f64::NEG_INFINITY;
                for r in 0..=10 {
                    let z = ModelSpec::new(family, r, p)
                        .and_then(|s| s.zero_prob(m))
                        .map_err(|e| e.to_string())?;
                    if !(z > prev) {
                        return Err(format!("{family} p={p} m={m}: P0 not increasing at r={r}"));
                    }
                    prev = z;
                }
            }
        }
    }
    for r in 1..=10 {
        for p in [0.25, 1.0, 4.0] {
            for m in grid_means(Family::Lm, p) {
                let a = ModelSpec::abm(r, p).and_then(|s| s.variance(m)).map_err(|e| e.to_string())?;
                let l = ModelSpec::lm(r, p).and_then(|s| s.variance(m)).map_err(|e| e.to_string())?;
                if !(a < l) {
                    return Err(format!("r={r} p={p} m={m}: V_ABM {a} >= V_LM {l}"));
                }
            }
        }
    }
    Ok("P0 increasing in r, V_ABM < V_LM".into())
}

fn lagrange_oracles() -> Check {
    let mut conv: f64 = 0.0;
    for r in [1, 2] {
        let nu = nu_measure(r, 15).map_err(|e| e.to_string())?;
        for p in [0.5, 1.0, 2.0] {
            let lhs = conv_exponential(&nu, p, 15).map_err(|e| e.to_string())?;
            let mu = ModelSpec::lm(r, p)
                .and_then(|s| s.generating_measure(15))
                .map_err(|e| e.to_string())?;
            for n in 0..=15 {
                conv = conv.max(rel(lhs[n], mu.mass(n)));
            }
        }
    }
    if conv > 1e-9 {
        return Err(format!("convolution exponential rel dev {conv:.2e}"));
    }
    let nu1 = nu_measure(1, 15).map_err(|e| e.to_string())?;
    let mut cayley: f64 = 0.0;
    for n in 1..=15u32 {
        let nf = n as f64;
        let want = ((nf - 2.0) * nf.ln() - log_gamma(nf + 1.0)).exp();
        cayley = cayley.max(rel(nu1.get(n as usize), want));
    }
    if cayley > 1e-12 {
        return Err(format!("nu(n) = n^(n-2)/n! rel dev {cayley:.2e}"));
    }
    let nu2 = nu_measure(2, 12).map_err(|e| e.to_string())?;
    let mut herm: f64 = 0.0;
    for n in 1..=12 {
        herm = herm.max(rel(hermite_nu(n).map_err(|e| e.to_string())?, nu2.get(n)));
    }
    if herm > 1e-10 {
        return Err(format!("Hermite dev {herm:.2e}"));
    }
    Ok(format!("conv {conv:.1e}, r=1 closed form {cayley:.1e}, Hermite {herm:.1e}"))
}

fn total_mass() -> Check {
    let mut out = Vec::new();
    for (r, p) in [(2, 0.5), (2, 1.0), (3, 1.0)] {
        let spec = ModelSpec::abm(r, p).map_err(|e| e.to_string())?;
        let got = spec.total_mass_extrapolated(512).map_err(|e| e.to_string())?;
        let want = (p / (r as f64 - 1.0)).exp();
        if (got - want).abs() > 1e-3 {
            return Err(format!("r={r} p={p}: {got} vs {want}"));
        }
        out.push(format!("({r},{p}) {:.1e}", (got - want).abs()));
    }
    Ok(out.join(", "))
}

fn cumulants() -> Check {
    let mut closed: f64 = 0.0;
    let mut moments: f64 = 0.0;
    let mut printed: f64 = f64::INFINITY;
    for r in 0..=6 {
        for p in [0.5, 1.0, 3.0] {
            let spec = ModelSpec::abm(r, p).map_err(|e| e.to_string())?;
            for x in [0.1, 0.5, 1.0] {
                let m = x * p;
                let rf = r as f64;
                let want = m * (1.0 + x).powf(2.0 * rf - 1.0) * (1.0 + x * (1.0 + rf));
                let k3 = spec.cumulant(m, 3).map_err(|e| e.to_string())?;
                closed = closed.max(rel(k3, want));

                let k2 = spec.cumulant(m, 2).map_err(|e| e.to_string())?;
                let k4 = spec.cumulant(m, 4).map_err(|e| e.to_string())?;
                let d = spec.distribution_with(m, DEEP).map_err(|e| format!("{spec} m={m}: {e}"))?;
                moments = moments.max(rel(d.central_moment(3), k3));
                moments = moments.max(rel(d.central_moment(4), k4 + 3.0 * k2 * k2));

                if r != 3 && r > 0 {
                    // the variant with (1+3) in place of (1+r)
                    let variant = (1.0 + x).powf(rf - 2.0) / m * (1.0 + x * (1.0 + 2.0 * rf) * (2.0 + x * 4.0));
                    printed = printed.min(rel(variant, k4 / (k2 * k2)));
                }
            }
        }
    }
    if closed > 1e-10 {
        return Err(format!("k3 closed form rel dev {closed:.2e}"));
    }
    if moments > 1e-5 {
        return Err(format!("pmf moments vs cumulants rel dev {moments:.2e}"));
    }
    if printed < 1e-5 {
        return Err(format!("the (1+3) kurtosis variant agrees to {printed:.1e}"));
    }
    Ok(format!("k3 {closed:.1e}, moments {moments:.1e}, (1+3) variant off by >= {printed:.1e}"))
}

fn baseline_normalization() -> Check {
    let total = |spec: BaselineSpec, n: usize| -> Result<f64, String> {
        Ok(baseline_pmf(&spec, n).map_err(|e| e.to_string())?.iter().sum())
    };
    let mut worst: f64 = 0.0;
    for (a, t) in [(0.95, 0.25), (0.5, 0.5), (-2.0, 0.3), (-0.3, 0.8), (0.99, 0.1)] {
        worst = worst.max((total(BaselineSpec::Nld { alpha: a, theta: t }, 400)? - 1.0).abs());
    }
    for (q, a) in [(0.5, 0.0), (0.58, 3.04), (0.2, 1.0), (0.9, 0.5), (0.3, 6.0)] {
        worst = worst.max((total(BaselineSpec::Gdp { q, alpha: a }, 2000)? - 1.0).abs());
    }
    for (a, t) in [(0.35, 0.18), (1.0, 1.0), (0.1, 5.0), (2.0, 0.5), (0.5, 3.0)] {
        worst = worst.max((total(BaselineSpec::Btd { alpha: a, theta: t }, 200)? - 1.0).abs());
    }
    if worst > 1e-9 {
        return Err(format!("max |sum - 1| = {worst:.2e}"));
    }
    Ok(format!("15 points, max |sum - 1| {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("descriptive statistics", descriptive_table),
        ("ABM and LM parameter estimates", parameter_table),
        ("ABM(r=10) and LM(r=4) fit measures", edm_rows),
        ("baseline refits", baseline_rows),
        ("Poisson and negative binomial reductions", reductions),
        ("normalization and moments", normalization),
        ("zero inflation and overdispersion ordering", zero_inflation),
        ("Lagrange construction of the measure", lagrange_oracles),
        ("total mass of the bounded measure", total_mass),
        ("cumulant operator", cumulants),
        ("baseline normalization", baseline_normalization),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

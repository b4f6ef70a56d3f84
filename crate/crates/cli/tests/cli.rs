use std::io::Write;
use std::process::{Command, Output};

use edm_counts::baselines::{baseline_pmf, BaselineSpec};
use edm_counts::{FrequencyTable, Method};
use edm_counts_cli::report::{parse_rows_csv, rows_or_errors, run_jobs, Job};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edm-counts"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    bin(args).status.code().expect("exited normally")
}

fn stdout(args: &[&str]) -> String {
    let out = bin(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["compare", "--help"]), 0);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["fit", "--family", "xyz", "--r", "2"]), 1);
    assert_eq!(code(&["fit", "--family", "abm"]), 1);
    assert_eq!(code(&["fit"]), 1);
    assert_eq!(code(&["compare", "--r-range", "5..2"]), 1);
    assert_eq!(code(&["compare", "--models", "zip"]), 1);
    assert_eq!(code(&["compare", "--pool-threshold", "-1"]), 1);
    assert_eq!(code(&["pmf", "--family", "lm", "--r", "4", "--p", "1", "--m", "2"]), 1);
    assert_eq!(code(&["validate", "--perturb", "nowhere"]), 1);
}

#[test]
fn data_errors_exit_2() {
    let dup = data_file("value,frequency\n0,3\n1,2\n0,1\n");
    let out = bin(&["stats", "--data", dup.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    let empty = data_file("value,frequency\n");
    assert_eq!(code(&["stats", "--data", empty.path().to_str().unwrap()]), 2);
    let neg = data_file("value,frequency\n0,-3\n");
    assert_eq!(code(&["stats", "--data", neg.path().to_str().unwrap()]), 2);
    assert_eq!(code(&["stats", "--data", "/nonexistent/claims.csv"]), 2);

    let under = data_file("value,frequency\n0,1\n1,8\n2,1\n");
    let under = under.path().to_str().unwrap();
    assert_eq!(code(&["fit", "--family", "abm", "--r", "2", "--method", "moments", "--data", under]), 2);
    // the likelihood keeps rising toward the Poisson limit: a numerical outcome
    assert_eq!(code(&["fit", "--family", "abm", "--r", "2", "--data", under]), 3);
}

#[test]
fn numerical_failures_exit_3() {
    let out = bin(&["validate", "--perturb", "gof"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gof:"), "{err}");
    assert!(!err.contains("lagrange:"), "{err}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));

    assert_eq!(code(&["fit", "--family", "lm", "--r", "4", "--pool-threshold", "1e6"]), 3);
}

#[test]
fn compare_reports_failed_rows_without_failing() {
    let out = stdout(&["compare", "--models", "abm", "--r-range", "1..2", "--pool-threshold", "1e6", "--format", "csv"]);
    let rows = parse_rows_csv(&out).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.error.is_some()));
}

#[test]
fn stats_on_bundled_data() {
    let out = stdout(&["stats", "--format", "csv"]);
    assert!(out.contains("mean,0.0865\n"), "{out}");
    assert!(out.contains("n,4000\n"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&["stats", "--format", "json"])).unwrap();
    assert_eq!(json["stats"]["fraction_zeros"], 0.92975);
}

#[test]
fn compare_csv_equals_in_memory_report() {
    let out = stdout(&["compare", "--format", "csv"]);
    let parsed = parse_rows_csv(&out).unwrap();
    assert_eq!(parsed.len(), 25);

    let data = FrequencyTable::zaire_1974();
    let mut jobs: Vec<Job> = Vec::new();
    for f in [edm_counts::Family::Abm, edm_counts::Family::Lm] {
        jobs.extend((1..=10).map(|r| Job::Edm(f, r)));
    }
    for b in edm_counts::BaselineModel::DEFAULT_COMPARISON {
        jobs.push(Job::Baseline(b));
    }
    let rows = rows_or_errors(&jobs, run_jobs(&jobs, &data, Method::Mle, 1.0));
    assert_eq!(parsed, rows);

    let abm10 = parsed.iter().find(|r| r.model == "ABM(r=10)").unwrap();
    assert!((abm10.chi2.unwrap() - 0.444362).abs() < 1e-3);
}

#[test]
fn output_is_deterministic() {
    for format in ["csv", "json", "table"] {
        let a = stdout(&["compare", "--format", format]);
        let b = stdout(&["compare", "--format", format]);
        assert_eq!(a, b, "{format}");
    }
    assert_eq!(stdout(&["validate", "--format", "json"]), stdout(&["validate", "--format", "json"]));
}

#[test]
fn validate_reports_the_r1_measure() {
    let out = stdout(&["validate"]);
    assert!(out.contains("nu(3) = 0.5 = 3^1/3!"), "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn pmf_and_measure_outputs() {
    let csv = stdout(&["pmf", "--family", "abm", "--r", "0", "--p", "1", "--m", "2", "--n-max", "3", "--format", "csv"]);
    let probs: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let want = [1.0, 2.0, 2.0, 4.0 / 3.0].map(|c| c * (-2.0f64).exp());
    for (g, w) in probs.iter().zip(want) {
        assert!((g - w).abs() < 1e-15);
    }
    let csv = stdout(&["measure", "--family", "lm", "--r", "1", "--p", "1", "--n-max", "5", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 7);
    let fitted = stdout(&["pmf", "--family", "lm", "--r", "4", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&fitted).unwrap();
    assert!((json["p"].as_f64().unwrap() - 1.009018).abs() < 1e-3);
}

/// Inverse-cdf draws from a Poisson pmf.
fn poisson_sample(lambda: f64, n: usize, seed: u64) -> FrequencyTable {
    let pmf = baseline_pmf(&BaselineSpec::Poisson { lambda }, 60).unwrap();
    let mut rng = StdRng::seed_from_u64(seed);
    let obs: Vec<u64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            pmf.iter().position(|p| {
                acc += p;
                u < acc
            }).unwrap_or(pmf.len() - 1) as u64
        })
        .collect();
    FrequencyTable::from_observations(&obs).unwrap()
}

#[test]
fn poisson_fits_its_own_sample() {
    let table = poisson_sample(1.3, 5000, 7);
    let f = data_file(&table.to_csv_string());
    let out = stdout(&["fit", "--models", "poisson", "--format", "csv", "--data", f.path().to_str().unwrap()]);
    let rows = parse_rows_csv(&out).unwrap();
    let row = &rows[0];
    assert!((row.params[0].value - table.sample_mean()).abs() < 1e-5);
    assert!(row.p_value.unwrap() > 0.01, "{row:?}");
    assert!(row.chi2.unwrap() < 3.0 * row.df.unwrap() as f64 + 10.0);
}

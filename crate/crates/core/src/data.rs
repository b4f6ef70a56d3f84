//! Frequency tables of observed counts and their CSV form.
//!
//! The CSV layout is a `value,frequency` header followed by one row per
//! observed value. Whitespace around fields and blank lines are ignored.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Claim counts of 4000 automobile insurance policies, Zaire 1974.
pub const ZAIRE_1974_CSV: &str = include_str!("../data/zaire_1974.csv");

/// Distinct non-negative values with their counts, sorted by value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    cells: Vec<(u64, u64)>,
}

impl FrequencyTable {
    /// Builds a table from `(value, count)` pairs in any order.
    ///
    /// ```
    /// use edm_counts::FrequencyTable;
    /// let t = FrequencyTable::from_pairs(vec![(2, 1), (0, 1)]).unwrap();
    /// assert_eq!(t.cells(), &[(0, 1), (2, 1)]);
    /// assert_eq!(t.sample_mean(), 1.0);
    /// ```
    pub fn from_pairs(pairs: Vec<(u64, u64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, (value, count)) in pairs.into_iter().enumerate() {
            if map.insert(value, count).is_some() {
                return Err(Error::DuplicateValue { value, line: i + 1 });
            }
        }
        Self::from_map(map)
    }

    fn from_map(map: BTreeMap<u64, u64>) -> Result<Self> {
        let cells: Vec<_> = map.into_iter().collect();
        if cells.iter().map(|c| c.1).sum::<u64>() == 0 {
            return Err(Error::EmptyData);
        }
        Ok(Self { cells })
    }

    /// Builds a table from raw observations.
    pub fn from_observations(obs: &[u64]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &x in obs {
            *map.entry(x).or_insert(0) += 1;
        }
        Self::from_map(map)
    }

    /// Parses the `value,frequency` CSV layout. Errors carry 1-based line numbers.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);

        let headers = rdr.headers().map_err(|e| csv_error(&e, 1))?.clone();
        let names: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
        if names != ["value", "frequency"] {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `value,frequency`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }

        let mut map = BTreeMap::new();
        for record in rdr.records() {
            let record = record.map_err(|e| csv_error(&e, 0))?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            if record.iter().all(str::is_empty) {
                continue;
            }
            if record.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 2 fields, found {}", record.len()),
                });
            }
            let value: u64 = record[0].parse().map_err(|_| Error::Parse {
                line,
                message: format!("value `{}` is not a non-negative integer", &record[0]),
            })?;
            let count: i64 = record[1].parse().map_err(|_| Error::Parse {
                line,
                message: format!("frequency `{}` is not an integer", &record[1]),
            })?;
            if count < 0 {
                return Err(Error::NegativeCount { line });
            }
            if map.insert(value, count as u64).is_some() {
                return Err(Error::DuplicateValue { value, line });
            }
        }
        Self::from_map(map)
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Self::from_csv_reader(s.as_bytes())
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref()).map_err(|e| Error::Parse {
            line: 0,
            message: format!("cannot open {}: {e}", path.as_ref().display()),
        })?;
        Self::from_csv_reader(std::io::BufReader::new(file))
    }

    /// The bundled Zaire 1974 claim counts.
    pub fn zaire_1974() -> Self {
        Self::from_csv_str(ZAIRE_1974_CSV).expect("bundled data parses")
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("value,frequency\n");
        for (v, c) in &self.cells {
            s.push_str(&format!("{v},{c}\n"));
        }
        s
    }

    pub fn cells(&self) -> &[(u64, u64)] {
        &self.cells
    }

    /// Total number of observations `N`.
    pub fn total(&self) -> u64 {
        self.cells.iter().map(|c| c.1).sum()
    }

    pub fn max_value(&self) -> u64 {
        self.cells.last().map_or(0, |c| c.0)
    }

    pub fn count(&self, value: u64) -> u64 {
        self.cells
            .binary_search_by_key(&value, |c| c.0)
            .map_or(0, |i| self.cells[i].1)
    }

    /// Number of distinct values with a positive count.
    pub fn distinct_observed(&self) -> usize {
        self.cells.iter().filter(|c| c.1 > 0).count()
    }

    /// Counts for `0..=max_value`, zero where a value is absent.
    pub fn dense_counts(&self) -> Vec<u64> {
        let mut v = vec![0; self.max_value() as usize + 1];
        for &(x, c) in &self.cells {
            v[x as usize] = c;
        }
        v
    }

    /// The same table with every count multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Self {
        Self {
            cells: self.cells.iter().map(|&(v, c)| (v, c * k)).collect(),
        }
    }

    pub fn sample_mean(&self) -> f64 {
        let n = self.total() as f64;
        self.cells.iter().map(|&(v, c)| v as f64 * c as f64).sum::<f64>() / n
    }

    /// Sample variance with the `N - 1` denominator (zero for `N = 1`).
    pub fn sample_variance(&self) -> f64 {
        let n = self.total() as f64;
        if n < 2.0 {
            return 0.0;
        }
        self.central_sum(2) / (n - 1.0)
    }

    /// `Σ count (value - mean)^k`.
    pub(crate) fn central_sum(&self, k: i32) -> f64 {
        let m = self.sample_mean();
        self.cells
            .iter()
            .map(|&(v, c)| c as f64 * (v as f64 - m).powi(k))
            .sum()
    }
}

fn csv_error(e: &csv::Error, fallback_line: usize) -> Error {
    let line = e
        .position()
        .map_or(fallback_line, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

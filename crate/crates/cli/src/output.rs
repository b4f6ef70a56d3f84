//! Rendering of rectangular reports as aligned text or CSV.

use crate::args::Format;

/// Header plus rows of already formatted cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Grid {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Grid {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Numeric columns right-aligned, the rest left-aligned.
    pub fn to_table(&self) -> String {
        let numeric: Vec<bool> = (0..self.headers.len())
            .map(|j| {
                self.rows
                    .iter()
                    .map(|r| r[j].as_str())
                    .filter(|c| !c.is_empty())
                    .all(|c| c.parse::<f64>().is_ok())
            })
            .collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|j| {
                self.rows
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain([self.headers[j].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| -> String {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(j, (c, &w))| {
                    let pad = w - c.chars().count();
                    if numeric[j] {
                        format!("{}{c}", " ".repeat(pad))
                    } else {
                        format!("{c}{}", " ".repeat(pad))
                    }
                })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&rule.join("  "));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("writing to memory");
        for r in &self.rows {
            w.write_record(r).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
    }
}

/// Renders `grid` for table or CSV output and `json` otherwise.
pub fn render<T: serde::Serialize>(format: Format, grid: &Grid, json: &T) -> String {
    match format {
        Format::Table => grid.to_table(),
        Format::Csv => grid.to_csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

/// Shortest representation that parses back to the same value.
pub fn exact(x: f64) -> String {
    format!("{x}")
}

/// Fixed six decimals, or scientific below `1e-3`.
pub fn pretty(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:.4e}")
    } else {
        format!("{x:.6}")
    }
}

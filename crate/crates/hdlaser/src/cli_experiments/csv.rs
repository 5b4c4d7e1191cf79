//! Fixed-format CSV: versioned comment header, scientific notation, LF.

/// Round to ten significant digits, so 2π·1e3/2π prints as 1e3.
pub fn tidy(x: f64) -> f64 {
    format!("{x:.9e}").parse().unwrap_or(x)
}

pub const CSV_VERSION: &str = "dls-csv v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    /// File stem, e.g. `fig5_dp_1e3hz`.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

pub fn fmt_num(v: f64, precision: usize) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{:.*e}", precision.saturating_sub(1), v)
    }
}

impl CsvTable {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        CsvTable { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, precision: usize) -> String {
        let mut out = format!("# {CSV_VERSION} table={}\n", self.name);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => fmt_num(*v, precision),
                    Cell::Text(t) => t.clone(),
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

//! Sweep result rows and the text/CSV run summary.

use std::collections::BTreeMap;

use super::csv::{Cell, CsvTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Model {
    Analytic,
    Lorentzian,
    Oracle,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Analytic => "analytic",
            Model::Lorentzian => "lorentzian",
            Model::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub model: Model,
    pub inv_ng: f64,
    pub delta_p_hz: f64,
    pub delta_l_hz: f64,
    pub ratio: f64,
    /// "ok" or an error code.
    pub status: String,
}

impl ResultRow {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShiftSweepResult {
    pub rows: Vec<ResultRow>,
}

impl ShiftSweepResult {
    /// Sort by (model, Δ_p, 1/n_g); failed rows with NaN 1/n_g sort last.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            a.model
                .cmp(&b.model)
                .then(a.delta_p_hz.total_cmp(&b.delta_p_hz))
                .then(a.inv_ng.total_cmp(&b.inv_ng))
        });
    }

    pub fn table(&self, name: &str) -> CsvTable {
        let mut t = CsvTable::new(name, &["model", "inv_ng", "delta_p_hz", "delta_l_hz", "ratio", "status"]);
        for r in &self.rows {
            t.push(vec![
                r.model.name().into(),
                r.inv_ng.into(),
                r.delta_p_hz.into(),
                r.delta_l_hz.into(),
                r.ratio.into(),
                Cell::Text(r.status.clone()),
            ]);
        }
        t
    }

    pub fn failed(&self) -> usize {
        self.rows.iter().filter(|r| !r.ok()).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
}

/// Per-model extremes, error counts, the small-shift extrapolation against
/// (n_g − 1)/n_g, and the large-shift asymptote table.
pub fn emit_report(results: &ShiftSweepResult, format: ReportFormat) -> String {
    let mut by_model: BTreeMap<Model, Vec<&ResultRow>> = BTreeMap::new();
    for r in &results.rows {
        by_model.entry(r.model).or_default().push(r);
    }
    let mut lines: Vec<(String, String, String)> = Vec::new();
    for (m, rows) in &by_model {
        let ok: Vec<&&ResultRow> = rows.iter().filter(|r| r.ok()).collect();
        let failed = rows.len() - ok.len();
        let min = ok.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        let max = ok.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
        lines.push((m.name().into(), "rows_ok".into(), ok.len().to_string()));
        lines.push((m.name().into(), "rows_failed".into(), failed.to_string()));
        if !ok.is_empty() {
            lines.push((m.name().into(), "ratio_min".into(), format!("{min:.6e}")));
            lines.push((m.name().into(), "ratio_max".into(), format!("{max:.6e}")));
        }
    }
    // extrapolation: smallest |Δ_p| Lorentzian row per n_g vs the analytic law
    if let Some(rows) = by_model.get(&Model::Lorentzian) {
        let mut smallest: BTreeMap<u64, &ResultRow> = BTreeMap::new();
        for r in rows.iter().filter(|r| r.ok()) {
            let key = r.inv_ng.to_bits();
            let e = smallest.entry(key).or_insert(r);
            if r.delta_p_hz.abs() < e.delta_p_hz.abs() {
                *e = r;
            }
        }
        let mut worst = 0.0f64;
        for r in smallest.values() {
            let ng = 1.0 / r.inv_ng;
            let law = (ng - 1.0) / ng;
            worst = worst.max((r.ratio - law).abs() / law.abs().max(1.0));
        }
        if !smallest.is_empty() {
            lines.push(("lorentzian".into(), "small_shift_max_dev".into(), format!("{worst:.6e}")));
        }
        // asymptote: ratio at the largest 1/n_g for each Δ_p
        let mut top: BTreeMap<u64, &ResultRow> = BTreeMap::new();
        for r in rows.iter().filter(|r| r.ok()) {
            let e = top.entry(r.delta_p_hz.to_bits()).or_insert(r);
            if r.inv_ng > e.inv_ng {
                *e = r;
            }
        }
        let mut tops: Vec<&&ResultRow> = top.values().collect();
        tops.sort_by(|a, b| a.delta_p_hz.total_cmp(&b.delta_p_hz));
        for r in tops {
            lines.push((
                "lorentzian".into(),
                format!("asymptote_dp_{:e}hz", r.delta_p_hz),
                format!("{:.6e} at inv_ng {:.4e}", -r.ratio, r.inv_ng),
            ));
        }
    }
    match format {
        ReportFormat::Text => lines.iter().map(|(m, k, v)| format!("{m:<11} {k:<28} {v}\n")).collect(),
        ReportFormat::Csv => {
            let mut s = String::from("model,key,value\n");
            for (m, k, v) in lines {
                s.push_str(&format!("{m},{k},{v}\n"));
            }
            s
        }
    }
}

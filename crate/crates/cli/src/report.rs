// SPDX-License-Identifier: Apache-2.0

//! Text outputs: the per-unit score table, metrics reports and provenance
//! sidecars.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use mergesam_core::scoring::UnitScore;
use mergesam_core::MetricsReport;
use serde::Serialize;

use crate::config::RunConfig;

pub const SCORE_TABLE_HEADER: &str = "unit_index,kind,area,score,changed";

/// CSV with one row per analysis unit. Scores use the shortest decimal
/// form that round-trips, so output is stable across runs.
pub fn score_table(scores: &[UnitScore]) -> String {
    let mut out = String::with_capacity(32 * (scores.len() + 1));
    out.push_str(SCORE_TABLE_HEADER);
    out.push('\n');
    for s in scores {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.unit,
            s.kind,
            s.area,
            s.score,
            u8::from(s.changed)
        );
    }
    out
}

#[derive(Serialize)]
struct Counts {
    tp: u64,
    fp: u64,
    #[serde(rename = "fn")]
    fn_: u64,
    tn: u64,
    total: u64,
}

#[derive(Serialize)]
struct Scores {
    f1: f64,
    precision: f64,
    recall: f64,
    oa: f64,
    kappa: f64,
}

#[derive(Serialize)]
struct ReportRepr<'a> {
    label: &'a str,
    counts: Counts,
    fractions: Scores,
    percent: Scores,
    undefined: Vec<&'static str>,
}

fn scaled(r: &MetricsReport, k: f64) -> Scores {
    Scores {
        f1: r.f1 * k,
        precision: r.precision * k,
        recall: r.recall * k,
        oa: r.oa * k,
        kappa: r.kappa * k,
    }
}

/// JSON report with confusion counts, fractions and ×100 percentages.
pub fn metrics_json(label: &str, r: &MetricsReport) -> String {
    let c = r.counts;
    let mut undefined = Vec::new();
    for (flag, name) in [
        (r.undefined.precision, "precision"),
        (r.undefined.recall, "recall"),
        (r.undefined.f1, "f1"),
        (r.undefined.kappa, "kappa"),
    ] {
        if flag {
            undefined.push(name);
        }
    }
    let repr = ReportRepr {
        label,
        counts: Counts {
            tp: c.tp,
            fp: c.fp,
            fn_: c.fn_,
            tn: c.tn,
            total: c.total(),
        },
        fractions: scaled(r, 1.0),
        percent: scaled(r, 100.0),
        undefined,
    };
    let mut s = serde_json::to_string_pretty(&repr).expect("report serializes");
    s.push('\n');
    s
}

pub const TABLE_COLUMNS: [&str; 5] = ["F1", "Prec.", "Rec.", "OA", "Kappa"];

/// Fixed-width table in the column order F1, Prec., Rec., OA, Kappa, all
/// scaled by 100.
pub fn metrics_table(rows: &[(&str, &MetricsReport)]) -> String {
    let width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max("Method".len());
    let mut out = format!("{:<width$}", "Method");
    for c in TABLE_COLUMNS {
        let _ = write!(out, "  {c:>8}");
    }
    out.push('\n');
    for (label, r) in rows {
        let _ = write!(out, "{label:<width$}");
        for v in [r.f1, r.precision, r.recall, r.oa, r.kappa] {
            let _ = write!(out, "  {:>8.2}", v * 100.0);
        }
        out.push('\n');
    }
    out
}

/// Sidecar recording everything that determines a command's output.
#[derive(Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub parameters: RunConfig,
    pub inputs: BTreeMap<&'static str, String>,
    pub outputs: BTreeMap<&'static str, String>,
    pub summary: BTreeMap<&'static str, serde_json::Value>,
}

impl Provenance {
    pub fn new(command: &'static str, parameters: RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            parameters,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            summary: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("provenance serializes");
        s.push('\n');
        s
    }
}

//! CSV and JSON rendering of sweep tables.
//!
//! Output is a pure function of the table, the echoed configuration and the
//! command, so identical runs produce identical bytes.

use std::collections::BTreeMap;

use serde::Serialize;

use super::config::Format;
use crate::sweeps::SweepResult;

pub const UNITS: &str = "time us, field G, eta nT/sqrt(Hz), angular frequency rad/us, Fisher information rad^2/(us^2 G^2) per shot";

/// Run identification written ahead of the data.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub command: String,
    pub seed: u64,
    pub config_sha256: String,
    pub config: String,
}

/// `precision` significant digits in scientific notation; NaN as `nan`.
pub fn format_number(v: f64, precision: usize) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{:.*e}", precision.max(1) - 1, v)
    }
}

pub fn render(table: &SweepResult, header: &Header, format: Format, precision: usize) -> String {
    match format {
        Format::Csv => render_csv(table, header, precision),
        Format::Json => render_json(table, header, precision),
    }
}

fn render_csv(table: &SweepResult, header: &Header, precision: usize) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("# nvmag {}", env!("CARGO_PKG_VERSION")));
    line(format!("# command: {}", header.command));
    line(format!("# seed: {}", header.seed));
    line(format!("# config_sha256: {}", header.config_sha256));
    line(format!("# units: {UNITS}"));
    for (k, v) in &table.metadata {
        line(format!("# {k}: {v}"));
    }
    for l in header.config.lines() {
        line(if l.is_empty() {
            "# config:".into()
        } else {
            format!("# config: {l}")
        });
    }
    line(table.columns.join(","));
    for row in &table.rows {
        line(
            row.iter()
                .map(|&v| format_number(v, precision))
                .collect::<Vec<_>>()
                .join(","),
        );
    }
    out
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    metadata: BTreeMap<&'a str, String>,
    columns: &'a [String],
    rows: Vec<Vec<Option<f64>>>,
}

fn render_json(table: &SweepResult, header: &Header, precision: usize) -> String {
    let mut metadata: BTreeMap<&str, String> = table
        .metadata
        .iter()
        .map(|(k, v)| (k.as_str(), v.clone()))
        .collect();
    metadata.insert("version", env!("CARGO_PKG_VERSION").into());
    metadata.insert("command", header.command.clone());
    metadata.insert("seed", header.seed.to_string());
    metadata.insert("config_sha256", header.config_sha256.clone());
    metadata.insert("units", UNITS.into());
    metadata.insert("config", header.config.clone());
    // round through the CSV text so both formats carry the same digits
    let rows = table
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| {
                    format_number(v, precision)
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                })
                .collect()
        })
        .collect();
    let doc = JsonDoc {
        metadata,
        columns: &table.columns,
        rows,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("table serialises");
    s.push('\n');
    s
}

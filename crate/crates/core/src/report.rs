//! Deterministic result persistence: CSV for series, JSON for structured
//! records, timestamps quarantined in a separate metadata file.
//!
//! Identical (config, seed) must produce byte-identical payloads, so
//! everything volatile (wall-clock, durations) stays out of the payload
//! files, and every payload embeds the config digest for provenance.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::propagation::SurvivalSeries;
use crate::Result;

/// One experiment outcome: digest plus per-operation structured outputs.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    pub config_digest: String,
    pub command: String,
    pub seed: u64,
    pub outputs: Value,
}

impl ResultRecord {
    pub fn new(config_digest: impl Into<String>, command: impl Into<String>, seed: u64) -> Self {
        Self {
            config_digest: config_digest.into(),
            command: command.into(),
            seed,
            outputs: Value::Null,
        }
    }

    pub fn with_outputs(mut self, outputs: Value) -> Self {
        self.outputs = outputs;
        self
    }
}

/// 17 significant digits, scientific: enough to round-trip any f64.
pub fn fmt_full(v: f64) -> String {
    format!("{v:.16e}")
}

/// Sort all JSON object keys recursively so the byte stream is stable.
fn canonicalize(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(
                entries
                    .into_iter()
                    .map(|(k, v)| (k, canonicalize(v)))
                    .collect(),
            )
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        other => other,
    }
}

/// Render a record as canonical JSON (stable key order, trailing newline).
pub fn render_json(record: &ResultRecord) -> Result<String> {
    let value = serde_json::to_value(record)
        .map_err(|e| crate::Error::Config(format!("serialization failed: {e}")))?;
    let mut text = serde_json::to_string_pretty(&canonicalize(value))
        .map_err(|e| crate::Error::Config(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn write_json(path: impl AsRef<Path>, record: &ResultRecord) -> Result<()> {
    std::fs::write(path, render_json(record)?)?;
    Ok(())
}

/// Survival series as plot-ready CSV: `s, Re A, Im A, |A|` under a digest
/// comment line.
pub fn render_survival_csv(series: &SurvivalSeries, config_digest: &str) -> String {
    let mut out = String::new();
    writeln!(out, "# config_digest = {config_digest}").unwrap();
    writeln!(out, "s,re_a,im_a,abs_a").unwrap();
    for (s, a) in series.s_values.iter().zip(&series.amplitudes) {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_full(*s),
            fmt_full(a.re),
            fmt_full(a.im),
            fmt_full(a.norm())
        )
        .unwrap();
    }
    out
}

/// Generic numeric table with a header row, same formatting rules.
pub fn render_table_csv(columns: &[&str], rows: &[Vec<f64>], config_digest: &str) -> String {
    let mut out = String::new();
    writeln!(out, "# config_digest = {config_digest}").unwrap();
    writeln!(out, "{}", columns.join(",")).unwrap();
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        writeln!(
            out,
            "{}",
            row.iter().map(|v| fmt_full(*v)).collect::<Vec<_>>().join(",")
        )
        .unwrap();
    }
    out
}

/// Survival series as a JSON value for embedding in a record.
pub fn survival_to_json(series: &SurvivalSeries) -> Value {
    json!({
        "alpha": series.alpha,
        "s_values": series.s_values,
        "re_a": series.amplitudes.iter().map(|a| a.re).collect::<Vec<_>>(),
        "im_a": series.amplitudes.iter().map(|a| a.im).collect::<Vec<_>>(),
        "valid_horizon": series.valid_horizon,
        "fit": series.fit,
    })
}

/// Volatile run metadata, kept apart from the deterministic payloads.
pub fn write_metadata(
    dir: impl AsRef<Path>,
    command: &str,
    config_digest: &str,
) -> Result<PathBuf> {
    let path = dir.as_ref().join("run_metadata.json");
    let unix_seconds = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = json!({
        "command": command,
        "config_digest": config_digest,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "timestamp_unix": unix_seconds,
    });
    std::fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&meta).unwrap()))?;
    Ok(path)
}

//! CSV and JSON emission.
//!
//! CSV files open with a versioned schema row (`# schema,<kind>,v1`)
//! followed by the column header. Numeric cells are formatted with Rust's
//! shortest round-trip float formatting, so identical runs are identical
//! bytes. The JSON summary embeds the fully resolved config and a version
//! stamp; wall-clock timing lives only there, never in the CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug)]
pub struct Report {
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
}

/// Render a CSV body: schema row, header, data rows.
pub fn render_csv(kind: &str, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# schema,{},{}", kind, SCHEMA_VERSION);
    let _ = writeln!(out, "{}", header.join(","));
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Write `<base>.csv` and `<base>.json` atomically enough for our
/// purposes: the CSV body is fully rendered before anything touches disk,
/// so a failed run leaves no partial data file.
pub fn write_report(
    base: &Path,
    kind: &str,
    config: &RunConfig,
    header: &[&str],
    rows: &[Vec<String>],
    summary: Value,
) -> std::io::Result<Report> {
    let csv_path = base.with_extension("csv");
    let json_path = base.with_extension("json");
    let body = render_csv(kind, header, rows);
    fs::write(&csv_path, body)?;
    let doc = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "schema": SCHEMA_VERSION,
        "kind": kind,
        "config": serde_json::to_value(config).expect("config serializes"),
        "config_text": config.to_text(),
        "summary": summary,
    });
    fs::write(&json_path, serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(Report { csv_path, json_path })
}

/// Shortest-round-trip float cell.
pub fn f64_cell(x: f64) -> String {
    format!("{}", x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_schema_and_header() {
        let body = render_csv("demo", &["a", "b"], &[vec!["1".into(), "2".into()]]);
        let mut lines = body.lines();
        assert_eq!(lines.next(), Some("# schema,demo,v1"));
        assert_eq!(lines.next(), Some("a,b"));
        assert_eq!(lines.next(), Some("1,2"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let rows = vec![vec![f64_cell(0.1), f64_cell(1.0 / 3.0)]];
        assert_eq!(render_csv("x", &["p", "q"], &rows), render_csv("x", &["p", "q"], &rows));
    }
}

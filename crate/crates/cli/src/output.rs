//! Emission of tables as CSV or JSON with a metadata header.

use std::io::Write;

use serde::Serialize;
use smoothsum::verify::Table;

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub version: &'static str,
    pub command: String,
    pub config_sha256: String,
    pub timestamp: String,
}

impl Meta {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config_sha256: cfg.hash(command),
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }
}

/// CSV: `# key: value` metadata lines, then the table. With several tables
/// each is preceded by a `## name` line.
pub fn render(meta: &Meta, tables: &[Table], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = format!(
                "# smoothsum {}\n# command: {}\n# config_sha256: {}\n# timestamp: {}\n",
                meta.version, meta.command, meta.config_sha256, meta.timestamp
            );
            if let [t] = tables {
                out.push_str(&t.to_csv());
            } else {
                for t in tables {
                    out.push_str(&format!("## {}\n", t.name));
                    out.push_str(&t.to_csv());
                }
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                meta: &'a Meta,
                tables: &'a [Table],
            }
            let mut s = serde_json::to_string_pretty(&Doc { meta, tables }).expect("tables serialize");
            s.push('\n');
            s
        }
    }
}

pub fn emit(text: &str, cfg: &RunConfig) -> std::io::Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

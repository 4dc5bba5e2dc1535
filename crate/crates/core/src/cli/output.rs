//! Report files: every CSV opens with a `#` provenance line and every JSON
//! document carries a `meta` object with the same fields.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::RunConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub toolkit: String,
    pub version: String,
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
}

impl Meta {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        Meta {
            toolkit: "iefsvm".into(),
            version: crate::VERSION.into(),
            command: command.into(),
            config_hash: cfg.config_hash(),
            seed: cfg.seed,
        }
    }

    pub fn comment(&self) -> String {
        format!(
            "{} {} command={} config_hash={} seed={}",
            self.toolkit, self.version, self.command, self.config_hash, self.seed
        )
    }
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_csv(path: &Path, meta: &Meta, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut buf = format!("# {}\n", meta.comment()).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let csv_err = |e: csv::Error| Error::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        w.write_record(header).map_err(csv_err)?;
        for row in rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// Writes `body` (an object) with `meta` inserted, pretty-printed.
pub(crate) fn write_json(path: &Path, meta: &Meta, body: Value) -> Result<()> {
    let mut doc = match body {
        Value::Object(map) => map,
        other => {
            let mut map = serde_json::Map::new();
            map.insert("data".into(), other);
            map
        }
    };
    doc.insert("meta".into(), json!(meta));
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values always serialise");
    text.push('\n');
    write_text(path, &text)
}

pub(crate) fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::ModelFormat(format!("{}: {e}", path.display())))
}

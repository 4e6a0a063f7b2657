//! Report envelope and CSV output.

use std::path::Path;
use std::time::Duration;

use anyhow::Context;
use omdyn::schwartz::DecayTable;
use omdyn::symbols::{Symbol, SymbolProps};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "omdyn-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct SymbolInfo {
    pub label: String,
    pub props: SymbolProps,
}

impl SymbolInfo {
    pub fn of(psi: &Symbol) -> Self {
        SymbolInfo { label: psi.label().into(), props: *psi.props() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub schema: String,
    pub tool_version: String,
    pub command: Vec<String>,
    pub config: Value,
    pub config_hash: String,
    pub symbol: Option<SymbolInfo>,
    pub payload: Value,
    pub timing_ms: f64,
}

/// SHA-256 of the command name and the resolved configuration.
pub fn config_hash(command: &str, config: &Value) -> String {
    let canonical = json!({ "command": command, "config": config }).to_string();
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

impl ReportEnvelope {
    pub fn new(
        command: &str,
        argv: &[String],
        config: Value,
        symbol: Option<&Symbol>,
        payload: Value,
        elapsed: Duration,
    ) -> Self {
        ReportEnvelope {
            schema: SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: argv.to_vec(),
            config_hash: config_hash(command, &config),
            config,
            symbol: symbol.map(SymbolInfo::of),
            payload,
            timing_ms: elapsed.as_secs_f64() * 1e3,
        }
    }

    /// JSON with the timing field removed, for determinism checks.
    pub fn without_timing(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("envelope serializes");
        if let Some(map) = v.as_object_mut() {
            map.remove("timing_ms");
        }
        v
    }
}

fn file_stem(parts: &[&str]) -> String {
    let joined = parts.join("_");
    let mut out: String = joined.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' }).collect();
    while out.contains("__") {
        out = out.replace("__", "_");
    }
    out.trim_matches('_').to_string()
}

/// Writes `n,value,log_value` for a table into `dir`.
pub fn write_table(dir: &Path, prefix: &[&str], table: &DecayTable) -> anyhow::Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut parts = prefix.to_vec();
    parts.push(&table.label);
    let path = dir.join(format!("{}.csv", file_stem(&parts)));
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["n", "value", "log_value"])?;
    for row in &table.rows {
        w.write_record([row.n.to_string(), row.value.to_string(), row.log_value.to_string()])?;
    }
    w.flush()?;
    Ok(path)
}

/// Writes rows with the given header into `dir/name.csv`.
pub fn write_rows<R: AsRef<[String]>>(
    dir: &Path,
    name: &[&str],
    header: &[&str],
    rows: &[R],
) -> anyhow::Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(format!("{}.csv", file_stem(name)));
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.as_ref())?;
    }
    w.flush()?;
    Ok(path)
}

//! Artifact emission.
//!
//! Every file carries the toolkit version, command, config hash, and seed:
//! CSV tables as leading `#` comment lines, JSON documents in the report
//! envelope. Files are written by one thread, in call order, after the
//! analyses finish.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::format::{fmt_num, round_json};

pub const TOOLKIT: &str = "trsll";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Plot tables only.
    Csv,
    /// Report documents only.
    Report,
    /// Both.
    All,
}

pub struct Emitter {
    dir: PathBuf,
    command: String,
    hash: String,
    seed: u64,
    format: Format,
    warnings: Vec<String>,
    written: Vec<PathBuf>,
}

/// `SOURCE_DATE_EPOCH` when set, so reruns stay byte-identical.
fn timestamp() -> Value {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .map_or(Value::Null, |t| json!(t))
}

impl Emitter {
    pub fn new(run: &RunConfig, format: Format) -> Result<Self> {
        std::fs::create_dir_all(&run.out_dir)
            .map_err(|e| CliError::config(format!("output directory {}: {e}", run.out_dir.display())))?;
        Ok(Emitter {
            dir: run.out_dir.clone(),
            command: run.command.clone(),
            hash: run.hash()?,
            seed: run.seed,
            format,
            warnings: Vec::new(),
            written: Vec::new(),
        })
    }

    pub fn config_hash(&self) -> &str {
        &self.hash
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        log::warn!("{msg}");
        self.warnings.push(msg);
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| CliError::config(format!("writing {}: {e}", path.display())))?;
        log::info!("wrote {}", path.display());
        self.written.push(path);
        Ok(())
    }

    fn provenance_lines(&self) -> String {
        format!(
            "# {TOOLKIT} {VERSION} {}\n# config_hash: {}\n# seed: {}\n",
            self.command, self.hash, self.seed
        )
    }

    /// Writes a CSV table; skipped under `--format report`.
    pub fn table(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        self.table_with_metadata(name, &[], header, rows)
    }

    pub fn table_with_metadata(
        &mut self,
        name: &str,
        metadata: &[(&str, String)],
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<()> {
        if self.format == Format::Report {
            return Ok(());
        }
        let mut out = self.provenance_lines();
        for (k, v) in metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::WriterBuilder::new().from_writer(out.into_bytes());
        w.write_record(header).map_err(csv_err)?;
        for r in rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::data(e.to_string()))?;
        self.write(name, &bytes)
    }

    /// Writes a JSON document in the report envelope; skipped under
    /// `--format csv`. Floats are rounded to six significant digits.
    pub fn report(&mut self, name: &str, units: Value, results: impl Serialize) -> Result<()> {
        if self.format == Format::Csv {
            return Ok(());
        }
        let results = serde_json::to_value(results).map_err(|e| CliError::data(e.to_string()))?;
        let mut doc = json!({
            "toolkit": TOOLKIT,
            "version": VERSION,
            "command": self.command,
            "config_hash": self.hash,
            "seed": self.seed,
            "timestamp": timestamp(),
            "units": units,
            "results": results,
            "warnings": self.warnings,
        });
        round_json(&mut doc);
        self.json(name, &doc)
    }

    /// Writes a JSON document as is (already carrying its own header).
    pub fn document(&mut self, name: &str, doc: &Value) -> Result<()> {
        if self.format == Format::Csv {
            return Ok(());
        }
        self.json(name, doc)
    }

    fn json(&mut self, name: &str, doc: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(doc).map_err(|e| CliError::data(e.to_string()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn provenance(&self) -> Value {
        json!({
            "toolkit": TOOLKIT,
            "version": VERSION,
            "command": self.command,
            "config_hash": self.hash,
            "seed": self.seed,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::data(e.to_string())
}

pub fn num(x: f64) -> String {
    fmt_num(x)
}

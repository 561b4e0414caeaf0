//! Result files: every payload is preceded by a provenance header.

use std::fs;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

pub struct Meta<'a> {
    pub subcommand: &'a str,
    pub params: Value,
    pub seed: u64,
}

impl Meta<'_> {
    fn value(&self) -> Value {
        json!({
            "tool": "linopt",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "params": self.params,
            "seed": self.seed,
        })
    }

    /// `#`-prefixed header lines for CSV output.
    pub fn csv_header(&self) -> String {
        format!(
            "# tool: linopt {}\n# subcommand: {}\n# params: {}\n# seed: {}\n",
            env!("CARGO_PKG_VERSION"),
            self.subcommand,
            self.params,
            self.seed
        )
    }

    pub fn json_document(&self, data: Value) -> String {
        let mut s = serde_json::to_string_pretty(&json!({ "meta": self.value(), "data": data })).unwrap();
        s.push('\n');
        s
    }
}

/// 17 significant digits, round-trip exact.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Writes the finished document in one step so failures leave no partial file.
pub fn emit(out: Option<&PathBuf>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

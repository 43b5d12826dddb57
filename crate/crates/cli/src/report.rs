use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Value};

use crate::Format;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailed,
    BudgetExhausted,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub subcommand: &'static str,
    pub params: Value,
    pub seed: Option<u64>,
    pub threads: usize,
    pub budget: u64,
    pub version: &'static str,
    pub input: Option<String>,
    pub output: Option<String>,
    /// The one field allowed to differ between reruns.
    pub duration_ms: u64,
}

/// What a subcommand hands back: the JSON result, a flat table for CSV and,
/// for commands that build a point set, its text form.
pub struct Output {
    pub result: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub status: Status,
    pub points: Option<String>,
}

impl Output {
    pub fn new(result: Value, columns: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Output {
            result,
            columns,
            rows,
            status: Status::Ok,
            points: None,
        }
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn points(mut self, text: String) -> Self {
        self.points = Some(text);
        self
    }

    pub fn write_points(&self, path: Option<&Path>) -> Result<()> {
        if let (Some(path), Some(text)) = (path, &self.points) {
            std::fs::write(path, text)?;
        }
        Ok(())
    }
}

pub fn render(manifest: &Manifest, out: &Output, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA,
                "manifest": manifest,
                "status": out.status,
                "result": out.result,
            });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut text = format!("# schema: {SCHEMA}\n# manifest: {}\n", serde_json::to_string(manifest)?);
            text += &format!("# status: {}\n", serde_json::to_value(out.status)?.as_str().unwrap_or(""));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&out.columns)?;
            for row in &out.rows {
                w.write_record(row)?;
            }
            text += &String::from_utf8(w.into_inner()?)?;
            Ok(text)
        }
    }
}

use std::fmt::Write as _;
use std::fs;

use meroconv::geom::QuadBudget;
use serde::Serialize;
use serde_json::Value;

use crate::{Command, Format, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Result of a command before emission.
pub struct Outcome {
    pub result: Value,
    /// Resolved quadrature budget, for commands that integrate.
    pub budget: Option<QuadBudget>,
    /// Native CSV form for tabular results.
    pub table: Option<String>,
    /// The primary result is inconclusive.
    pub inconclusive: bool,
}

impl Outcome {
    pub fn new(result: impl Serialize) -> Result<Self, String> {
        Ok(Outcome {
            result: serde_json::to_value(result).map_err(|e| e.to_string())?,
            budget: None,
            table: None,
            inconclusive: false,
        })
    }

    pub fn with_budget(mut self, b: QuadBudget) -> Self {
        self.budget = Some(b);
        self
    }

    pub fn with_table(mut self, t: String) -> Self {
        self.table = Some(t);
        self
    }

    pub fn inconclusive(mut self, yes: bool) -> Self {
        self.inconclusive = yes;
        self
    }
}

#[derive(Serialize)]
struct Report<'a> {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'a Command,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<&'a QuadBudget>,
    result: &'a Value,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => {
            let _ = writeln!(out, "{},{}", scalar(&Value::String(prefix.to_string())), scalar(v));
        }
    }
}

/// JSON report, or CSV: the native table when the result has one, else
/// `key,value` rows of the flattened report.
pub fn render(cmd: &Command, cfg: &RunConfig, o: &Outcome) -> Result<String, String> {
    let rep = Report {
        schema_version: SCHEMA_VERSION,
        tool: "meroconv",
        version: env!("CARGO_PKG_VERSION"),
        command: cmd,
        config: cfg,
        budget: o.budget.as_ref(),
        result: &o.result,
    };
    match cfg.format {
        Format::Json => serde_json::to_string_pretty(&rep).map(|s| s + "\n").map_err(|e| e.to_string()),
        Format::Csv => match &o.table {
            Some(t) => Ok(t.clone()),
            None => {
                let v = serde_json::to_value(&rep).map_err(|e| e.to_string())?;
                let mut s = String::from("key,value\n");
                flatten("", &v, &mut s);
                Ok(s)
            }
        },
    }
}

pub fn emit(cmd: &Command, cfg: &RunConfig, o: &Outcome) -> Result<(), String> {
    let text = render(cmd, cfg, o)?;
    match &cfg.out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::state::fmt_f64;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Output of one command invocation. Everything except `timing_seconds` is a function of
/// the arguments alone.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_seconds: Option<f64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, columns: &[&str]) -> Self {
        RunReport {
            command,
            seed: None,
            tolerances: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
            timing_seconds: None,
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Csv => {
                let mut out = format!("# command: {}\n", self.command.join(" "));
                if let Some(seed) = self.seed {
                    out.push_str(&format!("# seed: {seed}\n"));
                }
                for (name, tol) in &self.tolerances {
                    out.push_str(&format!("# tolerance {name}: {tol:e}\n"));
                }
                for note in &self.notes {
                    out.push_str(&format!("# {note}\n"));
                }
                if let Some(t) = self.timing_seconds {
                    out.push_str(&format!("# timing_seconds: {t}\n"));
                }
                let table = csv_table(&self.columns, &self.rows)?;
                out.push_str(&table);
                Ok(out)
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => fmt_f64(n.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    }
}

pub fn csv_table(columns: &[String], rows: &[Vec<Value>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(columns).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(cell)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// A JSON number, or `null` when `x` is not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_metadata_and_table() {
        let mut r = RunReport::new(vec!["entropy".into(), "a.json".into()], &["quantity", "value"]);
        r.seed = Some(7);
        r.tolerances.insert("quadrature".into(), 1e-9);
        r.push(vec![Value::from("wehrl"), num(0.5)]);
        let s = r.render(OutputFormat::Csv).unwrap();
        assert!(s.starts_with("# command: entropy a.json\n# seed: 7\n"));
        assert!(s.ends_with("quantity,value\nwehrl,5.0000000000000000e-1\n"), "{s}");
        let j: Value = serde_json::from_str(&r.render(OutputFormat::Json).unwrap()).unwrap();
        assert_eq!(j["seed"], 7);
        assert!(j.get("timing_seconds").is_none());
    }
}

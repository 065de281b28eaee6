//! CSV and JSON rendering of result tables.

use clap::ValueEnum;
use serde::Deserialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A table plus summary entries. In CSV the summary follows the table as
/// extra rows with the key in the first column; in JSON it becomes
/// top-level fields.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary_rows: Vec<Vec<String>>,
    pub meta: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary_rows: Vec::new(),
            meta: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn summary(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.summary_rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.meta.insert(key.into(), value.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in self.rows.iter().chain(&self.summary_rows) {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(
                            self.columns
                                .iter()
                                .zip(r)
                                .map(|(c, v)| (c.clone(), Value::String(v.clone())))
                                .collect(),
                        )
                    })
                    .collect();
                let mut obj = Map::new();
                obj.insert("command".into(), Value::String(self.command.clone()));
                obj.insert("columns".into(), self.columns.clone().into());
                obj.insert("rows".into(), Value::Array(rows));
                for (k, v) in &self.meta {
                    obj.insert(k.clone(), v.clone());
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

/// Shortest round-trip decimal, switching to exponent form outside
/// [1e-4, 1e15).
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_shapes() {
        let mut r = Report::new("demo", &["n", "value"]);
        r.push(vec!["1".into(), num(0.5)]);
        r.summary(vec!["total".into(), num(2.5e-7)]);
        r.meta("total", "2.5e-7");
        assert_eq!(r.render(Format::Csv), "n,value\n1,0.5\ntotal,2.5e-7\n");
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(v["rows"][0]["value"], "0.5");
        assert_eq!(v["total"], "2.5e-7");
        assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    }
}

//! Record emission as JSON lines or CSV.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

pub type Record = Map<String, Value>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Writes records one per line. In CSV mode a header row is written before the first record
/// and again whenever the set of columns changes.
pub struct Emitter<'a> {
    format: Format,
    out: &'a mut dyn Write,
    header: Option<Vec<String>>,
}

impl<'a> Emitter<'a> {
    pub fn new(format: Format, out: &'a mut dyn Write) -> Self {
        Emitter { format, out, header: None }
    }

    pub fn emit(&mut self, rec: Record) -> io::Result<()> {
        match self.format {
            Format::Json => {
                serde_json::to_writer(&mut *self.out, &Value::Object(rec))?;
                self.out.write_all(b"\n")
            }
            Format::Csv => {
                let keys: Vec<String> = rec.keys().cloned().collect();
                let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
                if self.header.as_ref() != Some(&keys) {
                    w.write_record(&keys)?;
                    self.header = Some(keys);
                }
                w.write_record(rec.values().map(csv_cell))?;
                let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
                self.out.write_all(&bytes)
            }
        }
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn rec(v: Value) -> Record {
        match v {
            Value::Object(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn json_lines_keep_key_order() {
        let mut buf = Vec::new();
        let mut e = Emitter::new(Format::Json, &mut buf);
        e.emit(rec(json!({"n": 3, "value": "(T)", "agree": true}))).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "{\"n\":3,\"value\":\"(T)\",\"agree\":true}\n");
    }

    #[test]
    fn csv_headers_follow_schema_changes() {
        let mut buf = Vec::new();
        let mut e = Emitter::new(Format::Csv, &mut buf);
        e.emit(rec(json!({"s": [2, 1], "value": "(T+1)/(T^2)"}))).unwrap();
        e.emit(rec(json!({"s": [1], "value": "(0)"}))).unwrap();
        e.emit(rec(json!({"summary": true}))).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "s,value\n\"2,1\",(T+1)/(T^2)\n1,(0)\nsummary\ntrue\n");
    }
}

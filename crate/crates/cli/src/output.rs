//! Rendering of command results in the three output formats.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

/// Version stamped on every machine-readable record.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Machine,
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<T: ToString>(&mut self, row: impl IntoIterator<Item = T>) {
        self.rows.push(row.into_iter().map(|v| v.to_string()).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    fn to_text(&self) -> String {
        let cols = self.header.len();
        let mut width = vec![0; cols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (w, cell) in width.iter_mut().zip(r) {
                *w = (*w).max(cell.len());
            }
        }
        let mut s = format!("{}:\n", self.name);
        for r in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = r
                .iter()
                .zip(&width)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(s, "  {}", cells.join(" "));
        }
        s
    }
}

/// Key/value summary plus optional tables.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub fields: Vec<(String, String)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            fields: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn field(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.fields.push((name.to_string(), value.to_string()));
        self
    }

    pub fn table(&mut self, t: Table) -> &mut Self {
        self.tables.push(t);
        self
    }

    /// Text: `key: value` lines then aligned tables. CSV: the first table,
    /// or the fields as `key,value` when there is none. Machine: a summary
    /// record followed by one record per table row.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = String::new();
                for (k, v) in &self.fields {
                    let _ = writeln!(s, "{k}: {v}");
                }
                for t in &self.tables {
                    s.push_str(&t.to_text());
                }
                s
            }
            Format::Csv => match self.tables.first() {
                Some(t) => t.to_csv(),
                None => {
                    let mut s = String::from("key,value\n");
                    for (k, v) in &self.fields {
                        let _ = writeln!(s, "{k},{}", csv_cell(v));
                    }
                    s
                }
            },
            Format::Machine => {
                let fields: Map<String, Value> = self
                    .fields
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                    .collect();
                let mut s = record(json!({
                    "record": "summary",
                    "command": self.command,
                    "fields": fields,
                }));
                for t in &self.tables {
                    for r in &t.rows {
                        let row: Map<String, Value> = t
                            .header
                            .iter()
                            .zip(r)
                            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                            .collect();
                        s.push_str(&record(json!({
                            "record": "row",
                            "table": t.name,
                            "values": row,
                        })));
                    }
                }
                s
            }
        }
    }
}

fn csv_cell(v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

/// One JSON line carrying the schema version first.
pub fn record(body: Value) -> String {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    if let Value::Object(b) = body {
        m.extend(b);
    }
    let mut s = Value::Object(m).to_string();
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo");
        r.field("size", 3).field("set", "{1, 2}");
        let mut t = Table::new("p", &["j", "0"]);
        t.push([0, 1]);
        t.push([1, 117]);
        r.table(t);
        r
    }

    #[test]
    fn formats() {
        let r = sample();
        let text = r.render(Format::Text);
        assert!(text.starts_with("size: 3\nset: {1, 2}\np:\n"));
        assert!(text.contains("  1 117\n"));
        assert_eq!(r.render(Format::Csv), "j,0\n0,1\n1,117\n");
        let m = r.render(Format::Machine);
        let lines: Vec<Value> = m.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l["schema_version"] == 1));
        assert_eq!(lines[0]["fields"]["set"], "{1, 2}");
        assert_eq!(lines[2]["values"]["0"], "117");
    }

    #[test]
    fn csv_fields_are_quoted() {
        let mut r = Report::new("demo");
        r.field("set", "{1, 2}");
        assert_eq!(r.render(Format::Csv), "key,value\nset,\"{1, 2}\"\n");
    }
}

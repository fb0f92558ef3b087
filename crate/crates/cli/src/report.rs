//! Deterministic rendering of command output.
//!
//! Every command builds a [`Report`] of ordered sections and renders it
//! to one of three formats. Numbers are formatted with the shortest
//! round-trip representation, so identical inputs produce byte-identical
//! output and CSV consumers can re-parse values exactly.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Section {
    KeyValues {
        title: String,
        rows: Vec<(String, String)>,
    },
    Table {
        title: String,
        columns: Vec<String>,
        rows: Vec<Vec<String>>,
    },
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub sections: Vec<Section>,
}

/// Shortest round-trip decimal form; infinities render as `inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

impl Report {
    pub fn key_values(title: &str, rows: Vec<(String, String)>) -> Self {
        Self { sections: vec![Section::KeyValues { title: title.into(), rows }] }
    }

    pub fn push_key_values(&mut self, title: &str, rows: Vec<(String, String)>) {
        self.sections.push(Section::KeyValues { title: title.into(), rows });
    }

    pub fn push_table(&mut self, title: &str, columns: Vec<String>, rows: Vec<Vec<String>>) {
        self.sections.push(Section::Table { title: title.into(), columns, rows });
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Table => self.render_table(),
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Json => self.render_json(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        for section in &self.sections {
            match section {
                Section::KeyValues { title, rows } => {
                    let _ = writeln!(out, "[{title}]");
                    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                    for (k, v) in rows {
                        let _ = writeln!(out, "  {k:<width$}  {v}");
                    }
                }
                Section::Table { title, columns, rows } => {
                    let _ = writeln!(out, "[{title}]");
                    let mut widths: Vec<usize> = columns.iter().map(|c| c.len()).collect();
                    for row in rows {
                        for (i, cell) in row.iter().enumerate() {
                            widths[i] = widths[i].max(cell.len());
                        }
                    }
                    let header: Vec<String> = columns
                        .iter()
                        .enumerate()
                        .map(|(i, c)| format!("{c:<w$}", w = widths[i]))
                        .collect();
                    let _ = writeln!(out, "  {}", header.join("  "));
                    for row in rows {
                        let cells: Vec<String> = row
                            .iter()
                            .enumerate()
                            .map(|(i, c)| format!("{c:<w$}", w = widths[i]))
                            .collect();
                        let _ = writeln!(out, "  {}", cells.join("  "));
                    }
                }
            }
            out.push('\n');
        }
        // Single trailing newline.
        while out.ends_with("\n\n") {
            out.pop();
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        let mut first = true;
        for section in &self.sections {
            if !first {
                out.push('\n');
            }
            first = false;
            match section {
                Section::KeyValues { rows, .. } => {
                    let _ = writeln!(out, "key,value");
                    for (k, v) in rows {
                        let _ = writeln!(out, "{},{}", csv_escape(k), csv_escape(v));
                    }
                }
                Section::Table { columns, rows, .. } => {
                    let header: Vec<String> = columns.iter().map(|c| csv_escape(c)).collect();
                    let _ = writeln!(out, "{}", header.join(","));
                    for row in rows {
                        let cells: Vec<String> = row.iter().map(|c| csv_escape(c)).collect();
                        let _ = writeln!(out, "{}", cells.join(","));
                    }
                }
            }
        }
        out
    }

    fn render_json(&self) -> String {
        let sections: Vec<serde_json::Value> = self
            .sections
            .iter()
            .map(|section| match section {
                Section::KeyValues { title, rows } => serde_json::json!({
                    "title": title,
                    "kind": "key_values",
                    "rows": rows
                        .iter()
                        .map(|(k, v)| serde_json::json!({"key": k, "value": v}))
                        .collect::<Vec<_>>(),
                }),
                Section::Table { title, columns, rows } => serde_json::json!({
                    "title": title,
                    "kind": "table",
                    "columns": columns,
                    "rows": rows,
                }),
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&serde_json::json!({ "sections": sections }))
            .expect("report serializes");
        text.push('\n');
        text
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

use std::io::Write;

use serde_json::Value;

use crate::args::Format;

/// A command's result: one JSON document plus a flat table for CSV/text.
#[derive(Debug)]
pub struct Outcome {
    pub pass: bool,
    pub doc: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Outcome {
    pub fn new(pass: bool, doc: Value) -> Self {
        Outcome {
            pass,
            doc,
            header: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
        self
    }

    /// Single-row table from the scalar top-level fields of the document.
    fn scalar_table(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let mut header = Vec::new();
        let mut row = Vec::new();
        if let Value::Object(map) = &self.doc {
            for (k, v) in map {
                let cell = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(_) | Value::Bool(_) => v.to_string(),
                    _ => continue,
                };
                header.push(k.clone());
                row.push(cell);
            }
        }
        (header, vec![row])
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        let (header, rows) = if self.header.is_empty() {
            self.scalar_table()
        } else {
            (self.header.clone(), self.rows.clone())
        };
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.doc)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&header)?;
                for r in &rows {
                    w.write_record(r)?;
                }
                w.flush()
            }
            Format::Text => {
                let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
                for r in &rows {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.len());
                    }
                }
                let line = |cells: &[String]| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                writeln!(out, "{}", line(&header))?;
                for r in &rows {
                    writeln!(out, "{}", line(r))?;
                }
                Ok(())
            }
        }
    }
}

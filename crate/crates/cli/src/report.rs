//! A titled table rendered as CSV, JSON or aligned text.

use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn int(n: impl Into<u64>) -> Cell {
        Cell::Int(n.into())
    }

    /// Shortest round-trip form, in scientific notation outside `[1e-4, 1e16)`.
    fn exact_text(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => {
                let a = x.abs();
                if a == 0.0 || (1e-4..1e16).contains(&a) {
                    x.to_string()
                } else {
                    format!("{x:e}")
                }
            }
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn table_text(&self) -> String {
        match self {
            Cell::Float(x) if x.abs() >= 1e-3 || *x == 0.0 => format!("{x:.6}"),
            Cell::Float(x) => format!("{x:.6e}"),
            Cell::Empty => "-".into(),
            other => other.exact_text(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => json!(n),
            Cell::Float(x) => json!(x),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

pub struct Report {
    pub title: String,
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(title: impl Into<String>, header: &[&str]) -> Report {
        Report::with_header(title.into(), header.iter().map(|s| s.to_string()).collect())
    }

    pub fn with_header(title: impl Into<String>, header: Vec<String>) -> Report {
        Report {
            title: title.into(),
            header,
            rows: Vec::new(),
        }
    }

    /// Short rows are padded with empty cells.
    pub fn push(&mut self, mut row: Vec<Cell>) {
        assert!(row.len() <= self.header.len(), "row wider than header");
        row.resize(self.header.len(), Cell::Empty);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::exact_text).collect();
            s += &cells.join(",");
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.header
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json))
                        .collect(),
                )
            })
            .collect();
        json!({ "title": self.title, "columns": self.header, "rows": rows })
    }

    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::table_text).collect())
            .collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| {
                cells
                    .iter()
                    .map(|r| r[c].chars().count())
                    .chain([self.header[c].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: &[String]| {
            let padded: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut s = format!("{}\n", self.title);
        s += &line(&self.header);
        s += &"-".repeat(widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1));
        s.push('\n');
        for r in &cells {
            s += &line(r);
        }
        s
    }
}

//! Reports rendered as aligned text, JSON or CSV. Every number is a decimal string.

use serde::{Deserialize, Serialize};

use crate::config::Format;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub prec_bits: u32,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, prec_bits: u32) -> Self {
        Report {
            command: command.to_string(),
            prec_bits,
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.to_human(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One CSV block per table, separated by an empty line; notes are omitted.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(&t.columns).expect("in-memory write");
            for r in &t.rows {
                w.write_record(r).expect("in-memory write");
            }
            let bytes = w.into_inner().expect("in-memory flush");
            out.push_str(&String::from_utf8(bytes).expect("utf-8 fields"));
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if !t.name.is_empty() {
                out.push_str(&format!("{}\n", t.name));
            }
            let width = |j: usize| {
                t.rows
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain([t.columns[j].chars().count()])
                    .max()
                    .unwrap_or(0)
            };
            let widths: Vec<usize> = (0..t.columns.len()).map(width).collect();
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                format!("{}\n", padded.join("  ").trim_end())
            };
            out.push_str(&line(&t.columns));
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&line(&rule));
            for r in &t.rows {
                out.push_str(&line(r));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut t = Table::new("values", &["k", "value"]);
        t.push(vec!["1".into(), "2.009968436e-3".into()]);
        t.push(vec!["2".into(), "-1.5, quoted".into()]);
        Report::new("demo", 128).table(t).note("heuristic")
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        assert_eq!(csv, "k,value\n1,2.009968436e-3\n2,\"-1.5, quoted\"\n");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn human_alignment() {
        let h = sample().to_human();
        assert!(h.starts_with("values\nk  value\n-  "));
        assert!(h.ends_with("note: heuristic\n"));
    }
}

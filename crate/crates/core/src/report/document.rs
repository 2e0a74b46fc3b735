use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    /// Aligned text tables.
    #[default]
    Plain,
    /// Comma-separated, one block per section, metadata as `#` lines.
    Csv,
    /// One JSON object mirroring the tables cell for cell.
    Json,
}

/// A rendered value together with the number it was rendered from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub display: String,
    pub value: Option<f64>,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell { display: s.into(), value: None }
    }

    pub fn num(display: impl Into<String>, value: f64) -> Self {
        Cell { display: display.into(), value: value.is_finite().then_some(value) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Block {
    Table { columns: Vec<String>, rows: Vec<Vec<Cell>> },
    Text { lines: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub title: String,
    #[serde(flatten)]
    pub block: Block,
    pub notes: Vec<String>,
}

impl Section {
    pub fn table(title: impl Into<String>, columns: &[&str]) -> Self {
        Section {
            title: title.into(),
            block: Block::Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() },
            notes: Vec::new(),
        }
    }

    pub fn text(title: impl Into<String>, lines: Vec<String>) -> Self {
        Section { title: title.into(), block: Block::Text { lines }, notes: Vec::new() }
    }

    pub fn row(mut self, cells: Vec<Cell>) -> Self {
        self.push_row(cells);
        self
    }

    pub fn push_row(&mut self, cells: Vec<Cell>) {
        match &mut self.block {
            Block::Table { columns, rows } => {
                debug_assert_eq!(columns.len(), cells.len(), "row width in `{}`", self.title);
                rows.push(cells);
            }
            Block::Text { .. } => panic!("rows added to a text section"),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        match &self.block {
            Block::Table { rows, .. } => rows,
            Block::Text { .. } => &[],
        }
    }

    /// Cell in the first row whose first cell displays `key`.
    pub fn lookup(&self, key: &str, column: &str) -> Option<&Cell> {
        let Block::Table { columns, rows } = &self.block else { return None };
        let j = columns.iter().position(|c| c == column)?;
        rows.iter().find(|r| r[0].display == key).map(|r| &r[j])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub input_digest: Option<String>,
    pub seed: Option<u64>,
    /// Effective configuration after merging file and flags.
    pub config: serde_json::Value,
}

impl Provenance {
    pub fn new(config: &impl Serialize) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: None,
            seed: None,
            config: serde_json::to_value(config).expect("config serializes"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub provenance: Provenance,
    pub sections: Vec<Section>,
}

impl ReportDocument {
    pub fn new(provenance: Provenance) -> Self {
        ReportDocument { provenance, sections: Vec::new() }
    }

    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }

    pub fn section(&self, title: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title == title)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Plain => Ok(self.render_plain()),
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("document serializes");
                s.push('\n');
                Ok(s)
            }
        }
    }

    fn provenance_lines(&self) -> Vec<String> {
        let p = &self.provenance;
        vec![
            format!("{} {}", p.tool, p.version),
            format!("input-digest: {}", p.input_digest.as_deref().unwrap_or("none")),
            format!("seed: {}", p.seed.map_or("none".to_string(), |s| s.to_string())),
            format!("config: {}", p.config),
        ]
    }

    fn render_plain(&self) -> String {
        let mut out = String::new();
        for line in self.provenance_lines() {
            let _ = writeln!(out, "# {line}");
        }
        for s in &self.sections {
            let _ = writeln!(out, "\n== {} ==", s.title);
            match &s.block {
                Block::Text { lines } => {
                    for l in lines {
                        let _ = writeln!(out, "{l}");
                    }
                }
                Block::Table { columns, rows } => {
                    let mut widths: Vec<usize> = columns.iter().map(|c| c.chars().count()).collect();
                    for r in rows {
                        for (w, c) in widths.iter_mut().zip(r) {
                            *w = (*w).max(c.display.chars().count());
                        }
                    }
                    let line = |cells: Vec<&str>| {
                        let parts: Vec<String> = cells
                            .iter()
                            .zip(&widths)
                            .enumerate()
                            .map(|(j, (c, &w))| if j == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                            .collect();
                        parts.join("  ").trim_end().to_string()
                    };
                    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
                    let _ = writeln!(out, "{}", line(columns.iter().map(String::as_str).collect()));
                    let _ = writeln!(out, "{}", rule.join("  "));
                    for r in rows {
                        let _ = writeln!(out, "{}", line(r.iter().map(|c| c.display.as_str()).collect()));
                    }
                }
            }
            for n in &s.notes {
                let _ = writeln!(out, "note: {n}");
            }
        }
        out
    }

    fn render_csv(&self) -> Result<String> {
        let mut out = String::new();
        for line in self.provenance_lines() {
            let _ = writeln!(out, "# {line}");
        }
        for s in &self.sections {
            let _ = writeln!(out, "# section: {}", s.title);
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
            match &s.block {
                Block::Text { lines } => {
                    w.write_record(["text"])?;
                    for l in lines {
                        w.write_record([l])?;
                    }
                }
                Block::Table { columns, rows } => {
                    w.write_record(columns)?;
                    for r in rows {
                        w.write_record(r.iter().map(|c| c.display.as_str()))?;
                    }
                }
            }
            let bytes = w.into_inner().map_err(|e| crate::Error::Csv(e.into_error().into()))?;
            out.push_str(&String::from_utf8(bytes).expect("csv of utf-8 input"));
            for n in &s.notes {
                let _ = writeln!(out, "# note: {n}");
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc() -> ReportDocument {
        let mut d = ReportDocument::new(Provenance::new(&serde_json::json!({"b": 1, "a": "x"})));
        d.push(
            Section::table("T", &["Metric", "Value"])
                .row(vec![Cell::text("LR"), Cell::num("4.3", 4.3)])
                .row(vec![Cell::text("PPV, in sample"), Cell::num("47%", 0.47)])
                .note("a note"),
        );
        d.push(Section::text("Label", vec!["line one".into()]));
        d
    }

    #[test]
    fn plain_aligns_columns() {
        let s = doc().render(OutputFormat::Plain).unwrap();
        assert!(s.contains("# config: {\"a\":\"x\",\"b\":1}"), "{s}");
        assert!(s.contains("Metric          Value\n--------------  -----\nLR                4.3\n"), "{s}");
        assert!(s.contains("note: a note"));
        assert!(s.contains("== Label ==\nline one\n"));
    }

    #[test]
    fn csv_quotes_and_marks_sections() {
        let s = doc().render(OutputFormat::Csv).unwrap();
        assert!(s.contains("# section: T\nMetric,Value\nLR,4.3\n\"PPV, in sample\",47%\n# note: a note\n"), "{s}");
    }

    #[test]
    fn json_keeps_values() {
        let s = doc().render(OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["sections"][0]["rows"][0][1]["value"], 4.3);
        assert_eq!(v["sections"][0]["kind"], "table");
        assert_eq!(v["provenance"]["version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(doc().section("T").unwrap().lookup("LR", "Value").unwrap().value, Some(4.3));
    }
}

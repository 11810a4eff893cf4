//! CSV/JSON table output and spectrum CSV ingestion.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use super::CliError;
use crate::sieve::{SeriesMode, Window};
use crate::transform::Spectrum;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Recorded at the top of every CSV and under `provenance` in every JSON file.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub window: Window,
    pub mode: SeriesMode,
}

impl Provenance {
    pub fn new(command: &str, window: Window, mode: SeriesMode) -> Self {
        Provenance {
            tool: "prime-spectrum",
            version: VERSION,
            command: command.to_string(),
            window,
            mode,
        }
    }

    pub fn comment_line(&self) -> String {
        format!(
            "# {} {} command={} window=[{},{}] mode={}",
            self.tool,
            self.version,
            self.command,
            self.window.start(),
            self.window.end(),
            self.mode.as_str()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Flag(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Flag(b) => u8::from(*b).to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Flag(b) => json!(b),
        }
    }
}

/// A named table with a fixed column order.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &'static [&'static str]) -> Self {
        Table {
            name,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, provenance: &Provenance) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", provenance.comment_line());
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", line.join(","));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// One JSON document holding provenance, every table, and extra fields.
pub fn json_document(
    provenance: &Provenance,
    tables: &[Table],
    extra: Map<String, Value>,
) -> String {
    let mut root = Map::new();
    root.insert(
        "provenance".into(),
        serde_json::to_value(provenance).expect("provenance serializes"),
    );
    for t in tables {
        root.insert(t.name.to_string(), t.to_json());
    }
    root.extend(extra);
    let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("json serializes");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_provenance(line: &str) -> Option<(Window, SeriesMode)> {
    let mut window = None;
    let mut mode = None;
    for field in line.trim_start_matches('#').split_whitespace() {
        if let Some(w) = field.strip_prefix("window=[") {
            let (a, b) = w.trim_end_matches(']').split_once(',')?;
            window = Window::new(a.trim().parse().ok()?, b.trim().parse().ok()?).ok();
        } else if let Some(m) = field.strip_prefix("mode=") {
            mode = match m {
                "indicator" => Some(SeriesMode::Indicator),
                "log" => Some(SeriesMode::LogWeighted),
                _ => None,
            };
        }
    }
    Some((window?, mode?))
}

/// Re-ingests a `spectrum.csv` written by the `spectrum` command.
pub fn read_spectrum_csv(path: &Path) -> Result<Spectrum, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let (window, mode) = parse_provenance(first)
        .ok_or_else(|| bad("missing or malformed provenance line".into()))?;
    let header = lines.next().ok_or_else(|| bad("missing header".into()))?;
    if header.trim() != "bin,nu,re,im,amplitude,phase" {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut coefficients = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(bad(format!("row {} has {} fields", i + 1, fields.len())));
        }
        let bin: usize = fields[0]
            .parse()
            .map_err(|_| bad(format!("row {}: bad bin", i + 1)))?;
        if bin != coefficients.len() {
            return Err(bad(format!(
                "row {}: expected bin {}",
                i + 1,
                coefficients.len()
            )));
        }
        let re: f64 = fields[2]
            .parse()
            .map_err(|_| bad(format!("row {}: bad re", i + 1)))?;
        let im: f64 = fields[3]
            .parse()
            .map_err(|_| bad(format!("row {}: bad im", i + 1)))?;
        coefficients.push(Complex64::new(re, im));
    }
    if coefficients.len() as u64 != window.len() {
        return Err(bad(format!(
            "{} rows but window {} has {} points",
            coefficients.len(),
            window,
            window.len()
        )));
    }
    Ok(Spectrum::from_coefficients(window, mode, coefficients))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let prov = Provenance::new("sieve", Window::new(2, 5).unwrap(), SeriesMode::Indicator);
        let mut t = Table::new("series", &["n", "value", "flag"]);
        t.push(vec![Cell::Int(2), Cell::Float(0.5), Cell::Flag(true)]);
        let csv = t.to_csv(&prov);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            format!("# prime-spectrum {VERSION} command=sieve window=[2,5] mode=indicator")
        );
        assert_eq!(lines[1], "n,value,flag");
        assert_eq!(lines[2], "2,0.5,1");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn provenance_parsing() {
        let prov = Provenance::new(
            "spectrum",
            Window::new(7, 90).unwrap(),
            SeriesMode::LogWeighted,
        );
        assert_eq!(
            parse_provenance(&prov.comment_line()),
            Some((Window::new(7, 90).unwrap(), SeriesMode::LogWeighted))
        );
        assert_eq!(parse_provenance("# nothing here"), None);
    }
}

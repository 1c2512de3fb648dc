//! Experiment reports: a config echo, named tables, and provenance,
//! serialized as JSON or CSV with round-trip-exact numbers.

use std::fmt::Write as _;

use serde::Serialize;

/// Full echo of the run configuration, embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub args: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub artifact_version: String,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            args: Vec::new(),
            seed: None,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn arg(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.args.push((key.to_string(), value.to_string()));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// One named column set.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Numerical provenance: truncation indices, certified error bounds, and the
/// like. Wall time is recorded only when timing is explicitly requested, so
/// default reports are byte-identical across reruns.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Provenance {
    pub entries: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl Provenance {
    pub fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: RunConfig,
    pub tables: Vec<Table>,
    pub provenance: Provenance,
}

/// 17 significant digits: round-trip exact for every f64.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    format!("{v:.16e}")
}

impl ExperimentReport {
    pub fn new(config: RunConfig) -> Self {
        ExperimentReport {
            config,
            tables: Vec::new(),
            provenance: Provenance::default(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&JsonView::from(self)).expect("serializable");
        s.push('\n');
        s
    }

    /// CSV: every table, preceded by a `# table: <name>` line and a header
    /// row; comma-separated, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for table in &self.tables {
            let _ = writeln!(out, "# table: {}", table.name);
            let _ = writeln!(out, "{}", table.columns.join(","));
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|v| fmt17(*v)).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
        }
        out
    }
}

/// JSON shape: numbers rendered as 17-digit strings so the serialized file
/// is deterministic and exact.
#[derive(Serialize)]
struct JsonView<'a> {
    config: &'a RunConfig,
    tables: Vec<JsonTable>,
    provenance: &'a Provenance,
}

#[derive(Serialize)]
struct JsonTable {
    name: String,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl<'a> From<&'a ExperimentReport> for JsonView<'a> {
    fn from(r: &'a ExperimentReport) -> Self {
        JsonView {
            config: &r.config,
            tables: r
                .tables
                .iter()
                .map(|t| JsonTable {
                    name: t.name.clone(),
                    columns: t.columns.clone(),
                    rows: t
                        .rows
                        .iter()
                        .map(|row| row.iter().map(|v| fmt17(*v)).collect())
                        .collect(),
                })
                .collect(),
            provenance: &r.provenance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt17_round_trips() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5e17] {
            let s = fmt17(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["x", "y"]);
        t.push(vec![1.0, 2.0]);
        let mut r = ExperimentReport::new(RunConfig::new("test"));
        r.tables.push(t);
        let csv = r.to_csv();
        assert!(csv.starts_with("# table: demo\nx,y\n"));
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
    }
}

//! Rendering of command results as JSON, CSV or DOT, with the seed echoed
//! into every artifact.

use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

use higgs_core::euler::QCountSeries;
use higgs_core::loopcrystal::CrystalGraph;
use higgs_core::selftest::CriterionReport;
use higgs_core::{GeneratorWord, HiggsError, IrrComponent, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
}

pub struct Emitter {
    seed: u64,
    format: Format,
    out: Option<PathBuf>,
}

fn io_err(e: impl std::fmt::Display) -> HiggsError {
    HiggsError::InvalidInput(format!("cannot write output: {e}"))
}

impl Emitter {
    /// An explicit format wins; otherwise the `--out` extension decides,
    /// falling back to JSON.
    pub fn new(seed: u64, format: Option<Format>, out: Option<PathBuf>) -> Self {
        let inferred = out.as_ref().and_then(|p| p.extension()).and_then(|e| match e.to_str()? {
            "dot" | "gv" => Some(Format::Dot),
            "csv" => Some(Format::Csv),
            _ => None,
        });
        Self { seed, format: format.or(inferred).unwrap_or(Format::Json), out }
    }

    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(io_err),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(io_err)
            }
        }
    }

    fn unsupported(&self, what: &str) -> HiggsError {
        HiggsError::InvalidInput(format!("{what} cannot be written as {:?}", self.format))
    }

    fn with_seed(&self, value: Value) -> Value {
        let mut obj = Map::new();
        obj.insert("seed".into(), json!(self.seed));
        match value {
            Value::Object(m) => obj.extend(m),
            other => {
                obj.insert("value".into(), other);
            }
        }
        Value::Object(obj)
    }

    fn json(&self, value: Value) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.with_seed(value)).map_err(io_err)?;
        self.write(&(text + "\n"))
    }

    fn csv(&self, columns: &[&str], rows: &[Value]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(columns).map_err(io_err)?;
        for row in rows {
            let cells: Vec<String> = columns
                .iter()
                .map(|c| match &row[*c] {
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    v => v.to_string(),
                })
                .collect();
            w.write_record(&cells).map_err(io_err)?;
        }
        let body = String::from_utf8(w.into_inner().map_err(io_err)?).map_err(io_err)?;
        self.write(&format!("# seed={}\n{body}", self.seed))
    }

    /// A single JSON value.
    pub fn value(&self, value: Value) -> Result<()> {
        match self.format {
            Format::Json => self.json(value),
            _ => Err(self.unsupported("this result")),
        }
    }

    /// A table: JSON `{…meta, rows}` or CSV with the given columns.
    pub fn rows(&self, columns: &[&str], rows: &[Value], meta: Value) -> Result<()> {
        match self.format {
            Format::Json => {
                let mut m = match meta {
                    Value::Object(m) => m,
                    _ => Map::new(),
                };
                m.insert("rows".into(), Value::Array(rows.to_vec()));
                self.json(Value::Object(m))
            }
            Format::Csv => self.csv(columns, rows),
            Format::Dot => Err(self.unsupported("a table")),
        }
    }

    /// A plain status line.
    pub fn text(&self, line: &str) -> Result<()> {
        self.write(&format!("{line}\n"))
    }

    pub fn graph(&self, g: &CrystalGraph) -> Result<()> {
        match self.format {
            Format::Dot => self.write(&format!("// seed: {}\n{}", self.seed, g.to_dot())),
            Format::Json => self.json(serde_json::to_value(g).map_err(io_err)?),
            Format::Csv => {
                let rows: Vec<Value> = g
                    .edges
                    .iter()
                    .map(|e| json!({"source": e.source.to_string(), "op": e.op.to_string(), "target": e.target.to_string()}))
                    .collect();
                self.csv(&["source", "op", "target"], &rows)
            }
        }
    }

    pub fn series(&self, word: &GeneratorWord, z: &IrrComponent, s: &QCountSeries) -> Result<()> {
        match self.format {
            Format::Csv => self.write(&format!("# seed={}\n{}", self.seed, s.to_csv()?)),
            Format::Json => self.json(json!({
                "word": word.to_string(),
                "component": z.to_string(),
                "chi": s.value_at_one().to_string(),
                "degree": s.degree(),
                "coefficients": s.coefficients().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "points": s.points().iter().map(|&(q, c)| json!({"q": q, "count": c.to_string()})).collect::<Vec<_>>(),
            })),
            Format::Dot => Err(self.unsupported("a point-count series")),
        }
    }

    pub fn reports(&self, reports: &[CriterionReport]) -> Result<()> {
        let rows: Vec<Value> = reports.iter().map(|r| serde_json::to_value(r).expect("plain data")).collect();
        match self.format {
            Format::Csv => self.csv(&["index", "name", "passed", "detail", "seconds"], &rows),
            Format::Json => self.json(json!({"passed": reports.iter().all(|r| r.passed), "criteria": rows})),
            Format::Dot => Err(self.unsupported("acceptance reports")),
        }
    }
}

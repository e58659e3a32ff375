//! Column-oriented figure datasets with CSV and JSON writers.
//!
//! CSV: UTF-8, `,` separated, `\n` line endings, `.` decimal point, reals
//! with 17 significant digits, metadata as leading `# key: value` lines.
//! JSON: one object with `kind`, `metadata` and an ordered `columns` array.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::number::{fmt17, num17, num17_opt, Num17};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DatasetKind {
    AnglePolar,
    InterferometerSweep,
    QpsiBenchmark,
    QpsiObjective,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ColumnData {
    Real(Vec<f64>),
    Flag(Vec<bool>),
    Text(Vec<String>),
    /// Reals that may be missing (written as an empty CSV field / `null`).
    OptionalReal(Vec<Option<f64>>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Real(v) => v.len(),
            ColumnData::Flag(v) => v.len(),
            ColumnData::Text(v) => v.len(),
            ColumnData::OptionalReal(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn type_name(&self) -> &'static str {
        match self {
            ColumnData::Real(_) | ColumnData::OptionalReal(_) => "real",
            ColumnData::Flag(_) => "flag",
            ColumnData::Text(_) => "text",
        }
    }

    fn csv_field(&self, row: usize) -> String {
        match self {
            ColumnData::Real(v) => fmt17(v[row]),
            ColumnData::Flag(v) => v[row].to_string(),
            ColumnData::Text(v) => v[row].clone(),
            ColumnData::OptionalReal(v) => v[row].map(fmt17).unwrap_or_default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

impl Serialize for Column {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Column", 3)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("type", self.data.type_name())?;
        match &self.data {
            ColumnData::Real(v) => st.serialize_field("values", &v.iter().map(|&x| Num17(x)).collect::<Vec<_>>())?,
            ColumnData::Flag(v) => st.serialize_field("values", v)?,
            ColumnData::Text(v) => st.serialize_field("values", v)?,
            ColumnData::OptionalReal(v) => st.serialize_field(
                "values",
                &v.iter().map(|x| Num17(x.unwrap_or(f64::NAN))).collect::<Vec<_>>(),
            )?,
        }
        st.end()
    }
}

/// The abscissa of a dataset: `points` values from `start` to `stop`
/// inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub variable: &'static str,
    pub points: usize,
    #[serde(serialize_with = "num17")]
    pub start: f64,
    #[serde(serialize_with = "num17")]
    pub stop: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub states: Vec<String>,
    pub grid: Option<Grid>,
    #[serde(serialize_with = "num17_opt")]
    pub db_floor: Option<f64>,
    pub tool_version: String,
    /// The generating command line, verbatim.
    pub command: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureDataset {
    pub kind: DatasetKind,
    pub metadata: Metadata,
    pub columns: Vec<Column>,
}

impl FigureDataset {
    pub fn new(kind: DatasetKind, metadata: Metadata) -> Self {
        FigureDataset { kind, metadata, columns: Vec::new() }
    }

    /// Appends a column; all columns must have the same length.
    pub fn push(&mut self, name: impl Into<String>, data: ColumnData) -> Result<()> {
        let name = name.into();
        if let Some(first) = self.columns.first() {
            if first.data.len() != data.len() {
                bail!("column `{name}` has {} rows, expected {}", data.len(), first.data.len());
            }
        }
        if self.column(&name).is_some() {
            bail!("duplicate column `{name}`");
        }
        self.columns.push(Column { name, data });
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn real(&self, name: &str) -> Option<&[f64]> {
        match &self.column(name)?.data {
            ColumnData::Real(v) => Some(v),
            _ => None,
        }
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.data.len())
    }

    pub fn header(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = Vec::new();
        writeln!(out, "# kind: {}", serde_json::to_value(self.kind)?.as_str().unwrap_or_default())?;
        writeln!(out, "# states: {}", self.metadata.states.join(" "))?;
        if let Some(g) = &self.metadata.grid {
            writeln!(out, "# grid: {} {} points from {} to {}", g.variable, g.points, fmt17(g.start), fmt17(g.stop))?;
        }
        if let Some(floor) = self.metadata.db_floor {
            writeln!(out, "# db_floor: {}", fmt17(floor))?;
        }
        writeln!(out, "# tool_version: {}", self.metadata.tool_version)?;
        writeln!(out, "# command: {}", self.metadata.command)?;
        {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            w.write_record(self.header())?;
            for row in 0..self.rows() {
                w.write_record(self.columns.iter().map(|c| c.data.csv_field(row)))?;
            }
            w.flush()?;
        }
        Ok(String::from_utf8(out)?)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

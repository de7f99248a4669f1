use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Format;
use crate::CliError;

/// Provenance block written ahead of every artifact.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub command: String,
    pub version: String,
    /// Grid, tolerances and other settings that shaped the run.
    pub parameters: BTreeMap<String, Value>,
    /// Derived quantities that do not fit the row schema, such as fit results.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, Value>,
}

impl Meta {
    pub fn new(command: String) -> Self {
        Meta {
            command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            ..Meta::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "R: DeserializeOwned"))]
pub struct Artifact<R> {
    pub meta: Meta,
    pub rows: Vec<R>,
}

impl<R: Serialize> Artifact<R> {
    pub fn write_to<W: Write>(&self, format: Format, w: &mut W) -> Result<(), CliError> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, self).map_err(|e| CliError::Io(e.to_string()))?;
                writeln!(w).map_err(|e| CliError::Io(e.to_string()))
            }
            Format::Csv => self.write_csv(w),
        }
    }

    fn write_csv<W: Write>(&self, w: &mut W) -> Result<(), CliError> {
        let io = |e: io::Error| CliError::Io(e.to_string());
        writeln!(w, "# command: {}", self.meta.command).map_err(io)?;
        writeln!(w, "# version: {}", self.meta.version).map_err(io)?;
        for (k, v) in &self.meta.parameters {
            writeln!(w, "# {k}: {v}").map_err(io)?;
        }
        for (k, v) in &self.meta.summary {
            writeln!(w, "# summary.{k}: {v}").map_err(io)?;
        }
        let mut csv = csv::Writer::from_writer(w);
        for row in &self.rows {
            csv.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
        }
        csv.flush().map_err(io)
    }
}

/// Reads a CSV artifact back, skipping the `#` header.
pub fn read_csv_rows<R: DeserializeOwned>(text: &str) -> Result<Vec<R>, csv::Error> {
    let body: String = text
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .flat_map(|l| [l, "\n"])
        .collect();
    csv::Reader::from_reader(body.as_bytes()).deserialize().collect()
}

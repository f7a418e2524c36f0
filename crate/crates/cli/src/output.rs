//! Self-describing output files and atomic writing.
//!
//! Every CSV file starts with a `# ` preamble naming the code version, the
//! unit convention, the seed and the fully resolved config. Structured
//! output is pretty-printed JSON. All files of a run are rendered in memory
//! first, then written to temporary files in the target directory and only
//! renamed into place once every one of them has been written.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const UNITS: &str =
    "energies and frequencies in units of the mean qubit frequency (omega_bar = 1); times in units of 1/omega_bar";

#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: Vec<u8>,
}

/// Comment lines written above every table.
#[derive(Debug, Clone)]
pub struct Preamble {
    pub title: String,
    pub seed: Option<u64>,
    pub config: Value,
    pub notes: Vec<String>,
}

impl Preamble {
    pub fn new(title: impl Into<String>, seed: Option<u64>, config: Value) -> Self {
        Self {
            title: title.into(),
            seed,
            config,
            notes: Vec::new(),
        }
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    fn render(&self) -> String {
        let mut s = format!("# sqa {VERSION}: {}\n# units: {UNITS}\n", self.title);
        match self.seed {
            Some(seed) => s += &format!("# seed: {seed}\n"),
            None => s += "# seed: none (no disorder draw)\n",
        }
        for n in &self.notes {
            s += &format!("# {n}\n");
        }
        s += &format!("# config: {}\n", self.config);
        s
    }
}

/// Real numbers in shortest round-trip form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn csv_file(
    name: impl Into<String>,
    preamble: &Preamble,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> CliResult<OutputFile> {
    let mut contents = preamble.render().into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut contents);
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(header).map_err(io)?;
        for row in rows {
            w.write_record(&row).map_err(io)?;
        }
        w.flush()?;
    }
    Ok(OutputFile {
        name: name.into(),
        contents,
    })
}

/// Structured document: provenance header plus the result payload.
#[derive(Debug, Clone, Serialize)]
pub struct Document<'a, T: Serialize> {
    pub sqa_version: &'static str,
    pub units: &'static str,
    pub command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<&'a str>,
    /// Seconds since the Unix epoch (`SOURCE_DATE_EPOCH` when set).
    pub generated_at: u64,
    pub config: &'a Value,
    pub warnings: &'a [String],
    pub result: T,
}

pub fn timestamp() -> u64 {
    if let Some(epoch) = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse().ok())
    {
        return epoch;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn json_file<T: Serialize>(name: impl Into<String>, doc: &T) -> CliResult<OutputFile> {
    let mut contents = serde_json::to_vec_pretty(doc)
        .map_err(|e| CliError::Numerical(format!("cannot serialize result: {e}")))?;
    contents.push(b'\n');
    Ok(OutputFile {
        name: name.into(),
        contents,
    })
}

/// Write all files or none of them.
pub fn write_all(dir: &Path, files: &[OutputFile]) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut staged = Vec::with_capacity(files.len());
    for f in files {
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(&f.contents)?;
        tmp.as_file().sync_all()?;
        staged.push((tmp, dir.join(&f.name)));
    }
    // Refuse before the first rename if any target cannot be replaced.
    if let Some((_, path)) = staged.iter().find(|(_, p)| p.is_dir()) {
        return Err(CliError::Io(format!("{} is a directory", path.display())));
    }
    let mut written = Vec::with_capacity(staged.len());
    for (tmp, path) in staged {
        tmp.persist(&path)
            .map_err(|e| CliError::Io(e.to_string()))?;
        written.push(path);
    }
    Ok(written)
}

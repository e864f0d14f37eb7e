//! Result files and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct OutputFile {
    pub file: String,
    pub rows: usize,
    pub bytes: usize,
    pub sha256: String,
}

/// Everything needed to reproduce a run. Thread count and output location
/// are left out: neither affects the results.
#[derive(Debug, Serialize)]
pub struct Manifest<'a, P: Serialize, S: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub format: Format,
    pub parallel_build: bool,
    pub parameters: &'a P,
    pub summary: &'a S,
    pub outputs: Vec<OutputFile>,
}

pub struct OutDir {
    dir: PathBuf,
    format: Format,
    written: Vec<OutputFile>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("cannot write {}: {e}", path.display()))
}

impl OutDir {
    pub fn create(dir: &Path, format: Format) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(OutDir { dir: dir.to_path_buf(), format, written: Vec::new() })
    }

    fn put(&mut self, name: String, rows: usize, bytes: Vec<u8>) -> Result<(), CliError> {
        let path = self.dir.join(&name);
        fs::write(&path, &bytes).map_err(|e| io_err(&path, e))?;
        self.written.push(OutputFile {
            file: name,
            rows,
            bytes: bytes.len(),
            sha256: format!("{:x}", Sha256::digest(&bytes)),
        });
        Ok(())
    }

    /// Writes `records` as `<stem>.csv` (header from the field names) or as
    /// a JSON array in `<stem>.json`.
    pub fn records<T: Serialize>(&mut self, stem: &str, records: &[T]) -> Result<(), CliError> {
        let name = format!("{stem}.{}", self.format.extension());
        let bytes = match self.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in records {
                    w.serialize(r).map_err(|e| CliError::Numeric(format!("serialising {name}: {e}")))?;
                }
                w.into_inner().map_err(|e| CliError::Numeric(format!("serialising {name}: {e}")))?
            }
            Format::Json => {
                let mut b = serde_json::to_vec_pretty(records)
                    .map_err(|e| CliError::Numeric(format!("serialising {name}: {e}")))?;
                b.push(b'\n');
                b
            }
        };
        self.put(name, records.len(), bytes)
    }

    pub fn finish<P: Serialize, S: Serialize>(
        self,
        command: &str,
        seed: u64,
        parameters: &P,
        summary: &S,
    ) -> Result<PathBuf, CliError> {
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            format: self.format,
            parallel_build: uop_core::Parallelism::rayon_available(),
            parameters,
            summary,
            outputs: self.written,
        };
        let path = self.dir.join("manifest.json");
        let mut bytes = serde_json::to_vec_pretty(&manifest)
            .map_err(|e| CliError::Numeric(format!("serialising manifest: {e}")))?;
        bytes.push(b'\n');
        fs::write(&path, bytes).map_err(|e| io_err(&path, e))?;
        Ok(path)
    }
}

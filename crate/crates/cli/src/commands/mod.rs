mod modes;
mod pcf;
mod reduce;
mod ring;
mod verify;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Loaded;
use crate::error::{CliError, Result};
use crate::io::{self, Provenance};

pub use modes::run as solve_modes;
pub use pcf::run as pcf_check;
pub use reduce::run as reduce;
pub use ring::run as ring;
pub use verify::run as verify;

/// Everything a command needs besides its own section of the config.
pub struct Context {
    pub loaded: Loaded,
    pub out: PathBuf,
    pub allow_degenerate: bool,
    pub provenance: Provenance,
    written: Vec<PathBuf>,
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    pub files: Vec<PathBuf>,
}

/// Header shared by the JSON reports.
#[derive(Debug, Serialize)]
pub struct ReportHead {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub inputs: BTreeMap<&'static str, String>,
}

impl Context {
    pub fn new(loaded: Loaded, command: &'static str, out: PathBuf, allow_degenerate: bool) -> Result<Self> {
        fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
        let provenance = Provenance {
            command,
            config_sha256: loaded.sha256.clone(),
            tolerances: loaded.config.tolerances.clone(),
        };
        Ok(Self {
            loaded,
            out,
            allow_degenerate,
            provenance,
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let path = self.path(name);
        io::write_csv(&path, &self.provenance, header, rows)?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.path(name);
        io::write_json(&path, value)?;
        self.written.push(path);
        Ok(())
    }

    pub fn head(&self, inputs: &[(&'static str, &Path)]) -> Result<ReportHead> {
        let inputs = inputs
            .iter()
            .map(|&(k, p)| io::file_sha256(p).map(|h| (k, h)))
            .collect::<Result<_>>()?;
        Ok(ReportHead {
            provenance: self.provenance.clone(),
            inputs,
        })
    }

    pub fn finish(self, passed: bool) -> Outcome {
        Outcome {
            passed,
            files: self.written,
        }
    }
}

/// One named tolerance check in a report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

pub fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

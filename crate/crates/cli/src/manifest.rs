use crate::args::Command;
use crate::error::{CliError, CliResult};
use crate::series::write_text;
use cfode_core::Grid;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t0: f64,
    pub t1: f64,
    pub n: usize,
}

impl From<Grid> for GridSpec {
    fn from(g: Grid) -> Self {
        Self {
            t0: g.t0(),
            t1: g.t1(),
            n: g.len(),
        }
    }
}

/// Record written next to every output. Replaying `command` reproduces the
/// outputs byte for byte on the same build; `wall_time_s` naturally differs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub command: Command,
    pub grid: GridSpec,
    /// The report printed on standard output: residual norms, case tag,
    /// iteration counts.
    pub report: serde_json::Value,
    pub outputs: Vec<PathBuf>,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::validation("manifest", format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serialises");
        text.push('\n');
        write_text(path, &text)
    }
}

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::failure::{CmdResult, Failure};

pub const MANIFEST_VERSION: &str = "blowup-lab manifest v1";

/// Record of one invocation; `argv` and `cwd` are enough to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub params: Value,
    pub argv: Vec<String>,
    pub cwd: PathBuf,
    pub seed: Option<u64>,
    pub rng: Option<String>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub duration_secs: f64,
    pub exit_code: u8,
}

impl Manifest {
    pub fn save(&self, path: &Path) -> CmdResult<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(path, text + "\n").map_err(|e| Failure::flag("--manifest", format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> CmdResult<Manifest> {
        let text =
            fs::read_to_string(path).map_err(|e| Failure::flag("manifest", format!("{}: {e}", path.display())))?;
        let manifest: Manifest =
            serde_json::from_str(&text).map_err(|e| Failure::flag("manifest", format!("{}: {e}", path.display())))?;
        if manifest.format != MANIFEST_VERSION {
            return Err(Failure::flag("manifest", format!("unsupported format {:?}", manifest.format)));
        }
        Ok(manifest)
    }
}

/// `<out>.manifest.json` next to an output file.
pub fn beside(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

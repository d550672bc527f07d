use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::CliError;

/// Environment variable naming the output directory when the config does not.
pub const OUTPUT_DIR_ENV: &str = "STOCHDIFF_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "stochdiff-out";

/// Writes files into one directory, each through a temporary file in the
/// same directory that is renamed into place once complete.
#[derive(Debug, Clone)]
pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn create(root: PathBuf) -> Result<Self, CliError> {
        std::fs::create_dir_all(&root)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", root.display())))?;
        Ok(Self { root })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let target = self.root.join(name);
        let io = |e: std::io::Error| CliError::Runtime(format!("{}: {e}", target.display()));
        let mut tmp = NamedTempFile::new_in(&self.root).map_err(io)?;
        tmp.write_all(contents.as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&target).map_err(|e| io(e.error))?;
        Ok(target)
    }
}

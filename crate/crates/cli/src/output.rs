//! Atomic output files: everything is written to a temporary file in the
//! target directory and renamed into place, so interrupted or failed runs
//! leave no partial outputs behind.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub struct OutputDir {
    dir: PathBuf,
}

impl OutputDir {
    pub fn create(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
        })
    }

    /// Write `bytes` to `name` atomically.
    pub fn write(&self, name: &str, bytes: &[u8]) -> io::Result<PathBuf> {
        let final_path = self.dir.join(name);
        let tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        io::Write::write_all(&mut tmp.as_file(), bytes)?;
        tmp.persist(&final_path).map_err(|e| e.error)?;
        Ok(final_path)
    }
}

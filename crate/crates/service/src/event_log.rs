use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use xfer_core::corpus::CompletionEvent;

use crate::ServiceError;

/// Append-only JSONL log of accepted completions. Each event is written as
/// one `write` of a complete line followed by `fsync`, so readers never see
/// a partial line from a finished append.
#[derive(Debug)]
pub struct EventLog {
    path: PathBuf,
    file: File,
    count: u64,
}

impl EventLog {
    pub fn open(path: &Path) -> Result<Self, ServiceError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let count = match File::open(path) {
            Ok(f) => BufReader::new(f).lines().map_while(|l| l.ok()).filter(|l| !l.trim().is_empty()).count() as u64,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => 0,
            Err(e) => return Err(e.into()),
        };
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(EventLog {
            path: path.to_path_buf(),
            file,
            count,
        })
    }

    pub fn append(&mut self, event: &CompletionEvent) -> Result<(), ServiceError> {
        event.validate()?;
        let mut line = serde_json::to_vec(event)?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.sync_data()?;
        self.count += 1;
        Ok(())
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::FrameRecord;

/// Index file listing a replayable stream: one `{"index": n, "file": "..."}` per line.
pub const FRAME_INDEX_FILE: &str = "frames.jsonl";

#[derive(Debug, Error)]
pub enum FrameSourceError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path} line {line}: {reason}")]
    BadLine { path: PathBuf, line: usize, reason: String },
    #[error("{path}: {reason}")]
    Image { path: PathBuf, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameIndexLine {
    pub index: u64,
    pub file: String,
}

/// Decoded frames stored as image files in a directory, replayed in index-file
/// order. Only image headers are read up front; pixels load when a frame is
/// cropped.
#[derive(Debug)]
pub struct DirectoryFrames {
    dir: PathBuf,
    entries: Vec<FrameIndexLine>,
    next: usize,
}

impl DirectoryFrames {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, FrameSourceError> {
        let dir = dir.into();
        let index_path = dir.join(FRAME_INDEX_FILE);
        let text =
            fs::read_to_string(&index_path).map_err(|source| FrameSourceError::Io { path: index_path.clone(), source })?;
        let entries = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str::<FrameIndexLine>(l).map_err(|e| FrameSourceError::BadLine {
                    path: index_path.clone(),
                    line: i + 1,
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DirectoryFrames { dir, entries, next: 0 })
    }

    pub fn entries(&self) -> &[FrameIndexLine] {
        &self.entries
    }

    pub fn path_of(&self, entry: &FrameIndexLine) -> PathBuf {
        self.dir.join(&entry.file)
    }

    fn load(&self, entry: &FrameIndexLine) -> Result<FrameRecord, FrameSourceError> {
        let path = self.path_of(entry);
        let (width, height) = image::image_dimensions(&path)
            .map_err(|e| FrameSourceError::Image { path: path.clone(), reason: e.to_string() })?;
        Ok(FrameRecord::from_file(entry.index, path, width, height))
    }
}

impl Iterator for DirectoryFrames {
    type Item = Result<FrameRecord, FrameSourceError>;

    fn next(&mut self) -> Option<Self::Item> {
        let entry = self.entries.get(self.next)?.clone();
        self.next += 1;
        Some(self.load(&entry))
    }
}

/// Write a frame index for `entries` into `dir`.
pub fn write_frame_index(dir: &Path, entries: &[FrameIndexLine]) -> io::Result<()> {
    let body: String = entries
        .iter()
        .map(|e| serde_json::to_string(e).expect("index line serializes") + "\n")
        .collect();
    fs::write(dir.join(FRAME_INDEX_FILE), body)
}

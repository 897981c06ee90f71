use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::raster::Segment;
use crate::geometry::BBox;
use crate::ledger::{Ledger, LedgerCategory, LedgerEntry};

pub const MANIFEST_FILE: &str = "manifest.jsonl";

#[derive(Debug, Error)]
pub enum SinkError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("stall id {0:?} cannot be used as a folder name")]
    StallId(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> SinkError + '_ {
    move |source| SinkError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredSegment {
    pub bbox: BBox,
    pub score: f64,
    pub file: PathBuf,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeatKeyframeRecord {
    pub stall_id: String,
    pub frame_index: u64,
    pub segments: Vec<StoredSegment>,
}

/// One `manifest.jsonl` line, describing one stored teat crop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestLine {
    pub frame_index: u64,
    pub stall_id: String,
    pub k: usize,
    pub bbox: BBox,
    pub score: f64,
    pub file: String,
    pub bytes: u64,
}

/// Where accepted teat keyframes go.
pub trait RecordSink {
    /// Make the folder for `stall_id` available; called on every stall change.
    fn open_stall(&mut self, stall_id: &str) -> Result<PathBuf, SinkError>;

    fn store(&mut self, stall_id: &str, frame_index: u64, segments: &[Segment]) -> Result<TeatKeyframeRecord, SinkError>;
}

/// Writes `<session>/<stall_id>/teat_<frame>_<k>.img` plus a per-stall
/// `manifest.jsonl`. A manifest is truncated the first time its stall is opened
/// by this sink, so re-running a stream over the same tree rewrites it exactly.
#[derive(Debug)]
pub struct FsSink {
    session_dir: PathBuf,
    opened: HashSet<String>,
    ledger: Option<Arc<Ledger>>,
}

impl FsSink {
    pub fn create(session_dir: impl Into<PathBuf>) -> Result<Self, SinkError> {
        let session_dir = session_dir.into();
        fs::create_dir_all(&session_dir).map_err(io_err(&session_dir))?;
        Ok(FsSink { session_dir, opened: HashSet::new(), ledger: None })
    }

    /// Record the size of every stored crop as a keyframe-record entry.
    pub fn with_ledger(mut self, ledger: Arc<Ledger>) -> Self {
        self.ledger = Some(ledger);
        self
    }

    pub fn session_dir(&self) -> &Path {
        &self.session_dir
    }

    fn stall_dir(&self, stall_id: &str) -> Result<PathBuf, SinkError> {
        let usable = !stall_id.is_empty()
            && stall_id != "."
            && stall_id != ".."
            && !stall_id.contains(['/', '\\', '\0']);
        if !usable {
            return Err(SinkError::StallId(stall_id.into()));
        }
        Ok(self.session_dir.join(stall_id))
    }
}

impl RecordSink for FsSink {
    fn open_stall(&mut self, stall_id: &str) -> Result<PathBuf, SinkError> {
        let dir = self.stall_dir(stall_id)?;
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        if self.opened.insert(stall_id.to_string()) {
            let manifest = dir.join(MANIFEST_FILE);
            File::create(&manifest).map_err(io_err(&manifest))?;
        }
        Ok(dir)
    }

    fn store(&mut self, stall_id: &str, frame_index: u64, segments: &[Segment]) -> Result<TeatKeyframeRecord, SinkError> {
        if !self.opened.contains(stall_id) {
            self.open_stall(stall_id)?;
        }
        let dir = self.stall_dir(stall_id)?;
        let mut lines = String::new();
        let mut stored = Vec::with_capacity(segments.len());
        for (k, seg) in segments.iter().enumerate() {
            let name = format!("teat_{frame_index}_{k}.img");
            let path = dir.join(&name);
            let bytes = seg.crop.to_pnm();
            fs::write(&path, &bytes).map_err(io_err(&path))?;
            let line = ManifestLine {
                frame_index,
                stall_id: stall_id.to_string(),
                k,
                bbox: seg.bbox,
                score: seg.score,
                file: name,
                bytes: bytes.len() as u64,
            };
            lines.push_str(&serde_json::to_string(&line).expect("manifest line serializes"));
            lines.push('\n');
            if let Some(ledger) = &self.ledger {
                let rel = Path::new(stall_id).join(&line.file);
                ledger.record(LedgerEntry::new(LedgerCategory::KeyframeRecord, rel.to_string_lossy(), line.bytes));
            }
            stored.push(StoredSegment { bbox: seg.bbox, score: seg.score, file: path, bytes: line.bytes });
        }
        let manifest = dir.join(MANIFEST_FILE);
        OpenOptions::new()
            .append(true)
            .create(true)
            .open(&manifest)
            .and_then(|mut f| f.write_all(lines.as_bytes()))
            .map_err(io_err(&manifest))?;
        Ok(TeatKeyframeRecord { stall_id: stall_id.to_string(), frame_index, segments: stored })
    }
}

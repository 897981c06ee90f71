//! Stall-ID and teat keyframe selection over an ordered frame stream, with
//! per-stall folders of cropped teat segments.

mod extractor;
mod gates;
mod raster;
mod sink;
mod source;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::TaskName;
use crate::gateway::BackendError;
use crate::geometry::BBox;

pub use extractor::{process_stream, FrameOutcome, KeyframeExtractor, RejectReason};
pub use gates::{confident_teats, gate_stall, gate_teats};
pub use raster::{crop_segments, Raster, RasterError, Segment};
pub use sink::{FsSink, ManifestLine, RecordSink, SinkError, StoredSegment, TeatKeyframeRecord, MANIFEST_FILE};
pub use source::{write_frame_index, DirectoryFrames, FrameIndexLine, FrameSourceError, FRAME_INDEX_FILE};

/// Text read from a stall tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcrResult {
    pub text: String,
    pub confidence: f64,
    pub bbox: BBox,
}

/// Pixels of a decoded frame, held in memory or read from disk when needed.
#[derive(Debug, Clone)]
pub enum FramePayload {
    Raster(Arc<Raster>),
    File(PathBuf),
    /// Geometry only; cropping such a frame fails.
    Empty,
}

#[derive(Debug, Clone)]
pub struct FrameRecord {
    pub index: u64,
    pub width: u32,
    pub height: u32,
    pub payload: FramePayload,
}

impl FrameRecord {
    pub fn from_raster(index: u64, raster: Raster) -> Self {
        FrameRecord { index, width: raster.width, height: raster.height, payload: FramePayload::Raster(Arc::new(raster)) }
    }

    pub fn from_file(index: u64, path: impl Into<PathBuf>, width: u32, height: u32) -> Self {
        FrameRecord { index, width, height, payload: FramePayload::File(path.into()) }
    }

    /// A frame with dimensions and no pixels, for gate-only use.
    pub fn blank(index: u64, width: u32, height: u32) -> Self {
        FrameRecord { index, width, height, payload: FramePayload::Empty }
    }

    pub fn source_path(&self) -> Option<&Path> {
        match &self.payload {
            FramePayload::File(p) => Some(p),
            _ => None,
        }
    }

    pub fn raster(&self) -> Result<Arc<Raster>, RasterError> {
        match &self.payload {
            FramePayload::Raster(r) => Ok(Arc::clone(r)),
            FramePayload::File(p) => Raster::load(p).map(Arc::new),
            FramePayload::Empty => Err(RasterError::NoPixels(self.index)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractorConfig {
    /// Only frames whose index is a multiple of this stride are examined.
    pub extraction_rate: u64,
    pub ocr_conf_min: f64,
    pub det_conf_min: f64,
    /// Width fraction on each side where a stall tag counts as truncated.
    pub edge_margin_frac: f64,
    /// Inset of the central rectangle every teat box must fit inside.
    pub center_margin_frac: f64,
    pub expected_teat_count: usize,
    pub output_root: PathBuf,
    pub capture_date: String,
    pub camera_id: String,
    /// Task sent with detect requests; `None` asks for plain localization.
    pub detect_task: Option<TaskName>,
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        ExtractorConfig {
            extraction_rate: 1,
            ocr_conf_min: 0.90,
            det_conf_min: 0.50,
            edge_margin_frac: 0.05,
            center_margin_frac: 0.10,
            expected_teat_count: 4,
            output_root: PathBuf::from("keyframes"),
            capture_date: "undated".into(),
            camera_id: "cam0".into(),
            detect_task: None,
        }
    }
}

impl ExtractorConfig {
    /// Session directory name: `<capture-date>_<camera-id>`.
    pub fn session(&self) -> String {
        format!("{}_{}", self.capture_date, self.camera_id)
    }

    pub fn session_dir(&self) -> PathBuf {
        self.output_root.join(self.session())
    }

    pub fn validate(&self) -> Result<(), ExtractError> {
        let bad = |m: String| Err(ExtractError::Config(m));
        if self.extraction_rate < 1 {
            return bad("extraction_rate must be at least 1".into());
        }
        for (name, v) in [("edge_margin_frac", self.edge_margin_frac), ("center_margin_frac", self.center_margin_frac)] {
            if !(v > 0.0 && v < 0.5) {
                return bad(format!("{name} = {v} must lie in (0, 0.5)"));
            }
        }
        for (name, v) in [("ocr_conf_min", self.ocr_conf_min), ("det_conf_min", self.det_conf_min)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} = {v} must lie in [0, 1]"));
            }
        }
        if self.expected_teat_count < 1 {
            return bad("expected_teat_count must be at least 1".into());
        }
        for (name, v) in [("capture_date", &self.capture_date), ("camera_id", &self.camera_id)] {
            if v.is_empty() || v.contains(['/', '\\']) || v == "." || v == ".." {
                return bad(format!("{name} {v:?} is not a usable directory name part"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub frames_seen: u64,
    pub stall_keys: u64,
    pub teat_keys: u64,
    pub rejected: u64,
}

/// Mutable loop state. `folder_name` is set exactly when `cur_stall_id` is.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtractorState {
    pub cur_stall_id: Option<String>,
    pub folder_name: Option<PathBuf>,
    pub counters: Counters,
    pub last_index: Option<u64>,
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("invalid extractor config: {0}")]
    Config(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("frame index {got} does not follow {previous}")]
    OutOfOrder { previous: u64, got: u64, state: Box<ExtractorState> },
    #[error("backend failed on frame {frame_index}: {source}")]
    Backend { frame_index: u64, source: BackendError, state: Box<ExtractorState> },
    #[error("sink failed on frame {frame_index}: {source}")]
    Sink { frame_index: u64, source: SinkError, state: Box<ExtractorState> },
    #[error("frame source failed: {source}")]
    Source { source: FrameSourceError, state: Box<ExtractorState> },
    #[error("cannot crop frame {frame_index}: {source}")]
    Crop { frame_index: u64, source: RasterError, state: Box<ExtractorState> },
}

impl ExtractError {
    /// State at the moment of failure, when the run got that far.
    pub fn partial_state(&self) -> Option<&ExtractorState> {
        match self {
            ExtractError::OutOfOrder { state, .. }
            | ExtractError::Backend { state, .. }
            | ExtractError::Sink { state, .. }
            | ExtractError::Source { state, .. }
            | ExtractError::Crop { state, .. } => Some(state),
            ExtractError::Config(_) | ExtractError::Contract(_) => None,
        }
    }
}

//! Inference backends: the contract the extractor drives, a scripted replay
//! backend, the NDJSON wire client, a deadline-accounting wrapper and the
//! benchmark model registry.

mod deadline;
pub mod protocol;
mod registry;
mod scripted;
mod wire;

use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::TaskName;
use crate::geometry::{BBox, Detection};
use crate::keyframe::{FrameRecord, OcrResult};

pub use deadline::{with_deadline, Clock, DeadlineBackend, LatencyLog, LatencyRecord, ManualClock, SystemClock};
pub use protocol::Op;
pub use registry::{best_by_map, lookup, model_registry, ModelCard};
pub use scripted::{ScriptedBackend, ScriptedFrame};
pub use wire::{WireBackend, DEFAULT_TIMEOUT_MS};

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("backend i/o: {0}")]
    Io(#[from] io::Error),
    #[error("no response within {0} ms")]
    Timeout(u64),
    #[error("response id {got:?} does not match request id {expected}")]
    IdMismatch { expected: u64, got: Option<u64> },
    #[error("malformed message: {0}")]
    Malformed(String),
    #[error("backend error {code}: {message}")]
    Remote { code: String, message: String },
    #[error("peer exited")]
    PeerExited,
    #[error("cannot reach endpoint {endpoint}: {reason}")]
    Unreachable { endpoint: String, reason: String },
    #[error("unsupported request: {0}")]
    Unsupported(String),
    #[error("fixture: {0}")]
    Fixture(String),
    #[error("invalid backend setting: {0}")]
    Config(String),
}

/// One detection as backends report it, before it is tied to a frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawDetection {
    pub bbox: BBox,
    pub class_id: u32,
    pub score: f64,
}

impl RawDetection {
    pub fn check(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.score) {
            return Err(format!("score {} outside [0, 1]", self.score));
        }
        if !self.bbox.is_valid() {
            return Err(format!("invalid bbox {:?}", <[f64; 4]>::from(self.bbox)));
        }
        Ok(())
    }

    pub fn on_frame(self, frame_index: u64) -> Detection {
        Detection { image_id: frame_index, class_id: self.class_id, bbox: self.bbox, score: self.score }
    }
}

pub(crate) fn check_ocr(ocr: &OcrResult) -> Result<(), String> {
    if !(0.0..=1.0).contains(&ocr.confidence) {
        return Err(format!("ocr confidence {} outside [0, 1]", ocr.confidence));
    }
    if !ocr.bbox.is_valid() {
        return Err(format!("invalid ocr bbox {:?}", <[f64; 4]>::from(ocr.bbox)));
    }
    Ok(())
}

/// Inference contract for the keyframe extractor.
///
/// A backend answers every request or fails with a [`BackendError`]; it never
/// drops a request silently.
pub trait DetectorBackend {
    fn detect(&mut self, frame: &FrameRecord, task: Option<TaskName>) -> Result<Vec<Detection>, BackendError>;

    fn ocr(&mut self, frame: &FrameRecord) -> Result<Option<OcrResult>, BackendError>;
}

impl<B: DetectorBackend + ?Sized> DetectorBackend for Box<B> {
    fn detect(&mut self, frame: &FrameRecord, task: Option<TaskName>) -> Result<Vec<Detection>, BackendError> {
        (**self).detect(frame, task)
    }

    fn ocr(&mut self, frame: &FrameRecord) -> Result<Option<OcrResult>, BackendError> {
        (**self).ocr(frame)
    }
}

impl<B: DetectorBackend + ?Sized> DetectorBackend for &mut B {
    fn detect(&mut self, frame: &FrameRecord, task: Option<TaskName>) -> Result<Vec<Detection>, BackendError> {
        (**self).detect(frame, task)
    }

    fn ocr(&mut self, frame: &FrameRecord) -> Result<Option<OcrResult>, BackendError> {
        (**self).ocr(frame)
    }
}

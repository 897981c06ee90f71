use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{check_ocr, BackendError, DetectorBackend, RawDetection};
use crate::annotation::TaskName;
use crate::geometry::Detection;
use crate::keyframe::{FrameRecord, OcrResult};

/// Canned answers for one frame.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptedFrame {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ocr: Option<OcrResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detections: Vec<RawDetection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fixture {
    frames: BTreeMap<u64, ScriptedFrame>,
}

/// Replays a fixture keyed by frame index. Frames without an entry get no
/// detections and no OCR reading.
#[derive(Debug, Clone, Default)]
pub struct ScriptedBackend {
    frames: BTreeMap<u64, ScriptedFrame>,
}

impl ScriptedBackend {
    pub fn new(frames: BTreeMap<u64, ScriptedFrame>) -> Result<Self, BackendError> {
        for (index, frame) in &frames {
            for d in &frame.detections {
                d.check().map_err(|e| BackendError::Fixture(format!("frame {index}: {e}")))?;
            }
            if let Some(ocr) = &frame.ocr {
                check_ocr(ocr).map_err(|e| BackendError::Fixture(format!("frame {index}: {e}")))?;
            }
        }
        Ok(ScriptedBackend { frames })
    }

    /// Parse a fixture document: `{"frames": {"<index>": {"ocr": ..., "detections": [...]}}}`.
    pub fn from_json(text: &str) -> Result<Self, BackendError> {
        let fixture: Fixture = serde_json::from_str(text).map_err(|e| BackendError::Fixture(e.to_string()))?;
        Self::new(fixture.frames)
    }

    pub fn load(path: &Path) -> Result<Self, BackendError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError::Fixture(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&Fixture { frames: self.frames.clone() }).expect("fixture serializes")
    }

    pub fn frames(&self) -> &BTreeMap<u64, ScriptedFrame> {
        &self.frames
    }
}

impl DetectorBackend for ScriptedBackend {
    fn detect(&mut self, frame: &FrameRecord, _task: Option<TaskName>) -> Result<Vec<Detection>, BackendError> {
        Ok(self
            .frames
            .get(&frame.index)
            .map(|f| f.detections.iter().map(|d| d.on_frame(frame.index)).collect())
            .unwrap_or_default())
    }

    fn ocr(&mut self, frame: &FrameRecord) -> Result<Option<OcrResult>, BackendError> {
        Ok(self.frames.get(&frame.index).and_then(|f| f.ocr.clone()))
    }
}

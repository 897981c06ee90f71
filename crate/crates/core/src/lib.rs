//! Core library for turning a milking-parlor frame stream into per-stall teat
//! keyframe records, consolidating LabelMe annotations into COCO datasets and
//! scoring detector output with COCO-style small-object mAP.
//!
//! The crate is split by concern:
//!
//! * [`geometry`] and [`eval`] hold box math and detection metrics.
//! * [`keyframe`] is the stall/teat keyframe state machine and its on-disk sink.
//! * [`annotation`] parses LabelMe files, aggregates, splits and validates COCO data.
//! * [`gateway`] defines the inference backend contract, the NDJSON wire client,
//!   the deadline monitor and the benchmark model registry.
//! * [`ledger`] accounts for bytes across the pipeline.

pub mod annotation;
pub mod eval;
pub mod gateway;
pub mod geometry;
pub mod keyframe;
pub mod ledger;

pub use annotation::{CocoDataset, LabelMeDoc, SplitSpec, TaskName, TaskSpec};
pub use eval::{evaluate, AreaBand, EvalConfig, EvalError, EvalResult};
pub use gateway::{BackendError, DetectorBackend, LatencyRecord, ModelCard};
pub use geometry::{iou, BBox, Detection, GtAnnotation};
pub use keyframe::{ExtractorConfig, ExtractorState, FrameRecord, OcrResult};
pub use ledger::{Ledger, LedgerCategory, LedgerEntry, LedgerReport};

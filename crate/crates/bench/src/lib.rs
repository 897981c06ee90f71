//! Synthetic workloads shared by the benchmarks.
//!
//! Everything is generated from a seed with the same SplitMix64 generator the
//! dataset splitter uses, so the inputs are identical on every run.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use teatkey_core::annotation::SplitMix64;
use teatkey_core::eval::ImageSize;
use teatkey_core::gateway::{RawDetection, ScriptedBackend, ScriptedFrame};
use teatkey_core::keyframe::{FrameRecord, Raster, RecordSink, Segment, SinkError, TeatKeyframeRecord};
use teatkey_core::{BBox, Detection, GtAnnotation, OcrResult};

fn unit(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn range(rng: &mut SplitMix64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

pub fn random_box(rng: &mut SplitMix64, side: f64) -> BBox {
    let w = range(rng, 6.0, 80.0);
    let h = range(rng, 6.0, 80.0);
    BBox::new(range(rng, 0.0, side - w), range(rng, 0.0, side - h), w, h)
}

pub fn box_pairs(n: usize, seed: u64) -> Vec<(BBox, BBox)> {
    let mut rng = SplitMix64::new(seed);
    (0..n).map(|_| (random_box(&mut rng, 400.0), random_box(&mut rng, 400.0))).collect()
}

pub struct EvalWorkload {
    pub gts: Vec<GtAnnotation>,
    pub dets: Vec<Detection>,
    pub images: HashMap<u64, ImageSize>,
}

/// `images` images of 640 x 640 with `per_image` ground-truth boxes spread over
/// four classes. Each box gets a jittered detection and every fifth image an
/// extra spurious one.
pub fn eval_workload(images: u64, per_image: usize, seed: u64) -> EvalWorkload {
    let mut rng = SplitMix64::new(seed);
    let mut gts = Vec::new();
    let mut dets = Vec::new();
    let mut sizes = HashMap::new();
    for image_id in 1..=images {
        sizes.insert(image_id, ImageSize { width: 640, height: 640 });
        for _ in 0..per_image {
            let class_id = 1 + (rng.next_u64() % 4) as u32;
            let bbox = random_box(&mut rng, 640.0);
            gts.push(GtAnnotation { id: gts.len() as u64 + 1, image_id, class_id, bbox });
            let shift = range(&mut rng, -0.2, 0.2);
            let moved = BBox::new(bbox.x + shift * bbox.w, bbox.y - shift * bbox.h, bbox.w, bbox.h);
            dets.push(Detection { image_id, class_id, bbox: moved, score: range(&mut rng, 0.05, 1.0) });
        }
        if image_id % 5 == 0 {
            let bbox = random_box(&mut rng, 640.0);
            dets.push(Detection { image_id, class_id: 1, bbox, score: range(&mut rng, 0.05, 1.0) });
        }
    }
    EvalWorkload { gts, dets, images: sizes }
}

pub const FRAME_WIDTH: u32 = 320;
pub const FRAME_HEIGHT: u32 = 180;

/// A stream of `n` frames: a new stall tag every 40 frames, four centred teats
/// on most other frames, and a three-teat reject every seventh frame.
pub fn teat_stream(n: u64) -> (Vec<FrameRecord>, ScriptedBackend) {
    let data: Vec<u8> = (0..FRAME_WIDTH * FRAME_HEIGHT).map(|i| (i % 251) as u8).collect();
    let raster = Raster::new(FRAME_WIDTH, FRAME_HEIGHT, 1, data).expect("raster dimensions");
    let frames = (0..n).map(|i| FrameRecord::from_raster(i, raster.clone())).collect();
    let mut script = BTreeMap::new();
    for i in 0..n {
        let mut f = ScriptedFrame::default();
        if i % 40 == 0 {
            f.ocr = Some(OcrResult {
                text: (i / 40 + 1).to_string(),
                confidence: 0.97,
                bbox: BBox::new(140.0, 10.0, 40.0, 20.0),
            });
        } else {
            let teats = if i % 7 == 0 { 3 } else { 4 };
            f.detections = (0..teats)
                .map(|k| RawDetection {
                    bbox: BBox::new(60.0 + 50.0 * k as f64, 70.0, 30.0, 45.0),
                    class_id: 0,
                    score: 0.9,
                })
                .collect();
        }
        script.insert(i, f);
    }
    (frames, ScriptedBackend::new(script).expect("valid script"))
}

/// Keeps records in memory; isolates the extractor from disk speed.
#[derive(Debug, Default)]
pub struct MemorySink {
    pub records: Vec<TeatKeyframeRecord>,
    pub bytes: usize,
}

impl RecordSink for MemorySink {
    fn open_stall(&mut self, stall_id: &str) -> Result<PathBuf, SinkError> {
        Ok(PathBuf::from(stall_id))
    }

    fn store(&mut self, stall_id: &str, frame_index: u64, segments: &[Segment]) -> Result<TeatKeyframeRecord, SinkError> {
        self.bytes += segments.iter().map(|s| s.crop.data.len()).sum::<usize>();
        let record = TeatKeyframeRecord { stall_id: stall_id.into(), frame_index, segments: Vec::new() };
        self.records.push(record.clone());
        Ok(record)
    }
}

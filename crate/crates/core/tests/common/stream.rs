//! Builder for scripted frame streams: synthetic frames plus the matching
//! scripted-backend fixture, with the outcome each frame should have.

#![allow(dead_code)]

use std::collections::BTreeMap;

use teatkey_core::gateway::{RawDetection, ScriptedBackend, ScriptedFrame};
use teatkey_core::keyframe::{FrameRecord, Raster};
use teatkey_core::{BBox, OcrResult};

pub const WIDTH: u32 = 160;
pub const HEIGHT: u32 = 96;

#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    /// Readable tag in the middle of the frame.
    Stall(String),
    /// Tag clipped by the right-hand band.
    EdgeStall(String),
    /// Tag below the OCR confidence floor.
    UnsureStall(String),
    /// Tag text that is not a number.
    GarbledStall,
    /// Four confident, centred teats.
    Teat,
    /// Only three confident teats.
    ThreeTeats,
    /// Four teats, one touching the frame edge.
    EdgeTeat,
    /// Five confident boxes (crossed teats).
    ExtraTeat,
    /// Four teats, one under the confidence floor.
    UnsureTeat,
    /// Readable tag and valid teats in one frame.
    StallAndTeat(String),
    Nothing,
}

pub fn pixels(index: u64) -> Raster {
    let data = (0..HEIGHT)
        .flat_map(|y| (0..WIDTH).map(move |x| ((u64::from(x) * 7 + u64::from(y) * 13 + index * 31) % 251) as u8))
        .collect();
    Raster::new(WIDTH, HEIGHT, 1, data).unwrap()
}

fn tag(text: &str, confidence: f64, x: f64) -> OcrResult {
    OcrResult { text: text.into(), confidence, bbox: BBox::new(x, 8.0, 24.0, 12.0) }
}

fn teats(index: u64, n: usize) -> Vec<RawDetection> {
    // centre rectangle at 10% inset: x in [16, 144], y in [9.6, 86.4]
    (0..n)
        .map(|k| RawDetection {
            bbox: BBox::new(30.0 + 24.0 * k as f64 + (index % 3) as f64, 40.0, 14.0, 20.0 + k as f64),
            class_id: 0,
            score: 0.95 - 0.05 * k as f64,
        })
        .collect()
}

pub fn scripted_frame(index: u64, kind: &Kind) -> ScriptedFrame {
    let mut f = ScriptedFrame::default();
    match kind {
        Kind::Stall(id) => f.ocr = Some(tag(id, 0.98, 68.0)),
        Kind::EdgeStall(id) => f.ocr = Some(tag(id, 0.98, 140.0)),
        Kind::UnsureStall(id) => f.ocr = Some(tag(id, 0.6, 68.0)),
        Kind::GarbledStall => f.ocr = Some(tag("4B", 0.99, 68.0)),
        Kind::Teat => f.detections = teats(index, 4),
        Kind::ThreeTeats => f.detections = teats(index, 3),
        Kind::EdgeTeat => {
            f.detections = teats(index, 4);
            f.detections[2].bbox.x = 150.0;
            f.detections[2].bbox.w = 10.0;
        }
        Kind::ExtraTeat => {
            f.detections = teats(index, 4);
            f.detections.push(RawDetection { bbox: BBox::new(60.0, 45.0, 14.0, 20.0), class_id: 0, score: 0.7 });
        }
        Kind::UnsureTeat => {
            f.detections = teats(index, 4);
            f.detections[1].score = 0.3;
        }
        Kind::StallAndTeat(id) => {
            f.ocr = Some(tag(id, 0.98, 68.0));
            f.detections = teats(index, 4);
        }
        Kind::Nothing => {}
    }
    f
}

pub fn backend(script: &[(u64, Kind)]) -> ScriptedBackend {
    let frames: BTreeMap<u64, ScriptedFrame> =
        script.iter().filter(|(_, k)| *k != Kind::Nothing).map(|(i, k)| (*i, scripted_frame(*i, k))).collect();
    ScriptedBackend::new(frames).unwrap()
}

pub fn frames(script: &[(u64, Kind)]) -> Vec<FrameRecord> {
    script.iter().map(|(i, _)| FrameRecord::from_raster(*i, pixels(*i))).collect()
}

/// Expected stored records as (stall id, frame index), traced by hand rules:
/// a readable centred tag switches the stall; a valid teat frame is stored only
/// once some stall is current; off-stride frames are ignored.
pub fn expected_records(script: &[(u64, Kind)], stride: u64) -> Vec<(String, u64)> {
    let mut current: Option<String> = None;
    let mut out = Vec::new();
    for (index, kind) in script {
        if index % stride != 0 {
            continue;
        }
        match kind {
            Kind::Stall(id) | Kind::StallAndTeat(id) => current = Some(id.clone()),
            Kind::Teat => {
                if let Some(s) = &current {
                    out.push((s.clone(), *index));
                }
            }
            _ => {}
        }
    }
    out
}

/// The 300-frame acceptance stream: three stalls, sampled every second frame,
/// with teat frames before the first stall key, edge-clipped tags, three-teat
/// frames and other rejects interleaved. Odd frames carry valid teat answers
/// that must never be consulted.
pub fn golden_script() -> Vec<(u64, Kind)> {
    let mut script = Vec::with_capacity(300);
    for i in 0..300u64 {
        let kind = if i % 2 == 1 {
            Kind::Teat
        } else {
            match i {
                0 | 4 | 8 => Kind::Teat,
                2 => Kind::ThreeTeats,
                10 => Kind::EdgeStall("7".into()),
                12 => Kind::UnsureStall("7".into()),
                14 => Kind::Stall("7".into()),
                100 => Kind::EdgeStall("8".into()),
                102 => Kind::GarbledStall,
                104 => Kind::Stall("8".into()),
                106 => Kind::Stall("8".into()),
                200 => Kind::StallAndTeat("9".into()),
                202 => Kind::EdgeStall("7".into()),
                _ => match (i / 2) % 8 {
                    0 | 3 => Kind::Teat,
                    1 => Kind::ThreeTeats,
                    2 => Kind::EdgeTeat,
                    4 => Kind::Nothing,
                    5 => Kind::ExtraTeat,
                    6 => Kind::UnsureTeat,
                    _ => Kind::EdgeStall("5".into()),
                },
            }
        };
        script.push((i, kind));
    }
    script
}

//! Brute-force reference evaluator, written without the library's evaluation code.
//!
//! For every (class, threshold, band) cell it replays greedy matching image by
//! image, builds the full precision/recall list and takes, for each recall level,
//! the best precision at any rank reaching that recall.

#![allow(dead_code)]

use std::collections::BTreeSet;

use teatkey_core::{BBox, Detection, GtAnnotation};

pub struct OracleCell {
    pub class_id: u32,
    pub threshold_index: usize,
    pub small: bool,
    pub ap: Option<f64>,
}

pub struct OracleResult {
    pub cells: Vec<OracleCell>,
    pub map_all: Option<f64>,
    pub map_small: Option<f64>,
}

fn corners(b: &BBox) -> (f64, f64, f64, f64) {
    (b.x, b.y, b.x + b.w, b.y + b.h)
}

pub fn oracle_iou(a: &BBox, b: &BBox) -> f64 {
    if a.w <= 0.0 || a.h <= 0.0 || b.w <= 0.0 || b.h <= 0.0 {
        return 0.0;
    }
    let (ax1, ay1, ax2, ay2) = corners(a);
    let (bx1, by1, bx2, by2) = corners(b);
    let iw = (ax2.min(bx2) - ax1.max(bx1)).max(0.0);
    let ih = (ay2.min(by2) - ay1.max(by1)).max(0.0);
    let inter = iw * ih;
    if inter == 0.0 {
        return 0.0;
    }
    inter / (a.w * a.h + b.w * b.h - inter)
}

fn in_band(area: f64, small: bool, small_max: f64) -> bool {
    !small || area < small_max
}

fn cell_ap(
    gts: &[GtAnnotation],
    dets: &[Detection],
    class_id: u32,
    threshold: f64,
    small: bool,
    small_max: f64,
    recall_points: usize,
) -> Option<f64> {
    let band_gts: Vec<&GtAnnotation> =
        gts.iter().filter(|g| g.class_id == class_id && in_band(g.bbox.w * g.bbox.h, small, small_max)).collect();
    let npos = band_gts.len();
    if npos == 0 {
        return None;
    }

    // (score, is_tp) for every detection that counts in this band
    let mut scored: Vec<(f64, bool)> = Vec::new();
    let images: BTreeSet<u64> = dets.iter().filter(|d| d.class_id == class_id).map(|d| d.image_id).collect();
    for image in images {
        let mut img_dets: Vec<&Detection> =
            dets.iter().filter(|d| d.class_id == class_id && d.image_id == image).collect();
        img_dets.sort_by(|a, b| b.score.partial_cmp(&a.score).unwrap());
        let mut img_gts: Vec<&GtAnnotation> = band_gts.iter().copied().filter(|g| g.image_id == image).collect();
        img_gts.sort_by_key(|g| g.id);
        let mut used = vec![false; img_gts.len()];
        for d in img_dets {
            let mut pick: Option<usize> = None;
            let mut best = -1.0;
            for (j, g) in img_gts.iter().enumerate() {
                let v = oracle_iou(&d.bbox, &g.bbox);
                if !used[j] && v >= threshold && v > best {
                    best = v;
                    pick = Some(j);
                }
            }
            match pick {
                Some(j) => {
                    used[j] = true;
                    scored.push((d.score, true));
                }
                None if in_band(d.bbox.w * d.bbox.h, small, small_max) => scored.push((d.score, false)),
                None => {}
            }
        }
    }
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let mut curve = Vec::new();
    let mut tp = 0usize;
    for (rank, &(_, hit)) in scored.iter().enumerate() {
        tp += usize::from(hit);
        curve.push((tp as f64 / npos as f64, tp as f64 / (rank + 1) as f64));
    }
    let total: f64 = (0..recall_points)
        .map(|k| {
            let level = k as f64 / (recall_points - 1) as f64;
            curve.iter().filter(|(r, _)| *r >= level).map(|&(_, p)| p).fold(0.0, f64::max)
        })
        .sum();
    Some(total / recall_points as f64)
}

pub fn oracle_evaluate(
    gts: &[GtAnnotation],
    dets: &[Detection],
    thresholds: &[f64],
    recall_points: usize,
    small_max: f64,
) -> OracleResult {
    let classes: BTreeSet<u32> = gts.iter().map(|g| g.class_id).chain(dets.iter().map(|d| d.class_id)).collect();
    let mut cells = Vec::new();
    for small in [false, true] {
        for &class_id in &classes {
            for (threshold_index, &t) in thresholds.iter().enumerate() {
                let ap = cell_ap(gts, dets, class_id, t, small, small_max, recall_points);
                cells.push(OracleCell { class_id, threshold_index, small, ap });
            }
        }
    }
    let mean = |small: bool| {
        let v: Vec<f64> = cells.iter().filter(|c| c.small == small).filter_map(|c| c.ap).collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    };
    OracleResult { map_all: mean(false), map_small: mean(true), cells }
}

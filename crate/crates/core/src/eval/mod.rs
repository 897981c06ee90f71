//! COCO-style detection evaluation: per-class AP over an IoU-threshold grid,
//! stratified by object area.

mod ap;
mod matching;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{iou, Detection, GtAnnotation};

pub use ap::average_precision;
pub use matching::match_detections;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("invalid evaluation config: {0}")]
    Config(String),
    #[error("image {0} is not in the image dimension map")]
    UnknownImage(u64),
    #[error("duplicate ground-truth id {0}")]
    DuplicateGtId(u64),
    #[error("detection {index} has score {score} outside [0, 1]")]
    Score { index: usize, score: f64 },
    #[error("invalid box in {0}")]
    Geometry(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub iou_thresholds: Vec<f64>,
    pub recall_points: usize,
    /// Upper bound (exclusive) of the small band, in square pixels.
    pub small_area_max: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            iou_thresholds: (0..10).map(|k| f64::from(50 + 5 * k) / 100.0).collect(),
            recall_points: 101,
            small_area_max: 32.0 * 32.0,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.iou_thresholds.is_empty() {
            return Err(EvalError::Config("iou_thresholds is empty".into()));
        }
        if let Some(t) = self.iou_thresholds.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
            return Err(EvalError::Config(format!("iou threshold {t} outside (0, 1]")));
        }
        if self.iou_thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(EvalError::Config("iou_thresholds must be strictly increasing".into()));
        }
        if self.recall_points < 2 {
            return Err(EvalError::Config("recall_points must be at least 2".into()));
        }
        if !(self.small_area_max > 0.0 && self.small_area_max.is_finite()) {
            return Err(EvalError::Config("small_area_max must be positive".into()));
        }
        Ok(())
    }

    pub fn band_contains(&self, band: AreaBand, area: f64) -> bool {
        match band {
            AreaBand::All => true,
            AreaBand::Small => area < self.small_area_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaBand {
    All,
    Small,
}

impl AreaBand {
    pub const ALL: [AreaBand; 2] = [AreaBand::All, AreaBand::Small];

    pub fn name(self) -> &'static str {
        match self {
            AreaBand::All => "all",
            AreaBand::Small => "small",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ImageSize {
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApCell {
    pub class_id: u32,
    pub threshold_index: usize,
    pub iou_threshold: f64,
    pub band: AreaBand,
    /// `None` when the class has no ground truth in this band.
    pub ap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub iou_thresholds: Vec<f64>,
    pub classes: Vec<u32>,
    /// Ordered by band, then class, then threshold.
    pub cells: Vec<ApCell>,
    pub map_all: Option<f64>,
    pub map_small: Option<f64>,
}

impl EvalResult {
    pub fn ap(&self, class_id: u32, threshold_index: usize, band: AreaBand) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.class_id == class_id && c.threshold_index == threshold_index && c.band == band)
            .and_then(|c| c.ap)
    }

    /// Mean AP of one class over the threshold grid, defined cells only.
    pub fn class_ap(&self, class_id: u32, band: AreaBand) -> Option<f64> {
        mean(self.cells.iter().filter(|c| c.class_id == class_id && c.band == band).filter_map(|c| c.ap))
    }

    pub fn map(&self, band: AreaBand) -> Option<f64> {
        match band {
            AreaBand::All => self.map_all,
            AreaBand::Small => self.map_small,
        }
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Total order on detections by content: score descending, then image, class and
/// box coordinates. Equal keys mean interchangeable detections, which makes the
/// evaluation independent of input order.
fn canonical_order(a: &Detection, b: &Detection) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.image_id.cmp(&b.image_id))
        .then(a.class_id.cmp(&b.class_id))
        .then(a.bbox.x.total_cmp(&b.bbox.x))
        .then(a.bbox.y.total_cmp(&b.bbox.y))
        .then(a.bbox.w.total_cmp(&b.bbox.w))
        .then(a.bbox.h.total_cmp(&b.bbox.h))
}

#[derive(Default)]
struct Group<'a> {
    gts: Vec<&'a GtAnnotation>,
    dets: Vec<&'a Detection>,
}

/// Evaluate detections against ground truth on every (class, threshold, band) cell.
///
/// A ground truth belongs to a band by its own area. Detections are matched only
/// against in-band ground truth; an unmatched detection counts as a false positive
/// in a band only if its own area falls in that band.
pub fn evaluate(
    gts: &[GtAnnotation],
    dets: &[Detection],
    images: &HashMap<u64, ImageSize>,
    cfg: &EvalConfig,
) -> Result<EvalResult, EvalError> {
    cfg.validate()?;
    let mut seen = HashSet::with_capacity(gts.len());
    for g in gts {
        if !images.contains_key(&g.image_id) {
            return Err(EvalError::UnknownImage(g.image_id));
        }
        if !seen.insert(g.id) {
            return Err(EvalError::DuplicateGtId(g.id));
        }
        if !g.bbox.is_valid() {
            return Err(EvalError::Geometry(format!("ground truth {}", g.id)));
        }
    }
    for (index, d) in dets.iter().enumerate() {
        if !images.contains_key(&d.image_id) {
            return Err(EvalError::UnknownImage(d.image_id));
        }
        if !(0.0..=1.0).contains(&d.score) {
            return Err(EvalError::Score { index, score: d.score });
        }
        if !d.bbox.is_valid() {
            return Err(EvalError::Geometry(format!("detection {index}")));
        }
    }

    let mut groups: BTreeMap<(u32, u64), Group<'_>> = BTreeMap::new();
    for g in gts {
        groups.entry((g.class_id, g.image_id)).or_default().gts.push(g);
    }
    for d in dets {
        groups.entry((d.class_id, d.image_id)).or_default().dets.push(d);
    }
    for group in groups.values_mut() {
        group.gts.sort_by_key(|g| g.id);
        group.dets.sort_by(|a, b| canonical_order(a, b));
    }
    let classes: Vec<u32> = groups.keys().map(|&(c, _)| c).collect::<BTreeSet<_>>().into_iter().collect();

    let mut cells = Vec::with_capacity(AreaBand::ALL.len() * classes.len() * cfg.iou_thresholds.len());
    for band in AreaBand::ALL {
        for &class_id in &classes {
            let class_groups: Vec<&Group<'_>> =
                groups.range((class_id, u64::MIN)..=(class_id, u64::MAX)).map(|(_, g)| g).collect();
            let aps = class_band_ap(&class_groups, band, cfg);
            cells.extend(aps.into_iter().enumerate().map(|(threshold_index, ap)| ApCell {
                class_id,
                threshold_index,
                iou_threshold: cfg.iou_thresholds[threshold_index],
                band,
                ap,
            }));
        }
    }

    let band_mean = |band| mean(cells.iter().filter(|c: &&ApCell| c.band == band).filter_map(|c| c.ap));
    Ok(EvalResult {
        iou_thresholds: cfg.iou_thresholds.clone(),
        map_all: band_mean(AreaBand::All),
        map_small: band_mean(AreaBand::Small),
        classes,
        cells,
    })
}

/// AP per threshold for one class in one band.
fn class_band_ap(groups: &[&Group<'_>], band: AreaBand, cfg: &EvalConfig) -> Vec<Option<f64>> {
    let total_gt: usize = groups
        .iter()
        .map(|g| g.gts.iter().filter(|a| cfg.band_contains(band, a.bbox.area())).count())
        .sum();

    // IoU matrices depend only on the image, not on the threshold.
    let prepared: Vec<(&Group<'_>, Vec<Vec<f64>>)> = groups
        .iter()
        .map(|group| {
            let in_band: Vec<&GtAnnotation> =
                group.gts.iter().copied().filter(|a| cfg.band_contains(band, a.bbox.area())).collect();
            let ious = group
                .dets
                .iter()
                .map(|d| in_band.iter().map(|g| iou(&d.bbox, &g.bbox)).collect())
                .collect();
            (*group, ious)
        })
        .collect();

    cfg.iou_thresholds
        .iter()
        .map(|&threshold| {
            let mut outcomes: Vec<(&Detection, bool)> = Vec::new();
            for (group, ious) in &prepared {
                let assigned = matching::greedy(ious, threshold);
                for (det, gt) in group.dets.iter().zip(assigned) {
                    if gt.is_some() {
                        outcomes.push((det, true));
                    } else if cfg.band_contains(band, det.bbox.area()) {
                        outcomes.push((det, false));
                    }
                }
            }
            outcomes.sort_by(|a, b| canonical_order(a.0, b.0));
            let flags: Vec<bool> = outcomes.iter().map(|&(_, tp)| tp).collect();
            average_precision(&flags, total_gt, cfg.recall_points)
        })
        .collect()
}

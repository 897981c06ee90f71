use std::collections::BTreeMap;

use log::warn;
use thiserror::Error;

use super::coco::{CocoAnnotation, CocoCategory, CocoDataset, CocoImage};
use super::labelme::LabelMeDoc;
use super::task::TaskSpec;
use crate::geometry::BBox;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AggregateError {
    #[error("duplicate image file name {0:?}")]
    DuplicateFileName(String),
    #[error("{file_name}: shape {shape_index} ({label:?}) bbox {bbox:?} exceeds image bounds {width}x{height}")]
    OutOfBounds { file_name: String, shape_index: usize, label: String, bbox: [f64; 4], width: u32, height: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregated {
    pub dataset: CocoDataset,
    /// Shapes whose label does not belong to the task.
    pub skipped_labels: usize,
}

/// Consolidate LabelMe documents into one COCO dataset for `task`.
///
/// Images are ordered by file name and numbered from 1, so the result does not
/// depend on input order. Annotations are numbered in (image, shape) order and
/// polygons become their bounding envelope.
pub fn aggregate(docs: &[LabelMeDoc], task: &TaskSpec) -> Result<Aggregated, AggregateError> {
    let mut by_name: BTreeMap<&str, &LabelMeDoc> = BTreeMap::new();
    for doc in docs {
        if by_name.insert(doc.file_name(), doc).is_some() {
            return Err(AggregateError::DuplicateFileName(doc.file_name().to_string()));
        }
    }

    let mut dataset = CocoDataset {
        categories: task
            .categories
            .iter()
            .enumerate()
            .map(|(i, name)| CocoCategory { id: i as u32 + 1, name: name.clone() })
            .collect(),
        ..CocoDataset::default()
    };
    let mut skipped_labels = 0;

    for (image_id, (&file_name, doc)) in (1u64..).zip(&by_name) {
        dataset.images.push(CocoImage {
            id: image_id,
            file_name: file_name.to_string(),
            width: doc.image_width,
            height: doc.image_height,
        });
        for (shape_index, shape) in doc.shapes.iter().enumerate() {
            let Some(category_id) = task.normalize_label(&shape.label).and_then(|c| task.category_id(c)) else {
                skipped_labels += 1;
                continue;
            };
            let bbox = BBox::envelope(&shape.points).expect("parsed shapes have points");
            if !bbox.within(f64::from(doc.image_width), f64::from(doc.image_height)) {
                return Err(AggregateError::OutOfBounds {
                    file_name: file_name.to_string(),
                    shape_index,
                    label: shape.label.clone(),
                    bbox: bbox.into(),
                    width: doc.image_width,
                    height: doc.image_height,
                });
            }
            dataset.annotations.push(CocoAnnotation {
                id: dataset.annotations.len() as u64 + 1,
                image_id,
                category_id,
                bbox,
                area: bbox.area(),
                iscrowd: 0,
            });
        }
    }
    if skipped_labels > 0 {
        warn!("{} shape(s) skipped: labels outside the {} task", skipped_labels, task.name);
    }
    Ok(Aggregated { dataset, skipped_labels })
}

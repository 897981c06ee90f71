use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::eval::ImageSize;
use crate::geometry::{BBox, GtAnnotation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocoImage {
    pub id: u64,
    pub file_name: String,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocoAnnotation {
    pub id: u64,
    pub image_id: u64,
    pub category_id: u32,
    pub bbox: BBox,
    pub area: f64,
    /// Always 0 on output; crowd regions are rejected by validation.
    #[serde(default)]
    pub iscrowd: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocoCategory {
    pub id: u32,
    pub name: String,
}

/// COCO detection dataset. Serializes with keys in images, annotations,
/// categories order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CocoDataset {
    pub images: Vec<CocoImage>,
    pub annotations: Vec<CocoAnnotation>,
    pub categories: Vec<CocoCategory>,
}

impl CocoDataset {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dataset serializes");
        s.push('\n');
        s
    }

    pub fn ground_truth(&self) -> Vec<GtAnnotation> {
        self.annotations
            .iter()
            .map(|a| GtAnnotation { id: a.id, image_id: a.image_id, class_id: a.category_id, bbox: a.bbox })
            .collect()
    }

    pub fn image_sizes(&self) -> HashMap<u64, ImageSize> {
        self.images.iter().map(|i| (i.id, ImageSize { width: i.width, height: i.height })).collect()
    }

    pub fn category_name(&self, id: u32) -> Option<&str> {
        self.categories.iter().find(|c| c.id == id).map(|c| c.name.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

fn violation(path: String, message: impl Into<String>) -> Violation {
    Violation { path, message: message.into() }
}

const AREA_TOLERANCE: f64 = 1e-6;

/// Check every dataset invariant. An empty list means the dataset is valid.
pub fn validate_coco(ds: &CocoDataset) -> Vec<Violation> {
    let mut out = Vec::new();

    let mut image_dims = HashMap::new();
    for (i, img) in ds.images.iter().enumerate() {
        if image_dims.insert(img.id, (img.width, img.height)).is_some() {
            out.push(violation(format!("images[{i}].id"), format!("duplicate image id {}", img.id)));
        }
        if img.width == 0 || img.height == 0 {
            out.push(violation(format!("images[{i}]"), "image dimensions must be positive"));
        }
    }

    let mut category_ids = HashSet::new();
    for (i, cat) in ds.categories.iter().enumerate() {
        if !category_ids.insert(cat.id) {
            out.push(violation(format!("categories[{i}].id"), format!("duplicate category id {}", cat.id)));
        }
    }

    let mut annotation_ids = HashSet::new();
    for (i, ann) in ds.annotations.iter().enumerate() {
        let path = format!("annotations[{i}]");
        if !annotation_ids.insert(ann.id) {
            out.push(violation(format!("{path}.id"), format!("duplicate annotation id {}", ann.id)));
        }
        if !category_ids.contains(&ann.category_id) {
            out.push(violation(format!("{path}.category_id"), format!("unknown category {}", ann.category_id)));
        }
        if ann.iscrowd != 0 {
            out.push(violation(format!("{path}.iscrowd"), "crowd annotations are not supported"));
        }
        let b = ann.bbox;
        if !b.is_valid() {
            out.push(violation(format!("{path}.bbox"), "bbox must be finite with non-negative size"));
            continue;
        }
        if (ann.area - b.area()).abs() > AREA_TOLERANCE * b.area().max(1.0) {
            out.push(violation(format!("{path}.area"), format!("area {} != w*h {}", ann.area, b.area())));
        }
        match image_dims.get(&ann.image_id) {
            None => out.push(violation(format!("{path}.image_id"), format!("unknown image {}", ann.image_id))),
            Some(&(w, h)) if !b.within(f64::from(w), f64::from(h)) => {
                out.push(violation(format!("{path}.bbox"), format!("bbox exceeds image bounds {w}x{h}")))
            }
            Some(_) => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valid() -> CocoDataset {
        CocoDataset {
            images: vec![CocoImage { id: 1, file_name: "a.jpg".into(), width: 100, height: 80 }],
            annotations: vec![CocoAnnotation {
                id: 1,
                image_id: 1,
                category_id: 1,
                bbox: BBox::new(10.0, 10.0, 20.0, 5.0),
                area: 100.0,
                iscrowd: 0,
            }],
            categories: vec![CocoCategory { id: 1, name: "1".into() }],
        }
    }

    #[test]
    fn valid_dataset_has_no_violations() {
        assert!(validate_coco(&valid()).is_empty());
        assert!(validate_coco(&CocoDataset::default()).is_empty());
    }

    #[test]
    fn missing_image_reference() {
        let mut ds = valid();
        ds.annotations[0].image_id = 7;
        let v = validate_coco(&ds);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].path, "annotations[0].image_id");
    }

    #[test]
    fn duplicate_annotation_id() {
        let mut ds = valid();
        let mut dup = ds.annotations[0].clone();
        dup.bbox = BBox::new(0.0, 0.0, 1.0, 1.0);
        dup.area = 1.0;
        ds.annotations.push(dup);
        let v = validate_coco(&ds);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].path, "annotations[1].id");
    }

    #[test]
    fn other_violations() {
        let mut ds = valid();
        ds.annotations[0].area = 3.0;
        ds.annotations[0].iscrowd = 1;
        ds.annotations[0].bbox = BBox::new(90.0, 10.0, 20.0, 5.0);
        let paths: Vec<_> = validate_coco(&ds).into_iter().map(|v| v.path).collect();
        assert_eq!(paths, ["annotations[0].iscrowd", "annotations[0].area", "annotations[0].bbox"]);
    }

    #[test]
    fn key_order_is_stable() {
        let json = valid().to_json();
        let (i, a, c) = (json.find("\"images\"").unwrap(), json.find("\"annotations\"").unwrap(), json.find("\"categories\"").unwrap());
        assert!(i < a && a < c);
        assert_eq!(CocoDataset::from_json(&json).unwrap(), valid());
    }
}

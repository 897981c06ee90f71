//! Synthetic LabelMe corpora written to disk.

#![allow(dead_code)]

use std::fs;
use std::path::Path;

use serde_json::json;

const WIDTH: u32 = 2704;
const HEIGHT: u32 = 1520;

fn rectangle(label: &str, slot: usize) -> serde_json::Value {
    let x = 900.0 + 220.0 * slot as f64;
    json!({
        "label": label,
        "points": [[x, 650.0], [x + 28.5, 690.0]],
        "group_id": null,
        "shape_type": "rectangle",
        "flags": {}
    })
}

fn write_doc(dir: &Path, name: &str, shapes: Vec<serde_json::Value>) {
    let doc = json!({
        "version": "5.2.1",
        "flags": {},
        "shapes": shapes,
        "imagePath": format!("..\\images\\{name}.jpg"),
        "imageData": null,
        "imageHeight": HEIGHT,
        "imageWidth": WIDTH
    });
    fs::write(dir.join(format!("{name}.json")), serde_json::to_vec_pretty(&doc).unwrap()).unwrap();
}

/// Teat-shape corpus: `images` files holding `shapes` rectangles in total,
/// labels cycling through 1, 3, 7, 8. Files are written in reverse name order.
pub fn teat_shape_corpus(dir: &Path, images: usize, shapes: usize) {
    const LABELS: [&str; 4] = ["1", "3", "7", "8"];
    let base = shapes / images;
    let extra = shapes % images;
    for i in (0..images).rev() {
        let n = base + usize::from(i < extra);
        let list = (0..n).map(|slot| rectangle(LABELS[(i * 7 + slot) % 4], slot)).collect();
        write_doc(dir, &format!("cow_{i:04}"), list);
    }
}

/// Skin-condition corpus with exact per-class label counts. Normal labels use
/// the bare score "1" on even images to exercise label normalization.
pub fn skin_corpus(dir: &Path, images: usize, c1: usize, c3: usize) {
    let labels: Vec<&str> = std::iter::repeat_n("C1", c1).chain(std::iter::repeat_n("C3", c3)).collect();
    let per_image = labels.len().div_ceil(images);
    for (i, chunk) in labels.chunks(per_image).enumerate() {
        let shapes = chunk
            .iter()
            .enumerate()
            .map(|(slot, l)| rectangle(if *l == "C1" && i % 2 == 0 { "1" } else { l }, slot))
            .collect();
        write_doc(dir, &format!("skin_{i:04}"), shapes);
    }
}

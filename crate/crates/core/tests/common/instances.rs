//! Random evaluation instances: up to 5 images, 3 classes and 10 boxes per image.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use teatkey_core::eval::ImageSize;
use teatkey_core::{BBox, Detection, GtAnnotation};

pub const IMAGE_SIDE: u32 = 200;

pub struct Instance {
    pub gts: Vec<GtAnnotation>,
    pub dets: Vec<Detection>,
    pub images: HashMap<u64, ImageSize>,
}

fn random_box(rng: &mut ChaCha8Rng) -> BBox {
    let side = f64::from(IMAGE_SIDE);
    // sides from 6 to 60 px straddle the 32 x 32 small-object limit
    let w = rng.gen_range(6.0..60.0);
    let h = rng.gen_range(6.0..60.0);
    BBox::new(rng.gen_range(0.0..side - w), rng.gen_range(0.0..side - h), w, h)
}

fn jitter(rng: &mut ChaCha8Rng, b: &BBox) -> BBox {
    let side = f64::from(IMAGE_SIDE);
    let scale = rng.gen_range(0.0..0.35);
    let w = (b.w * (1.0 + rng.gen_range(-scale..scale))).max(1.0);
    let h = (b.h * (1.0 + rng.gen_range(-scale..scale))).max(1.0);
    let x = (b.x + b.w * rng.gen_range(-scale..scale)).clamp(0.0, side - w);
    let y = (b.y + b.h * rng.gen_range(-scale..scale)).clamp(0.0, side - h);
    BBox::new(x, y, w, h)
}

pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_images = rng.gen_range(1..=5u64);
    let n_classes = rng.gen_range(1..=3u32);
    let images = (1..=n_images).map(|id| (id, ImageSize { width: IMAGE_SIDE, height: IMAGE_SIDE })).collect();
    let mut gts = Vec::new();
    let mut dets = Vec::new();
    let mut next_id = rng.gen_range(1..1000u64);
    for image_id in 1..=n_images {
        let n_gt = rng.gen_range(0..=10usize);
        for _ in 0..n_gt {
            next_id += rng.gen_range(1..5);
            gts.push(GtAnnotation {
                id: next_id,
                image_id,
                class_id: rng.gen_range(1..=n_classes),
                bbox: random_box(&mut rng),
            });
        }
        let n_det = rng.gen_range(0..=10usize);
        let image_gts: Vec<GtAnnotation> = gts.iter().filter(|g| g.image_id == image_id).copied().collect();
        for _ in 0..n_det {
            let (class_id, bbox) = match image_gts.is_empty() || rng.gen_bool(0.3) {
                true => (rng.gen_range(1..=n_classes), random_box(&mut rng)),
                false => {
                    let g = image_gts[rng.gen_range(0..image_gts.len())];
                    let class_id = if rng.gen_bool(0.1) { rng.gen_range(1..=n_classes) } else { g.class_id };
                    (class_id, jitter(&mut rng, &g.bbox))
                }
            };
            dets.push(Detection { image_id, class_id, bbox, score: rng.gen_range(0.0..1.0) });
        }
    }
    Instance { gts, dets, images }
}

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::coco::{validate_coco, CocoDataset};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSpec {
    pub train_frac: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { train_frac: 0.9, seed: 0 }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SplitError {
    #[error("train_frac {0} must lie strictly between 0 and 1")]
    Fraction(f64),
    #[error("cannot split {images} image(s) at train_frac {train_frac}: one side would be empty")]
    Impossible { images: usize, train_frac: f64 },
    #[error("split output failed validation: {0}")]
    Invalid(String),
}

/// SplitMix64 (Steele, Lea and Flood), the generator behind the split permutation.
///
/// State advances by `0x9E3779B97F4A7C15`; each output is the advanced state passed
/// through the xor-shift-multiply finalizer below. Its output for a given seed is
/// fixed forever, unlike library shuffles that may change across versions.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Fisher-Yates from the back: slot `i` swaps with `next_u64() % (i + 1)`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = (self.next_u64() % (i as u64 + 1)) as usize;
            items.swap(i, j);
        }
    }
}

fn train_count(images: usize, train_frac: f64) -> usize {
    // the epsilon keeps products like 0.29 * 100 = 28.999... from losing an image
    (train_frac * images as f64 + 1e-9).floor() as usize
}

/// Image-level train/validation split.
///
/// Image ids in ascending order are permuted with [`SplitMix64`] seeded by
/// `spec.seed`; the first `floor(train_frac * N)` go to train. Annotations follow
/// their image, ids are preserved and both halves keep every category.
pub fn split(ds: &CocoDataset, spec: &SplitSpec) -> Result<(CocoDataset, CocoDataset), SplitError> {
    if !(spec.train_frac > 0.0 && spec.train_frac < 1.0) {
        return Err(SplitError::Fraction(spec.train_frac));
    }
    let n = ds.images.len();
    let n_train = train_count(n, spec.train_frac);
    if n < 2 || n_train == 0 || n_train == n {
        return Err(SplitError::Impossible { images: n, train_frac: spec.train_frac });
    }

    let mut ids: Vec<u64> = ds.images.iter().map(|i| i.id).collect();
    ids.sort_unstable();
    SplitMix64::new(spec.seed).shuffle(&mut ids);
    let train_ids: HashSet<u64> = ids[..n_train].iter().copied().collect();

    let half = |in_train: bool| {
        let mut images: Vec<_> = ds.images.iter().filter(|i| train_ids.contains(&i.id) == in_train).cloned().collect();
        images.sort_by_key(|i| i.id);
        let mut annotations: Vec<_> =
            ds.annotations.iter().filter(|a| train_ids.contains(&a.image_id) == in_train).cloned().collect();
        annotations.sort_by_key(|a| a.id);
        CocoDataset { images, annotations, categories: ds.categories.clone() }
    };
    let (train, val) = (half(true), half(false));
    for (name, part) in [("train", &train), ("val", &val)] {
        if let Some(v) = validate_coco(part).first() {
            return Err(SplitError::Invalid(format!("{name}: {}: {}", v.path, v.message)));
        }
    }
    Ok((train, val))
}

use std::path::Path;

use thiserror::Error;

use super::ExtractError;
use crate::geometry::{BBox, Detection};

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("cannot decode {path}: {reason}")]
    Decode { path: String, reason: String },
    #[error("frame {0} carries no pixels")]
    NoPixels(u64),
    #[error("raster buffer holds {got} bytes, expected {expected}")]
    BufferSize { expected: usize, got: usize },
    #[error("unsupported channel count {0}")]
    Channels(u8),
}

/// Decoded 8-bit pixels, row-major, 1 (gray) or 3 (RGB) interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    pub channels: u8,
    pub data: Vec<u8>,
}

impl Raster {
    pub fn new(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self, RasterError> {
        if channels != 1 && channels != 3 {
            return Err(RasterError::Channels(channels));
        }
        let expected = width as usize * height as usize * channels as usize;
        if data.len() != expected {
            return Err(RasterError::BufferSize { expected, got: data.len() });
        }
        Ok(Raster { width, height, channels, data })
    }

    /// Decode a PNG or PNM file. Gray images stay single-channel; everything
    /// else becomes RGB.
    pub fn load(path: &Path) -> Result<Self, RasterError> {
        let err = |reason: String| RasterError::Decode { path: path.display().to_string(), reason };
        let img = image::open(path).map_err(|e| err(e.to_string()))?;
        let (width, height) = (img.width(), img.height());
        if img.color().channel_count() == 1 {
            Raster::new(width, height, 1, img.into_luma8().into_raw())
        } else {
            Raster::new(width, height, 3, img.into_rgb8().into_raw())
        }
    }

    /// Pixel rectangle covering `bbox`, clamped to the raster. Edges round
    /// outward so a fractional box keeps every pixel it touches.
    pub fn crop(&self, bbox: &BBox) -> Raster {
        let clamp = |v: f64, hi: u32| v.clamp(0.0, f64::from(hi)) as u32;
        let x0 = clamp(bbox.x.floor(), self.width);
        let y0 = clamp(bbox.y.floor(), self.height);
        let x1 = clamp(bbox.right().ceil(), self.width).max(x0);
        let y1 = clamp(bbox.bottom().ceil(), self.height).max(y0);
        let c = self.channels as usize;
        let row = self.width as usize * c;
        let mut data = Vec::with_capacity((x1 - x0) as usize * (y1 - y0) as usize * c);
        for y in y0..y1 {
            let start = y as usize * row + x0 as usize * c;
            data.extend_from_slice(&self.data[start..start + (x1 - x0) as usize * c]);
        }
        Raster { width: x1 - x0, height: y1 - y0, channels: self.channels, data }
    }

    /// Binary PNM bytes: P5 for gray, P6 for RGB. The pixels are written
    /// untouched.
    pub fn to_pnm(&self) -> Vec<u8> {
        let magic = if self.channels == 1 { "P5" } else { "P6" };
        let mut out = format!("{magic}\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }
}

/// A cropped teat with the box and score it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub bbox: BBox,
    pub score: f64,
    pub crop: Raster,
}

/// One crop per detection, in detection order.
pub fn crop_segments(raster: &Raster, dets: &[Detection]) -> Result<Vec<Segment>, ExtractError> {
    if dets.is_empty() {
        return Err(ExtractError::Contract("crop_segments needs at least one detection".into()));
    }
    Ok(dets.iter().map(|d| Segment { bbox: d.bbox, score: d.score, crop: raster.crop(&d.bbox) }).collect())
}

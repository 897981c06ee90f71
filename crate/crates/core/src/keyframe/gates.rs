use super::{ExtractorConfig, FrameRecord, OcrResult};
use crate::geometry::Detection;

/// Accept a stall tag reading: confident, all digits and clear of both side
/// bands, where a tag is likely to be cut off.
pub fn gate_stall(ocr: &OcrResult, frame: &FrameRecord, cfg: &ExtractorConfig) -> Option<String> {
    let text = ocr.text.trim();
    if ocr.confidence < cfg.ocr_conf_min || text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let width = f64::from(frame.width);
    let left_band_end = cfg.edge_margin_frac * width;
    let right_band_start = (1.0 - cfg.edge_margin_frac) * width;
    if ocr.bbox.x < left_band_end || ocr.bbox.right() > right_band_start {
        return None;
    }
    Some(text.to_string())
}

/// Detections that clear the confidence floor, in backend order.
pub fn confident_teats(dets: &[Detection], cfg: &ExtractorConfig) -> Vec<Detection> {
    dets.iter().filter(|d| d.score >= cfg.det_conf_min).copied().collect()
}

/// Accept a teat frame: exactly the expected number of confident teats, each
/// wholly inside the centre rectangle. Extra confident boxes (crossed or
/// occluded teats) reject the frame.
pub fn gate_teats(dets: &[Detection], frame: &FrameRecord, cfg: &ExtractorConfig) -> bool {
    let confident = confident_teats(dets, cfg);
    if confident.len() != cfg.expected_teat_count {
        return false;
    }
    let (w, h) = (f64::from(frame.width), f64::from(frame.height));
    let m = cfg.center_margin_frac;
    let (x0, x1, y0, y1) = (m * w, (1.0 - m) * w, m * h, (1.0 - m) * h);
    confident.iter().all(|d| d.bbox.x >= x0 && d.bbox.right() <= x1 && d.bbox.y >= y0 && d.bbox.bottom() <= y1)
}

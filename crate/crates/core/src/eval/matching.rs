use crate::geometry::{iou, Detection, GtAnnotation};

use super::EvalError;

/// Greedy one-to-one assignment of detections to ground truth for a single
/// image and class.
///
/// Detections are visited by descending score, ties by ascending index. Each takes
/// the unmatched ground truth of highest IoU, ties by ascending ground-truth id, if
/// that IoU reaches `threshold`. Pairs come back in visiting order.
pub fn match_detections(
    dets: &[Detection],
    gts: &[GtAnnotation],
    threshold: f64,
) -> Result<Vec<(usize, u64)>, EvalError> {
    let key = dets
        .iter()
        .map(|d| (d.image_id, d.class_id))
        .chain(gts.iter().map(|g| (g.image_id, g.class_id)))
        .next();
    if let Some((image_id, class_id)) = key {
        let mixed = dets.iter().any(|d| (d.image_id, d.class_id) != (image_id, class_id))
            || gts.iter().any(|g| (g.image_id, g.class_id) != (image_id, class_id));
        if mixed {
            return Err(EvalError::Contract(
                "match_detections needs a single image_id and class_id".into(),
            ));
        }
    }

    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| dets[b].score.total_cmp(&dets[a].score).then(a.cmp(&b)));

    let mut gt_order: Vec<usize> = (0..gts.len()).collect();
    gt_order.sort_by_key(|&g| gts[g].id);

    let ious: Vec<Vec<f64>> = order
        .iter()
        .map(|&d| gt_order.iter().map(|&g| iou(&dets[d].bbox, &gts[g].bbox)).collect())
        .collect();

    Ok(greedy(&ious, threshold)
        .into_iter()
        .enumerate()
        .filter_map(|(rank, gt)| gt.map(|g| (order[rank], gts[gt_order[g]].id)))
        .collect())
}

/// Core of the greedy pass. `ious[d][g]` lists detections in visiting order and
/// ground truth in tie-break order; returns the matched column per detection.
pub(crate) fn greedy(ious: &[Vec<f64>], threshold: f64) -> Vec<Option<usize>> {
    let n_gt = ious.first().map_or(0, Vec::len);
    let mut taken = vec![false; n_gt];
    ious.iter()
        .map(|row| {
            let mut best: Option<(usize, f64)> = None;
            for (g, &v) in row.iter().enumerate() {
                if taken[g] || v < threshold {
                    continue;
                }
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((g, v));
                }
            }
            best.map(|(g, _)| {
                taken[g] = true;
                g
            })
        })
        .collect()
}

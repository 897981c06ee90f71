//! Interpolated average precision over an evenly spaced recall grid.

/// AP from match outcomes already ordered by descending detection score.
///
/// Each flag is `true` for a true positive. Precision is made monotone from the
/// right, then sampled at recall levels `k / (recall_points - 1)`; a level past the
/// highest achieved recall contributes zero. Returns `None` when there is no ground
/// truth to recall.
pub fn average_precision(tp_flags: &[bool], total_gt: usize, recall_points: usize) -> Option<f64> {
    if total_gt == 0 {
        return None;
    }
    assert!(recall_points >= 2, "recall grid needs at least two points");

    let mut recall = Vec::with_capacity(tp_flags.len());
    let mut precision = Vec::with_capacity(tp_flags.len());
    let mut tp = 0usize;
    for (rank, &hit) in tp_flags.iter().enumerate() {
        if hit {
            tp += 1;
        }
        recall.push(tp as f64 / total_gt as f64);
        precision.push(tp as f64 / (rank + 1) as f64);
    }
    for i in (1..precision.len()).rev() {
        if precision[i] > precision[i - 1] {
            precision[i - 1] = precision[i];
        }
    }

    let steps = (recall_points - 1) as f64;
    let sum: f64 = (0..recall_points)
        .map(|k| {
            let level = k as f64 / steps;
            let first = recall.partition_point(|&r| r < level);
            precision.get(first).copied().unwrap_or(0.0)
        })
        .sum();
    Some(sum / recall_points as f64)
}

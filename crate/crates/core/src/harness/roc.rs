//! Empirical ROC curve by threshold sweep.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    /// `(false_alarm_rate, detection_rate)` from `(0, 0)` to `(1, 1)`.
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

/// ROC of the rule "stego iff score ≥ t" over every distinct pooled score.
///
/// Tied cover/stego scores produce a diagonal segment, so the trapezoidal
/// area gives them half credit. The area is accumulated in integers and
/// divided once, which makes it exactly the Mann-Whitney win rate.
pub fn roc_from_scores(cover_scores: &[f64], stego_scores: &[f64]) -> Result<RocCurve> {
    if cover_scores.is_empty() || stego_scores.is_empty() {
        return Err(Error::EmptyInput("ROC needs cover and stego scores"));
    }
    if let Some(&bad) = cover_scores.iter().chain(stego_scores).find(|s| s.is_nan()) {
        return Err(Error::NonFinite(bad));
    }
    let mut pooled: Vec<(f64, bool)> = cover_scores
        .iter()
        .map(|&s| (s, false))
        .chain(stego_scores.iter().map(|&s| (s, true)))
        .collect();
    pooled.sort_by(|a, b| b.0.total_cmp(&a.0));

    let n_cover = cover_scores.len() as u64;
    let n_stego = stego_scores.len() as u64;
    let (mut fp, mut tp) = (0u64, 0u64);
    let mut twice_area: u128 = 0;
    let mut points = vec![(0.0, 0.0)];
    for group in pooled.chunk_by(|a, b| a.0 == b.0) {
        let stego = group.iter().filter(|(_, s)| *s).count() as u64;
        let cover = group.len() as u64 - stego;
        twice_area += u128::from(cover) * u128::from(2 * tp + stego);
        fp += cover;
        tp += stego;
        points.push((fp as f64 / n_cover as f64, tp as f64 / n_stego as f64));
    }
    let auc = twice_area as f64 / (2 * u128::from(n_cover) * u128::from(n_stego)) as f64;
    Ok(RocCurve { points, auc })
}

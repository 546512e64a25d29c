//! Coverage metrics relating a keypoint set to a ground-truth mask.

use fkp_core::{Grid, KeyPoint};

/// Nearest lattice pixel of a keypoint, clamped into the mask bounds.
fn lattice(kp: &KeyPoint, width: u32, height: u32) -> (u32, u32) {
    let x = kp.x.round().clamp(0.0, f64::from(width - 1)) as u32;
    let y = kp.y.round().clamp(0.0, f64::from(height - 1)) as u32;
    (x, y)
}

/// Fraction of keypoints whose nearest pixel lies on the mask.
///
/// Degenerate inputs follow the vacuous-truth convention: no keypoints and
/// no mask is perfect agreement (1.0); no keypoints against a nonempty mask
/// found nothing worth reporting (0.0).
pub fn precision(kps: &[KeyPoint], mask: &Grid<bool>) -> f64 {
    let target_pixels = mask.data().iter().filter(|&&m| m).count();
    if kps.is_empty() {
        return if target_pixels == 0 { 1.0 } else { 0.0 };
    }
    let on = kps
        .iter()
        .filter(|kp| {
            let (x, y) = lattice(kp, mask.width(), mask.height());
            mask.get(x, y)
        })
        .count();
    on as f64 / kps.len() as f64
}

/// Fraction of 4-connected mask components containing at least one keypoint
/// pixel. An empty mask has nothing to miss and scores 1.0.
pub fn recall(kps: &[KeyPoint], mask: &Grid<bool>) -> f64 {
    let labels = label_components(mask);
    let components = labels.1;
    if components == 0 {
        return 1.0;
    }
    let mut hit = vec![false; components];
    for kp in kps {
        let (x, y) = lattice(kp, mask.width(), mask.height());
        if let Some(id) = labels.0.get(x, y) {
            hit[id] = true;
        }
    }
    hit.iter().filter(|&&h| h).count() as f64 / components as f64
}

/// Mean distance from each keypoint to its nearest other keypoint; 0.0 when
/// fewer than two keypoints exist.
pub fn spread(kps: &[KeyPoint]) -> f64 {
    if kps.len() < 2 {
        return 0.0;
    }
    let total: f64 = kps
        .iter()
        .enumerate()
        .map(|(i, a)| {
            kps.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| {
                    let dx = a.x - b.x;
                    let dy = a.y - b.y;
                    (dx * dx + dy * dy).sqrt()
                })
                .fold(f64::MAX, f64::min)
        })
        .sum();
    total / kps.len() as f64
}

/// Labels 4-connected true-regions; returns per-pixel component ids and the
/// component count.
fn label_components(mask: &Grid<bool>) -> (Grid<Option<usize>>, usize) {
    let (w, h) = (mask.width(), mask.height());
    let mut labels: Grid<Option<usize>> = Grid::filled(w, h, None);
    let mut next = 0usize;
    let mut stack = Vec::new();
    for sy in 0..h {
        for sx in 0..w {
            if !mask.get(sx, sy) || labels.get(sx, sy).is_some() {
                continue;
            }
            labels.set(sx, sy, Some(next));
            stack.push((sx, sy));
            while let Some((x, y)) = stack.pop() {
                let mut visit = |nx: u32, ny: u32| {
                    if mask.get(nx, ny) && labels.get(nx, ny).is_none() {
                        labels.set(nx, ny, Some(next));
                        stack.push((nx, ny));
                    }
                };
                if x > 0 {
                    visit(x - 1, y);
                }
                if x + 1 < w {
                    visit(x + 1, y);
                }
                if y > 0 {
                    visit(x, y - 1);
                }
                if y + 1 < h {
                    visit(x, y + 1);
                }
            }
            next += 1;
        }
    }
    (labels, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fkp_core::Detector;

    fn kp(x: f64, y: f64) -> KeyPoint {
        KeyPoint { x, y, scale: 1.0, score: 1.0, orientation: None, detector: Detector::Sfa }
    }

    fn two_blob_mask() -> Grid<bool> {
        // Two 2x2 true squares far apart in a 16x16 field.
        Grid::from_fn(16, 16, |x, y| (x < 2 && y < 2) || (x >= 12 && y >= 12 && x < 14 && y < 14))
    }

    #[test]
    fn component_labelling_separates_diagonal_touches() {
        // Two single pixels touching only diagonally stay distinct under
        // 4-connectivity.
        let mask = Grid::from_fn(4, 4, |x, y| (x, y) == (1, 1) || (x, y) == (2, 2));
        assert_eq!(label_components(&mask).1, 2);
    }

    #[test]
    fn recall_counts_hit_components() {
        let mask = two_blob_mask();
        assert_eq!(recall(&[kp(0.0, 0.0)], &mask), 0.5);
        assert_eq!(recall(&[kp(0.0, 0.0), kp(12.0, 13.0)], &mask), 1.0);
        assert_eq!(recall(&[], &mask), 0.0);
    }

    #[test]
    fn precision_degenerate_conventions() {
        let empty = Grid::filled(8, 8, false);
        assert_eq!(precision(&[], &empty), 1.0);
        assert_eq!(precision(&[], &two_blob_mask()), 0.0);
        assert_eq!(precision(&[kp(0.0, 0.0), kp(5.0, 5.0)], &two_blob_mask()), 0.5);
    }

    #[test]
    fn precision_rounds_to_the_nearest_pixel() {
        let mask = Grid::from_fn(8, 8, |x, y| (x, y) == (3, 4));
        assert_eq!(precision(&[kp(3.4, 3.6)], &mask), 1.0);
        assert_eq!(precision(&[kp(3.6, 3.6)], &mask), 0.0);
    }

    #[test]
    fn spread_is_mean_nearest_neighbor_distance() {
        assert_eq!(spread(&[]), 0.0);
        assert_eq!(spread(&[kp(1.0, 1.0)]), 0.0);
        // Three collinear points at 0, 3, 9: nearest distances 3, 3, 6.
        let kps = [kp(0.0, 0.0), kp(3.0, 0.0), kp(9.0, 0.0)];
        assert!((spread(&kps) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn full_coverage_scores_one() {
        let mask = Grid::from_fn(8, 8, |x, _| x < 4);
        let kps: Vec<KeyPoint> = (0..4).map(|x| kp(f64::from(x), 2.0)).collect();
        assert_eq!(precision(&kps, &mask), 1.0);
        assert_eq!(recall(&kps, &mask), 1.0);
    }
}

//! Geometric kernels: minimax centers, enclosing balls, class ranges and the
//! whitening surrogate for the minimum-volume enclosing ellipsoid.

mod ball;
mod whitening;

pub use ball::{min_enclosing_ball, min_enclosing_ball_iterative, EnclosingBall};
pub use whitening::{pooled_whitening, WhiteningTransform, WHITENING_RIDGE};

use crate::data::{DistanceMatrix, LabeledDataset};
use crate::error::{invalid, Error, Result};
use crate::linalg::dist;

/// Minimax center restricted to training objects: the object (over all rows
/// of `dist`) whose largest distance to the members is smallest. Ties go to
/// the lowest index. Returns `(index, radius)`.
pub fn data_restricted_center(dist: &DistanceMatrix, members: &[usize]) -> Result<(usize, f64)> {
    if members.is_empty() {
        return Err(invalid("member set is empty"));
    }
    if let Some(&bad) = members.iter().find(|&&m| m >= dist.len()) {
        return Err(invalid(format!("member index {bad} out of range")));
    }
    let mut best = (0, f64::INFINITY);
    for cand in 0..dist.len() {
        let row = dist.row(cand);
        let worst = members.iter().map(|&m| row[m]).fold(0.0, f64::max);
        if worst < best.1 {
            best = (cand, worst);
        }
    }
    Ok(best)
}

/// Squared range `(max − min)²` of feature `feature` over class `class`.
pub fn class_range_width(data: &LabeledDataset, class: usize, feature: usize) -> Result<f64> {
    if feature >= data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            got: feature + 1,
        });
    }
    let values: Vec<f64> = data.class_points(class).iter().map(|p| p[feature]).collect();
    if values.is_empty() {
        return Err(Error::EmptyClass(class, "no objects".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((hi - lo).powi(2))
}

/// Per-class minimum enclosing balls, indexed by class.
pub fn class_balls(data: &LabeledDataset) -> Result<Vec<EnclosingBall>> {
    (0..data.class_count())
        .map(|c| {
            let pts = data.class_points(c);
            if pts.is_empty() {
                return Err(Error::EmptyClass(c, "no objects".into()));
            }
            min_enclosing_ball(&pts)
        })
        .collect()
}

/// Hypersphere domain description: the minimal ball inflated by a slack δ so
/// that every fitted point lies at least δ inside the border.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersphereDomain {
    pub ball: EnclosingBall,
    pub slack: f64,
}

impl HypersphereDomain {
    pub fn boundary_radius(&self) -> f64 {
        self.ball.radius + self.slack
    }

    /// Signed distance to the border, negative inside.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dist(x, &self.ball.center) - self.boundary_radius()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.signed_distance(x) <= 0.0
    }
}

pub fn fit_hypersphere_domain(points: &[&[f64]], slack: f64) -> Result<HypersphereDomain> {
    if !(slack >= 0.0 && slack.is_finite()) {
        return Err(invalid("slack must be non-negative"));
    }
    Ok(HypersphereDomain {
        ball: min_enclosing_ball(points)?,
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;
    use rand::Rng;

    fn line(vals: &[f64]) -> LabeledDataset {
        let rows: Vec<Vec<f64>> = vals.iter().map(|&v| vec![v]).collect();
        LabeledDataset::from_rows(&rows, vec![0; vals.len()], 1).unwrap()
    }

    #[test]
    fn restricted_center_on_a_line() {
        let d = line(&[0.0, 1.0, 2.0]).pairwise_distances();
        assert_eq!(data_restricted_center(&d, &[0, 1, 2]).unwrap(), (1, 1.0));
        assert_eq!(data_restricted_center(&d, &[2]).unwrap(), (2, 0.0));
        assert!(data_restricted_center(&d, &[]).is_err());
    }

    #[test]
    fn restricted_center_ties_go_low() {
        let d = line(&[0.0, 1.0, 2.0, 3.0]).pairwise_distances();
        // candidates 1 and 2 both reach 2.0
        assert_eq!(data_restricted_center(&d, &[0, 3]).unwrap(), (1, 2.0));
    }

    #[test]
    fn restricted_center_matches_double_loop() {
        let mut rng = RngSeed(12).rng();
        let rows: Vec<Vec<f64>> = (0..12).map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
        let data = LabeledDataset::from_rows(&rows, (0..12).map(|i| i % 2).collect(), 2).unwrap();
        let d = data.pairwise_distances();
        let members = data.class_indices(0);
        let (idx, r) = data_restricted_center(&d, &members).unwrap();
        let mut oracle = (usize::MAX, f64::INFINITY);
        for c in 0..rows.len() {
            let mut worst = 0.0f64;
            for &m in &members {
                worst = worst.max(((rows[c][0] - rows[m][0]).powi(2) + (rows[c][1] - rows[m][1]).powi(2)).sqrt());
            }
            if worst < oracle.1 {
                oracle = (c, worst);
            }
        }
        assert_eq!(idx, oracle.0);
        assert_eq!(r, oracle.1);
        // restriction can only worsen the minimax radius
        let ball = min_enclosing_ball(&data.class_points(0)).unwrap();
        assert!(r >= ball.radius - 1e-12);
    }

    #[test]
    fn range_widths() {
        assert_eq!(class_range_width(&line(&[1.0, 3.0, 7.0]), 0, 0).unwrap(), 36.0);
        assert_eq!(class_range_width(&line(&[4.0]), 0, 0).unwrap(), 0.0);
        let d = LabeledDataset::from_rows(&[vec![1.0]], vec![0], 2).unwrap();
        assert!(class_range_width(&d, 1, 0).is_err());
        assert!(class_range_width(&d, 0, 1).is_err());
    }

    #[test]
    fn range_width_matches_scan() {
        let mut rng = RngSeed(4).rng();
        let rows: Vec<Vec<f64>> = (0..30).map(|_| vec![rng.gen_range(-2.0..2.0), rng.gen_range(-9.0..9.0)]).collect();
        let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let d = LabeledDataset::from_rows(&rows, labels.clone(), 3).unwrap();
        for class in 0..3 {
            for k in 0..2 {
                let (mut lo, mut hi) = (f64::MAX, f64::MIN);
                for i in 0..30 {
                    if labels[i] == class {
                        lo = lo.min(rows[i][k]);
                        hi = hi.max(rows[i][k]);
                    }
                }
                assert_eq!(class_range_width(&d, class, k).unwrap(), (hi - lo) * (hi - lo));
            }
        }
    }

    #[test]
    fn hypersphere_domain() {
        let a = [0.0, 0.0];
        let b = [2.0, 0.0];
        let dom = fit_hypersphere_domain(&[&a, &b], 0.5).unwrap();
        assert!((dom.boundary_radius() - 1.5).abs() < 1e-15);
        assert_eq!(dom.ball.center, vec![1.0, 0.0]);
        let tight = fit_hypersphere_domain(&[&a, &b], 0.0).unwrap();
        assert_eq!(tight.ball, min_enclosing_ball(&[&a, &b]).unwrap());
        assert!(fit_hypersphere_domain(&[&a], -0.1).is_err());

        let mut rng = RngSeed(77).rng();
        let rows: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-3.0..3.0)]).collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let dom = fit_hypersphere_domain(&refs, 0.25).unwrap();
        for r in &rows {
            assert!(-dom.signed_distance(r) >= 0.25 - 1e-9);
            assert!(dom.contains(r));
        }
    }
}

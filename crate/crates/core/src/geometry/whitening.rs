use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::error::{invalid, Error, Result};

/// Relative ridge added to the pooled covariance before factorisation:
/// `C + λ·trace(C)/m·I`.
pub const WHITENING_RIDGE: f64 = 1e-6;

/// Affine map `x ↦ T (x − shift)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhiteningTransform {
    pub dim: usize,
    pub shift: Vec<f64>,
    /// Row-major `dim × dim`.
    pub transform: Vec<f64>,
}

impl WhiteningTransform {
    pub fn identity(dim: usize) -> Self {
        let mut transform = vec![0.0; dim * dim];
        for i in 0..dim {
            transform[i * dim + i] = 1.0;
        }
        Self {
            dim,
            shift: vec![0.0; dim],
            transform,
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.transform[i * d + j] * (x[j] - self.shift[j])).sum())
            .collect()
    }

    /// `TᵀT`, the metric matrix of the whitened distance.
    pub fn metric(&self) -> DMatrix<f64> {
        let t = DMatrix::from_row_slice(self.dim, self.dim, &self.transform);
        t.transpose() * t
    }
}

/// Whitening of the pooled, center-shifted data `{x − μ_label(x)}`.
///
/// `shift` is the mean of the shifted data and `transform` the symmetric
/// inverse square root of its (population) covariance plus the ridge. A
/// covariance of zero trace yields the identity.
pub fn pooled_whitening(data: &LabeledDataset, centers: &[Vec<f64>]) -> Result<WhiteningTransform> {
    let m = data.dim();
    if centers.len() != data.class_count() {
        return Err(invalid(format!(
            "{} centers for {} classes",
            centers.len(),
            data.class_count()
        )));
    }
    if let Some(c) = centers.iter().find(|c| c.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: c.len(),
        });
    }
    let n = data.len();
    let shifted: Vec<DVector<f64>> = (0..n)
        .map(|i| {
            let c = &centers[data.label(i)];
            DVector::from_iterator(m, data.point(i).iter().zip(c).map(|(x, mu)| x - mu))
        })
        .collect();
    let mean = shifted.iter().fold(DVector::zeros(m), |acc, v| acc + v) / n as f64;
    let mut cov = DMatrix::zeros(m, m);
    for v in &shifted {
        let d = v - &mean;
        cov += &d * d.transpose();
    }
    cov /= n as f64;
    let trace = cov.trace();
    if trace <= 0.0 || !trace.is_finite() {
        let mut w = WhiteningTransform::identity(m);
        w.shift = mean.iter().copied().collect();
        return Ok(w);
    }
    for i in 0..m {
        cov[(i, i)] += WHITENING_RIDGE * trace / m as f64;
    }
    let eig = cov.symmetric_eigen();
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.max(f64::MIN_POSITIVE).sqrt()));
    let t = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    let mut transform = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            transform.push(t[(i, j)]);
        }
    }
    Ok(WhiteningTransform {
        dim: m,
        shift: mean.iter().copied().collect(),
        transform,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn white_data_gives_identity() {
        // ±1 on each axis: zero mean, identity covariance
        let rows = [vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0] * 2f64.sqrt(), r[1] * 2f64.sqrt()]).collect();
        let data = LabeledDataset::from_rows(&rows, vec![0; 4], 1).unwrap();
        let w = pooled_whitening(&data, &[vec![0.0, 0.0]]).unwrap();
        assert!(w.shift.iter().all(|v| v.abs() < 1e-15));
        let id = WhiteningTransform::identity(2);
        for (a, b) in w.transform.iter().zip(&id.transform) {
            assert!((a - b).abs() < 1e-5);
        }
    }

    #[test]
    fn axis_aligned_variances() {
        // variance 4 on x, 1 on y
        let rows = [vec![2.0, 0.0], vec![-2.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[0] * 2f64.sqrt(), r[1] * 2f64.sqrt()]).collect();
        let data = LabeledDataset::from_rows(&rows, vec![0; 4], 1).unwrap();
        let w = pooled_whitening(&data, &[vec![0.0, 0.0]]).unwrap();
        let expect = [0.5, 0.0, 0.0, 1.0];
        for (a, b) in w.transform.iter().zip(expect) {
            assert!((a - b).abs() < 1e-5, "{:?}", w.transform);
        }
    }

    #[test]
    fn gaussian_sample_becomes_white() {
        let mut rng = RngSeed(31).rng();
        let n = Normal::new(0.0, 1.0).unwrap();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..500 {
            let (a, b) = (n.sample(&mut rng), n.sample(&mut rng));
            let offset = if i % 2 == 0 { 0.0 } else { 10.0 };
            rows.push(vec![3.0 * a + offset, a + 0.5 * b - offset]);
            labels.push(i % 2);
        }
        let data = LabeledDataset::from_rows(&rows, labels, 2).unwrap();
        let centers = vec![vec![0.0, 0.0], vec![10.0, -10.0]];
        let w = pooled_whitening(&data, &centers).unwrap();
        let z: Vec<Vec<f64>> = (0..500)
            .map(|i| {
                let c = &centers[data.label(i)];
                let x: Vec<f64> = data.point(i).iter().zip(c).map(|(x, m)| x - m).collect();
                w.apply(&x)
            })
            .collect();
        for a in 0..2 {
            for b in 0..2 {
                let mean_a: f64 = z.iter().map(|v| v[a]).sum::<f64>() / 500.0;
                let mean_b: f64 = z.iter().map(|v| v[b]).sum::<f64>() / 500.0;
                let cov: f64 = z.iter().map(|v| (v[a] - mean_a) * (v[b] - mean_b)).sum::<f64>() / 500.0;
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((cov - target).abs() < 0.1, "cov[{a}][{b}] = {cov}");
            }
        }
    }

    #[test]
    fn rank_deficient_is_regularised() {
        let rows = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        let data = LabeledDataset::from_rows(&rows, vec![0, 1], 2).unwrap();
        let w = pooled_whitening(&data, &[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(w, {
            let mut id = WhiteningTransform::identity(2);
            id.shift = vec![0.0, 0.0];
            id
        });
        let rows = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]];
        let data = LabeledDataset::from_rows(&rows, vec![0; 3], 1).unwrap();
        let w = pooled_whitening(&data, &[vec![1.0, 0.0]]).unwrap();
        assert!(w.transform.iter().all(|v| v.is_finite()));
        assert!(pooled_whitening(&data, &[]).is_err());
    }
}

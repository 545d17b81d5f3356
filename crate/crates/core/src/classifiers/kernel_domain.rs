use serde::{Deserialize, Serialize};

use super::Classifier;
use crate::data::LabeledDataset;
use crate::error::Result;
use crate::linalg::{dist, dot, sq_dist};

/// Union-of-balls class domains: class `j` accepts `x` when some prototype of
/// `j` lies within `width` of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelDomainModel {
    pub dim: usize,
    /// Deduplicated training objects, grouped by class.
    pub prototypes: Vec<Vec<Vec<f64>>>,
    pub width: f64,
}

/// Largest within-class nearest-neighbor distance: the smallest radius at
/// which every object lies in the domain of its own class built from the
/// remaining objects. Expects at least two distinct objects per class.
pub fn within_class_width(data: &LabeledDataset) -> Result<f64> {
    data.require_class_sizes(2)?;
    let mut h: f64 = 0.0;
    for class in 0..data.class_count() {
        let pts = data.class_points(class);
        for (i, p) in pts.iter().enumerate() {
            let nn = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| dist(p, q))
                .fold(f64::INFINITY, f64::min);
            h = h.max(nn);
        }
    }
    Ok(h)
}

pub fn train_kernel_domain(data: &LabeledDataset) -> Result<KernelDomainModel> {
    let data = data.deduplicate();
    let width = within_class_width(&data)?;
    let prototypes = (0..data.class_count())
        .map(|c| data.class_points(c).into_iter().map(<[f64]>::to_vec).collect())
        .collect();
    Ok(KernelDomainModel {
        dim: data.dim(),
        prototypes,
        width,
    })
}

impl KernelDomainModel {
    pub fn nearest_prototype_distances(&self, x: &[f64]) -> Vec<f64> {
        self.prototypes
            .iter()
            .map(|ps| ps.iter().map(|p| sq_dist(p, x)).fold(f64::INFINITY, f64::min).sqrt())
            .collect()
    }

    /// `max(0, nearest prototype distance − width)` per class.
    pub fn domain_distances(&self, x: &[f64]) -> Vec<f64> {
        self.nearest_prototype_distances(x)
            .into_iter()
            .map(|d| (d - self.width).max(0.0))
            .collect()
    }

    pub fn accepts(&self, x: &[f64], class: usize) -> bool {
        self.nearest_prototype_distances(x)[class] <= self.width
    }
}

impl Classifier for KernelDomainModel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn class_count(&self) -> usize {
        self.prototypes.len()
    }

    /// Nearest distance to class 1 minus nearest distance to class 0.
    fn raw_score(&self, x: &[f64]) -> f64 {
        let d = self.nearest_prototype_distances(x);
        d[1] - d[0]
    }

    /// On rejection the class with the smallest distance to its domain wins;
    /// on multiple acceptance the one reaching deepest inside (largest
    /// distance to its border). With one shared width both rules pick the
    /// class of the nearest prototype, ties to the lowest index.
    fn raw_predict(&self, x: &[f64]) -> usize {
        let d = self.nearest_prototype_distances(x);
        (0..d.len()).fold(0, |best, j| if d[j] < d[best] { j } else { best })
    }

    /// Exact nearest point of the nearest-prototype boundary: the closest
    /// point of any Voronoi cell (w.r.t. the own-class prototypes) of an
    /// opposite prototype.
    fn raw_boundary_point(&self, x: &[f64]) -> Option<Vec<f64>> {
        let own_class = self.raw_predict(x);
        let own = &self.prototypes[own_class];
        let other = &self.prototypes[1 - own_class];
        let d_own = own.iter().map(|p| dist(p, x)).fold(f64::INFINITY, f64::min);
        let mut order: Vec<(f64, usize)> = other.iter().enumerate().map(|(i, q)| (dist(q, x), i)).collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best: Option<(f64, Vec<f64>)> = None;
        for (dq, qi) in order {
            // every point of q's cell is at least this far from x
            let lower = 0.5 * (dq - d_own);
            if best.as_ref().is_some_and(|(b, _)| lower >= *b) {
                break;
            }
            let y = project_onto_cell(x, &other[qi], own);
            let d = dist(&y, x);
            if best.as_ref().is_none_or(|(b, _)| d < *b) {
                best = Some((d, y));
            }
        }
        best.map(|(_, y)| y)
    }
}

/// Euclidean projection of `x` onto `{y : ‖y − q‖ ≤ ‖y − p‖ for all p}` by
/// Hildreth's dual coordinate ascent. Each constraint is the half-space
/// `2(p − q)·y ≤ ‖p‖² − ‖q‖²`.
fn project_onto_cell(x: &[f64], q: &[f64], ps: &[Vec<f64>]) -> Vec<f64> {
    let qq = dot(q, q);
    let rows: Vec<(Vec<f64>, f64, f64)> = ps
        .iter()
        .map(|p| {
            let a: Vec<f64> = p.iter().zip(q).map(|(pi, qi)| 2.0 * (pi - qi)).collect();
            let aa = dot(&a, &a);
            (a, dot(p, p) - qq, aa)
        })
        .filter(|r| r.2 > 0.0)
        .collect();
    let scale = 1.0 + rows.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
    let mut y = x.to_vec();
    let mut lambda = vec![0.0; rows.len()];
    for _ in 0..100_000 {
        let mut moved = 0.0f64;
        let mut worst = 0.0f64;
        for (k, (a, b, aa)) in rows.iter().enumerate() {
            let viol = dot(a, &y) - b;
            worst = worst.max(viol);
            let new = (lambda[k] + viol / aa).max(0.0);
            let step = new - lambda[k];
            if step != 0.0 {
                y.iter_mut().zip(a).for_each(|(yi, ai)| *yi -= step * ai);
                lambda[k] = new;
                moved = moved.max(step.abs() * aa.sqrt());
            }
        }
        if moved <= 1e-15 * scale && worst <= 1e-13 * scale {
            break;
        }
    }
    y
}

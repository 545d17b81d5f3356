//! Labelled datasets and the operations that only reshape them.

mod banana;
mod csv_io;

pub use banana::{generate_banana, generate_banana_with, BananaParams};
pub use csv_io::{read_csv, read_csv_path, write_csv, write_csv_path};

use std::collections::HashSet;

use rand::seq::SliceRandom;

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::rng::RngSeed;

/// Immutable set of objects in a Euclidean feature space, each with a class
/// index in `0..class_count`.
///
/// For two-class problems, class 0 is ω₁ (signed label +1) and class 1 is
/// ω₂ (signed label −1). Identical points with different labels are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    points: Vec<f64>,
    dim: usize,
    labels: Vec<usize>,
    class_count: usize,
}

impl LabeledDataset {
    /// Build from a row-major flat point buffer.
    pub fn new(points: Vec<f64>, dim: usize, labels: Vec<usize>, class_count: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if labels.is_empty() {
            return Err(invalid("dataset must contain at least one object"));
        }
        if points.len() != labels.len() * dim {
            return Err(invalid(format!(
                "point buffer has {} values, expected {} objects x {} features",
                points.len(),
                labels.len(),
                dim
            )));
        }
        if class_count == 0 {
            return Err(invalid("class_count must be positive"));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_count) {
            return Err(invalid(format!("label {bad} outside 0..{class_count}")));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(invalid("points must be finite"));
        }
        Ok(Self {
            points,
            dim,
            labels,
            class_count,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<usize>, class_count: usize) -> Result<Self> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(invalid("rows have differing lengths"));
        }
        if rows.len() != labels.len() {
            return Err(invalid("row and label counts differ"));
        }
        Self::new(rows.concat(), dim, labels, class_count)
    }

    /// Two-class dataset from signed labels: +1 becomes class 0, −1 class 1.
    pub fn from_signed(rows: &[Vec<f64>], signs: &[i32]) -> Result<Self> {
        let labels = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(0),
                -1 => Ok(1),
                other => Err(invalid(format!("signed label must be +1 or -1, got {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows, labels, 2)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.points.chunks_exact(self.dim)
    }

    pub fn flat_points(&self) -> &[f64] {
        &self.points
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// +1 for class 0, −1 otherwise.
    pub fn signed_label(&self, i: usize) -> f64 {
        signed(self.labels[i])
    }

    pub fn class_indices(&self, class: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i] == class).collect()
    }

    pub fn class_points(&self, class: usize) -> Vec<&[f64]> {
        self.class_indices(class).into_iter().map(|i| self.point(i)).collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn require_two_class(&self) -> Result<()> {
        if self.class_count != 2 {
            return Err(Error::Unsupported(format!(
                "operation needs exactly 2 classes, dataset has {}",
                self.class_count
            )));
        }
        Ok(())
    }

    /// Fails unless every class holds at least `min` objects.
    pub fn require_class_sizes(&self, min: usize) -> Result<()> {
        for (c, &n) in self.class_sizes().iter().enumerate() {
            if n < min {
                return Err(Error::EmptyClass(c, format!("{n} < {min}")));
            }
        }
        Ok(())
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut points = Vec::with_capacity(indices.len() * self.dim);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(invalid(format!("index {i} out of range")));
            }
            points.extend_from_slice(self.point(i));
            labels.push(self.labels[i]);
        }
        Self::new(points, self.dim, labels, self.class_count)
    }

    /// Collapse exact duplicate (point, label) pairs, keeping first occurrences
    /// in order. Same point with different labels is kept.
    pub fn deduplicate(&self) -> Self {
        let mut seen = HashSet::with_capacity(self.len());
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| seen.insert(object_key(self.point(i), self.labels[i])))
            .collect();
        if keep.len() == self.len() {
            return self.clone();
        }
        self.subset(&keep).expect("indices are in range")
    }

    /// Append copies of object `i`.
    pub fn with_copies(&self, i: usize, copies: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..copies {
            out.points.extend_from_slice(self.point(i));
            out.labels.push(self.labels[i]);
        }
        out
    }

    pub fn pairwise_distances(&self) -> DistanceMatrix {
        DistanceMatrix::euclidean(self.points().collect::<Vec<_>>().as_slice())
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.max(linalg::sq_dist(self.point(i), self.point(j)));
            }
        }
        best.sqrt()
    }
}

pub(crate) fn signed(label: usize) -> f64 {
    if label == 0 {
        1.0
    } else {
        -1.0
    }
}

fn object_key(point: &[f64], label: usize) -> (Vec<u64>, usize) {
    // +0.0 and -0.0 compare equal, so they must share a key
    let bits = point.iter().map(|&v| if v == 0.0 { 0 } else { v.to_bits() }).collect();
    (bits, label)
}

/// Identifier of the metric a [`DistanceMatrix`] was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
}

/// Symmetric matrix of pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
    metric: Metric,
}

impl DistanceMatrix {
    pub fn euclidean(points: &[&[f64]]) -> Self {
        let n = points.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = linalg::dist(points[i], points[j]);
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Self {
            n,
            values,
            metric: Metric::Euclidean,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }
}

/// Per-class nested subsets: for each size `s` the result holds the first `s`
/// objects of a seeded per-class permutation, so each output is contained in
/// every later one. Objects keep their original relative order.
pub fn nested_training_subsets(
    data: &LabeledDataset,
    sizes_per_class: &[usize],
    seed: RngSeed,
) -> Result<Vec<LabeledDataset>> {
    if sizes_per_class.is_empty() {
        return Err(invalid("no subset sizes given"));
    }
    if sizes_per_class[0] == 0 {
        return Err(invalid("subset sizes must be positive"));
    }
    if sizes_per_class.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("subset sizes must be strictly ascending"));
    }
    let largest = *sizes_per_class.last().expect("non-empty");
    let mut rng = seed.rng();
    let mut orders = Vec::with_capacity(data.class_count());
    for class in 0..data.class_count() {
        let mut idx = data.class_indices(class);
        if idx.len() < largest {
            return Err(invalid(format!(
                "class {class} has {} objects, {largest} requested",
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        orders.push(idx);
    }
    sizes_per_class
        .iter()
        .map(|&s| {
            let mut chosen: Vec<usize> = orders.iter().flat_map(|o| o[..s].iter().copied()).collect();
            chosen.sort_unstable();
            data.subset(&chosen)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn ds(rows: &[&[f64]], labels: &[usize], k: usize) -> LabeledDataset {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        LabeledDataset::from_rows(&rows, labels.to_vec(), k).unwrap()
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(LabeledDataset::new(vec![], 1, vec![], 1).is_err());
        assert!(LabeledDataset::new(vec![1.0], 0, vec![0], 1).is_err());
        assert!(LabeledDataset::new(vec![1.0], 1, vec![2], 2).is_err());
        assert!(LabeledDataset::new(vec![f64::NAN], 1, vec![0], 1).is_err());
        assert!(LabeledDataset::from_signed(&[vec![0.0]], &[0]).is_err());
    }

    #[test]
    fn distances_of_345_triangle() {
        let d = ds(&[&[0.0, 0.0], &[3.0, 4.0]], &[0, 1], 2).pairwise_distances();
        assert_eq!(d.get(0, 1), 5.0);
        assert_eq!(d.get(1, 0), 5.0);
        assert_eq!(d.get(0, 0), 0.0);
        let single = ds(&[&[1.0, 2.0]], &[0], 1).pairwise_distances();
        assert_eq!(single.len(), 1);
        assert_eq!(single.get(0, 0), 0.0);
    }

    #[test]
    fn distances_match_independent_loop() {
        let mut rng = RngSeed(3).rng();
        let rows: Vec<Vec<f64>> = (0..10).map(|_| (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect()).collect();
        let data = LabeledDataset::from_rows(&rows, vec![0; 10], 1).unwrap();
        let d = data.pairwise_distances();
        for i in 0..10 {
            for j in 0..10 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += (rows[i][k] - rows[j][k]).powi(2);
                }
                assert!((d.get(i, j) - acc.sqrt()).abs() < 1e-12);
                assert_eq!(d.get(i, j), d.get(j, i));
            }
            assert_eq!(d.get(i, i), 0.0);
        }
        // triangle inequality on every triple
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..10 {
                    assert!(d.get(i, k) <= d.get(i, j) + d.get(j, k) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn deduplicate_cases() {
        let d = ds(&[&[1.0, 1.0], &[1.0, 1.0], &[2.0, 2.0]], &[0, 0, 1], 2);
        assert_eq!(d.deduplicate(), ds(&[&[1.0, 1.0], &[2.0, 2.0]], &[0, 1], 2));
        let distinct = ds(&[&[1.0, 1.0], &[2.0, 2.0]], &[0, 1], 2);
        assert_eq!(distinct.deduplicate(), distinct);
        let overlap = ds(&[&[1.0, 1.0], &[1.0, 1.0]], &[0, 1], 2);
        assert_eq!(overlap.deduplicate(), overlap);
        let zeros = ds(&[&[0.0], &[-0.0]], &[0, 0], 1);
        assert_eq!(zeros.deduplicate().len(), 1);
    }

    #[test]
    fn nested_subsets_are_nested_with_exact_counts() {
        let data = generate_banana(50, 0.9, RngSeed(11)).unwrap();
        let subsets = nested_training_subsets(&data, &[2, 5, 10], RngSeed(4)).unwrap();
        let counts: Vec<usize> = subsets.iter().map(LabeledDataset::len).collect();
        assert_eq!(counts, vec![4, 10, 20]);
        for s in &subsets {
            assert_eq!(s.class_sizes(), vec![s.len() / 2; 2]);
        }
        for pair in subsets.windows(2) {
            for i in 0..pair[0].len() {
                let found = (0..pair[1].len())
                    .any(|j| pair[1].point(j) == pair[0].point(i) && pair[1].label(j) == pair[0].label(i));
                assert!(found, "object {i} of smaller subset missing from larger");
            }
        }
        let full = nested_training_subsets(&data, &[50], RngSeed(4)).unwrap();
        assert_eq!(full[0], data);
    }

    #[test]
    fn nested_subsets_reject_bad_sizes() {
        let data = generate_banana(5, 0.9, RngSeed(1)).unwrap();
        assert!(nested_training_subsets(&data, &[2, 6], RngSeed(0)).is_err());
        assert!(nested_training_subsets(&data, &[3, 3], RngSeed(0)).is_err());
        assert!(nested_training_subsets(&data, &[0, 3], RngSeed(0)).is_err());
        assert!(nested_training_subsets(&data, &[], RngSeed(0)).is_err());
    }

    #[test]
    fn class_helpers() {
        let d = ds(&[&[0.0], &[1.0], &[2.0]], &[1, 0, 1], 2);
        assert_eq!(d.class_indices(1), vec![0, 2]);
        assert_eq!(d.class_sizes(), vec![1, 2]);
        assert_eq!(d.signed_label(0), -1.0);
        assert_eq!(d.signed_label(1), 1.0);
        assert!(d.require_class_sizes(2).is_err());
        assert_eq!(d.diameter(), 2.0);
        assert_eq!(d.with_copies(1, 3).len(), 6);
    }

    proptest::proptest! {
        #[test]
        fn deduplicate_is_idempotent(vals in proptest::collection::vec((0i32..4, 0i32..4, 0usize..2), 1..30)) {
            let rows: Vec<Vec<f64>> = vals.iter().map(|&(a, b, _)| vec![a as f64, b as f64]).collect();
            let labels = vals.iter().map(|v| v.2).collect();
            let d = LabeledDataset::from_rows(&rows, labels, 2).unwrap();
            let once = d.deduplicate();
            proptest::prop_assert_eq!(once.deduplicate(), once.clone());
            proptest::prop_assert!(once.len() <= d.len());
        }
    }
}

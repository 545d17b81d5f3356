use serde::{Deserialize, Serialize};

use super::Classifier;
use crate::data::LabeledDataset;
use crate::error::{invalid, Result};

pub const DEFAULT_MAX_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    /// `pure` is false when the depth limit or an unsplittable node forced a
    /// majority vote.
    Leaf { class: usize, pure: bool },
    /// `x[feature] <= threshold` goes to `left`.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Axis-parallel tree grown by repeatedly cutting off the largest pure
/// interval. Node 0 is the root.
///
/// A node with no pure interval at either end of any feature is split where
/// majority votes on both sides make the fewest errors, and both sides grow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurityTreeModel {
    pub dim: usize,
    pub class_count: usize,
    pub nodes: Vec<TreeNode>,
}

impl PurityTreeModel {
    pub fn leaf_of(&self, x: &[f64]) -> &TreeNode {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[*feature] <= *threshold { *left } else { *right },
                leaf => return leaf,
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn rec(nodes: &[TreeNode], i: usize) -> usize {
            match nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + rec(nodes, left).max(rec(nodes, right)),
            }
        }
        rec(&self.nodes, 0)
    }
}

/// A candidate cut: `count` objects of `class` lie on one side of `threshold`.
#[derive(Debug, Clone, Copy)]
struct PureCut {
    count: usize,
    feature: usize,
    threshold: f64,
    /// Pure part on the `<=` side.
    low_side: bool,
    class: usize,
}

pub fn train_purity_tree(data: &LabeledDataset, max_depth: usize) -> Result<PurityTreeModel> {
    if data.is_empty() {
        return Err(invalid("empty training set"));
    }
    if max_depth == 0 {
        return Err(invalid("max_depth must be positive"));
    }
    let data = data.deduplicate();
    let mut model = PurityTreeModel {
        dim: data.dim(),
        class_count: data.class_count(),
        nodes: Vec::new(),
    };
    let all: Vec<usize> = (0..data.len()).collect();
    grow(&data, &all, 0, max_depth, &mut model.nodes);
    Ok(model)
}

fn grow(data: &LabeledDataset, idx: &[usize], depth: usize, max_depth: usize, nodes: &mut Vec<TreeNode>) -> usize {
    let id = nodes.len();
    let first = data.label(idx[0]);
    if idx.iter().all(|&i| data.label(i) == first) {
        nodes.push(TreeNode::Leaf { class: first, pure: true });
        return id;
    }
    if depth >= max_depth {
        return majority_leaf(data, idx, nodes);
    }
    if let Some(cut) = best_cut(data, idx) {
        nodes.push(TreeNode::Leaf { class: 0, pure: false });
        let rest: Vec<usize> = idx
            .iter()
            .copied()
            .filter(|&i| (data.point(i)[cut.feature] <= cut.threshold) != cut.low_side)
            .collect();
        let leaf = nodes.len();
        nodes.push(TreeNode::Leaf {
            class: cut.class,
            pure: true,
        });
        let sub = grow(data, &rest, depth + 1, max_depth, nodes);
        let (left, right) = if cut.low_side { (leaf, sub) } else { (sub, leaf) };
        nodes[id] = TreeNode::Split {
            feature: cut.feature,
            threshold: cut.threshold,
            left,
            right,
        };
        return id;
    }
    // No single-class interval at either end of any feature (an XOR-like
    // node). Split where majority votes on both sides err least and grow both.
    let Some((feature, threshold)) = fewest_errors_cut(data, idx) else {
        return majority_leaf(data, idx, nodes);
    };
    nodes.push(TreeNode::Leaf { class: 0, pure: false });
    let (lo, hi): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| data.point(i)[feature] <= threshold);
    let left = grow(data, &lo, depth + 1, max_depth, nodes);
    let right = grow(data, &hi, depth + 1, max_depth, nodes);
    nodes[id] = TreeNode::Split {
        feature,
        threshold,
        left,
        right,
    };
    id
}

fn majority_leaf(data: &LabeledDataset, idx: &[usize], nodes: &mut Vec<TreeNode>) -> usize {
    nodes.push(TreeNode::Leaf {
        class: majority(data, idx),
        pure: false,
    });
    nodes.len() - 1
}

fn fewest_errors_cut(data: &LabeledDataset, idx: &[usize]) -> Option<(usize, f64)> {
    let k = data.class_count();
    let mut best: Option<(usize, usize, f64)> = None;
    for feature in 0..data.dim() {
        let mut vals: Vec<(f64, usize)> = idx.iter().map(|&i| (data.point(i)[feature], data.label(i))).collect();
        vals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut total = vec![0usize; k];
        for &(_, c) in &vals {
            total[c] += 1;
        }
        let mut left = vec![0usize; k];
        for j in 0..vals.len() - 1 {
            left[vals[j].1] += 1;
            if vals[j].0 == vals[j + 1].0 {
                continue;
            }
            let nl = j + 1;
            let nr = vals.len() - nl;
            let ml = left.iter().max().copied().unwrap_or(0);
            let mr = (0..k).map(|c| total[c] - left[c]).max().unwrap_or(0);
            let errors = (nl - ml) + (nr - mr);
            if best.is_none_or(|b| errors < b.0) {
                best = Some((errors, feature, midpoint(vals[j].0, vals[j + 1].0)));
            }
        }
    }
    best.map(|(_, f, t)| (f, t))
}

fn majority(data: &LabeledDataset, idx: &[usize]) -> usize {
    let mut counts = vec![0usize; data.class_count()];
    for &i in idx {
        counts[data.label(i)] += 1;
    }
    (0..counts.len()).fold(0, |best, c| if counts[c] > counts[best] { c } else { best })
}

/// Largest pure prefix or suffix over every feature's sorted values.
fn best_cut(data: &LabeledDataset, idx: &[usize]) -> Option<PureCut> {
    let mut best: Option<PureCut> = None;
    for feature in 0..data.dim() {
        let mut vals: Vec<(f64, usize)> = idx.iter().map(|&i| (data.point(i)[feature], data.label(i))).collect();
        vals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let groups = value_groups(&vals);
        if groups.len() < 2 {
            continue;
        }
        let mut consider = |c: PureCut| {
            let better = match best {
                None => true,
                Some(b) => {
                    c.count > b.count || (c.count == b.count && c.feature == b.feature && c.threshold < b.threshold)
                }
            };
            if better {
                best = Some(c);
            }
        };
        if let Some((count, last, class)) = pure_run(&groups, groups.iter().enumerate()) {
            consider(PureCut {
                count,
                feature,
                threshold: midpoint(groups[last].value, groups[last + 1].value),
                low_side: true,
                class,
            });
        }
        if let Some((count, first, class)) = pure_run(&groups, groups.iter().enumerate().rev()) {
            consider(PureCut {
                count,
                feature,
                threshold: midpoint(groups[first - 1].value, groups[first].value),
                low_side: false,
                class,
            });
        }
    }
    best
}

struct Group {
    value: f64,
    count: usize,
    /// The single class of the group, if it has one.
    class: Option<usize>,
}

fn value_groups(sorted: &[(f64, usize)]) -> Vec<Group> {
    let mut groups: Vec<Group> = Vec::new();
    for &(v, c) in sorted {
        match groups.last_mut() {
            Some(g) if g.value == v => {
                g.count += 1;
                if g.class != Some(c) {
                    g.class = None;
                }
            }
            _ => groups.push(Group {
                value: v,
                count: 1,
                class: Some(c),
            }),
        }
    }
    groups
}

/// Walks groups from one end while they share one class. Returns the object
/// count, the index of the last group in the run and the class; `None` when
/// the run is empty. The run never covers every group because the node is
/// impure.
fn pure_run<'a>(groups: &[Group], order: impl Iterator<Item = (usize, &'a Group)>) -> Option<(usize, usize, usize)> {
    let mut run: Option<(usize, usize, usize)> = None;
    for (i, g) in order {
        match (g.class, run) {
            (Some(c), None) => run = Some((g.count, i, c)),
            (Some(c), Some((n, _, rc))) if c == rc => run = Some((n + g.count, i, c)),
            _ => break,
        }
    }
    run.filter(|&(n, _, _)| n < groups.iter().map(|g| g.count).sum())
}

/// Midpoint of `a < b` that still separates them in floating point.
fn midpoint(a: f64, b: f64) -> f64 {
    let m = a + 0.5 * (b - a);
    if m < b {
        m
    } else {
        a
    }
}

impl Classifier for PurityTreeModel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn class_count(&self) -> usize {
        self.class_count
    }

    fn raw_score(&self, x: &[f64]) -> f64 {
        if self.raw_predict(x) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn raw_predict(&self, x: &[f64]) -> usize {
        match self.leaf_of(x) {
            TreeNode::Leaf { class, .. } => *class,
            TreeNode::Split { .. } => unreachable!("leaf_of returns leaves"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    use crate::rng::RngSeed;

    fn one_d(values: &[f64], labels: &[usize]) -> LabeledDataset {
        let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
        LabeledDataset::from_rows(&rows, labels.to_vec(), 2).unwrap()
    }

    #[test]
    fn one_d_example() {
        let data = one_d(&[0.0, 1.0, 2.0, 4.0, 5.0], &[0, 0, 0, 1, 1]);
        let t = train_purity_tree(&data, DEFAULT_MAX_DEPTH).unwrap();
        match t.nodes[0] {
            TreeNode::Split { feature, threshold, .. } => {
                assert_eq!(feature, 0);
                assert!(threshold > 2.0 && threshold < 4.0);
            }
            _ => panic!("root must split"),
        }
        assert_eq!(t.depth(), 1);
        for i in 0..data.len() {
            assert_eq!(t.predict(data.point(i)).unwrap(), data.label(i));
        }
    }

    #[test]
    fn single_class_is_one_leaf() {
        let data = one_d(&[0.0, 3.0, 1.0], &[1, 1, 1]);
        let t = train_purity_tree(&data, 4).unwrap();
        assert_eq!(t.nodes, vec![TreeNode::Leaf { class: 1, pure: true }]);
        assert_eq!(t.score(&[100.0]).unwrap(), -1.0);
    }

    #[test]
    fn inseparable_points_become_majority_leaf() {
        let data = one_d(&[1.0, 1.0, 1.0], &[1, 0, 1]);
        let t = train_purity_tree(&data, 4).unwrap();
        // dedup keeps one of each (point, label) pair, so the vote ties
        assert_eq!(t.nodes, vec![TreeNode::Leaf { class: 0, pure: false }]);
    }

    #[test]
    fn xor_node_falls_back_to_fewest_errors_cut() {
        let rows = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let data = LabeledDataset::from_rows(&rows, vec![0, 1, 1, 0], 2).unwrap();
        let idx = [0, 1, 2, 3];
        assert!(best_cut(&data, &idx).is_none());
        let t = train_purity_tree(&data, DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(t.depth(), 2);
        for i in 0..4 {
            assert_eq!(t.predict(data.point(i)).unwrap(), data.label(i));
        }
    }

    #[test]
    fn adjacent_floats_split() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let t = train_purity_tree(&one_d(&[a, b], &[0, 1]), 4).unwrap();
        assert_eq!(t.predict(&[a]).unwrap(), 0);
        assert_eq!(t.predict(&[b]).unwrap(), 1);
    }

    #[test]
    fn depth_limit_marks_impure_leaves() {
        let data = one_d(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0], &[0, 1, 0, 1, 0, 1]);
        let t = train_purity_tree(&data, 2).unwrap();
        assert!(t.depth() <= 2);
        assert!(t.nodes.iter().any(|n| matches!(n, TreeNode::Leaf { pure: false, .. })));
        let full = train_purity_tree(&data, DEFAULT_MAX_DEPTH).unwrap();
        for i in 0..data.len() {
            assert_eq!(full.predict(data.point(i)).unwrap(), data.label(i));
        }
    }

    /// Independent scan over every feature and every threshold between
    /// consecutive distinct values, counting pure half-intervals.
    fn scan_oracle(data: &LabeledDataset) -> usize {
        let mut best = 0;
        for f in 0..data.dim() {
            let mut vals: Vec<f64> = data.points().map(|p| p[f]).collect();
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            for w in vals.windows(2) {
                let t = 0.5 * (w[0] + w[1]);
                for low in [true, false] {
                    let side: Vec<usize> = (0..data.len())
                        .filter(|&i| (data.point(i)[f] <= t) == low)
                        .map(|i| data.label(i))
                        .collect();
                    if !side.is_empty() && side.iter().all(|&c| c == side[0]) {
                        best = best.max(side.len());
                    }
                }
            }
        }
        best
    }

    #[test]
    fn root_cut_matches_scan_oracle() {
        let mut rng = RngSeed(77).rng();
        for _ in 0..200 {
            let n = rng.gen_range(3..25);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.gen_range(0..6) as f64, rng.gen_range(0..6) as f64])
                .collect();
            let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let data = LabeledDataset::from_rows(&rows, labels, 2).unwrap().deduplicate();
            let idx: Vec<usize> = (0..data.len()).collect();
            let pure = data.labels().iter().all(|&c| c == data.label(0));
            match best_cut(&data, &idx) {
                Some(c) => assert_eq!(c.count, scan_oracle(&data)),
                None => assert!(pure || scan_oracle(&data) == 0),
            }
        }
    }

    #[test]
    fn duplicates_give_identical_tree() {
        let mut rng = RngSeed(3).rng();
        let rows: Vec<Vec<f64>> = (0..30).map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        let labels: Vec<usize> = rows.iter().map(|r| usize::from(r[0] * r[1] > 0.0)).collect();
        let data = LabeledDataset::from_rows(&rows, labels, 2).unwrap();
        let base = train_purity_tree(&data, DEFAULT_MAX_DEPTH).unwrap();
        for i in [0, 7, 29] {
            assert_eq!(train_purity_tree(&data.with_copies(i, 10), DEFAULT_MAX_DEPTH).unwrap(), base);
        }
    }

    proptest! {
        #[test]
        fn classifies_distinct_training_points(
            pts in proptest::collection::vec((-50i32..50, -50i32..50, 0usize..2), 1..40)
        ) {
            // data without conflicting labels on one point is separable by axis cuts
            let mut seen = std::collections::HashMap::new();
            let mut rows = Vec::new();
            let mut labels = Vec::new();
            for (a, b, c) in pts {
                if *seen.entry((a, b)).or_insert(c) == c {
                    rows.push(vec![a as f64, b as f64]);
                    labels.push(c);
                }
            }
            let data = LabeledDataset::from_rows(&rows, labels, 2).unwrap();
            let t = train_purity_tree(&data, usize::MAX).unwrap();
            for i in 0..data.len() {
                prop_assert_eq!(t.predict(data.point(i)).unwrap(), data.label(i));
            }
        }
    }
}

//! Maximum of the minimum signed distance under a unit-norm weight vector.
//!
//! Training images are mapped to exact coordinates of their centered span in
//! the kernel-induced space, where the problem is finite-dimensional:
//!
//! * separable classes: half the distance between the convex hulls, found by
//!   the MDM nearest-point iteration;
//! * overlapping classes: the objective is no longer concave. Each step
//!   maximises the worst signed value over the tangent plane `w₀·w = 1` (a
//!   linear program) and renormalises; this never decreases the objective
//!   while it is negative. Converged directions are polished to the exact
//!   facet normal, and the best of several starts is kept.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Classifier, Hyperplane};
use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::kernel::{Kernel, SpanEmbedding};
use crate::linalg::{dot, norm};
use crate::rng::RngSeed;

/// Objects within this distance of the margin are flagged as support.
const SUPPORT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginOptions {
    /// Starting directions for the overlapping case: the class-mean
    /// difference plus `restarts − 1` random ones.
    pub restarts: usize,
    pub seed: RngSeed,
    /// Cap on tangent-plane steps per start.
    pub max_steps: usize,
}

impl Default for MarginOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            seed: RngSeed(0x6d61_7267),
            max_steps: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginModel {
    pub dim: usize,
    pub kernel: Kernel,
    /// Deduplicated training objects the dual weights refer to.
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub dual_weights: Vec<f64>,
    pub bias: f64,
    /// Minimum signed distance over the training objects in feature space.
    pub margin: f64,
    /// Indices into `points` of the objects attaining the margin.
    pub support_indices: Vec<usize>,
    /// `Σ αᵢ xᵢ` for the linear kernel; unit length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_weights: Option<Vec<f64>>,
}

pub fn train_negative_margin(data: &LabeledDataset, kernel: Kernel) -> Result<MarginModel> {
    train_negative_margin_with(data, kernel, &MarginOptions::default())
}

pub fn train_negative_margin_with(data: &LabeledDataset, kernel: Kernel, opts: &MarginOptions) -> Result<MarginModel> {
    data.require_two_class()?;
    let data = data.deduplicate();
    data.require_class_sizes(1)?;
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be positive".into()));
    }
    let pts: Vec<&[f64]> = data.points().collect();
    let emb = SpanEmbedding::new(kernel, &pts)?;
    let signs: Vec<f64> = (0..data.len()).map(|i| data.signed_label(i)).collect();
    let w = solve(&emb.coords, &signs, opts)?;
    let proj: Vec<f64> = emb.coords.iter().map(|z| dot(&w, z)).collect();
    let (_, b) = best_bias_margin(&proj, &signs);
    let (dual_weights, bias) = emb.dual(&w, b);

    let mut model = MarginModel {
        dim: data.dim(),
        kernel,
        points: pts.iter().map(|p| p.to_vec()).collect(),
        labels: data.labels().to_vec(),
        dual_weights,
        bias,
        margin: 0.0,
        support_indices: Vec::new(),
        input_weights: None,
    };
    if kernel == Kernel::Linear {
        let mut wi = vec![0.0; data.dim()];
        for (a, p) in model.dual_weights.iter().zip(&pts) {
            wi.iter_mut().zip(p.iter()).for_each(|(w, x)| *w += a * x);
        }
        model.input_weights = Some(wi);
    }
    let values: Vec<f64> = (0..data.len())
        .map(|i| signs[i] * model.raw_score(data.point(i)))
        .collect();
    model.margin = values.iter().copied().fold(f64::INFINITY, f64::min);
    model.support_indices = (0..values.len())
        .filter(|&i| values[i] <= model.margin + SUPPORT_TOL)
        .collect();
    Ok(model)
}

/// For fixed projections `pᵢ = w·zᵢ` of a unit `w`: the bias maximising
/// `min yᵢ(pᵢ + b)` and the value of that minimum.
pub fn best_bias_margin(proj: &[f64], signs: &[f64]) -> (f64, f64) {
    let mut min_pos = f64::INFINITY;
    let mut max_neg = f64::NEG_INFINITY;
    for (p, s) in proj.iter().zip(signs) {
        if *s > 0.0 {
            min_pos = min_pos.min(*p);
        } else {
            max_neg = max_neg.max(*p);
        }
    }
    (0.5 * (min_pos - max_neg), -0.5 * (min_pos + max_neg))
}

struct Instance<'a> {
    z: &'a [Vec<f64>],
    signs: &'a [f64],
}

impl Instance<'_> {
    fn r(&self) -> usize {
        self.z[0].len()
    }

    fn value(&self, w: &[f64]) -> f64 {
        let proj: Vec<f64> = self.z.iter().map(|z| dot(w, z)).collect();
        best_bias_margin(&proj, self.signs).0
    }
}

fn solve(z: &[Vec<f64>], signs: &[f64], opts: &MarginOptions) -> Result<Vec<f64>> {
    // scale to unit radius so solver tolerances are meaningful
    let s = z.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let zs: Vec<Vec<f64>> = z.iter().map(|v| v.iter().map(|x| x / s).collect()).collect();
    let inst = Instance { z: &zs, signs };
    if inst.r() == 1 {
        return Ok(if inst.value(&[1.0]) >= inst.value(&[-1.0]) {
            vec![1.0]
        } else {
            vec![-1.0]
        });
    }
    if separable(&inst)? {
        if let Some(w) = nearest_hull_points(&inst) {
            return Ok(w);
        }
    }
    let mut rng = opts.seed.rng();
    let r = inst.r();
    let mut starts = Vec::with_capacity(opts.restarts);
    let mut mean_diff = vec![0.0; r];
    let (np, nn) = (
        signs.iter().filter(|&&s| s > 0.0).count() as f64,
        signs.iter().filter(|&&s| s < 0.0).count() as f64,
    );
    for (v, &sg) in zs.iter().zip(signs) {
        let f = if sg > 0.0 { 1.0 / np } else { -1.0 / nn };
        mean_diff.iter_mut().zip(v).for_each(|(m, x)| *m += f * x);
    }
    starts.push(mean_diff);
    while starts.len() < opts.restarts {
        starts.push((0..r).map(|_| rng.sample(StandardNormal)).collect());
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in starts {
        let Some(w) = unit(&start) else { continue };
        let w = ascend(&inst, w, opts.max_steps)?;
        let v = inst.value(&w);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, w));
        }
    }
    best.map(|(_, w)| w)
        .ok_or_else(|| Error::Solver("no usable starting direction".into()))
}

fn unit(v: &[f64]) -> Option<Vec<f64>> {
    let n = norm(v);
    (n > 0.0 && n.is_finite()).then(|| v.iter().map(|x| x / n).collect())
}

/// Strict linear separability: `yᵢ(w·zᵢ + b) ≥ 1` feasible.
fn separable(inst: &Instance) -> Result<bool> {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let w: Vec<_> = (0..inst.r())
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let b = lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    for (z, &s) in inst.z.iter().zip(inst.signs) {
        let mut row: Vec<_> = w.iter().zip(z).filter(|(_, &zk)| zk != 0.0).map(|(&v, &zk)| (v, s * zk)).collect();
        row.push((b, s));
        lp.add_constraint(row.as_slice(), ComparisonOp::Ge, 1.0);
    }
    match lp.solve() {
        Ok(_) => Ok(true),
        Err(microlp::Error::Infeasible) => Ok(false),
        Err(e) => Err(Error::Solver(e.to_string())),
    }
}

/// MDM iteration for the closest points of the two convex hulls. Returns the
/// unit direction from the negative hull toward the positive one.
fn nearest_hull_points(inst: &Instance) -> Option<Vec<f64>> {
    let n = inst.z.len();
    let r = inst.r();
    let pos: Vec<usize> = (0..n).filter(|&i| inst.signs[i] > 0.0).collect();
    let neg: Vec<usize> = (0..n).filter(|&i| inst.signs[i] < 0.0).collect();
    let mut a = vec![0.0; n];
    let mut w = vec![0.0; r];
    for (set, sign) in [(&pos, 1.0), (&neg, -1.0)] {
        let share = 1.0 / set.len() as f64;
        for &i in set.iter() {
            a[i] = share;
            w.iter_mut().zip(&inst.z[i]).for_each(|(wk, zk)| *wk += sign * share * zk);
        }
    }
    let mut proj: Vec<f64> = inst.z.iter().map(|z| dot(&w, z)).collect();
    for _ in 0..200_000 {
        // mass moves toward the minimising object of the positive hull and the
        // maximising object of the negative one
        let lo_pos = *pos.iter().min_by(|&&i, &&j| proj[i].total_cmp(&proj[j]))?;
        let hi_pos = *pos.iter().filter(|&&i| a[i] > 0.0).max_by(|&&i, &&j| proj[i].total_cmp(&proj[j]))?;
        let hi_neg = *neg.iter().max_by(|&&i, &&j| proj[i].total_cmp(&proj[j]))?;
        let lo_neg = *neg.iter().filter(|&&i| a[i] > 0.0).min_by(|&&i, &&j| proj[i].total_cmp(&proj[j]))?;
        let ww = dot(&w, &w);
        let wn = ww.sqrt();
        let lower = (proj[lo_pos] - proj[hi_neg]) / wn;
        if wn - lower <= 1e-13 {
            break;
        }
        let gap_pos = proj[hi_pos] - proj[lo_pos];
        let gap_neg = proj[hi_neg] - proj[lo_neg];
        // w moves along d = z_to − z_from (positive) or z_from − z_to (negative)
        let (from, to, sign) = if gap_pos >= gap_neg {
            (hi_pos, lo_pos, 1.0)
        } else {
            (lo_neg, hi_neg, -1.0)
        };
        let d: Vec<f64> = inst.z[to].iter().zip(&inst.z[from]).map(|(t, f)| sign * (t - f)).collect();
        let dd = dot(&d, &d);
        if dd == 0.0 {
            break;
        }
        let t = (-dot(&w, &d) / dd).clamp(0.0, a[from]);
        if t == 0.0 {
            break;
        }
        a[from] -= t;
        a[to] += t;
        w.iter_mut().zip(&d).for_each(|(wk, dk)| *wk += t * dk);
        for (p, z) in proj.iter_mut().zip(inst.z) {
            *p += t * dot(&d, z);
        }
    }
    unit(&w)
}

fn ascend(inst: &Instance, mut w: Vec<f64>, max_steps: usize) -> Result<Vec<f64>> {
    let mut val = inst.value(&w);
    for _ in 0..max_steps {
        let Some(cand) = tangent_step(inst, &w)?.and_then(|c| unit(&c)) else {
            break;
        };
        let v = inst.value(&cand);
        if v > val + 1e-15 {
            w = cand;
            val = v;
        } else {
            break;
        }
    }
    if let Some(p) = polish(inst, &w) {
        if inst.value(&p) >= val {
            w = p;
        }
    }
    Ok(w)
}

/// `max t` subject to `yᵢ(w·zᵢ + b) ≥ t`, `w₀·w = 1`, `|w_k| ≤ 1e6`.
fn tangent_step(inst: &Instance, w0: &[f64]) -> Result<Option<Vec<f64>>> {
    const BOX: f64 = 1e6;
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let w: Vec<_> = (0..inst.r()).map(|_| lp.add_var(0.0, (-BOX, BOX))).collect();
    let b = lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    let t = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for (z, &s) in inst.z.iter().zip(inst.signs) {
        let mut row: Vec<_> = w.iter().zip(z).filter(|(_, &zk)| zk != 0.0).map(|(&v, &zk)| (v, s * zk)).collect();
        row.push((b, s));
        row.push((t, -1.0));
        lp.add_constraint(row.as_slice(), ComparisonOp::Ge, 0.0);
    }
    let plane: Vec<_> = w.iter().zip(w0).filter(|(_, &c)| c != 0.0).map(|(&v, &c)| (v, c)).collect();
    lp.add_constraint(plane.as_slice(), ComparisonOp::Eq, 1.0);
    match lp.solve() {
        Ok(sol) => Ok(Some(w.iter().map(|&v| *sol.var_value(v)).collect())),
        Err(microlp::Error::Infeasible | microlp::Error::Unbounded) => Ok(None),
        Err(e) => Err(Error::Solver(e.to_string())),
    }
}

/// Unit normal orthogonal to all differences within the active sets, when
/// those differences pin it down uniquely.
fn polish(inst: &Instance, w: &[f64]) -> Option<Vec<f64>> {
    const ACTIVE: f64 = 1e-9;
    let proj: Vec<f64> = inst.z.iter().map(|z| dot(w, z)).collect();
    let (m, b) = best_bias_margin(&proj, inst.signs);
    let (min_pos, max_neg) = (m - b, -m - b);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (anchor_val, sign) in [(min_pos, 1.0), (max_neg, -1.0)] {
        let active: Vec<usize> = (0..proj.len())
            .filter(|&i| inst.signs[i] == sign && (proj[i] - anchor_val).abs() <= ACTIVE)
            .collect();
        for &i in active.iter().skip(1) {
            rows.push(inst.z[i].iter().zip(&inst.z[active[0]]).map(|(a, b)| a - b).collect());
        }
    }
    let r = inst.r();
    if rows.len() + 1 < r {
        return None;
    }
    let d = DMatrix::from_fn(rows.len(), r, |i, j| rows[i][j]);
    let eig = (d.transpose() * &d).symmetric_eigen();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let top = eig.eigenvalues[order[r - 1]];
    // singular values: one near zero, the rest clearly not
    if !(top > 0.0 && eig.eigenvalues[order[0]] <= 1e-12 * top && eig.eigenvalues[order[1]] > 1e-8 * top) {
        return None;
    }
    let v: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    let v = unit(&v)?;
    Some(if dot(&v, w) < 0.0 { v.iter().map(|x| -x).collect() } else { v })
}

impl MarginModel {
    /// Input-space hyperplane, for the linear kernel.
    pub fn hyperplane(&self) -> Option<Hyperplane> {
        self.input_weights.as_ref().map(|w| Hyperplane {
            weights: w.clone(),
            bias: self.bias,
        })
    }
}

impl Classifier for MarginModel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn class_count(&self) -> usize {
        2
    }

    fn raw_score(&self, x: &[f64]) -> f64 {
        match &self.input_weights {
            Some(w) => dot(w, x) + self.bias,
            None => {
                self.dual_weights
                    .iter()
                    .zip(&self.points)
                    .map(|(a, p)| a * self.kernel.eval(p, x))
                    .sum::<f64>()
                    + self.bias
            }
        }
    }

    fn raw_boundary_point(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.hyperplane()?.project(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dist;

    fn one_d(pos: &[f64], neg: &[f64]) -> LabeledDataset {
        let rows: Vec<Vec<f64>> = pos.iter().chain(neg).map(|&v| vec![v]).collect();
        let signs: Vec<i32> = pos.iter().map(|_| 1).chain(neg.iter().map(|_| -1)).collect();
        LabeledDataset::from_signed(&rows, &signs).unwrap()
    }

    /// Brute force over both unit directions and a fine bias grid.
    fn grid_oracle_1d(data: &LabeledDataset) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for w in [1.0, -1.0] {
            for k in -20_000..=20_000 {
                let b = k as f64 * 5e-4;
                let m = (0..data.len())
                    .map(|i| data.signed_label(i) * (w * data.point(i)[0] + b))
                    .fold(f64::INFINITY, f64::min);
                best = best.max(m);
            }
        }
        best
    }

    #[test]
    fn symmetric_pair() {
        let m = train_negative_margin(&one_d(&[1.0], &[-1.0]), Kernel::Linear).unwrap();
        assert!((m.margin - 1.0).abs() < 1e-12);
        let w = m.input_weights.as_ref().unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && m.bias.abs() < 1e-12);
    }

    #[test]
    fn overlapping_1d_example() {
        let data = one_d(&[-0.5, 2.0], &[-2.0, 0.5]);
        let m = train_negative_margin(&data, Kernel::Linear).unwrap();
        assert!((m.margin + 0.5).abs() < 1e-12, "{}", m.margin);
        assert!(m.score(&[0.0]).unwrap().abs() < 1e-12);
        assert!((grid_oracle_1d(&data) - m.margin).abs() < 1e-3);
        assert_eq!(m.support_indices, vec![0, 3]);
    }

    /// Half the distance between two disjoint convex polygons: the minimum over
    /// every vertex of one set and every segment between vertices of the other.
    pub(crate) fn hull_margin_oracle(pos: &[[f64; 2]], neg: &[[f64; 2]]) -> f64 {
        fn seg_dist(p: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
            let d = [b[0] - a[0], b[1] - a[1]];
            let dd = d[0] * d[0] + d[1] * d[1];
            let t = if dd == 0.0 {
                0.0
            } else {
                (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / dd).clamp(0.0, 1.0)
            };
            dist(p, &[a[0] + t * d[0], a[1] + t * d[1]])
        }
        let mut best = f64::INFINITY;
        for (xs, ys) in [(pos, neg), (neg, pos)] {
            for p in xs {
                for a in ys {
                    for b in ys {
                        best = best.min(seg_dist(p, a, b));
                    }
                }
            }
        }
        0.5 * best
    }

    #[test]
    fn separable_2d_matches_hull_oracle() {
        let mut rng = RngSeed(12).rng();
        let mut done = 0;
        while done < 30 {
            let n = rng.gen_range(2..=10);
            let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
            let (a, c) = (rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(-0.3..0.3));
            let side = |p: &[f64; 2]| p[0] * a.cos() + p[1] * a.sin() + c;
            let pos: Vec<[f64; 2]> = pts.iter().copied().filter(|p| side(p) > 0.05).collect();
            let neg: Vec<[f64; 2]> = pts.iter().copied().filter(|p| side(p) < -0.05).collect();
            if pos.is_empty() || neg.is_empty() {
                continue;
            }
            let rows: Vec<Vec<f64>> = pos.iter().chain(&neg).map(|p| p.to_vec()).collect();
            let signs: Vec<i32> = pos.iter().map(|_| 1).chain(neg.iter().map(|_| -1)).collect();
            let data = LabeledDataset::from_signed(&rows, &signs).unwrap();
            let m = train_negative_margin(&data, Kernel::Linear).unwrap();
            let oracle = hull_margin_oracle(&pos, &neg);
            assert!((m.margin - oracle).abs() < 1e-6, "{} vs {}", m.margin, oracle);
            done += 1;
        }
    }

    #[test]
    fn overlapping_1d_random_against_grid() {
        let mut rng = RngSeed(13).rng();
        for _ in 0..15 {
            let pos: Vec<f64> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let neg: Vec<f64> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let data = one_d(&pos, &neg);
            let m = train_negative_margin(&data, Kernel::Linear).unwrap();
            assert!((m.margin - grid_oracle_1d(&data)).abs() < 1e-3);
        }
    }

    #[test]
    fn certificate_and_random_directions() {
        let mut rng = RngSeed(14).rng();
        let rows: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]).collect();
        let signs: Vec<i32> = rows.iter().map(|r| if r[0] + 0.3 * r[1] + rng.gen_range(-0.8..0.8) > 0.0 { 1 } else { -1 }).collect();
        let data = LabeledDataset::from_signed(&rows, &signs).unwrap();
        let m = train_negative_margin(&data, Kernel::Linear).unwrap();
        assert!(m.margin < 0.0);
        let min = (0..data.len())
            .map(|i| data.signed_label(i) * m.score(data.point(i)).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((min - m.margin).abs() <= 1e-9);
        for &i in &m.support_indices {
            let s = if m.labels[i] == 0 { 1.0 } else { -1.0 };
            assert!((s * m.raw_score(&m.points[i]) - m.margin).abs() <= 1e-6);
        }
        let sg: Vec<f64> = (0..data.len()).map(|i| data.signed_label(i)).collect();
        for k in 0..2000 {
            let t = k as f64 / 2000.0 * std::f64::consts::TAU;
            let proj: Vec<f64> = data.points().map(|p| t.cos() * p[0] + t.sin() * p[1]).collect();
            assert!(best_bias_margin(&proj, &sg).0 <= m.margin + 1e-9);
        }
    }

    #[test]
    fn poly3_separates_xor() {
        let data = LabeledDataset::from_signed(
            &[vec![1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0], vec![-1.0, 1.0]],
            &[1, 1, -1, -1],
        )
        .unwrap();
        let lin = train_negative_margin(&data, Kernel::Linear).unwrap();
        assert!(lin.margin <= 1e-12);
        let m = train_negative_margin(&data, Kernel::Poly3).unwrap();
        assert!(m.margin > 0.0);
        for i in 0..4 {
            assert_eq!(m.predict(data.point(i)).unwrap(), data.label(i));
        }
        assert!(m.analytic_boundary_distance(&[0.0, 0.0]).unwrap().is_none());
    }

    #[test]
    fn poly3_overlap_certificate() {
        let data = crate::data::generate_banana(25, 0.9, RngSeed(3)).unwrap();
        let m = train_negative_margin(&data, Kernel::Poly3).unwrap();
        let d = data.deduplicate();
        let min = (0..d.len())
            .map(|i| d.signed_label(i) * m.score(d.point(i)).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((min - m.margin).abs() <= 1e-9 * (1.0 + m.margin.abs()));
        assert!(!m.support_indices.is_empty());
    }

    #[test]
    fn identical_points_rejected() {
        let data = one_d(&[1.0, 1.0], &[1.0]);
        assert!(matches!(train_negative_margin(&data, Kernel::Linear), Err(Error::Degenerate(_))));
    }

    #[test]
    fn duplicates_do_not_move_the_boundary() {
        let data = one_d(&[-0.5, 2.0, 1.0], &[-2.0, 0.5, -1.0]);
        let base = train_negative_margin(&data, Kernel::Linear).unwrap();
        for i in 0..data.len() {
            assert_eq!(train_negative_margin(&data.with_copies(i, 10), Kernel::Linear).unwrap(), base);
        }
    }
}

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{dist, dot, sq_dist};
use crate::rng::RngSeed;

/// Ball given by center and radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnclosingBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl EnclosingBall {
    pub fn contains(&self, p: &[f64], rel_tol: f64) -> bool {
        dist(p, &self.center) <= self.radius * (1.0 + rel_tol) + f64::MIN_POSITIVE
    }
}

/// Dimension up to which the exact combinatorial algorithm is used.
const EXACT_MAX_DIM: usize = 3;
const ITERATIVE_TOL: f64 = 1e-9;
const ITERATIVE_MAX_ITER: usize = 200_000;

/// Smallest ball containing all points (the minimax center of the set).
///
/// Duplicates are dropped first, so replicated points leave the result
/// bit-identical. For dimension ≤ 3 the ball is exact (move-to-front Welzl
/// with a fixed shuffle); above that it is the pairwise-update solution of the
/// dual problem, converged to relative radius tolerance 1e-9.
pub fn min_enclosing_ball(points: &[&[f64]]) -> Result<EnclosingBall> {
    let pts = distinct(points)?;
    if pts[0].len() <= EXACT_MAX_DIM {
        Ok(welzl(pts))
    } else {
        Ok(iterative_ball(&pts, ITERATIVE_TOL, ITERATIVE_MAX_ITER))
    }
}

/// The iterative solver regardless of dimension.
pub fn min_enclosing_ball_iterative(points: &[&[f64]], tol: f64) -> Result<EnclosingBall> {
    let pts = distinct(points)?;
    Ok(iterative_ball(&pts, tol, ITERATIVE_MAX_ITER))
}

fn distinct(points: &[&[f64]]) -> Result<Vec<Vec<f64>>> {
    let first = points.first().ok_or_else(|| invalid("enclosing ball of an empty set"))?;
    let dim = first.len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(invalid("points must share a positive dimension"));
    }
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    let mut seen = std::collections::HashSet::with_capacity(points.len());
    for p in points {
        let key: Vec<u64> = p.iter().map(|&v| if v == 0.0 { 0 } else { v.to_bits() }).collect();
        if seen.insert(key) {
            out.push(p.to_vec());
        }
    }
    Ok(out)
}

fn welzl(mut pts: Vec<Vec<f64>>) -> EnclosingBall {
    let dim = pts[0].len();
    // fixed shuffle keeps the expected linear running time and determinism
    pts.shuffle(&mut RngSeed(0x5eed_ba11).rng());
    let mut support = Vec::with_capacity(dim + 1);
    let n = pts.len();
    let ball = move_to_front(&mut pts, n, &mut support, dim);
    // settle the radius on the full input so coverage holds to rounding
    let radius = pts.iter().map(|p| dist(p, &ball.center)).fold(0.0, f64::max);
    EnclosingBall {
        center: ball.center,
        radius,
    }
}

fn move_to_front(pts: &mut Vec<Vec<f64>>, end: usize, support: &mut Vec<Vec<f64>>, dim: usize) -> EnclosingBall {
    let mut ball = ball_on_boundary(support, dim);
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        if ball.radius < 0.0 || !ball.contains(&pts[i], 1e-12) {
            support.push(pts[i].clone());
            ball = move_to_front(pts, i, support, dim);
            support.pop();
            let p = pts.remove(i);
            pts.insert(0, p);
        }
    }
    ball
}

/// Smallest ball with all of `support` on its boundary (the circumball in the
/// affine hull). Radius −1 marks the empty ball.
fn ball_on_boundary(support: &[Vec<f64>], dim: usize) -> EnclosingBall {
    match support.len() {
        0 => EnclosingBall {
            center: vec![0.0; dim],
            radius: -1.0,
        },
        1 => EnclosingBall {
            center: support[0].clone(),
            radius: 0.0,
        },
        k => {
            let p0 = &support[0];
            let v: Vec<Vec<f64>> = support[1..]
                .iter()
                .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
                .collect();
            let m = k - 1;
            let gram = DMatrix::from_fn(m, m, |i, j| 2.0 * dot(&v[i], &v[j]));
            let rhs = DVector::from_fn(m, |i, _| dot(&v[i], &v[i]));
            let coef = gram.clone().lu().solve(&rhs).filter(|c| c.iter().all(|x| x.is_finite()));
            match coef {
                Some(c) => {
                    let mut center = p0.clone();
                    for (j, vj) in v.iter().enumerate() {
                        for (ck, vk) in center.iter_mut().zip(vj) {
                            *ck += c[j] * vk;
                        }
                    }
                    let radius = support.iter().map(|p| dist(p, &center)).fold(0.0, f64::max);
                    EnclosingBall { center, radius }
                }
                // affinely dependent support: fall back to the widest pair
                None => widest_pair_ball(support),
            }
        }
    }
}

fn widest_pair_ball(points: &[Vec<f64>]) -> EnclosingBall {
    let mut best = (0, 0, -1.0);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = sq_dist(&points[i], &points[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let center: Vec<f64> = points[best.0].iter().zip(&points[best.1]).map(|(a, b)| 0.5 * (a + b)).collect();
    let radius = points.iter().map(|p| dist(p, &center)).fold(0.0, f64::max);
    EnclosingBall { center, radius }
}

/// Pairwise (SMO-style) ascent on the dual
/// `max_λ Σ λ_i ‖x_i‖² − ‖Σ λ_i x_i‖²` over the simplex.
fn iterative_ball(pts: &[Vec<f64>], tol: f64, max_iter: usize) -> EnclosingBall {
    let n = pts.len();
    let dim = pts[0].len();
    if n == 1 {
        return EnclosingBall {
            center: pts[0].clone(),
            radius: 0.0,
        };
    }
    // work relative to the first point for conditioning
    let origin = pts[0].clone();
    let x: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect())
        .collect();
    let sq: Vec<f64> = x.iter().map(|p| dot(p, p)).collect();
    let mut lambda = vec![1.0 / n as f64; n];
    let mut center = vec![0.0; dim];
    for (l, p) in lambda.iter().zip(&x) {
        for (c, v) in center.iter_mut().zip(p) {
            *c += l * v;
        }
    }
    for iter in 0..max_iter {
        if iter % 512 == 511 {
            center.iter_mut().for_each(|c| *c = 0.0);
            for (l, p) in lambda.iter().zip(&x) {
                for (c, v) in center.iter_mut().zip(p) {
                    *c += l * v;
                }
            }
        }
        // gradient of the dual: ‖x_i − c‖² up to a constant
        let g: Vec<f64> = (0..n).map(|i| sq[i] - 2.0 * dot(&x[i], &center)).collect();
        let up = (0..n).max_by(|&a, &b| g[a].total_cmp(&g[b])).expect("n > 0");
        let down = (0..n)
            .filter(|&i| lambda[i] > 0.0)
            .min_by(|&a, &b| g[a].total_cmp(&g[b]))
            .expect("simplex has support");
        let c2 = dot(&center, &center);
        let primal = g[up] + c2;
        let dual: f64 = (0..n).map(|i| lambda[i] * g[i]).sum::<f64>() + c2;
        if primal - dual <= 2.0 * tol * primal.max(f64::MIN_POSITIVE) || up == down {
            break;
        }
        let d2 = sq_dist(&x[up], &x[down]);
        let step = ((g[up] - g[down]) / (2.0 * d2)).min(lambda[down]);
        if step <= 0.0 {
            break;
        }
        lambda[down] -= step;
        lambda[up] += step;
        for k in 0..dim {
            center[k] += step * (x[up][k] - x[down][k]);
        }
    }
    let center: Vec<f64> = center.iter().zip(&origin).map(|(c, o)| c + o).collect();
    let radius = pts.iter().map(|p| dist(p, &center)).fold(0.0, f64::max);
    EnclosingBall { center, radius }
}

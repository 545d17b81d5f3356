//! Stochastic estimate of each test object's distance to the decision
//! boundary.
//!
//! 1. Draw Gaussian probes around every test object.
//! 2. Label test objects and probes with the model.
//! 3. For each test object, take the `k` nearest probes labelled differently.
//! 4. Add interpolated points between those candidates and between the
//!    object's nearest same-label probes and the candidates; keep the ones
//!    labelled differently from the object.
//! 5. Bisect each segment from the object to a candidate down to the
//!    tolerance.
//! 6. Keep the nearest boundary point found.
//! 7. Sign the distance by whether the model labels the object correctly.
//! 8. The report's `e_s` is the minimum signed distance.
//!
//! Probes of test object `i` come from a stream derived from the seed and
//! `i`, so results do not depend on thread scheduling.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{eta_criterion, EvalReport, ObjectDistance, ProbeConfig};
use crate::classifiers::Classifier;
use crate::data::LabeledDataset;
use crate::error::{invalid, Result};
use crate::linalg::{dist, sq_dist};

pub fn boundary_signed_distances<M: Classifier + Sync + ?Sized>(
    model: &M,
    test: &LabeledDataset,
    config: &ProbeConfig,
) -> Result<EvalReport> {
    config.validate()?;
    test.require_two_class()?;
    if test.is_empty() {
        return Err(invalid("empty test set"));
    }
    model.check_input(test.point(0))?;
    let m = test.dim();
    let n = test.len();
    let diameter = test.diameter();
    let tolerance = config.bisection_tolerance * if diameter > 0.0 { diameter } else { 1.0 };
    let sigma = config.neighborhood_scale * spread_unit(test);

    let predicted: Vec<usize> = (0..n).into_par_iter().map(|i| model.raw_predict(test.point(i))).collect();
    let probes: Vec<(Vec<f64>, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = config.seed.derive_index("probe", i as u64).rng();
            let center = test.point(i);
            (0..config.probes_per_test_object)
                .map(|_| {
                    let p: Vec<f64> = center
                        .iter()
                        .map(|c| c + sigma * rng.sample::<f64, _>(StandardNormal))
                        .collect();
                    let label = model.raw_predict(&p);
                    (p, label)
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let objects: Vec<ObjectDistance> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = test.point(i);
            let own = predicted[i];
            let opposite = nearest(&probes, x, config.k_opposite, |l| l != own);
            let correct = own == test.label(i);
            if opposite.is_empty() {
                return ObjectDistance {
                    true_label: test.label(i),
                    predicted: own,
                    signed_distance: f64::INFINITY,
                    boundary_point: None,
                };
            }
            let same = nearest(&probes, x, config.k_opposite, |l| l == own);
            let mut candidates: Vec<Vec<f64>> = opposite.iter().map(|&j| probes[j].0.clone()).collect();
            let steps = config.interpolation_count;
            let mut interpolate = |a: &[f64], b: &[f64]| {
                for s in 1..=steps {
                    let t = s as f64 / (steps + 1) as f64;
                    let p: Vec<f64> = a.iter().zip(b).map(|(u, v)| u + t * (v - u)).collect();
                    if model.raw_predict(&p) != own {
                        candidates.push(p);
                    }
                }
            };
            for (a, &ja) in opposite.iter().enumerate() {
                for &jb in &opposite[a + 1..] {
                    interpolate(&probes[ja].0, &probes[jb].0);
                }
                for &js in &same {
                    interpolate(&probes[js].0, &probes[ja].0);
                }
            }
            let mut best: Option<(f64, Vec<f64>)> = None;
            for c in &candidates {
                let (d, point) = bisect(model, x, c, own, tolerance);
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, point));
                }
            }
            let (d, point) = best.expect("at least one candidate");
            ObjectDistance {
                true_label: test.label(i),
                predicted: own,
                signed_distance: if correct { d } else { -d },
                boundary_point: Some(point),
            }
        })
        .collect();

    let e_s = objects.iter().map(|o| o.signed_distance).fold(f64::INFINITY, f64::min);
    let eta = eta_criterion(model, test).ok();
    debug_assert!(objects.iter().all(|o| o.boundary_point.as_ref().is_none_or(|p| p.len() == m)));
    Ok(EvalReport {
        objects,
        e_s,
        eta,
        d_max: None,
        tolerance,
    })
}

/// Median nearest-neighbor distance within the test set, falling back to a
/// hundredth of the diameter (or 1) when most objects coincide.
fn spread_unit(test: &LabeledDataset) -> f64 {
    let n = test.len();
    let mut nn: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| sq_dist(test.point(i), test.point(j)))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .filter(|d| d.is_finite())
        .collect();
    nn.sort_by(f64::total_cmp);
    let median = if nn.is_empty() {
        0.0
    } else if nn.len() % 2 == 1 {
        nn[nn.len() / 2]
    } else {
        0.5 * (nn[nn.len() / 2 - 1] + nn[nn.len() / 2])
    };
    if median > 0.0 {
        return median;
    }
    let d = test.diameter();
    if d > 0.0 {
        0.01 * d
    } else {
        1.0
    }
}

/// Indices of the `k` probes nearest to `x` whose label passes `keep`,
/// nearest first; ties resolved by index.
fn nearest(probes: &[(Vec<f64>, usize)], x: &[f64], k: usize, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut top: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
    for (j, (p, l)) in probes.iter().enumerate() {
        if !keep(*l) {
            continue;
        }
        let d = sq_dist(p, x);
        if top.len() == k && d >= top[k - 1].0 {
            continue;
        }
        let pos = top.partition_point(|&(td, _)| td <= d);
        top.insert(pos, (d, j));
        top.truncate(k);
    }
    top.into_iter().map(|(_, j)| j).collect()
}

/// Bisects the segment from `x` (labelled `own`) to `c` (labelled otherwise)
/// until the bracket is at most `tol` long; returns the distance from `x` to
/// the bracket midpoint and the midpoint.
fn bisect<M: Classifier + ?Sized>(model: &M, x: &[f64], c: &[f64], own: usize, tol: f64) -> (f64, Vec<f64>) {
    let len = dist(x, c);
    let at = |s: f64| -> Vec<f64> { x.iter().zip(c).map(|(a, b)| a + s / len * (b - a)).collect() };
    let (mut lo, mut hi) = (0.0, len);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if model.raw_predict(&at(mid)) == own {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, at(mid))
}

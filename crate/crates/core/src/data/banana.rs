use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::LabeledDataset;
use crate::error::{invalid, Result};
use crate::rng::RngSeed;

/// Two interleaved half-circle arcs with isotropic Gaussian noise.
///
/// Class 0 follows `(r cos t, r sin t)`, class 1 the same arc rotated by 180°
/// and shifted to `(r - r cos t, r/2 - r sin t)`, with `t ~ U(0, π)`. At the
/// default noise about 2-3% of each class falls on the other arc's side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BananaParams {
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_noise")]
    pub noise_scale: f64,
}

fn default_radius() -> f64 {
    5.0
}

fn default_noise() -> f64 {
    0.9
}

impl Default for BananaParams {
    fn default() -> Self {
        Self {
            radius: default_radius(),
            noise_scale: default_noise(),
        }
    }
}

/// `n_per_class` objects per class at the default radius.
pub fn generate_banana(n_per_class: usize, noise_scale: f64, seed: RngSeed) -> Result<LabeledDataset> {
    generate_banana_with(
        n_per_class,
        BananaParams {
            noise_scale,
            ..BananaParams::default()
        },
        seed,
    )
}

pub fn generate_banana_with(n_per_class: usize, params: BananaParams, seed: RngSeed) -> Result<LabeledDataset> {
    if n_per_class == 0 {
        return Err(invalid("n_per_class must be positive"));
    }
    if !(params.noise_scale > 0.0 && params.noise_scale.is_finite()) {
        return Err(invalid("noise_scale must be positive"));
    }
    if !(params.radius > 0.0 && params.radius.is_finite()) {
        return Err(invalid("radius must be positive"));
    }
    let r = params.radius;
    let noise = Normal::new(0.0, params.noise_scale).expect("validated scale");
    let mut rng = seed.rng();
    let mut points = Vec::with_capacity(4 * n_per_class);
    let mut labels = Vec::with_capacity(2 * n_per_class);
    for class in 0..2 {
        for _ in 0..n_per_class {
            let t = rng.gen_range(0.0..PI);
            let (x, y) = if class == 0 {
                (r * t.cos(), r * t.sin())
            } else {
                (r - r * t.cos(), 0.5 * r - r * t.sin())
            };
            points.push(x + noise.sample(&mut rng));
            points.push(y + noise.sample(&mut rng));
            labels.push(class);
        }
    }
    LabeledDataset::new(points, 2, labels, 2)
}

//! Synthetic textures standing in for seabed imagettes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::texture::Imagette;

/// Texture recipe for one class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TextureGenerator {
    /// Gaussian noise smoothed with a Gaussian kernel of width `corr`
    /// (pixels), rescaled to standard deviation `sd` around `mean`.
    Noise { mean: f64, sd: f64, corr: f64 },
    /// Large smooth patches of `contrast` amplitude (width `blob_corr`) over
    /// fine noise.
    Blobs {
        mean: f64,
        sd: f64,
        corr: f64,
        contrast: f64,
        blob_corr: f64,
    },
    /// Sinusoid of `amplitude` and `period` pixels along `orientation`
    /// degrees (0 = varies along columns), random phase, plus noise.
    Ripple {
        mean: f64,
        amplitude: f64,
        period: f64,
        orientation: f64,
        noise_sd: f64,
        noise_corr: f64,
    },
}

impl TextureGenerator {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            TextureGenerator::Noise { sd, corr, .. } => sd >= 0.0 && corr >= 0.0,
            TextureGenerator::Blobs {
                sd,
                corr,
                contrast,
                blob_corr,
                ..
            } => sd >= 0.0 && corr >= 0.0 && contrast >= 0.0 && blob_corr >= 0.0,
            TextureGenerator::Ripple {
                amplitude,
                period,
                noise_sd,
                noise_corr,
                ..
            } => amplitude >= 0.0 && period > 0.0 && noise_sd >= 0.0 && noise_corr >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid texture generator {self:?}")))
        }
    }

    /// Gray levels of a `side`×`side` tile, row-major.
    pub fn render(&self, side: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
        let values: Vec<f64> = match *self {
            TextureGenerator::Noise { mean, sd, corr } => smooth_noise(side, corr, rng)
                .into_iter()
                .map(|z| mean + sd * z)
                .collect(),
            TextureGenerator::Blobs {
                mean,
                sd,
                corr,
                contrast,
                blob_corr,
            } => {
                let blobs = smooth_noise(side, blob_corr, rng);
                let fine = smooth_noise(side, corr, rng);
                blobs
                    .iter()
                    .zip(&fine)
                    .map(|(b, f)| mean + contrast * (2.0 * b).tanh() + sd * f)
                    .collect()
            }
            TextureGenerator::Ripple {
                mean,
                amplitude,
                period,
                orientation,
                noise_sd,
                noise_corr,
            } => {
                let phase = rng.random::<f64>() * std::f64::consts::TAU;
                let (s, c) = orientation.to_radians().sin_cos();
                let noise = if noise_sd > 0.0 {
                    smooth_noise(side, noise_corr, rng)
                } else {
                    vec![0.0; side * side]
                };
                (0..side * side)
                    .map(|k| {
                        let (row, col) = ((k / side) as f64, (k % side) as f64);
                        let t = (col * c + row * s) / period;
                        mean + amplitude * (std::f64::consts::TAU * t + phase).sin() + noise_sd * noise[k]
                    })
                    .collect()
            }
        };
        values
            .into_iter()
            .map(|v| v.round().clamp(0.0, 255.0) as u8)
            .collect()
    }
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let k: Vec<f64> = (-radius..=radius)
        .map(|x| (-(x * x) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.into_iter().map(|v| v / sum).collect()
}

/// Unit-variance stationary Gaussian field: white noise blurred by a
/// separable Gaussian kernel, divided by the kernel's energy.
fn smooth_noise(side: usize, sigma: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let k = gaussian_kernel(sigma);
    let r = k.len() / 2;
    let big = side + 2 * r;
    let white: Vec<f64> = (0..big * big).map(|_| rng.sample(StandardNormal)).collect();
    // horizontal pass keeps all rows, vertical pass crops to the tile
    let mut h = vec![0.0; big * side];
    for row in 0..big {
        for col in 0..side {
            h[row * side + col] = k
                .iter()
                .enumerate()
                .map(|(t, w)| w * white[row * big + col + t])
                .sum();
        }
    }
    let energy: f64 = k.iter().map(|w| w * w).sum();
    let norm = 1.0 / energy;
    let mut out = vec![0.0; side * side];
    for row in 0..side {
        for col in 0..side {
            let v: f64 = k
                .iter()
                .enumerate()
                .map(|(t, w)| w * h[(row + t) * side + col])
                .sum();
            out[row * side + col] = v * norm;
        }
    }
    out
}

/// Independent generator for one imagette. Streams are distinct per
/// (split, class, index) so imagettes can be rendered in any order.
pub fn imagette_rng(seed: u64, split: u8, class: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((split as u64) << 56) | ((class as u64) << 40) | index as u64);
    rng
}

/// Left half from `left`, right half from `right`.
pub fn split_halves(left: &[u8], right: &[u8], side: usize) -> Vec<u8> {
    (0..side * side)
        .map(|k| if k % side < side / 2 { left[k] } else { right[k] })
        .collect()
}

/// One batch of imagettes to draw.
#[derive(Clone, Debug)]
pub struct Batch<'a> {
    pub split: u8,
    pub prefix: &'a str,
    pub class: usize,
    pub label: String,
    pub count: usize,
    pub left: &'a TextureGenerator,
    /// Second texture of a heterogeneous batch.
    pub right: Option<&'a TextureGenerator>,
}

/// Renders a batch in parallel; output order follows the index.
pub fn render_batch(seed: u64, side: usize, batch: &Batch<'_>) -> Result<Vec<Imagette>> {
    let tag = batch.label.replace('+', "-");
    (0..batch.count)
        .into_par_iter()
        .map(|k| {
            let mut rng = imagette_rng(seed, batch.split, batch.class, k);
            let left = batch.left.render(side, &mut rng);
            let pixels = match batch.right {
                Some(g) => split_halves(&left, &g.render(side, &mut rng), side),
                None => left,
            };
            Imagette::new(
                format!("{}-{tag}-{k:05}", batch.prefix),
                Some(batch.label.clone()),
                side,
                pixels,
            )
        })
        .collect()
}

//! Built-in one-vs-one linear discriminant, a stand-in for an external margin
//! classifier.
//!
//! Features are z-scored with the training mean and deviation. For the pair
//! `(i, j)` the score is `w · x + b` where `w_d` is the class-mean difference
//! divided by the pooled within-pair variance of dimension `d`, and `b` puts
//! zero at the midpoint of the two class means. Positive scores favor `i`.

use serde::{Deserialize, Serialize};

use super::{pairs, PairwiseScoreSet};
use crate::error::{Error, Result};
use crate::lattice::Frame;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDiscriminant {
    pub i: usize,
    pub j: usize,
    pub w: Vec<f64>,
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearScorer {
    pub frame: Vec<String>,
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
    pub pairs: Vec<PairDiscriminant>,
}

fn mean_var(rows: &[&[f64]], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let n = rows.len() as f64;
    let mut mean = vec![0.0; dim];
    for r in rows {
        for (m, v) in mean.iter_mut().zip(r.iter()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; dim];
    for r in rows {
        for d in 0..dim {
            var[d] += (r[d] - mean[d]).powi(2);
        }
    }
    let denom = (n - 1.0).max(1.0);
    var.iter_mut().for_each(|v| *v /= denom);
    (mean, var)
}

/// Fits one discriminant per class pair from labeled feature vectors
/// (`labels[k]` is the class index of `samples[k]`).
pub fn fit_builtin_scorer(frame: &Frame, samples: &[Vec<f64>], labels: &[usize]) -> Result<LinearScorer> {
    if samples.len() != labels.len() || samples.is_empty() {
        return Err(Error::Config("samples and labels must be nonempty and aligned".into()));
    }
    let dim = samples[0].len();
    if dim == 0 || samples.iter().any(|s| s.len() != dim || s.iter().any(|v| !v.is_finite())) {
        return Err(Error::Config("feature vectors must share a nonzero dimension and be finite".into()));
    }
    let n = frame.len();
    if let Some(&bad) = labels.iter().find(|&&c| c >= n) {
        return Err(Error::IndexOutOfRange { index: bad, n });
    }

    let all: Vec<&[f64]> = samples.iter().map(Vec::as_slice).collect();
    let (mean, var) = mean_var(&all, dim);
    let scale: Vec<f64> = var
        .iter()
        .map(|v| if *v > 0.0 { v.sqrt() } else { 1.0 })
        .collect();
    let z: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| (0..dim).map(|d| (s[d] - mean[d]) / scale[d]).collect())
        .collect();

    let mut stats = Vec::with_capacity(n);
    for c in 0..n {
        let rows: Vec<&[f64]> = z
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == c)
            .map(|(r, _)| r.as_slice())
            .collect();
        if rows.len() < 2 {
            return Err(Error::DegenerateClass(format!(
                "{} has {} training observations, need at least 2",
                frame.label(c),
                rows.len()
            )));
        }
        let (m, v) = mean_var(&rows, dim);
        if v.iter().all(|&x| x == 0.0) {
            return Err(Error::DegenerateClass(format!(
                "{} has zero variance in every dimension",
                frame.label(c)
            )));
        }
        stats.push((rows.len() as f64, m, v));
    }

    let pairs = pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let (ni, mi, vi) = &stats[i];
            let (nj, mj, vj) = &stats[j];
            let w: Vec<f64> = (0..dim)
                .map(|d| {
                    let pooled = ((ni - 1.0) * vi[d] + (nj - 1.0) * vj[d]) / (ni + nj - 2.0);
                    if pooled > 0.0 {
                        (mi[d] - mj[d]) / pooled
                    } else {
                        0.0
                    }
                })
                .collect();
            let b = -(0..dim).map(|d| w[d] * (mi[d] + mj[d]) / 2.0).sum::<f64>();
            PairDiscriminant { i, j, w, b }
        })
        .collect();

    Ok(LinearScorer {
        frame: frame.labels().to_vec(),
        mean,
        scale,
        pairs,
    })
}

impl LinearScorer {
    pub fn frame(&self) -> Result<Frame> {
        Frame::new(self.frame.iter().cloned())
    }

    pub fn score(&self, x: &[f64]) -> Result<PairwiseScoreSet> {
        if x.len() != self.mean.len() {
            return Err(Error::Config(format!(
                "feature dimension {} does not match the scorer's {}",
                x.len(),
                self.mean.len()
            )));
        }
        let z: Vec<f64> = (0..x.len())
            .map(|d| (x[d] - self.mean[d]) / self.scale[d])
            .collect();
        let scores = self
            .pairs
            .iter()
            .map(|p| p.w.iter().zip(&z).map(|(w, v)| w * v).sum::<f64>() + p.b)
            .collect();
        PairwiseScoreSet::new(self.frame()?, scores)
    }
}

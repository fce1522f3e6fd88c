use serde::{Deserialize, Serialize};

use crate::belief::MassFunction;
use crate::error::{Error, Result};
use crate::lattice::{Element, Frame};

pub const DEFAULT_ALPHA: f64 = 0.95;

/// Which form of the exponential score-to-mass model to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchVariant {
    /// As printed: for `f >= 0`, `m(Ci) = a(1 - e^{-f/lp})`, `m(Cj) = a e^{-f/lp}`;
    /// for `f < 0`, `m(Ci) = a e^{-f/ln}`, `m(Cj) = a(1 - e^{-f/ln})`.
    /// Jumps at `f = 0`.
    #[default]
    Verbatim,
    /// The two sub-expressions of the negative branch exchanged, which makes
    /// the masses continuous at `f = 0`. `m(Ci)` then grows with `|f|` on
    /// both sides, so the sign of the score no longer picks the class.
    Swapped,
}

/// Divisor used when averaging the positive and negative score parts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaDivisor {
    /// Sum of each signed part divided by the number of training scores.
    #[default]
    AllSamples,
    /// Sum of each signed part divided by the count of scores of that sign.
    PerSign,
}

/// `(lambda_p, lambda_n)` from the training scores of one binary classifier.
/// Zero scores belong to the positive side.
pub fn fit_lambdas(scores: &[f64], divisor: LambdaDivisor) -> Result<(f64, f64)> {
    if scores.iter().any(|f| !f.is_finite()) {
        return Err(Error::InvalidParams("non-finite training score".into()));
    }
    let (mut pos, mut neg) = (0.0, 0.0);
    let (mut n_pos, mut n_neg) = (0usize, 0usize);
    for &f in scores {
        if f >= 0.0 {
            pos += f;
            n_pos += 1;
        } else {
            neg += f;
            n_neg += 1;
        }
    }
    if pos <= 0.0 || n_neg == 0 {
        return Err(Error::OneSidedScores { i: 0, j: 0 });
    }
    Ok(match divisor {
        LambdaDivisor::AllSamples => {
            let l = scores.len() as f64;
            (pos / l, neg / l)
        }
        LambdaDivisor::PerSign => (pos / n_pos as f64, neg / n_neg as f64),
    })
}

/// Parameters of the binary classifier between classes `i < j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    pub i: usize,
    pub j: usize,
    pub lambda_p: f64,
    pub lambda_n: f64,
    /// Overrides the shared discount factor for this pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Number of training scores the lambdas were fitted on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
}

impl PairParams {
    /// `(m(Ci), m(Cj), m(Theta))` for a score `f`.
    pub fn masses(&self, f: f64, alpha: f64, variant: BranchVariant) -> (f64, f64, f64) {
        let (mi, mj) = if f >= 0.0 {
            let e = (-f / self.lambda_p).exp();
            (alpha * (1.0 - e), alpha * e)
        } else {
            let e = (-f / self.lambda_n).exp();
            match variant {
                BranchVariant::Verbatim => (alpha * e, alpha * (1.0 - e)),
                BranchVariant::Swapped => (alpha * (1.0 - e), alpha * e),
            }
        };
        (mi, mj, 1.0 - alpha)
    }
}

/// Mass model for every pair of a frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassModelParams {
    pub alpha: f64,
    #[serde(default)]
    pub variant: BranchVariant,
    pub pairs: Vec<PairParams>,
}

impl MassModelParams {
    pub fn pair(&self, i: usize, j: usize) -> Option<&PairParams> {
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }

    pub fn alpha_for(&self, p: &PairParams) -> f64 {
        p.alpha.unwrap_or(self.alpha)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let check_alpha = |a: f64| {
            if a > 0.0 && a <= 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("alpha {a} outside (0, 1]")))
            }
        };
        check_alpha(self.alpha)?;
        for p in &self.pairs {
            if p.i >= p.j || p.j >= n {
                return Err(Error::InvalidParams(format!(
                    "pair ({}, {}) invalid for {n} classes",
                    p.i, p.j
                )));
            }
            if !(p.lambda_p > 0.0 && p.lambda_p.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "lambda_p {} must be positive",
                    p.lambda_p
                )));
            }
            if !(p.lambda_n < 0.0 && p.lambda_n.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "lambda_n {} must be negative",
                    p.lambda_n
                )));
            }
            if let Some(a) = p.alpha {
                check_alpha(a)?;
            }
        }
        for (i, j) in super::pairs(n) {
            if self.pair(i, j).is_none() {
                return Err(Error::InvalidParams(format!("missing pair ({i}, {j})")));
            }
        }
        Ok(())
    }
}

/// Mass function produced by the binary classifier of a pair for score `f`,
/// in either algebra.
pub fn pairwise_mass<E: Element>(
    frame: &Frame,
    params: &MassModelParams,
    pair: &PairParams,
    f: f64,
) -> Result<MassFunction<E>> {
    if f.is_nan() {
        return Err(Error::InvalidParams("NaN score".into()));
    }
    let n = frame.len();
    let (mi, mj, mt) = pair.masses(f, params.alpha_for(pair), params.variant);
    let singles = E::singletons(n);
    MassFunction::new(
        frame.clone(),
        [(singles[pair.i], mi), (singles[pair.j], mj), (E::full(n), mt)],
    )
}

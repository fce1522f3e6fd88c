//! One-vs-one classifier scores to mass functions, and their fusion.

mod mass_model;
mod scorer;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::belief::{conjunctive_combine_hyper, dempster, AnyMass, MassFunction};
use crate::error::{Error, Result};
use crate::io::real17;
use crate::lattice::{Algebra, Element, Frame, HyperElement, PowerElement};

pub use mass_model::{
    fit_lambdas, pairwise_mass, BranchVariant, LambdaDivisor, MassModelParams, PairParams,
    DEFAULT_ALPHA,
};
pub use scorer::{fit_builtin_scorer, LinearScorer, PairDiscriminant};

/// Class pairs `(i, j)` with `i < j`, in lexicographic order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // pairs before row i, then offset within the row
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Scores of every binary classifier on one observation.
/// `f_ij > 0` favors class `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairwiseScoreSet {
    frame: Frame,
    scores: Vec<f64>,
}

impl PairwiseScoreSet {
    /// Scores in [`pairs`] order.
    pub fn new(frame: Frame, scores: Vec<f64>) -> Result<Self> {
        let n = frame.len();
        let want = n * (n - 1) / 2;
        if scores.len() != want {
            return Err(Error::IncompleteScores(format!(
                "expected {want} pair scores, got {}",
                scores.len()
            )));
        }
        if scores.iter().any(|f| f.is_nan()) {
            return Err(Error::InvalidParams("NaN score".into()));
        }
        Ok(PairwiseScoreSet { frame, scores })
    }

    pub fn from_map(frame: Frame, map: &BTreeMap<(usize, usize), f64>) -> Result<Self> {
        let n = frame.len();
        if let Some(&(i, j)) = map.keys().find(|(i, j)| i >= j || *j >= n) {
            return Err(Error::IncompleteScores(format!("pair ({i}, {j}) is not valid")));
        }
        let scores = pairs(n)
            .into_iter()
            .map(|(i, j)| {
                map.get(&(i, j))
                    .copied()
                    .ok_or_else(|| Error::IncompleteScores(format!("missing pair ({i}, {j})")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, scores)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < j && j < self.frame.len(), "pair ({i}, {j}) out of range");
        self.scores[pair_index(self.frame.len(), i, j)]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        pairs(self.frame.len()).into_iter().zip(self.scores.iter().copied())
    }
}

/// Fits `lambda_p`, `lambda_n` for every pair. Each pair is fitted on the
/// training observations whose true class is one of its two classes.
pub fn fit_params(
    training: &[(PairwiseScoreSet, usize)],
    alpha: f64,
    divisor: LambdaDivisor,
) -> Result<MassModelParams> {
    let frame = match training.first() {
        Some((s, _)) => s.frame().clone(),
        None => return Err(Error::Config("no training scores".into())),
    };
    for (s, c) in training {
        frame.check_same(s.frame())?;
        if *c >= frame.len() {
            return Err(Error::IndexOutOfRange { index: *c, n: frame.len() });
        }
    }
    let pairs = pairs(frame.len())
        .into_iter()
        .map(|(i, j)| {
            let scores: Vec<f64> = training
                .iter()
                .filter(|(_, c)| *c == i || *c == j)
                .map(|(s, _)| s.get(i, j))
                .collect();
            let (lambda_p, lambda_n) = fit_lambdas(&scores, divisor).map_err(|e| match e {
                Error::OneSidedScores { .. } => Error::OneSidedScores { i, j },
                e => e,
            })?;
            Ok(PairParams {
                i,
                j,
                lambda_p,
                lambda_n,
                alpha: None,
                l: Some(scores.len()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let params = MassModelParams {
        alpha,
        variant: BranchVariant::Verbatim,
        pairs,
    };
    params.validate(frame.len())?;
    Ok(params)
}

fn pairwise_masses<E: Element>(
    scores: &PairwiseScoreSet,
    params: &MassModelParams,
) -> Result<Vec<MassFunction<E>>> {
    let frame = scores.frame();
    params.validate(frame.len())?;
    scores
        .iter()
        .map(|((i, j), f)| {
            let p = params.pair(i, j).expect("validated");
            pairwise_mass(frame, params, p, f)
        })
        .collect()
}

/// Normalized conjunctive combination of the pairwise masses on the power set.
pub fn fuse_power(
    scores: &PairwiseScoreSet,
    params: &MassModelParams,
) -> Result<MassFunction<PowerElement>> {
    dempster(&pairwise_masses(scores, params)?)
}

/// Conjunctive combination of the pairwise masses in the free hyper-power set.
pub fn fuse_hyper(
    scores: &PairwiseScoreSet,
    params: &MassModelParams,
) -> Result<MassFunction<HyperElement>> {
    conjunctive_combine_hyper(&pairwise_masses(scores, params)?)
}

pub fn fuse_observation(
    scores: &PairwiseScoreSet,
    params: &MassModelParams,
    algebra: Algebra,
) -> Result<AnyMass> {
    Ok(match algebra {
        Algebra::Power => AnyMass::Power(fuse_power(scores, params)?),
        Algebra::Hyper => AnyMass::Hyper(fuse_hyper(scores, params)?),
    })
}

#[derive(Serialize, Deserialize)]
struct ScoreRow {
    obs_id: String,
    i: usize,
    j: usize,
    f: String,
}

/// Writes `obs_id,i,j,f`, one row per pair.
pub fn write_scores_csv(path: &Path, rows: &[(String, PairwiseScoreSet)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (id, set) in rows {
        for ((i, j), f) in set.iter() {
            w.serialize(ScoreRow {
                obs_id: id.clone(),
                i,
                j,
                f: real17(f),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a score CSV, grouping rows by `obs_id` in order of first appearance.
pub fn read_scores_csv(path: &Path, frame: &Frame) -> Result<Vec<(String, PairwiseScoreSet)>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut order: Vec<String> = Vec::new();
    let mut maps: BTreeMap<String, BTreeMap<(usize, usize), f64>> = BTreeMap::new();
    for row in r.deserialize() {
        let row: ScoreRow = row?;
        let f: f64 = row
            .f
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad score {:?}", row.f)))?;
        let map = maps.entry(row.obs_id.clone()).or_insert_with(|| {
            order.push(row.obs_id.clone());
            BTreeMap::new()
        });
        if map.insert((row.i, row.j), f).is_some() {
            return Err(Error::IncompleteScores(format!(
                "duplicate pair ({}, {}) for {}",
                row.i, row.j, row.obs_id
            )));
        }
    }
    order
        .into_iter()
        .map(|id| {
            let set = PairwiseScoreSet::from_map(frame.clone(), &maps[&id])
                .map_err(|e| Error::IncompleteScores(format!("{id}: {e}")))?;
            Ok((id, set))
        })
        .collect()
}

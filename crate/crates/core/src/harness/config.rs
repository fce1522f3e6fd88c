use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::generate::TextureGenerator;
use crate::decision::{DecisionConfig, DecisionFunction, DecisionRule, TwoStepOrder};
use crate::error::{Error, Result};
use crate::fusion::{BranchVariant, LambdaDivisor, DEFAULT_ALPHA};
use crate::lattice::{Frame, SpecificityWindow};
use crate::texture::{DEFAULT_DISTANCE, DEFAULT_LEVELS, DEFAULT_SIDE};

/// Source of the D^Θ mass used by the hyper-power decisions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HyperFusion {
    /// Conjunctive combination of the pairwise masses in D^Θ, keeping
    /// intersections.
    Conjunctive,
    /// The normalized power-set combination, embedded in D^Θ. Its focal
    /// elements are singletons and Θ, so the cardinality-4 decision
    /// coincides with maximum credibility with reject.
    #[default]
    Embedded,
}

/// Everything a run depends on. Missing fields take the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Learned classes.
    pub frame: Vec<String>,
    /// Classes only present at test time.
    pub unlearned: Vec<String>,
    /// Two-texture test imagettes, left half then right half.
    pub hetero_pairs: Vec<(String, String)>,
    pub generators: BTreeMap<String, TextureGenerator>,
    pub seed: u64,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub hetero_per_pair: usize,
    pub side: usize,
    pub q: usize,
    pub distance: usize,
    pub alpha: f64,
    pub lambda_divisor: LambdaDivisor,
    pub variant: BranchVariant,
    /// How the D^Θ mass of a test imagette is obtained.
    pub hyper_fusion: HyperFusion,
    /// Rule, exponent, window and decision function of the `decide` stage.
    pub rule: DecisionRule,
    pub r: f64,
    pub window: Option<SpecificityWindow>,
    pub decision_function: DecisionFunction,
    pub two_step_order: TwoStepOrder,
}

fn noise(mean: f64, sd: f64, corr: f64) -> TextureGenerator {
    TextureGenerator::Noise { mean, sd, corr }
}

impl Default for RunConfig {
    fn default() -> Self {
        let generators = BTreeMap::from([
            (
                "rock".to_string(),
                TextureGenerator::Blobs {
                    mean: 120.0,
                    sd: 12.0,
                    corr: 0.7,
                    contrast: 50.0,
                    blob_corr: 3.0,
                },
            ),
            ("sand".to_string(), noise(130.0, 24.0, 0.9)),
            ("silt".to_string(), noise(120.0, 20.0, 1.1)),
            (
                "ride".to_string(),
                TextureGenerator::Ripple {
                    mean: 130.0,
                    amplitude: 20.0,
                    period: 6.0,
                    orientation: 45.0,
                    noise_sd: 25.0,
                    noise_corr: 2.0,
                },
            ),
        ]);
        let pair = |a: &str, b: &str| (a.to_string(), b.to_string());
        RunConfig {
            frame: vec!["rock".into(), "sand".into(), "silt".into()],
            unlearned: vec!["ride".into()],
            hetero_pairs: vec![
                pair("rock", "sand"),
                pair("sand", "silt"),
                pair("silt", "ride"),
                pair("sand", "ride"),
            ],
            generators,
            seed: 1,
            train_per_class: 200,
            test_per_class: 100,
            hetero_per_pair: 100,
            side: DEFAULT_SIDE,
            q: DEFAULT_LEVELS,
            distance: DEFAULT_DISTANCE,
            alpha: DEFAULT_ALPHA,
            lambda_divisor: LambdaDivisor::AllSamples,
            variant: BranchVariant::Verbatim,
            hyper_fusion: HyperFusion::Embedded,
            rule: DecisionRule::TwoStep,
            r: 0.5,
            window: None,
            decision_function: DecisionFunction::Plausibility,
            two_step_order: TwoStepOrder::RejectFirst,
        }
    }
}

impl RunConfig {
    pub fn frame(&self) -> Result<Frame> {
        Frame::new(self.frame.iter().cloned())
    }

    pub fn decision_config(&self) -> DecisionConfig {
        DecisionConfig {
            r: self.r,
            window: self.window,
            decision_function: self.decision_function,
            two_step_order: self.two_step_order,
            ..Default::default()
        }
    }

    /// Row labels of the homogeneous test set: learned then unlearned classes.
    pub fn homogeneous_groups(&self) -> Vec<String> {
        self.frame.iter().chain(&self.unlearned).cloned().collect()
    }

    pub fn hetero_groups(&self) -> Vec<String> {
        self.hetero_pairs
            .iter()
            .map(|(a, b)| hetero_label(a, b))
            .collect()
    }

    pub fn generator(&self, class: &str) -> Result<&TextureGenerator> {
        self.generators
            .get(class)
            .ok_or_else(|| Error::Config(format!("no generator for class `{class}`")))
    }

    pub fn validate(&self) -> Result<()> {
        let frame = self.frame()?;
        for u in &self.unlearned {
            if frame.index_of(u).is_some() {
                return Err(Error::Config(format!("`{u}` is both learned and unlearned")));
            }
            if u.contains('+') {
                return Err(Error::Config(format!("class name `{u}` may not contain `+`")));
            }
        }
        if let Some(l) = self.frame.iter().find(|l| l.contains('+')) {
            return Err(Error::Config(format!("class name `{l}` may not contain `+`")));
        }
        for class in self.homogeneous_groups() {
            self.generator(&class)?.validate()?;
        }
        for (a, b) in &self.hetero_pairs {
            self.generator(a)?;
            self.generator(b)?;
        }
        if self.train_per_class < 2 {
            return Err(Error::Config("train_per_class must be at least 2".into()));
        }
        if self.side < 2 || self.side > 4096 {
            return Err(Error::Config(format!("side {} outside 2..=4096", self.side)));
        }
        if !matches!(self.q, 4 | 8 | 16 | 32) {
            return Err(Error::InvalidLevels(self.q));
        }
        if self.distance == 0 || self.distance >= self.side {
            return Err(Error::InvalidDistance {
                distance: self.distance,
                side: self.side,
            });
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!("alpha {} outside (0, 1]", self.alpha)));
        }
        self.decision_config().validate()?;
        if let Some(w) = &self.window {
            w.check_frame(frame.len())?;
        }
        Ok(())
    }
}

pub fn hetero_label(a: &str, b: &str) -> String {
    format!("{a}+{b}")
}

use rayon::prelude::*;

use super::config::{hetero_label, HyperFusion, RunConfig};
use super::generate::{render_batch, Batch};
use super::report::ConfusionReport;
use crate::belief::MassFunction;
use crate::decision::{
    decide_cardinality4_with_reject_mapping, decide_hyper_weighted, decide_maxbel_reject,
    decide_pignistic_singletons, decide_two_step, pairwise_intersections_union, DecisionConfig,
    DecisionFunction, Verdict,
};
use crate::error::{Error, Result};
use crate::fusion::{fit_builtin_scorer, fit_params, fuse_hyper, fuse_power, LinearScorer, MassModelParams, PairwiseScoreSet};
use crate::lattice::{elements_in_window, Element, Frame, HyperElement, PowerElement, SpecificityWindow};
use crate::texture::{extract_features, FeatureRow, Imagette};

pub const SPLIT_TRAIN: u8 = 0;
pub const SPLIT_TEST: u8 = 1;
pub const SPLIT_HETERO: u8 = 2;

/// Exponent of the union table.
pub const UNION_TABLE_R: f64 = 0.5;
/// Exponent and window of the weighted-credibility table.
pub const WINDOW_TABLE_R: f64 = 0.7;
pub const WINDOW_TABLE_RANGE: (usize, usize) = (2, 6);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    /// Homogeneous imagettes of the learned classes.
    pub train: Vec<Imagette>,
    /// Homogeneous imagettes of every class, then two-texture imagettes.
    pub test: Vec<Imagette>,
}

pub fn generate(cfg: &RunConfig) -> Result<Dataset> {
    cfg.validate()?;
    let mut train = Vec::new();
    for (c, label) in cfg.frame.iter().enumerate() {
        train.extend(render_batch(
            cfg.seed,
            cfg.side,
            &Batch {
                split: SPLIT_TRAIN,
                prefix: "train",
                class: c,
                label: label.clone(),
                count: cfg.train_per_class,
                left: cfg.generator(label)?,
                right: None,
            },
        )?);
    }
    let mut test = Vec::new();
    for (c, label) in cfg.homogeneous_groups().iter().enumerate() {
        test.extend(render_batch(
            cfg.seed,
            cfg.side,
            &Batch {
                split: SPLIT_TEST,
                prefix: "test",
                class: c,
                label: label.clone(),
                count: cfg.test_per_class,
                left: cfg.generator(label)?,
                right: None,
            },
        )?);
    }
    for (p, (a, b)) in cfg.hetero_pairs.iter().enumerate() {
        test.extend(render_batch(
            cfg.seed,
            cfg.side,
            &Batch {
                split: SPLIT_HETERO,
                prefix: "test",
                class: p,
                label: hetero_label(a, b),
                count: cfg.hetero_per_pair,
                left: cfg.generator(a)?,
                right: Some(cfg.generator(b)?),
            },
        )?);
    }
    Ok(Dataset { train, test })
}

pub fn extract_all(images: &[Imagette], q: usize, distance: usize) -> Result<Vec<FeatureRow>> {
    images
        .par_iter()
        .map(|img| {
            Ok(FeatureRow {
                id: img.id.clone(),
                label: img.label.clone(),
                features: extract_features(img, q, distance)?,
            })
        })
        .collect()
}

/// Scorer and mass model fitted on the training features.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedModel {
    pub scorer: LinearScorer,
    pub params: MassModelParams,
}

fn class_index(frame: &Frame, row: &FeatureRow) -> Result<usize> {
    let label = row
        .label
        .as_deref()
        .ok_or_else(|| Error::Config(format!("training row {} has no label", row.id)))?;
    frame
        .index_of(label)
        .ok_or_else(|| Error::UnknownLabel {
            label: label.to_string(),
            pos: 0,
        })
}

pub fn fit_model(cfg: &RunConfig, train: &[FeatureRow]) -> Result<FittedModel> {
    let frame = cfg.frame()?;
    let labels = train
        .iter()
        .map(|r| class_index(&frame, r))
        .collect::<Result<Vec<_>>>()?;
    let samples: Vec<Vec<f64>> = train.iter().map(|r| r.features.to_array().to_vec()).collect();
    let scorer = fit_builtin_scorer(&frame, &samples, &labels)?;
    let scored = score_rows(&scorer, train)?;
    let training: Vec<(PairwiseScoreSet, usize)> = scored
        .into_iter()
        .zip(labels)
        .map(|((_, s), c)| (s, c))
        .collect();
    let mut params = fit_params(&training, cfg.alpha, cfg.lambda_divisor)?;
    params.variant = cfg.variant;
    Ok(FittedModel { scorer, params })
}

pub fn score_rows(scorer: &LinearScorer, rows: &[FeatureRow]) -> Result<Vec<(String, PairwiseScoreSet)>> {
    rows.par_iter()
        .map(|r| Ok((r.id.clone(), scorer.score(&r.features.to_array())?)))
        .collect()
}

/// Both fused masses of one test imagette.
#[derive(Clone, Debug, PartialEq)]
pub struct FusedObservation {
    pub id: String,
    pub group: String,
    pub power: MassFunction<PowerElement>,
    pub hyper: MassFunction<HyperElement>,
}

/// Fuses scored observations; `groups[k]` is the true group of `scores[k]`.
pub fn fuse_all(
    scores: &[(String, PairwiseScoreSet)],
    groups: &[String],
    params: &MassModelParams,
    hyper_fusion: HyperFusion,
) -> Result<Vec<FusedObservation>> {
    if scores.len() != groups.len() {
        return Err(Error::Config("scores and groups are not aligned".into()));
    }
    scores
        .par_iter()
        .zip(groups)
        .map(|((id, s), g)| {
            let power = fuse_power(s, params)?;
            let hyper = match hyper_fusion {
                HyperFusion::Conjunctive => fuse_hyper(s, params)?,
                HyperFusion::Embedded => power.embed()?,
            };
            Ok(FusedObservation {
                id: id.clone(),
                group: g.clone(),
                power,
                hyper,
            })
        })
        .collect()
}

/// How often the cardinality-4 decision and the reject rule coincide.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Agreement {
    pub agreeing: usize,
    pub total: usize,
    pub homogeneous: (usize, usize),
    pub heterogeneous: (usize, usize),
}

impl Agreement {
    pub fn rate(&self) -> f64 {
        ratio(self.agreeing, self.total)
    }
}

pub fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub reports: Vec<ConfusionReport>,
    pub agreement: Agreement,
}

impl Experiment {
    pub fn report(&self, name: &str) -> Option<&ConfusionReport> {
        self.reports.iter().find(|r| r.name == name)
    }
}

struct Verdicts {
    pignistic: String,
    reject: String,
    two_step: String,
    cardinality4: String,
    agrees: bool,
    gpt2: String,
    gpt2_reject: String,
    window: String,
}

fn verdicts(o: &FusedObservation, union_cfg: &DecisionConfig, gpt2: &DecisionConfig, window: &DecisionConfig) -> Result<Verdicts> {
    let frame = o.power.frame();
    let reject = decide_maxbel_reject(&o.power)?;
    let card4 = decide_cardinality4_with_reject_mapping(&o.hyper, &o.power)?;
    let g2 = decide_hyper_weighted(&o.hyper, gpt2)?.verdict.format(frame);
    Ok(Verdicts {
        pignistic: decide_pignistic_singletons(&o.power)?.verdict.format(frame),
        two_step: decide_two_step(&o.power, union_cfg)?.verdict.format(frame),
        cardinality4: card4.hyper.verdict.format(frame),
        agrees: card4.agrees,
        gpt2_reject: if reject.verdict == Verdict::Reject {
            "REJECT".to_string()
        } else {
            g2.clone()
        },
        reject: reject.verdict.format(frame),
        gpt2: g2,
        window: decide_hyper_weighted(&o.hyper, window)?.verdict.format(frame),
    })
}

fn names<E: Element>(frame: &Frame, xs: &[E]) -> Vec<String> {
    xs.iter().map(|x| x.format(frame)).collect()
}

fn with_reject(mut cols: Vec<String>) -> Vec<String> {
    cols.push("REJECT".to_string());
    cols
}

/// Decides every observation with the table rules and tallies the tables.
/// Homogeneous groups fill the first four reports, two-texture groups the
/// rest.
pub fn run_experiment(cfg: &RunConfig, obs: &[FusedObservation]) -> Result<Experiment> {
    let frame = cfg.frame()?;
    if frame.len() != 3 {
        return Err(Error::Config(format!(
            "the experiment tables need 3 learned classes, got {}",
            frame.len()
        )));
    }
    let homog = cfg.homogeneous_groups();
    let hetero = cfg.hetero_groups();

    let union_cfg = DecisionConfig::new(UNION_TABLE_R, DecisionFunction::Plausibility);
    let gpt2_cfg = DecisionConfig::new(1.0, DecisionFunction::Pignistic).with_window(SpecificityWindow::new(2, 2)?);
    let (lo, hi) = WINDOW_TABLE_RANGE;
    let window = SpecificityWindow::new(lo, hi)?;
    let window_cfg = DecisionConfig::new(WINDOW_TABLE_R, DecisionFunction::Credibility).with_window(window);

    let singles = names(&frame, &PowerElement::singletons(3));
    let i2 = pairwise_intersections_union(3)?.format(&frame);
    let mut card4_cols = singles.clone();
    card4_cols.push(i2);
    let gpt2_cols = names(&frame, &elements_in_window(&frame, &SpecificityWindow::new(2, 2)?)?);
    let window_cols = names(&frame, &elements_in_window(&frame, &window)?);

    let mut reports = vec![
        ConfusionReport::new("table1_pignistic", "Pignistic decision on the singletons", singles.clone(), &homog),
        ConfusionReport::new("table1_reject", "Maximum credibility with reject", with_reject(singles.clone()), &homog),
        ConfusionReport::new(
            "table2_unions",
            "Reject, then weighted plausibility over 2^Θ (r = 0.5)",
            with_reject(names(&frame, &frame.power_elements())),
            &homog,
        ),
        ConfusionReport::new("table3_cardinality4", "Pignistic decision on the cardinality-4 elements of D^Θ", card4_cols.clone(), &homog),
        ConfusionReport::new(
            "table4_cardinality4_hetero",
            "Two-texture imagettes: pignistic decision on the cardinality-4 elements of D^Θ",
            card4_cols,
            &hetero,
        ),
        ConfusionReport::new(
            "table5_intersections",
            "Two-texture imagettes: pignistic decision on the cardinality-2 elements of D^Θ",
            gpt2_cols.clone(),
            &hetero,
        ),
        ConfusionReport::new(
            "table5_intersections_reject",
            "Two-texture imagettes: reject, then pignistic decision on the cardinality-2 elements of D^Θ",
            with_reject(gpt2_cols),
            &hetero,
        ),
        ConfusionReport::new(
            "table6_window",
            "Two-texture imagettes: weighted credibility on D^Θ, cardinality 2 to 6 (r = 0.7)",
            window_cols,
            &hetero,
        ),
    ];

    let decided = obs
        .par_iter()
        .map(|o| verdicts(o, &union_cfg, &gpt2_cfg, &window_cfg))
        .collect::<Result<Vec<_>>>()?;

    let mut agreement = Agreement {
        agreeing: 0,
        total: 0,
        homogeneous: (0, 0),
        heterogeneous: (0, 0),
    };
    for (o, v) in obs.iter().zip(&decided) {
        let is_homog = homog.contains(&o.group);
        if !is_homog && !hetero.contains(&o.group) {
            return Err(Error::Config(format!("{}: unknown group `{}`", o.id, o.group)));
        }
        agreement.total += 1;
        agreement.agreeing += v.agrees as usize;
        let part = if is_homog {
            &mut agreement.homogeneous
        } else {
            &mut agreement.heterogeneous
        };
        part.0 += v.agrees as usize;
        part.1 += 1;
        let outcomes: [&str; 4] = if is_homog {
            [&v.pignistic, &v.reject, &v.two_step, &v.cardinality4]
        } else {
            [&v.cardinality4, &v.gpt2, &v.gpt2_reject, &v.window]
        };
        let offset = if is_homog { 0 } else { 4 };
        for (k, out) in outcomes.iter().enumerate() {
            reports[offset + k].add(&o.group, out)?;
        }
    }
    Ok(Experiment { reports, agreement })
}

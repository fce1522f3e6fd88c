//! Synthetic experiment driver. Each stage reads the previous stage's files
//! from an output directory and writes its own, so a run can be resumed or
//! fed external scores at any point.

mod config;
mod experiment;
mod generate;
mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::{AnyMass, MassDoc, MassFunction};
use crate::decision::DecisionReport;
use crate::error::{Error, Result};
use crate::fusion::{read_scores_csv, write_scores_csv, LinearScorer, MassModelParams};
use crate::io::{read_json, write_json, Real17};
use crate::lattice::cardinality_histogram;
use crate::texture::{read_features_csv, write_features_csv, FeatureRow, Imagette};

pub use config::{hetero_label, HyperFusion, RunConfig};
pub use experiment::{
    extract_all, fit_model, fuse_all, generate, ratio, run_experiment, score_rows, Agreement,
    Dataset, Experiment, FittedModel, FusedObservation, SPLIT_HETERO, SPLIT_TEST, SPLIT_TRAIN,
    UNION_TABLE_R, WINDOW_TABLE_R, WINDOW_TABLE_RANGE,
};
pub use generate::{imagette_rng, render_batch, split_halves, Batch, TextureGenerator};
pub use report::ConfusionReport;

/// File names inside the output directory.
pub mod layout {
    pub const CONFIG: &str = "config.json";
    pub const MANIFEST: &str = "manifest.csv";
    pub const IMAGES: &str = "images";
    pub const FEATURES_TRAIN: &str = "features_train.csv";
    pub const FEATURES_TEST: &str = "features_test.csv";
    pub const SCORER: &str = "scorer.json";
    pub const PARAMS: &str = "params.json";
    pub const SCORES_TEST: &str = "scores_test.csv";
    pub const MASSES: &str = "masses.json";
    pub const DECISIONS: &str = "decisions.json";
    pub const REPORTS: &str = "reports";
    pub const SUMMARY: &str = "summary.json";
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct ManifestRow {
    id: String,
    split: String,
    label: String,
    path: String,
}

fn write_manifest(path: &Path, rows: &[ManifestRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn read_manifest(path: &Path) -> Result<Vec<ManifestRow>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| Ok(row?)).collect()
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

/// Writes the dataset as PGM files plus a manifest.
pub fn stage_gen(cfg: &RunConfig, out: &Path) -> Result<Dataset> {
    let data = generate(cfg)?;
    let images = out.join(layout::IMAGES);
    create_dir(&images)?;
    write_json(&out.join(layout::CONFIG), cfg)?;
    let mut rows = Vec::new();
    for (split, set) in [("train", &data.train), ("test", &data.test)] {
        set.par_iter()
            .map(|img| img.write_pgm(&images.join(format!("{}.pgm", img.id))))
            .collect::<Result<()>>()?;
        rows.extend(set.iter().map(|img| ManifestRow {
            id: img.id.clone(),
            split: split.to_string(),
            label: img.label.clone().unwrap_or_default(),
            path: format!("{}/{}.pgm", layout::IMAGES, img.id),
        }));
    }
    write_manifest(&out.join(layout::MANIFEST), &rows)?;
    Ok(data)
}

/// Texture features of every manifest entry, split into train and test files.
pub fn stage_features(cfg: &RunConfig, out: &Path) -> Result<()> {
    let rows = read_manifest(&out.join(layout::MANIFEST))?;
    let images = rows
        .par_iter()
        .map(|r| {
            let label = (!r.label.is_empty()).then(|| r.label.clone());
            Imagette::read_pgm(&out.join(&r.path), r.id.clone(), label)
        })
        .collect::<Result<Vec<_>>>()?;
    let feats = extract_all(&images, cfg.q, cfg.distance)?;
    let (train, test): (Vec<_>, Vec<_>) = rows
        .iter()
        .zip(feats)
        .partition(|(r, _)| r.split == "train");
    let strip = |v: Vec<(&ManifestRow, FeatureRow)>| v.into_iter().map(|(_, f)| f).collect::<Vec<_>>();
    write_features_csv(&out.join(layout::FEATURES_TRAIN), &strip(train))?;
    write_features_csv(&out.join(layout::FEATURES_TEST), &strip(test))?;
    Ok(())
}

/// Fits the scorer and the mass model on the training features.
pub fn stage_fit(cfg: &RunConfig, out: &Path) -> Result<FittedModel> {
    let train = read_features_csv(&out.join(layout::FEATURES_TRAIN))?;
    let model = fit_model(cfg, &train)?;
    write_json(&out.join(layout::SCORER), &model.scorer)?;
    write_json(&out.join(layout::PARAMS), &model.params)?;
    Ok(model)
}

pub fn stage_score(out: &Path) -> Result<()> {
    let scorer: LinearScorer = read_json(&out.join(layout::SCORER))?;
    let test = read_features_csv(&out.join(layout::FEATURES_TEST))?;
    write_scores_csv(&out.join(layout::SCORES_TEST), &score_rows(&scorer, &test)?)
}

/// One fused test imagette on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassRecord {
    pub id: String,
    pub label: String,
    pub power: MassDoc,
    pub hyper: MassDoc,
}

impl MassRecord {
    pub fn from_observation(o: &FusedObservation) -> Self {
        MassRecord {
            id: o.id.clone(),
            label: o.group.clone(),
            power: o.power.to_doc(),
            hyper: o.hyper.to_doc(),
        }
    }

    pub fn to_observation(&self) -> Result<FusedObservation> {
        Ok(FusedObservation {
            id: self.id.clone(),
            group: self.label.clone(),
            power: MassFunction::from_doc(&self.power)?,
            hyper: MassFunction::from_doc(&self.hyper)?,
        })
    }
}

/// Fuses the test scores with the fitted parameters. Labels come from the
/// test features file.
pub fn stage_fuse(cfg: &RunConfig, out: &Path, scores: Option<&Path>, params: Option<&Path>) -> Result<Vec<FusedObservation>> {
    let frame = cfg.frame()?;
    let scores_path = scores.map_or_else(|| out.join(layout::SCORES_TEST), Path::to_path_buf);
    let params_path = params.map_or_else(|| out.join(layout::PARAMS), Path::to_path_buf);
    let params: MassModelParams = read_json(&params_path)?;
    let scores = read_scores_csv(&scores_path, &frame)?;
    let labels = test_labels(out)?;
    let groups = scores
        .iter()
        .map(|(id, _)| {
            labels
                .get(id)
                .cloned()
                .ok_or_else(|| Error::Config(format!("no label for observation {id}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let fused = fuse_all(&scores, &groups, &params, cfg.hyper_fusion)?;
    let records: Vec<MassRecord> = fused.iter().map(MassRecord::from_observation).collect();
    write_json(&out.join(layout::MASSES), &records)?;
    Ok(fused)
}

fn test_labels(out: &Path) -> Result<BTreeMap<String, String>> {
    Ok(read_features_csv(&out.join(layout::FEATURES_TEST))?
        .into_iter()
        .map(|r| (r.id, r.label.unwrap_or_default()))
        .collect())
}

fn read_masses(out: &Path) -> Result<Vec<FusedObservation>> {
    let records: Vec<MassRecord> = read_json(&out.join(layout::MASSES))?;
    records.par_iter().map(MassRecord::to_observation).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub id: String,
    pub label: String,
    pub decision: DecisionReport,
}

/// Applies the configured rule to every fused test imagette.
pub fn stage_decide(cfg: &RunConfig, out: &Path) -> Result<Vec<DecisionRecord>> {
    let obs = read_masses(out)?;
    let dc = cfg.decision_config();
    dc.validate()?;
    let records = obs
        .par_iter()
        .map(|o| {
            Ok(DecisionRecord {
                id: o.id.clone(),
                label: o.group.clone(),
                decision: cfg.rule.apply(Some(&o.power), Some(&o.hyper), &dc)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    write_json(&out.join(layout::DECISIONS), &records)?;
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub seed: u64,
    pub observations: usize,
    /// Share of test imagettes on which the cardinality-4 decision, with the
    /// union of pairwise intersections read as a reject, matches maximum
    /// credibility with reject.
    pub agreement_rate: Real17,
    pub agreement_homogeneous: Real17,
    pub agreement_heterogeneous: Real17,
    pub reports: Vec<String>,
}

/// Tallies the tables from the fused masses and writes them as CSV and text.
pub fn stage_report(cfg: &RunConfig, out: &Path) -> Result<(Experiment, Summary)> {
    let obs = read_masses(out)?;
    let exp = run_experiment(cfg, &obs)?;
    let dir = out.join(layout::REPORTS);
    create_dir(&dir)?;
    for r in &exp.reports {
        r.write_csv(&dir.join(format!("{}.csv", r.name)))?;
        fs::write(dir.join(format!("{}.txt", r.name)), r.to_text())?;
    }
    let a = &exp.agreement;
    let summary = Summary {
        seed: cfg.seed,
        observations: obs.len(),
        agreement_rate: Real17(a.rate()),
        agreement_homogeneous: Real17(ratio(a.homogeneous.0, a.homogeneous.1)),
        agreement_heterogeneous: Real17(ratio(a.heterogeneous.0, a.heterogeneous.1)),
        reports: exp.reports.iter().map(|r| r.name.clone()).collect(),
    };
    write_json(&out.join(layout::SUMMARY), &summary)?;
    Ok((exp, summary))
}

/// Every stage in order.
pub fn run_pipeline(cfg: &RunConfig, out: &Path) -> Result<(Experiment, Summary)> {
    cfg.validate()?;
    create_dir(out)?;
    stage_gen(cfg, out)?;
    stage_features(cfg, out)?;
    stage_fit(cfg, out)?;
    stage_score(out)?;
    stage_fuse(cfg, out, None, None)?;
    stage_decide(cfg, out)?;
    stage_report(cfg, out)
}

/// `cardinality,count` for every DSm cardinality of an `n`-class frame.
pub fn write_lattice_stats(n: usize, path: &Path) -> Result<Vec<usize>> {
    let hist = cardinality_histogram(n)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["cardinality", "count"])?;
    for (c, count) in hist.iter().enumerate() {
        w.write_record([(c + 1).to_string(), count.to_string()])?;
    }
    w.flush()?;
    Ok(hist)
}

/// Output path for a stage: an explicit one, or the standard name in `out`.
pub fn resolve(out: &Path, explicit: Option<&Path>, name: &str) -> PathBuf {
    explicit.map_or_else(|| out.join(name), Path::to_path_buf)
}

/// Reads a mass document of either algebra.
pub fn read_mass(path: &Path) -> Result<AnyMass> {
    AnyMass::from_doc(&read_json::<MassDoc>(path)?)
}

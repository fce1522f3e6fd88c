//! Decision rules: maximum of credibility with reject, cardinality-weighted
//! decision on the power set, the two-step reject-then-weighted strategy, and
//! weighted / windowed decision on the hyper-power set.
//!
//! Ties are broken deterministically: among scores within [`TIE_EPS`] of the
//! maximum, the candidate with the larger cardinality wins, then the one whose
//! canonical string sorts first.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::belief::MassFunction;
use crate::error::{Error, Result};
use crate::io::Real17;
use crate::lattice::{
    elements_in_window, enumerate_hyper, Element, Frame, HyperElement, PowerElement,
    SpecificityWindow,
};

/// Scores closer than this to the maximum count as ties.
pub const TIE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionFunction {
    Credibility,
    #[default]
    Plausibility,
    Pignistic,
}

/// Order of the two steps of [`decide_two_step`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoStepOrder {
    /// Reject with the credibility test, then weighted decision.
    #[default]
    RejectFirst,
    /// Weighted decision, then the credibility test on imprecise verdicts.
    UnionsFirst,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecisionConfig {
    /// Specificity exponent in `[0, 1]`.
    pub r: f64,
    /// Per-element weights keyed by canonical element string; 1 when absent.
    pub lambda: BTreeMap<String, f64>,
    pub decision_function: DecisionFunction,
    pub window: Option<SpecificityWindow>,
    pub two_step_order: TwoStepOrder,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig {
            r: 0.5,
            lambda: BTreeMap::new(),
            decision_function: DecisionFunction::Plausibility,
            window: None,
            two_step_order: TwoStepOrder::RejectFirst,
        }
    }
}

impl DecisionConfig {
    pub fn new(r: f64, decision_function: DecisionFunction) -> Self {
        DecisionConfig {
            r,
            decision_function,
            ..Default::default()
        }
    }

    pub fn with_window(mut self, window: SpecificityWindow) -> Self {
        self.window = Some(window);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r) {
            return Err(Error::InvalidDecisionConfig(format!(
                "r = {} outside [0, 1]",
                self.r
            )));
        }
        if let Some((k, v)) = self.lambda.iter().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidDecisionConfig(format!(
                "lambda for `{k}` must be positive, got {v}"
            )));
        }
        Ok(())
    }

    fn weight<E: Element>(&self, frame: &Frame, x: &E) -> f64 {
        let lambda = if self.lambda.is_empty() {
            1.0
        } else {
            self.lambda.get(&x.format(frame)).copied().unwrap_or(1.0)
        };
        lambda / f64::from(x.cardinality()).powf(self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict<E> {
    Element(E),
    Reject,
}

impl<E: Element> Verdict<E> {
    pub fn element(&self) -> Option<&E> {
        match self {
            Verdict::Element(x) => Some(x),
            Verdict::Reject => None,
        }
    }

    pub fn format(&self, frame: &Frame) -> String {
        match self {
            Verdict::Element(x) => x.format(frame),
            Verdict::Reject => "REJECT".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionOutcome<E> {
    pub verdict: Verdict<E>,
    /// Score of every candidate, in candidate order.
    pub scores: Vec<(E, f64)>,
    /// `K_d`, the factor normalizing the weights over the candidates, when
    /// the rule is weighted. Scores do not include it.
    pub normalization: Option<f64>,
}

/// JSON form of an outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub verdict: String,
    pub scores: BTreeMap<String, Real17>,
    pub rule: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<SpecificityWindow>,
}

impl<E: Element> DecisionOutcome<E> {
    pub fn to_report(
        &self,
        frame: &Frame,
        rule: &str,
        r: Option<f64>,
        window: Option<SpecificityWindow>,
    ) -> DecisionReport {
        DecisionReport {
            verdict: self.verdict.format(frame),
            scores: self
                .scores
                .iter()
                .map(|(x, s)| (x.format(frame), Real17(*s)))
                .collect(),
            rule: rule.to_string(),
            r,
            window,
        }
    }
}

/// Applies the tie rule to scored candidates.
pub fn select_best<E: Element>(frame: &Frame, scored: &[(E, f64)]) -> Option<E> {
    let max = scored
        .iter()
        .map(|&(_, s)| s)
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return None;
    }
    let near: Vec<E> = scored
        .iter()
        .filter(|&&(_, s)| s >= max - TIE_EPS)
        .map(|&(x, _)| x)
        .collect();
    let top_card = near.iter().map(|x| x.cardinality()).max()?;
    let mut tied = near.into_iter().filter(|x| x.cardinality() == top_card);
    let first = tied.next()?;
    Some(tied.fold((first, first.format(frame)), |(best, best_s), x| {
        let s = x.format(frame);
        if s < best_s {
            (x, s)
        } else {
            (best, best_s)
        }
    })
    .0)
}

/// Algebra-specific pignistic transform.
pub trait Pignistic: Element {
    fn pignistic(m: &MassFunction<Self>, x: &Self) -> Result<f64>;
}

impl Pignistic for PowerElement {
    fn pignistic(m: &MassFunction<Self>, x: &Self) -> Result<f64> {
        m.betp(x)
    }
}

impl Pignistic for HyperElement {
    fn pignistic(m: &MassFunction<Self>, x: &Self) -> Result<f64> {
        Ok(m.gpt(x))
    }
}

fn decision_value<E: Pignistic>(m: &MassFunction<E>, f: DecisionFunction, x: &E) -> Result<f64> {
    Ok(match f {
        DecisionFunction::Credibility => m.bel(x),
        DecisionFunction::Plausibility => m.pl(x),
        DecisionFunction::Pignistic => E::pignistic(m, x)?,
    })
}

fn require_normal_power(m: &MassFunction<PowerElement>) -> Result<()> {
    let empty = m.empty_mass();
    if empty > 0.0 {
        return Err(Error::MassOnEmpty(empty));
    }
    Ok(())
}

fn argmax_unweighted<E: Pignistic>(
    m: &MassFunction<E>,
    f: DecisionFunction,
    candidates: Vec<E>,
) -> Result<DecisionOutcome<E>> {
    let scores = candidates
        .into_iter()
        .map(|x| Ok((x, decision_value(m, f, &x)?)))
        .collect::<Result<Vec<_>>>()?;
    let best = select_best(m.frame(), &scores).ok_or(Error::EmptyCandidates)?;
    Ok(DecisionOutcome {
        verdict: Verdict::Element(best),
        scores,
        normalization: None,
    })
}

fn argmax_weighted<E: Pignistic>(
    m: &MassFunction<E>,
    cfg: &DecisionConfig,
    candidates: Vec<E>,
) -> Result<DecisionOutcome<E>> {
    cfg.validate()?;
    let frame = m.frame();
    let mut weight_sum = 0.0;
    let scores = candidates
        .into_iter()
        .map(|x| {
            let w = cfg.weight(frame, &x);
            weight_sum += w;
            Ok((x, w * decision_value(m, cfg.decision_function, &x)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = select_best(frame, &scores).ok_or(Error::EmptyCandidates)?;
    Ok(DecisionOutcome {
        verdict: Verdict::Element(best),
        scores,
        normalization: Some(1.0 / weight_sum),
    })
}

/// Argmax of the pignistic probability over the singletons (no reject).
pub fn decide_pignistic_singletons(
    m: &MassFunction<PowerElement>,
) -> Result<DecisionOutcome<PowerElement>> {
    require_normal_power(m)?;
    let n = m.frame().len();
    argmax_unweighted(m, DecisionFunction::Pignistic, PowerElement::singletons(n))
}

/// Maximum of credibility over the singletons, rejected when the chosen
/// class is believed less than its complement.
pub fn decide_maxbel_reject(m: &MassFunction<PowerElement>) -> Result<DecisionOutcome<PowerElement>> {
    require_normal_power(m)?;
    let n = m.frame().len();
    let mut out = argmax_unweighted(m, DecisionFunction::Credibility, PowerElement::singletons(n))?;
    let best = *out.verdict.element().expect("argmax yields an element");
    let complement = best.complement().expect("singleton of a frame with n >= 2");
    if m.bel(&best) < m.bel(&complement) - TIE_EPS {
        out.verdict = Verdict::Reject;
    }
    Ok(out)
}

fn power_candidates(frame: &Frame, window: Option<&SpecificityWindow>) -> Vec<PowerElement> {
    frame
        .power_elements()
        .into_iter()
        .filter(|x| window.is_none_or(|w| w.contains(x.len() as usize)))
        .collect()
}

/// Weighted decision over the nonempty subsets: argmax of
/// `lambda_X / |X|^r * f_d(X)`.
pub fn decide_weighted_power(
    m: &MassFunction<PowerElement>,
    cfg: &DecisionConfig,
) -> Result<DecisionOutcome<PowerElement>> {
    require_normal_power(m)?;
    let candidates = power_candidates(m.frame(), cfg.window.as_ref());
    argmax_weighted(m, cfg, candidates)
}

/// Reject with [`decide_maxbel_reject`], then decide among subsets with
/// [`decide_weighted_power`]; or the reverse order, per `cfg.two_step_order`.
pub fn decide_two_step(
    m: &MassFunction<PowerElement>,
    cfg: &DecisionConfig,
) -> Result<DecisionOutcome<PowerElement>> {
    match cfg.two_step_order {
        TwoStepOrder::RejectFirst => {
            let first = decide_maxbel_reject(m)?;
            if first.verdict == Verdict::Reject {
                return Ok(first);
            }
            decide_weighted_power(m, cfg)
        }
        TwoStepOrder::UnionsFirst => {
            let first = decide_weighted_power(m, cfg)?;
            match first.verdict {
                Verdict::Element(x) if x.len() > 1 => decide_maxbel_reject(m),
                _ => Ok(first),
            }
        }
    }
}

/// Weighted decision on the hyper-power set, optionally restricted to a
/// specificity window. A window spanning a single cardinality uses the raw
/// decision function; otherwise scores are weighted by `lambda_X / C_M(X)^r`.
pub fn decide_hyper_weighted(
    m: &MassFunction<HyperElement>,
    cfg: &DecisionConfig,
) -> Result<DecisionOutcome<HyperElement>> {
    if cfg.decision_function == DecisionFunction::Plausibility {
        return Err(Error::PlausibilityOnHyper);
    }
    cfg.validate()?;
    let frame = m.frame();
    let candidates = match &cfg.window {
        Some(w) => elements_in_window(frame, w)?,
        None => enumerate_hyper(frame)?,
    };
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    match &cfg.window {
        Some(w) if w.is_single() => argmax_unweighted(m, cfg.decision_function, candidates),
        _ => argmax_weighted(m, cfg, candidates),
    }
}

/// Pignistic decision over the cardinality-4 elements of a three-class frame
/// (the singletons and the union of pairwise intersections), compared with
/// the credibility-with-reject rule on the power-set mass.
#[derive(Clone, Debug, PartialEq)]
pub struct Cardinality4Outcome {
    pub hyper: DecisionOutcome<HyperElement>,
    pub reject_rule: DecisionOutcome<PowerElement>,
    /// True when both rules agree, reading the union of pairwise
    /// intersections as a reject.
    pub agrees: bool,
}

/// The union of all pairwise intersections of a three-class frame.
pub fn pairwise_intersections_union(n: usize) -> Result<HyperElement> {
    let c = HyperElement::singletons(n);
    let mut acc: Option<HyperElement> = None;
    for i in 0..n {
        for j in i + 1..n {
            let x = c[i].meet(&c[j]);
            acc = Some(acc.map_or(x, |a| a.join(&x)));
        }
    }
    acc.ok_or(Error::EmptyElement)
}

/// Maps a cardinality-4 verdict onto the reject rule's vocabulary.
pub fn hyper_verdict_as_reject(v: &Verdict<HyperElement>) -> Verdict<PowerElement> {
    match v {
        Verdict::Element(x) => match x.as_power() {
            Some(p) if p.len() == 1 => Verdict::Element(p),
            _ => Verdict::Reject,
        },
        Verdict::Reject => Verdict::Reject,
    }
}

pub fn decide_cardinality4_with_reject_mapping(
    m_hyper: &MassFunction<HyperElement>,
    m_power: &MassFunction<PowerElement>,
) -> Result<Cardinality4Outcome> {
    if m_hyper.frame().len() != 3 {
        return Err(Error::InvalidDecisionConfig(format!(
            "cardinality-4 decision needs a 3-class frame, got {}",
            m_hyper.frame().len()
        )));
    }
    m_hyper.frame().check_same(m_power.frame())?;
    let cfg = DecisionConfig::new(1.0, DecisionFunction::Pignistic)
        .with_window(SpecificityWindow::new(4, 4)?);
    let hyper = decide_hyper_weighted(m_hyper, &cfg)?;
    let reject_rule = decide_maxbel_reject(m_power)?;
    let agrees = hyper_verdict_as_reject(&hyper.verdict) == reject_rule.verdict;
    Ok(Cardinality4Outcome {
        hyper,
        reject_rule,
        agrees,
    })
}

/// Rules selectable from the command line and run configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionRule {
    Pignistic,
    MaxBelReject,
    WeightedPower,
    #[default]
    TwoStep,
    HyperWeighted,
    Cardinality4,
}

impl DecisionRule {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionRule::Pignistic => "pignistic",
            DecisionRule::MaxBelReject => "max-bel-reject",
            DecisionRule::WeightedPower => "weighted-power",
            DecisionRule::TwoStep => "two-step",
            DecisionRule::HyperWeighted => "hyper-weighted",
            DecisionRule::Cardinality4 => "cardinality4",
        }
    }

    pub fn needs_hyper(self) -> bool {
        matches!(self, DecisionRule::HyperWeighted | DecisionRule::Cardinality4)
    }

    pub fn needs_power(self) -> bool {
        !matches!(self, DecisionRule::HyperWeighted)
    }

    pub fn can_reject(self) -> bool {
        matches!(
            self,
            DecisionRule::MaxBelReject | DecisionRule::TwoStep | DecisionRule::Cardinality4
        )
    }

    /// Runs the rule and renders its report. Power-set rules need `power`,
    /// hyper-power rules need `hyper`.
    pub fn apply(
        self,
        power: Option<&MassFunction<PowerElement>>,
        hyper: Option<&MassFunction<HyperElement>>,
        cfg: &DecisionConfig,
    ) -> Result<DecisionReport> {
        let need_power = || {
            power.ok_or_else(|| {
                Error::InvalidDecisionConfig(format!("rule {} needs a power mass", self.as_str()))
            })
        };
        let need_hyper = || {
            hyper.ok_or_else(|| {
                Error::InvalidDecisionConfig(format!("rule {} needs a hyper mass", self.as_str()))
            })
        };
        let name = self.as_str();
        Ok(match self {
            DecisionRule::Pignistic => {
                let m = need_power()?;
                decide_pignistic_singletons(m)?.to_report(m.frame(), name, None, None)
            }
            DecisionRule::MaxBelReject => {
                let m = need_power()?;
                decide_maxbel_reject(m)?.to_report(m.frame(), name, None, None)
            }
            DecisionRule::WeightedPower => {
                let m = need_power()?;
                decide_weighted_power(m, cfg)?.to_report(m.frame(), name, Some(cfg.r), cfg.window)
            }
            DecisionRule::TwoStep => {
                let m = need_power()?;
                decide_two_step(m, cfg)?.to_report(m.frame(), name, Some(cfg.r), cfg.window)
            }
            DecisionRule::HyperWeighted => {
                let m = need_hyper()?;
                decide_hyper_weighted(m, cfg)?.to_report(m.frame(), name, Some(cfg.r), cfg.window)
            }
            DecisionRule::Cardinality4 => {
                let mh = need_hyper()?;
                let out = decide_cardinality4_with_reject_mapping(mh, need_power()?)?;
                out.hyper
                    .to_report(mh.frame(), name, None, Some(SpecificityWindow::new(4, 4)?))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize) -> Frame {
        Frame::new((1..=n).map(|i| format!("C{i}"))).unwrap()
    }

    fn power(fr: &Frame, focal: &[(&str, f64)]) -> MassFunction<PowerElement> {
        MassFunction::from_labels(fr.clone(), focal).unwrap()
    }

    fn hyper(fr: &Frame, focal: &[(&str, f64)]) -> MassFunction<HyperElement> {
        MassFunction::from_labels(fr.clone(), focal).unwrap()
    }

    fn verdict<E: Element>(fr: &Frame, o: &DecisionOutcome<E>) -> String {
        o.verdict.format(fr)
    }

    #[test]
    fn maxbel_reject_examples() {
        let fr = f(3);
        let m = power(&fr, &[("C1", 0.4), ("C2", 0.35), ("C3", 0.25)]);
        assert_eq!(verdict(&fr, &decide_maxbel_reject(&m).unwrap()), "REJECT");
        let m = power(&fr, &[("C1", 0.6), ("C2", 0.3), ("C3", 0.1)]);
        assert_eq!(verdict(&fr, &decide_maxbel_reject(&m).unwrap()), "C1");
        // vacuous: 0 >= 0 holds, tie rule picks C1
        let m = MassFunction::vacuous(fr.clone());
        assert_eq!(verdict(&fr, &decide_maxbel_reject(&m).unwrap()), "C1");
    }

    #[test]
    fn maxbel_reject_boundary_is_inclusive() {
        let fr = f(3);
        let m = power(&fr, &[("C1", 0.5), ("C2", 0.3), ("C3", 0.2)]);
        assert_eq!(verdict(&fr, &decide_maxbel_reject(&m).unwrap()), "C1");
    }

    #[test]
    fn weighted_power_examples() {
        let fr = f(2);
        let m = power(&fr, &[("C1", 0.3), ("C1|C2", 0.7)]);
        let cfg = DecisionConfig::new(0.5, DecisionFunction::Plausibility);
        let o = decide_weighted_power(&m, &cfg).unwrap();
        assert_eq!(verdict(&fr, &o), "C1");
        let s: BTreeMap<String, f64> = o.scores.iter().map(|(x, s)| (x.format(&fr), *s)).collect();
        assert!((s["C1"] - 1.0).abs() < 1e-12);
        assert!((s["C2"] - 0.7).abs() < 1e-12);
        assert!((s["C1|C2"] - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        // K_d = 1 / (1 + 1 + 1/sqrt 2)
        let kd = o.normalization.unwrap();
        assert!((kd - 1.0 / (2.0 + 1.0 / 2f64.sqrt())).abs() < 1e-12);

        let fr = f(3);
        let m = power(&fr, &[("C1", 0.6), ("C2", 0.3), ("C3", 0.1)]);
        let o = decide_weighted_power(&m, &cfg).unwrap();
        assert_eq!(verdict(&fr, &o), "C1|C2");
        let best = o.scores.iter().map(|&(_, s)| s).fold(0.0, f64::max);
        assert!((best - 0.9 / 2f64.sqrt()).abs() < 1e-12);

        let o = decide_weighted_power(&m, &DecisionConfig::new(1.0, DecisionFunction::Plausibility))
            .unwrap();
        assert_eq!(verdict(&fr, &o), "C1");
    }

    #[test]
    fn two_step_examples() {
        let fr = f(3);
        let cfg = DecisionConfig::new(0.5, DecisionFunction::Plausibility);
        let m = power(&fr, &[("C1", 0.4), ("C2", 0.35), ("C3", 0.25)]);
        assert_eq!(verdict(&fr, &decide_two_step(&m, &cfg).unwrap()), "REJECT");
        let m = power(&fr, &[("C1", 0.6), ("C2", 0.3), ("C3", 0.1)]);
        assert_eq!(verdict(&fr, &decide_two_step(&m, &cfg).unwrap()), "C1|C2");
        let m = power(&fr, &[("C1", 0.9), ("C1|C2|C3", 0.1)]);
        assert_eq!(verdict(&fr, &decide_two_step(&m, &cfg).unwrap()), "C1");
    }

    #[test]
    fn unions_first_variant() {
        let fr = f(3);
        let mut cfg = DecisionConfig::new(0.5, DecisionFunction::Plausibility);
        cfg.two_step_order = TwoStepOrder::UnionsFirst;
        // weighted step picks C1|C2, the credibility test then accepts C1
        let m = power(&fr, &[("C1", 0.6), ("C2", 0.3), ("C3", 0.1)]);
        assert_eq!(verdict(&fr, &decide_two_step(&m, &cfg).unwrap()), "C1");
        let m = power(&fr, &[("C1", 0.4), ("C2", 0.35), ("C3", 0.25)]);
        assert_eq!(verdict(&fr, &decide_two_step(&m, &cfg).unwrap()), "REJECT");
    }

    #[test]
    fn hyper_window_examples() {
        let fr = f(3);
        let m = hyper(&fr, &[("C1&C2", 0.3), ("C1", 0.4), ("C1|C2|C3", 0.3)]);
        let cfg = DecisionConfig::new(0.5, DecisionFunction::Pignistic)
            .with_window(SpecificityWindow::new(2, 2).unwrap());
        let o = decide_hyper_weighted(&m, &cfg).unwrap();
        assert_eq!(verdict(&fr, &o), "C1&C2");
        let s: BTreeMap<String, f64> = o.scores.iter().map(|(x, s)| (x.format(&fr), *s)).collect();
        assert!((s["C1&C2"] - (0.5 + 0.3 * 2.0 / 7.0)).abs() < 1e-12);
        assert!((s["C1&C3"] - (0.15 + 0.2 + 0.3 * 2.0 / 7.0)).abs() < 1e-12);
        assert!((s["C2&C3"] - (0.15 + 0.1 + 0.3 * 2.0 / 7.0)).abs() < 1e-12);
        assert!(o.normalization.is_none());

        let cfg = DecisionConfig::new(0.5, DecisionFunction::Pignistic)
            .with_window(SpecificityWindow::new(4, 4).unwrap());
        let o = decide_hyper_weighted(&m, &cfg).unwrap();
        assert_eq!(verdict(&fr, &o), "C1");
    }

    #[test]
    fn hyper_total_indecision_at_r_zero() {
        let fr = f(3);
        let m = hyper(&fr, &[("C1&C2", 0.3), ("C1", 0.4), ("C1|C2|C3", 0.3)]);
        let cfg = DecisionConfig::new(0.0, DecisionFunction::Credibility);
        let o = decide_hyper_weighted(&m, &cfg).unwrap();
        assert_eq!(o.verdict, Verdict::Element(HyperElement::full(3)));
        assert_eq!(o.scores.len(), 18);
    }

    #[test]
    fn plausibility_on_hyper_is_refused() {
        let fr = f(3);
        let m = MassFunction::<HyperElement>::vacuous(fr);
        let cfg = DecisionConfig::new(0.5, DecisionFunction::Plausibility);
        assert!(matches!(
            decide_hyper_weighted(&m, &cfg),
            Err(Error::PlausibilityOnHyper)
        ));
    }

    #[test]
    fn cardinality4_examples() {
        let fr = f(3);
        let m = power(&fr, &[("C1", 0.4), ("C2", 0.35), ("C3", 0.25)]);
        let o = decide_cardinality4_with_reject_mapping(&m.embed().unwrap(), &m).unwrap();
        assert_eq!(verdict(&fr, &o.hyper), "C1&C2|C1&C3|C2&C3");
        assert!(o.agrees);
        let s: BTreeMap<String, f64> =
            o.hyper.scores.iter().map(|(x, s)| (x.format(&fr), *s)).collect();
        assert!((s["C1&C2|C1&C3|C2&C3"] - 0.75).abs() < 1e-12);
        assert!((s["C1"] - 0.70).abs() < 1e-12);

        let m = power(&fr, &[("C1", 0.6), ("C2", 0.3), ("C3", 0.1)]);
        let o = decide_cardinality4_with_reject_mapping(&m.embed().unwrap(), &m).unwrap();
        assert_eq!(verdict(&fr, &o.hyper), "C1");
        assert!(o.agrees);

        let m4 = MassFunction::<PowerElement>::vacuous(f(4));
        assert!(decide_cardinality4_with_reject_mapping(&m4.embed().unwrap(), &m4).is_err());
    }

    #[test]
    fn tie_rule_prefers_larger_then_lexicographic() {
        let fr = Frame::new(["b", "a", "c"]).unwrap();
        let xs = fr.power_elements();
        let scored: Vec<_> = xs.iter().map(|&x| (x, if x.len() == 1 { 1.0 } else { 0.0 })).collect();
        assert_eq!(select_best(&fr, &scored).unwrap().format(&fr), "a");
        let scored: Vec<_> = xs.iter().map(|&x| (x, 1.0)).collect();
        assert_eq!(select_best(&fr, &scored).unwrap(), fr.theta_power());
        assert!(select_best::<PowerElement>(&fr, &[]).is_none());
    }

    #[test]
    fn config_validation() {
        let fr = f(3);
        let m = power(&fr, &[("C1", 1.0)]);
        let cfg = DecisionConfig::new(1.5, DecisionFunction::Plausibility);
        assert!(decide_weighted_power(&m, &cfg).is_err());
        let mut cfg = DecisionConfig::default();
        cfg.lambda.insert("C1".into(), 0.0);
        assert!(decide_weighted_power(&m, &cfg).is_err());
    }

    #[test]
    fn lambda_shifts_the_verdict() {
        let fr = f(3);
        let m = power(&fr, &[("C1", 0.6), ("C2", 0.3), ("C3", 0.1)]);
        let mut cfg = DecisionConfig::new(0.5, DecisionFunction::Plausibility);
        cfg.lambda.insert("C1|C2".into(), 0.5);
        assert_eq!(verdict(&fr, &decide_weighted_power(&m, &cfg).unwrap()), "C1");
    }

    #[test]
    fn report_json_shape() {
        let fr = f(3);
        let m = power(&fr, &[("C1", 0.4), ("C2", 0.35), ("C3", 0.25)]);
        let cfg = DecisionConfig::default();
        let rep = DecisionRule::TwoStep.apply(Some(&m), None, &cfg).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["verdict"], "REJECT");
        assert_eq!(v["rule"], "two-step");
        assert_eq!(v["r"], 0.5);
        assert!(v["scores"].get("C1").is_some());
    }
}

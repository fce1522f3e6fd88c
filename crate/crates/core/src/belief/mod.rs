//! Mass functions over either algebra, their credibility, plausibility and
//! pignistic transforms, and conjunctive / Dempster combination.

mod combine;
mod doc;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{Element, Frame, HyperElement, PowerElement};

pub use combine::{conjunctive_combine, conjunctive_combine_hyper, dempster, CombinationReport};
pub use doc::{AnyMass, FocalDoc, MassDoc};

/// Tolerance on `|sum - 1|` for the normality check.
pub const NORMALITY_EPS: f64 = 1e-9;

/// Sparse mass assignment. Focal elements are kept sorted and unique, and
/// every stored mass is strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub struct MassFunction<E: Element> {
    frame: Frame,
    focal: Vec<(E, f64)>,
}

impl<E: Element> MassFunction<E> {
    /// Builds a mass function, rejecting inputs that are not normal.
    pub fn new(frame: Frame, focal: impl IntoIterator<Item = (E, f64)>) -> Result<Self> {
        Self::with_renormalize(frame, focal, false)
    }

    /// With `renormalize`, masses are divided by their sum instead of being
    /// rejected when the sum is off by more than [`NORMALITY_EPS`].
    pub fn with_renormalize(
        frame: Frame,
        focal: impl IntoIterator<Item = (E, f64)>,
        renormalize: bool,
    ) -> Result<Self> {
        let n = frame.len();
        let mut acc: BTreeMap<E, f64> = BTreeMap::new();
        for (x, m) in focal {
            if x.classes() != n {
                return Err(Error::FrameMismatch(format!(
                    "element of a {}-class frame in a {n}-class mass function",
                    x.classes()
                )));
            }
            if x.is_empty() {
                return Err(Error::EmptyElement);
            }
            if !(0.0..=1.0 + NORMALITY_EPS).contains(&m) {
                return Err(Error::InvalidMass(format!("mass {m} outside [0, 1]")));
            }
            *acc.entry(x).or_insert(0.0) += m;
        }
        let sum: f64 = acc.values().sum();
        let scale = if (sum - 1.0).abs() <= NORMALITY_EPS {
            1.0
        } else if renormalize && sum > 0.0 {
            1.0 / sum
        } else {
            return Err(Error::NotNormalized { sum });
        };
        Ok(MassFunction {
            frame,
            focal: acc
                .into_iter()
                .filter(|&(_, m)| m > 0.0)
                .map(|(x, m)| (x, m * scale))
                .collect(),
        })
    }

    /// Parses each element with the frame grammar.
    pub fn from_labels(frame: Frame, focal: &[(&str, f64)]) -> Result<Self> {
        let parsed = focal
            .iter()
            .map(|&(s, m)| Ok((E::parse(&frame, s)?, m)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, parsed)
    }

    /// All mass on the whole frame.
    pub fn vacuous(frame: Frame) -> Self {
        let theta = E::full(frame.len());
        MassFunction {
            frame,
            focal: vec![(theta, 1.0)],
        }
    }

    /// Output of a combination: no validation, the empty element allowed.
    pub(crate) fn from_parts_unchecked(frame: Frame, focal: BTreeMap<E, f64>) -> Self {
        MassFunction {
            frame,
            focal: focal.into_iter().filter(|&(_, m)| m > 0.0).collect(),
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn focal(&self) -> &[(E, f64)] {
        &self.focal
    }

    pub fn mass(&self, x: &E) -> f64 {
        self.focal
            .binary_search_by(|(y, _)| y.cmp(x))
            .map_or(0.0, |k| self.focal[k].1)
    }

    pub fn total(&self) -> f64 {
        self.focal.iter().map(|&(_, m)| m).sum()
    }

    /// Mass carried by the empty element (conjunctive conflict).
    pub fn empty_mass(&self) -> f64 {
        self.focal
            .iter()
            .filter(|(y, _)| y.is_empty())
            .map(|&(_, m)| m)
            .sum()
    }

    fn check_element(&self, x: &E) {
        assert_eq!(
            x.classes(),
            self.frame.len(),
            "element and mass function belong to different frames"
        );
    }

    /// Credibility: total mass of the nonempty focal elements included in `x`.
    pub fn bel(&self, x: &E) -> f64 {
        self.check_element(x);
        self.focal
            .iter()
            .filter(|(y, _)| !y.is_empty() && y.is_subset_of(x))
            .map(|&(_, m)| m)
            .sum()
    }

    /// Plausibility: total mass of the focal elements meeting `x`.
    pub fn pl(&self, x: &E) -> f64 {
        self.check_element(x);
        self.focal
            .iter()
            .filter(|(y, _)| y.intersects(x))
            .map(|&(_, m)| m)
            .sum()
    }

    /// `sum_Y card(x ∩ Y) / card(Y) * m(Y)`, with the algebra's cardinality.
    fn pignistic_sum(&self, x: &E) -> f64 {
        self.check_element(x);
        self.focal
            .iter()
            .filter(|(y, _)| !y.is_empty())
            .map(|(y, m)| f64::from(x.meet(y).cardinality()) / f64::from(y.cardinality()) * m)
            .sum()
    }
}

impl MassFunction<PowerElement> {
    /// Pignistic probability. Requires an ∅-free mass function.
    pub fn betp(&self, x: &PowerElement) -> Result<f64> {
        let empty = self.empty_mass();
        if empty > 0.0 {
            return Err(Error::MassOnEmpty(empty));
        }
        if x.is_empty() {
            return Err(Error::EmptyElement);
        }
        Ok(self.pignistic_sum(x))
    }

    /// True when every focal element is a singleton.
    pub fn is_bayesian(&self) -> bool {
        self.focal.iter().all(|(y, _)| y.len() == 1)
    }

    /// The same masses on the embedded elements of the hyper-power set.
    pub fn embed(&self) -> Result<MassFunction<HyperElement>> {
        let focal = self
            .focal
            .iter()
            .map(|(y, m)| Ok((y.embed()?, *m)))
            .collect::<Result<Vec<_>>>()?;
        MassFunction::new(self.frame.clone(), focal)
    }
}

impl MassFunction<HyperElement> {
    /// Generalized pignistic transform, prorated by DSm cardinality.
    pub fn gpt(&self, x: &HyperElement) -> f64 {
        self.pignistic_sum(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::parse_hyper;

    fn frame3() -> Frame {
        Frame::new(["C1", "C2", "C3"]).unwrap()
    }

    fn p(f: &Frame, s: &str) -> PowerElement {
        PowerElement::parse(f, s).unwrap()
    }

    fn h(f: &Frame, s: &str) -> HyperElement {
        parse_hyper(f, s).unwrap()
    }

    #[test]
    fn normality_is_enforced() {
        let f = frame3();
        assert!(matches!(
            MassFunction::<PowerElement>::from_labels(f.clone(), &[("C1", 0.5), ("C2", 0.4)]),
            Err(Error::NotNormalized { .. })
        ));
        let m = MassFunction::with_renormalize(
            f.clone(),
            [(p(&f, "C1"), 0.5), (p(&f, "C2"), 0.3)],
            true,
        )
        .unwrap();
        assert!((m.mass(&p(&f, "C1")) - 0.625).abs() < 1e-15);
        assert!(MassFunction::<PowerElement>::from_labels(f.clone(), &[("C1", 1.5)]).is_err());
        assert!(MassFunction::<PowerElement>::from_labels(f, &[("C1", -0.1), ("C2", 1.1)]).is_err());
    }

    #[test]
    fn duplicates_merge_and_zeros_drop() {
        let f = frame3();
        let m = MassFunction::<PowerElement>::from_labels(
            f.clone(),
            &[("C1", 0.25), ("C1", 0.25), ("C2", 0.0), ("C1|C2|C3", 0.5)],
        )
        .unwrap();
        assert_eq!(m.focal().len(), 2);
        assert_eq!(m.mass(&p(&f, "C1")), 0.5);
    }

    #[test]
    fn credibility_plausibility_pignistic_worked_example() {
        let f = frame3();
        let m = MassFunction::<PowerElement>::from_labels(
            f.clone(),
            &[("C1", 0.5), ("C1|C2", 0.3), ("C1|C2|C3", 0.2)],
        )
        .unwrap();
        assert!((m.bel(&p(&f, "C1")) - 0.5).abs() < 1e-12);
        assert!((m.bel(&p(&f, "C1|C2")) - 0.8).abs() < 1e-12);
        assert!((m.pl(&p(&f, "C3")) - 0.2).abs() < 1e-12);
        assert!((m.pl(&p(&f, "C1")) - 1.0).abs() < 1e-12);
        // 0.5 + 0.3/2 + 0.2/3
        assert!((m.betp(&p(&f, "C1")).unwrap() - (0.5 + 0.15 + 0.2 / 3.0)).abs() < 1e-12);
        assert!((m.betp(&p(&f, "C1")).unwrap() - 0.7167).abs() < 1e-4);
    }

    #[test]
    fn vacuous_mass() {
        let f = frame3();
        let m = MassFunction::<PowerElement>::vacuous(f.clone());
        for i in 0..3 {
            let c = f.singleton_power(i).unwrap();
            assert_eq!(m.bel(&c), 0.0);
            assert_eq!(m.pl(&c), 1.0);
            assert!((m.betp(&c).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(m.bel(&f.theta_power()), 1.0);
    }

    #[test]
    fn bayesian_bel_equals_pl_on_singletons() {
        let f = frame3();
        let m = MassFunction::<PowerElement>::from_labels(
            f.clone(),
            &[("C1", 0.2), ("C2", 0.3), ("C3", 0.5)],
        )
        .unwrap();
        assert!(m.is_bayesian());
        for i in 0..3 {
            let c = f.singleton_power(i).unwrap();
            assert_eq!(m.bel(&c), m.pl(&c));
        }
        assert!((m.bel(&p(&f, "C1|C3")) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn hyper_credibility_and_gpt_worked_example() {
        let f = frame3();
        let m = MassFunction::<HyperElement>::from_labels(
            f.clone(),
            &[("C1&C2", 0.3), ("C1", 0.4), ("C1|C2|C3", 0.3)],
        )
        .unwrap();
        assert!((m.bel(&h(&f, "C1")) - 0.7).abs() < 1e-12);
        assert!((m.bel(&h(&f, "C1&C2")) - 0.3).abs() < 1e-12);
        assert!((m.bel(&HyperElement::full(3)) - 1.0).abs() < 1e-12);
        // 0.3*(2/2) + 0.4*(4/4) + 0.3*(4/7)
        let g1 = 0.3 + 0.4 + 0.3 * 4.0 / 7.0;
        assert!((m.gpt(&h(&f, "C1")) - g1).abs() < 1e-12);
        assert!((g1 - 0.8714).abs() < 1e-4);
        // 0.3*(2/2) + 0.4*(2/4) + 0.3*(2/7)
        let g12 = 0.3 + 0.2 + 0.3 * 2.0 / 7.0;
        assert!((m.gpt(&h(&f, "C1&C2")) - g12).abs() < 1e-12);
        assert!((g12 - 0.5857).abs() < 1e-4);
        assert!((m.gpt(&HyperElement::full(3)) - 1.0).abs() < 1e-12);
        assert!((m.pl(&h(&f, "C1&C2&C3")) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn betp_refuses_conflict_mass() {
        let f = Frame::new(["C1", "C2"]).unwrap();
        let a = MassFunction::<PowerElement>::from_labels(f.clone(), &[("C1", 1.0)]).unwrap();
        let b = MassFunction::<PowerElement>::from_labels(f.clone(), &[("C2", 0.5), ("C1|C2", 0.5)]).unwrap();
        let r = conjunctive_combine(&[a, b]).unwrap();
        assert!(matches!(
            r.result.betp(&f.singleton_power(0).unwrap()),
            Err(Error::MassOnEmpty(_))
        ));
    }

    #[test]
    fn embedding_preserves_credibility_of_unions() {
        let f = frame3();
        let m = MassFunction::<PowerElement>::from_labels(
            f.clone(),
            &[("C1", 0.5), ("C1|C2", 0.3), ("C1|C2|C3", 0.2)],
        )
        .unwrap();
        let mh = m.embed().unwrap();
        for x in f.power_elements() {
            assert!((m.bel(&x) - mh.bel(&x.embed().unwrap())).abs() < 1e-15);
        }
    }
}

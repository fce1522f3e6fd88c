//! Frames of discernment and the two element algebras built on them.
//!
//! A [`Frame`] holds the ordered class labels. Subsets of the frame live in
//! [`PowerElement`] (bit `i` set means class `i` is included). Elements of the
//! free hyper-power set live in [`HyperElement`], stored as a mask over the
//! `2^n - 1` Venn parts of the frame: the part with signature `S` (a nonempty
//! set of class indices) is the region inside every class of `S` and outside
//! all others, and it occupies bit `S - 1` of the mask when `S` is read as a
//! bitset. Union and intersection are then bitwise OR and AND, and the DSm
//! cardinality is a popcount.

mod enumerate;
mod grammar;
mod hyper;
mod power;

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{
    cardinality_histogram, elements_in_window, enumerate_hyper, SpecificityWindow,
    MAX_ENUMERATION_CLASSES,
};
pub use grammar::{parse_hyper, parse_power};
pub use hyper::HyperElement;
pub use power::PowerElement;

/// Which algebra a mass function or element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Power,
    Hyper,
}

impl Algebra {
    pub fn as_str(self) -> &'static str {
        match self {
            Algebra::Power => "power",
            Algebra::Hyper => "hyper",
        }
    }
}

/// Ordered set of class labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    /// Largest frame whose hyper-power elements fit the part mask.
    pub const MAX_CLASSES: usize = 7;

    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::InvalidFrame(format!(
                "need at least 2 classes, got {}",
                labels.len()
            )));
        }
        if labels.len() > Self::MAX_CLASSES {
            return Err(Error::InvalidFrame(format!(
                "at most {} classes are supported, got {}",
                Self::MAX_CLASSES,
                labels.len()
            )));
        }
        for (k, label) in labels.iter().enumerate() {
            if label.is_empty()
                || label
                    .chars()
                    .any(|c| c.is_whitespace() || matches!(c, '&' | '|' | '(' | ')' | ','))
            {
                return Err(Error::InvalidFrame(format!("invalid label `{label}`")));
            }
            if labels[..k].contains(label) {
                return Err(Error::InvalidFrame(format!("duplicate label `{label}`")));
            }
        }
        Ok(Frame {
            labels: labels.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Class `i` (zero-based) as a hyper-power element.
    pub fn singleton(&self, i: usize) -> Result<HyperElement> {
        HyperElement::singleton(self.len(), i)
    }

    /// Class `i` (zero-based) as a subset of the frame.
    pub fn singleton_power(&self, i: usize) -> Result<PowerElement> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.len(),
            });
        }
        PowerElement::new(self.len(), 1 << i)
    }

    pub fn theta_power(&self) -> PowerElement {
        PowerElement::full(self.len())
    }

    pub fn theta_hyper(&self) -> HyperElement {
        HyperElement::full(self.len())
    }

    /// All nonempty subsets of the frame, ordered by cardinality then mask.
    pub fn power_elements(&self) -> Vec<PowerElement> {
        let n = self.len();
        let mut out: Vec<PowerElement> = (1u32..(1 << n))
            .map(|bits| PowerElement::new(n, bits).expect("nonempty in range"))
            .collect();
        out.sort();
        out
    }

    pub(crate) fn check_same(&self, other: &Frame) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FrameMismatch(format!(
                "{:?} vs {:?}",
                self.labels(),
                other.labels()
            )))
        }
    }
}

/// Common surface of the two element algebras, used by mass functions and
/// decision rules.
pub trait Element: Copy + Ord + Eq + Hash + Debug + Send + Sync + 'static {
    const ALGEBRA: Algebra;

    /// Number of classes of the frame this element belongs to.
    fn classes(&self) -> usize;
    fn is_empty(&self) -> bool;
    /// `|X|` for subsets, the DSm cardinality for hyper-power elements.
    fn cardinality(&self) -> u32;
    fn meet(&self, other: &Self) -> Self;
    fn join(&self, other: &Self) -> Self;
    fn is_subset_of(&self, other: &Self) -> bool;
    fn intersects(&self, other: &Self) -> bool;
    fn full(n: usize) -> Self;
    /// Every singleton of the frame, as an element of this algebra.
    fn singletons(n: usize) -> Vec<Self>;
    fn parse(frame: &Frame, text: &str) -> Result<Self>;
    fn format(&self, frame: &Frame) -> String;
}

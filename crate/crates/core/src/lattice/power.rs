use std::cmp::Ordering;

use super::{grammar, Algebra, Element, Frame, HyperElement};
use crate::error::{Error, Result};

/// Subset of the frame as a bit mask. The empty subset only appears as the
/// conflict by-product of conjunctive combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PowerElement {
    n: u8,
    bits: u32,
}

impl PowerElement {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if !(2..=Frame::MAX_CLASSES).contains(&n) {
            return Err(Error::InvalidElement(format!("frame size {n}")));
        }
        if bits == 0 {
            return Err(Error::EmptyElement);
        }
        if bits >> n != 0 {
            return Err(Error::InvalidElement(format!(
                "bits {bits:#b} exceed a frame of {n} classes"
            )));
        }
        Ok(PowerElement { n: n as u8, bits })
    }

    #[cfg(test)]
    pub(crate) fn empty(n: usize) -> Self {
        PowerElement { n: n as u8, bits: 0 }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    /// Complement within the frame; `None` for the full frame.
    pub fn complement(&self) -> Option<Self> {
        let all = (1u32 << self.n) - 1;
        let c = all & !self.bits;
        (c != 0).then_some(PowerElement { n: self.n, bits: c })
    }

    pub fn singleton_index(&self) -> Option<usize> {
        (self.len() == 1).then(|| self.bits.trailing_zeros() as usize)
    }

    /// The same subset seen as an element of the hyper-power set: the union
    /// of the singletons it contains.
    pub fn embed(&self) -> Result<HyperElement> {
        if self.is_empty() {
            return Err(Error::EmptyElement);
        }
        Ok(HyperElement::from_power_bits(self.n as usize, self.bits))
    }
}

impl Ord for PowerElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.len(), self.bits).cmp(&(other.n, other.len(), other.bits))
    }
}

impl PartialOrd for PowerElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Element for PowerElement {
    const ALGEBRA: Algebra = Algebra::Power;

    fn classes(&self) -> usize {
        self.n as usize
    }

    fn is_empty(&self) -> bool {
        self.bits == 0
    }

    fn cardinality(&self) -> u32 {
        self.len()
    }

    fn meet(&self, other: &Self) -> Self {
        PowerElement {
            n: self.n,
            bits: self.bits & other.bits,
        }
    }

    fn join(&self, other: &Self) -> Self {
        PowerElement {
            n: self.n,
            bits: self.bits | other.bits,
        }
    }

    fn is_subset_of(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    fn intersects(&self, other: &Self) -> bool {
        self.bits & other.bits != 0
    }

    fn full(n: usize) -> Self {
        PowerElement {
            n: n as u8,
            bits: (1 << n) - 1,
        }
    }

    fn singletons(n: usize) -> Vec<Self> {
        (0..n)
            .map(|i| PowerElement {
                n: n as u8,
                bits: 1 << i,
            })
            .collect()
    }

    fn parse(frame: &Frame, text: &str) -> Result<Self> {
        grammar::parse_power(frame, text)
    }

    fn format(&self, frame: &Frame) -> String {
        if self.is_empty() {
            return "∅".to_string();
        }
        let mut labels: Vec<&str> = (0..frame.len())
            .filter(|&i| self.contains(i))
            .map(|i| frame.label(i))
            .collect();
        labels.sort_unstable();
        labels.join("|")
    }
}

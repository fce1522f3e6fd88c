use std::cmp::Ordering;

use super::{grammar, Algebra, Element, Frame, PowerElement};
use crate::error::{Error, Result};

/// Element of the free hyper-power set, as a mask over Venn parts.
///
/// Bit `s - 1` stands for the part whose signature is the class bitset `s`.
/// Valid masks are exactly the nonempty up-sets: whenever a signature is
/// present, every superset signature is present too.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HyperElement {
    n: u8,
    parts: u128,
}

#[inline]
pub(crate) fn part_count(n: usize) -> usize {
    (1 << n) - 1
}

#[inline]
fn all_parts(n: usize) -> u128 {
    if n == 7 {
        u128::MAX >> 1
    } else {
        (1u128 << part_count(n)) - 1
    }
}

/// Mask of the parts whose signature contains class `i`.
fn singleton_mask(n: usize, i: usize) -> u128 {
    (1..=part_count(n))
        .filter(|s| s >> i & 1 == 1)
        .fold(0u128, |acc, s| acc | 1 << (s - 1))
}

pub(crate) fn is_up_set(n: usize, parts: u128) -> bool {
    let mut rest = parts;
    while rest != 0 {
        let b = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let s = b + 1;
        for j in 0..n {
            let t = s | 1 << j;
            if t != s && parts >> (t - 1) & 1 == 0 {
                return false;
            }
        }
    }
    true
}

impl HyperElement {
    /// Validates the up-set invariant.
    pub fn from_parts(n: usize, parts: u128) -> Result<Self> {
        if !(2..=Frame::MAX_CLASSES).contains(&n) {
            return Err(Error::InvalidElement(format!("frame size {n}")));
        }
        if parts == 0 {
            return Err(Error::EmptyElement);
        }
        if parts & !all_parts(n) != 0 {
            return Err(Error::InvalidElement(format!(
                "part mask exceeds the {} parts of a {n}-class frame",
                part_count(n)
            )));
        }
        if !is_up_set(n, parts) {
            return Err(Error::InvalidElement(
                "part mask is not closed upward, so it is not generated by union and intersection"
                    .into(),
            ));
        }
        Ok(HyperElement { n: n as u8, parts })
    }

    pub(crate) fn from_parts_unchecked(n: usize, parts: u128) -> Self {
        debug_assert!(parts != 0 && is_up_set(n, parts));
        HyperElement { n: n as u8, parts }
    }

    /// Class `i` (zero-based): every part whose signature contains `i`.
    pub fn singleton(n: usize, i: usize) -> Result<Self> {
        if !(2..=Frame::MAX_CLASSES).contains(&n) {
            return Err(Error::InvalidElement(format!("frame size {n}")));
        }
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        Ok(HyperElement {
            n: n as u8,
            parts: singleton_mask(n, i),
        })
    }

    pub(crate) fn from_power_bits(n: usize, bits: u32) -> Self {
        let parts = (1..=part_count(n))
            .filter(|&s| s as u32 & bits != 0)
            .fold(0u128, |acc, s| acc | 1 << (s - 1));
        HyperElement { n: n as u8, parts }
    }

    pub fn parts(&self) -> u128 {
        self.parts
    }

    pub fn classes(&self) -> usize {
        self.n as usize
    }

    /// Number of Venn parts composing the element.
    pub fn dsm_cardinality(&self) -> u32 {
        self.parts.count_ones()
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        Ok(self.join(other))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        Ok(self.meet(other))
    }

    fn check_frame(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::FrameMismatch(format!(
                "{}-class element vs {}-class element",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Signatures (class bitsets) of the present parts.
    pub fn signatures(&self) -> impl Iterator<Item = u32> + '_ {
        let mut rest = self.parts;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            Some(b + 1)
        })
    }

    /// The antichain of minimal signatures that generates this up-set.
    pub fn minimal_signatures(&self) -> Vec<u32> {
        self.signatures()
            .filter(|&s| {
                (0..self.n as u32).all(|j| {
                    let t = s & !(1 << j);
                    t == s || t == 0 || self.parts >> (t - 1) & 1 == 0
                })
            })
            .collect()
    }

    /// The subset of the frame this element equals, when it is a union of
    /// singletons.
    pub fn as_power(&self) -> Option<PowerElement> {
        let mins = self.minimal_signatures();
        if mins.iter().all(|s| s.count_ones() == 1) {
            let bits = mins.iter().fold(0, |acc, s| acc | s);
            PowerElement::new(self.n as usize, bits).ok()
        } else {
            None
        }
    }
}

impl Ord for HyperElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.dsm_cardinality(), self.parts).cmp(&(
            other.n,
            other.dsm_cardinality(),
            other.parts,
        ))
    }
}

impl PartialOrd for HyperElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Element for HyperElement {
    const ALGEBRA: Algebra = Algebra::Hyper;

    fn classes(&self) -> usize {
        self.n as usize
    }

    fn is_empty(&self) -> bool {
        self.parts == 0
    }

    fn cardinality(&self) -> u32 {
        self.dsm_cardinality()
    }

    fn meet(&self, other: &Self) -> Self {
        HyperElement {
            n: self.n,
            parts: self.parts & other.parts,
        }
    }

    fn join(&self, other: &Self) -> Self {
        HyperElement {
            n: self.n,
            parts: self.parts | other.parts,
        }
    }

    fn is_subset_of(&self, other: &Self) -> bool {
        self.parts & !other.parts == 0
    }

    fn intersects(&self, other: &Self) -> bool {
        self.parts & other.parts != 0
    }

    fn full(n: usize) -> Self {
        HyperElement {
            n: n as u8,
            parts: all_parts(n),
        }
    }

    fn singletons(n: usize) -> Vec<Self> {
        (0..n)
            .map(|i| HyperElement {
                n: n as u8,
                parts: singleton_mask(n, i),
            })
            .collect()
    }

    fn parse(frame: &Frame, text: &str) -> Result<Self> {
        grammar::parse_hyper(frame, text)
    }

    fn format(&self, frame: &Frame) -> String {
        let mut terms: Vec<String> = self
            .minimal_signatures()
            .into_iter()
            .map(|s| {
                let mut labels: Vec<&str> = (0..frame.len())
                    .filter(|&i| s >> i & 1 == 1)
                    .map(|i| frame.label(i))
                    .collect();
                labels.sort_unstable();
                labels.join("&")
            })
            .collect();
        terms.sort_unstable();
        terms.join("|")
    }
}

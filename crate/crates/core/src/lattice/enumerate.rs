//! Full enumeration of the free hyper-power set.
//!
//! Elements are the nonempty up-sets of the nonempty class subsets, i.e. the
//! monotone Boolean functions on `n` variables other than the two constants.
//! They are generated by the usual split on the last variable: a monotone
//! truth table on `k + 1` variables is a pair `(f0, f1)` of monotone tables
//! on `k` variables with `f0 <= f1`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::hyper::part_count;
use super::{Frame, HyperElement};
use crate::error::{Error, Result};

pub const MAX_ENUMERATION_CLASSES: usize = 6;

/// Inclusive band of DSm cardinalities admitted as decision candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct SpecificityWindow {
    min: usize,
    max: usize,
}

impl SpecificityWindow {
    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min < 1 || min > max {
            return Err(Error::InvalidWindow { min, max });
        }
        Ok(SpecificityWindow { min, max })
    }

    pub fn min(&self) -> usize {
        self.min
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn contains(&self, cardinality: usize) -> bool {
        (self.min..=self.max).contains(&cardinality)
    }

    /// True when the window admits a single cardinality.
    pub fn is_single(&self) -> bool {
        self.min == self.max
    }

    pub fn check_frame(&self, n: usize) -> Result<()> {
        if self.max > part_count(n) {
            return Err(Error::InvalidWindow {
                min: self.min,
                max: self.max,
            });
        }
        Ok(())
    }
}

impl TryFrom<[usize; 2]> for SpecificityWindow {
    type Error = Error;

    fn try_from(v: [usize; 2]) -> Result<Self> {
        SpecificityWindow::new(v[0], v[1])
    }
}

impl From<SpecificityWindow> for [usize; 2] {
    fn from(w: SpecificityWindow) -> Self {
        [w.min, w.max]
    }
}

struct Enumeration {
    /// Part masks sorted by (popcount, mask).
    masks: Vec<u64>,
    /// `masks[offsets[c - 1]..offsets[c]]` have cardinality `c`.
    offsets: Vec<usize>,
}

fn monotone_tables(k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0, 1];
    }
    let prev = monotone_tables(k - 1);
    let shift = 1u32 << (k - 1);
    let mut out = Vec::new();
    for &hi in &prev {
        for &lo in &prev {
            if lo & !hi == 0 {
                out.push(lo | hi << shift);
            }
        }
    }
    out
}

fn build(n: usize) -> Enumeration {
    let mut masks: Vec<u64> = monotone_tables(n)
        .into_iter()
        // drop the constant-true table (which contains the empty signature)
        // and the constant-false one
        .filter(|&t| t & 1 == 0 && t != 0)
        .map(|t| t >> 1)
        .collect();
    masks.sort_unstable_by_key(|&m| (m.count_ones(), m));
    let parts = part_count(n);
    let mut offsets = vec![0usize; parts + 1];
    for (c, o) in offsets.iter_mut().enumerate().skip(1) {
        *o = masks.partition_point(|m| (m.count_ones() as usize) <= c);
    }
    Enumeration { masks, offsets }
}

fn cached(n: usize) -> Result<&'static Enumeration> {
    static CACHE: [OnceLock<Enumeration>; MAX_ENUMERATION_CLASSES + 1] =
        [const { OnceLock::new() }; MAX_ENUMERATION_CLASSES + 1];
    if n > MAX_ENUMERATION_CLASSES {
        return Err(Error::EnumerationTooLarge {
            n,
            max: MAX_ENUMERATION_CLASSES,
        });
    }
    Ok(CACHE[n].get_or_init(|| build(n)))
}

fn to_elements(n: usize, masks: &[u64]) -> Vec<HyperElement> {
    masks
        .iter()
        .map(|&m| HyperElement::from_parts_unchecked(n, m as u128))
        .collect()
}

/// Every element of the hyper-power set, ordered by DSm cardinality then part
/// mask.
pub fn enumerate_hyper(frame: &Frame) -> Result<Vec<HyperElement>> {
    let e = cached(frame.len())?;
    Ok(to_elements(frame.len(), &e.masks))
}

/// Elements whose DSm cardinality lies in the window. May be empty.
pub fn elements_in_window(frame: &Frame, w: &SpecificityWindow) -> Result<Vec<HyperElement>> {
    let n = frame.len();
    let e = cached(n)?;
    w.check_frame(n)?;
    let lo = e.offsets[w.min - 1];
    let hi = e.offsets[w.max];
    Ok(to_elements(n, &e.masks[lo..hi]))
}

/// Element counts per DSm cardinality: entry `c - 1` counts cardinality `c`.
pub fn cardinality_histogram(n: usize) -> Result<Vec<usize>> {
    let e = cached(n)?;
    Ok(e.offsets.windows(2).map(|w| w[1] - w[0]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Element;

    fn frame(n: usize) -> Frame {
        Frame::new((1..=n).map(|i| format!("C{i}"))).unwrap()
    }

    #[test]
    fn two_class_lattice() {
        let f = frame(2);
        let all = enumerate_hyper(&f).unwrap();
        let names: Vec<String> = all.iter().map(|x| x.format(&f)).collect();
        assert_eq!(names, ["C1&C2", "C1", "C2", "C1|C2"]);
        assert_eq!(cardinality_histogram(2).unwrap(), [1, 2, 1]);
    }

    #[test]
    fn windows_on_three_classes() {
        let f = frame(3);
        let w2 = elements_in_window(&f, &SpecificityWindow::new(2, 2).unwrap()).unwrap();
        let names: Vec<String> = w2.iter().map(|x| x.format(&f)).collect();
        assert_eq!(names, ["C1&C2", "C1&C3", "C2&C3"]);

        let w4 = elements_in_window(&f, &SpecificityWindow::new(4, 4).unwrap()).unwrap();
        let mut names: Vec<String> = w4.iter().map(|x| x.format(&f)).collect();
        names.sort();
        assert_eq!(names, ["C1", "C1&C2|C1&C3|C2&C3", "C2", "C3"]);

        let all = elements_in_window(&f, &SpecificityWindow::new(1, 7).unwrap()).unwrap();
        assert_eq!(all, enumerate_hyper(&f).unwrap());
    }

    #[test]
    fn window_validation() {
        assert!(SpecificityWindow::new(0, 2).is_err());
        assert!(SpecificityWindow::new(3, 2).is_err());
        let f = frame(3);
        assert!(elements_in_window(&f, &SpecificityWindow::new(2, 8).unwrap()).is_err());
    }

    #[test]
    fn too_large_frames_are_refused() {
        assert!(matches!(
            enumerate_hyper(&frame(7)),
            Err(Error::EnumerationTooLarge { n: 7, max: 6 })
        ));
        assert!(cardinality_histogram(7).is_err());
    }

    #[test]
    fn window_serde_as_pair() {
        let w: SpecificityWindow = serde_json::from_str("[2,6]").unwrap();
        assert_eq!((w.min(), w.max()), (2, 6));
        assert_eq!(serde_json::to_string(&w).unwrap(), "[2,6]");
        assert!(serde_json::from_str::<SpecificityWindow>("[3,1]").is_err());
    }
}

use std::collections::BTreeMap;

use super::MassFunction;
use crate::error::{Error, Result};
use crate::lattice::{Element, Frame, HyperElement, PowerElement};

/// Unnormalized conjunctive combination with its conflict.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinationReport {
    /// May carry mass on the empty element.
    pub result: MassFunction<PowerElement>,
    /// Mass on ∅ before normalization.
    pub conflict: f64,
}

/// Sparse product-sum over focal tuples, folding one source at a time.
fn conjunctive<E: Element>(ms: &[MassFunction<E>]) -> Result<(Frame, BTreeMap<E, f64>)> {
    let (first, rest) = ms
        .split_first()
        .ok_or_else(|| Error::InvalidMass("no sources to combine".into()))?;
    let frame = first.frame().clone();
    let mut acc: BTreeMap<E, f64> = first.focal().iter().copied().collect();
    for m in rest {
        frame.check_same(m.frame())?;
        let mut next = BTreeMap::new();
        for (x, a) in &acc {
            for (y, b) in m.focal() {
                *next.entry(x.meet(y)).or_insert(0.0) += a * b;
            }
        }
        acc = next;
    }
    Ok((frame, acc))
}

pub fn conjunctive_combine(ms: &[MassFunction<PowerElement>]) -> Result<CombinationReport> {
    let (frame, acc) = conjunctive(ms)?;
    let conflict = acc
        .iter()
        .filter(|(x, _)| x.is_empty())
        .map(|(_, &m)| m)
        .sum();
    Ok(CombinationReport {
        result: MassFunction::from_parts_unchecked(frame, acc),
        conflict,
    })
}

/// Normalized conjunctive rule. Fails when the sources are in total conflict.
pub fn dempster(ms: &[MassFunction<PowerElement>]) -> Result<MassFunction<PowerElement>> {
    let (frame, mut acc) = conjunctive(ms)?;
    acc.retain(|x, _| !x.is_empty());
    let kept: f64 = acc.values().sum();
    if kept <= f64::MIN_POSITIVE {
        return Err(Error::TotalConflict);
    }
    for m in acc.values_mut() {
        *m /= kept;
    }
    Ok(MassFunction::from_parts_unchecked(frame, acc))
}

/// Conjunctive combination in the free hyper-power set. Intersections are
/// kept as focal elements and are never empty, so there is no conflict.
pub fn conjunctive_combine_hyper(
    ms: &[MassFunction<HyperElement>],
) -> Result<MassFunction<HyperElement>> {
    let (frame, acc) = conjunctive(ms)?;
    Ok(MassFunction::from_parts_unchecked(frame, acc))
}

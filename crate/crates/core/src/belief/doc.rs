//! JSON document form of a mass function:
//! `{"frame":[labels], "algebra":"power"|"hyper", "focal":[{"element":..., "mass":...}]}`.

use serde::{Deserialize, Serialize};

use super::MassFunction;
use crate::error::{Error, Result};
use crate::io::Real17;
use crate::lattice::{Algebra, Element, Frame, HyperElement, PowerElement};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FocalDoc {
    pub element: String,
    pub mass: Real17,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassDoc {
    pub frame: Vec<String>,
    pub algebra: Algebra,
    pub focal: Vec<FocalDoc>,
}

impl<E: Element> MassFunction<E> {
    pub fn to_doc(&self) -> MassDoc {
        MassDoc {
            frame: self.frame.labels().to_vec(),
            algebra: E::ALGEBRA,
            focal: self
                .focal
                .iter()
                .map(|(x, m)| FocalDoc {
                    element: x.format(&self.frame),
                    mass: Real17(*m),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &MassDoc) -> Result<Self> {
        if doc.algebra != E::ALGEBRA {
            return Err(Error::InvalidMass(format!(
                "expected a {} mass function, found {}",
                E::ALGEBRA.as_str(),
                doc.algebra.as_str()
            )));
        }
        let frame = Frame::new(doc.frame.iter().cloned())?;
        let focal = doc
            .focal
            .iter()
            .map(|f| Ok((E::parse(&frame, &f.element)?, f.mass.0)))
            .collect::<Result<Vec<_>>>()?;
        MassFunction::new(frame, focal)
    }
}

/// Mass function of either algebra, as read from a document.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMass {
    Power(MassFunction<PowerElement>),
    Hyper(MassFunction<HyperElement>),
}

impl AnyMass {
    pub fn from_doc(doc: &MassDoc) -> Result<Self> {
        Ok(match doc.algebra {
            Algebra::Power => AnyMass::Power(MassFunction::from_doc(doc)?),
            Algebra::Hyper => AnyMass::Hyper(MassFunction::from_doc(doc)?),
        })
    }

    pub fn to_doc(&self) -> MassDoc {
        match self {
            AnyMass::Power(m) => m.to_doc(),
            AnyMass::Hyper(m) => m.to_doc(),
        }
    }

    pub fn frame(&self) -> &Frame {
        match self {
            AnyMass::Power(m) => m.frame(),
            AnyMass::Hyper(m) => m.frame(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_round_trip() {
        let f = Frame::new(["sand", "silt", "rock"]).unwrap();
        let m = MassFunction::<HyperElement>::from_labels(
            f,
            &[("sand&silt", 0.1), ("rock", 0.2), ("rock|sand|silt", 0.7)],
        )
        .unwrap();
        let text = serde_json::to_string(&m.to_doc()).unwrap();
        assert!(text.contains("\"algebra\":\"hyper\""));
        assert!(text.contains("\"element\":\"sand&silt\""));
        let doc: MassDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(AnyMass::from_doc(&doc).unwrap(), AnyMass::Hyper(m));
    }

    #[test]
    fn algebra_mismatch_is_rejected() {
        let doc: MassDoc = serde_json::from_str(
            r#"{"frame":["a","b"],"algebra":"power","focal":[{"element":"a","mass":1.0}]}"#,
        )
        .unwrap();
        assert!(MassFunction::<HyperElement>::from_doc(&doc).is_err());
        assert!(MassFunction::<PowerElement>::from_doc(&doc).is_ok());
    }
}

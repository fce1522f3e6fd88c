//! Belief-function decision with reject over the power set and the free
//! hyper-power set of a frame of discernment, together with a textured-image
//! classification harness (co-occurrence features, one-vs-one scores, mass
//! functions, fusion, decision).

pub mod belief;
pub mod decision;
pub mod error;
pub mod fusion;
pub mod harness;
pub mod io;
pub mod lattice;
pub mod texture;

pub use error::{Error, Result};

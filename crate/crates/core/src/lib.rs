//! Multi-tape automata, Post correspondence reductions and the exact affine
//! graph-directed IFS attached to an automaton.
//!
//! The pipeline runs PCP → prefix-PCP → 2-tape, 3-state automata → 2-D
//! affine GIFS. Questions that are undecidable in general (universality,
//! universal prefixes, interior of attractors) are answered with sound
//! three-valued [`mta::Verdict3`] values: `Yes` and `No` always come with a
//! checkable witness, everything else is `Unknown` together with the bounds
//! that were tried.

pub mod error;
pub mod gifs;
pub mod io;
pub mod mta;
pub mod pcp;
pub mod rational;
pub mod reductions;
pub mod words;

pub use error::{Error, Result};

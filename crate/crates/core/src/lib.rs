//! Toric Schubert varieties of finite simple type.
//!
//! A distinct-letter word in the simple reflections determines an edge-labeled
//! digraph, a Bott fan and a cohomology ring. This crate builds all three,
//! tests the Fano conditions, enumerates isomorphism classes of Coxeter-element
//! varieties, and reconstructs the digraph from the ring alone.

pub mod bott_fan;
pub mod cohomology;
pub mod digraph;
pub mod enumeration;
mod error;
pub mod gf2;
pub mod linalg;
pub mod oracles;
pub mod recovery;
pub mod root_data;
pub mod selfcheck;
pub mod weyl_words;

pub use error::{Error, Result};

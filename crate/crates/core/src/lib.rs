//! Sign-symmetric matrices, their second compounds, and the peripheral
//! spectrum results that follow from sign symmetry of both.
//!
//! Indices are 0-based throughout the library. Serialized partitions and
//! relations are 1-based.

pub mod approx;
pub mod compound;
pub mod error;
pub mod io;
pub mod matrix;
pub mod pattern;
pub mod relation;
pub mod signsym;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::{Matrix, Permutation, SignatureMatrix};
pub use relation::RelationSet;
pub use signsym::{SignPartition, ZeroBand};

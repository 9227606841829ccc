//! Exact K-theory and Chern-class calculus on smooth projective surfaces,
//! with tooling for Künneth decompositions of the diagonal.

pub mod arith;
pub mod chern;
pub mod cli;
pub mod cohomology;
pub mod diagonal;
pub mod error;
pub mod formal;
pub mod ktheory;
pub mod linalg;
pub mod partition;
pub mod poly;
pub mod ring;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};

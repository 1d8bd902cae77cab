//! Exact-arithmetic workbench for convolution L∞-algebras, the cylinder construction relating
//! deformation complexes of homotopy algebras, and the combinatorics of labelled planar trees.

pub mod cli;
pub mod convolution;
pub mod cooperad;
pub mod cylinder;
pub mod error;
pub mod linalg;
pub mod mapping_cylinder;
pub mod random;
pub mod report;
pub mod samples;
pub mod scenario;
pub mod suites;
pub mod trees;

pub use error::{Error, Result};

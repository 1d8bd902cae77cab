//! Exact graded linear algebra over ℚ.

mod coinvariants;
mod graded;
mod koszul;
mod matrix;
mod scalar;
mod sparse;

pub use coinvariants::{tensor_and_coinvariants, Coinvariants, LazyCoinvariants, SymmetricAction};
pub use graded::{
    chain_map_failure, check_d_squared, cohomology, compose, desuspend, hom_complex, induced_cohomology_map,
    induced_from, is_quasi_iso, suspend, Cohomology, CohomologyPiece, Complex, GradedMap, GradedSpace, InducedMap,
};
pub use koszul::{koszul_sign, permutation_sign};
pub use matrix::Matrix;
pub use scalar::Scalar;
pub use sparse::SparseVec;

//! charkit: exact character tables of small finite groups, class-function
//! algebra, and a verification harness for derived-length bounds on the
//! kernels of product-character constituents.
//!
//! Character values are computed exactly: class matrices are split over a
//! prime field GF(p) with p ≡ 1 (mod exponent) and p > 2|G|, and every value
//! is lifted to an integer vector of eigenvalue multiplicities over the e-th
//! roots of unity.

pub mod chartab;
pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod group;
pub mod io;
pub mod lab;
pub mod modp;
pub mod orbit;
pub mod perm;
pub mod report;

pub use chartab::{CharacterTable, ClassFunction, Decomposition, TableDump};
pub use error::{Error, Result};
pub use group::{derived_length_of_quotient, Classification, Group, Subgroup, DEFAULT_ORDER_CAP};
pub use lab::{Chain, ExtremeTriple, Lab, TheoremSet, VerificationRecord};
pub use orbit::{orbit_count, OrbitSummary, VectorAction};
pub use perm::Permutation;

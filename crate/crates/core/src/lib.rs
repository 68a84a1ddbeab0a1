//! Kasami-type binary cyclic codes of relative dimension `2k+1`.
//!
//! The crate builds the code family over the tower
//! `GF(2) ⊂ GF(2^e) ⊂ GF(2^n) ⊂ GF(2^m)` (with `m = 2n`, `e = gcd(n, d) = gcd(m, d)`),
//! computes its DC-component spectrum both from closed formulas and by
//! exhaustive enumeration, and checks the supporting q-analog identities and
//! bilinear-system solution counts exactly.

pub mod combinatorics;
pub mod error;
pub mod field;
pub mod forms;
pub mod output;
pub mod parallel;
pub mod sequences;
pub mod solutions;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};

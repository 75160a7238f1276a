//! Exact computations with the Pauli fine grading of `gl(n,C)` and `sl(n,C)`.
//!
//! Scalars live in the cyclotomic integers `Z[ζ_{2n}]`, so every identity is
//! checked by exact equality. The crate covers the generalized Pauli group,
//! the grading and its structure constants, the group `SL(2,Z_n)` with its
//! determinant `−1` coset, explicit matrix lifts of normalizer elements, and
//! the Jacobi equation systems of graded contractions.

pub mod contractions;
pub mod cyclotomic;
pub mod error;
pub mod exec;
pub mod grading;
pub mod normalizer;
pub mod pauli;
pub mod sl2zn;
pub mod verify;

pub use cyclotomic::{CyclotomicScalar, UnitRoot};
pub use error::{Error, Result};
pub use exec::Execution;
pub use grading::{AlgebraMode, GradingIndex};
pub use normalizer::{AutomorphismLift, IndexAction};
pub use pauli::{CycMatrix, PauliElement};
pub use sl2zn::{GroupVariant, Mat2Zn};

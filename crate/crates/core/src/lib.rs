//! Exact toolkit for block-theoretic Cartan matrix computations.
//!
//! The crate is organized bottom-up:
//!
//! * [`exactlin`]: integer and rational matrices, Smith/Hermite forms, kernels;
//! * [`qform`]: positive-definite forms, exact minima, congruence, weighted bounds;
//! * [`embed`]: integral factorizations `C = Q^T Q`;
//! * [`paction`]: finite abelian p-groups with coprime automorphism actions;
//! * [`blockcalc`]: subsection inventories, Cartan matrix enumeration and the
//!   `k(B) <= |D|` criteria built on the modules above.
//!
//! The linear algebra is generic over the scalar; the aliases below fix the
//! exact types used by the higher layers.

pub mod blockcalc;
pub mod embed;
pub mod error;
pub mod exactlin;
pub mod io;
pub mod paction;
pub mod qform;

pub use error::{Error, Result};

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Exact rational.
pub type Rat = num_rational::BigRational;
/// Dense matrix of arbitrary-precision integers.
pub type IntMatrix = exactlin::Matrix<Int>;
/// Dense matrix of exact rationals.
pub type RatMatrix = exactlin::Matrix<Rat>;
/// Dense matrix of machine integers, used inside bounded searches.
pub type SmallIntMatrix = exactlin::Matrix<i64>;
/// Dense matrix of doubles; never used in a decision path.
pub type FloatMatrix = exactlin::Matrix<f64>;

pub use blockcalc::{BlockScenario, DecompositionSet, SubsectionDatum};
pub use embed::Embedding;
pub use exactlin::SmithForm;
pub use paction::{AbelianPGroup, ActionGroup, ActionMatrix};
pub use qform::{FormMinimum, GramForm};

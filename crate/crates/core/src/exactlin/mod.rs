//! Exact integer and rational matrix arithmetic.
//!
//! Everything here is generic over the entry type. The integer algorithms
//! (Smith and Hermite forms, kernels) need a Euclidean scalar such as
//! `BigInt` or `i64`; inverses and `LDL^T` need a field such as `BigRational`
//! or `f64`.

mod det;
mod matrix;
mod normal_form;

pub use det::{adjugate, det, inverse, is_positive_definite, ldl, rank, Ldl};
pub use matrix::{convert, Field, Matrix, Scalar};
pub use normal_form::{
    elementary_divisors, hermite_with_transform, hnf, integer_rank, kernel_basis, row_lattice_basis, snf,
    EuclideanScalar, HermiteForm, SmithForm,
};

/// `|det U| = 1` check for square integer matrices.
pub fn is_unimodular<T: EuclideanScalar>(u: &Matrix<T>) -> bool {
    u.is_square() && det(u).is_ok_and(|d| d.abs().is_one())
}

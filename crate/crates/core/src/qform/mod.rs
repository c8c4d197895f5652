//! Positive-definite quadratic forms over the rationals.
//!
//! A [`GramForm`] `G` represents `q(x) = x G x^T` on integer row vectors.
//! Minima and representation numbers are computed by exact enumeration;
//! floating point never enters a decision.

mod congruence;
mod enumerate;
mod lll;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

pub use congruence::{
    congruent, congruent_with_budget, Congruence, Distinction, DEFAULT_CONGRUENCE_BUDGET, MAX_CONGRUENCE_DIM,
};
pub use enumerate::{short_vectors, ShortVector};
pub use lll::lll_gram;

use crate::error::{Error, Result};
use crate::exactlin;
use crate::{IntMatrix, RatMatrix};

/// Largest dimension accepted by the exact minimum computation.
pub const MAX_MINIMUM_DIM: usize = 12;

/// Default node budget for short-vector enumeration.
pub const DEFAULT_ENUM_BUDGET: u64 = 50_000_000;

/// Symmetric positive-definite matrix with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramForm {
    entries: RatMatrix,
}

impl GramForm {
    /// Validates symmetry and positive definiteness (all leading minors > 0).
    pub fn new(entries: RatMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare {
                rows: entries.rows(),
                cols: entries.cols(),
            });
        }
        if !entries.is_symmetric() {
            return Err(Error::validation("Gram matrix is not symmetric"));
        }
        if !exactlin::is_positive_definite(&entries) {
            return Err(Error::validation("Gram matrix is not positive definite"));
        }
        Ok(GramForm { entries })
    }

    pub fn from_int(m: &IntMatrix) -> Result<Self> {
        GramForm::new(m.to_rational())
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn value(&self, x: &[BigInt]) -> BigRational {
        let xr: Vec<BigRational> = x.iter().cloned().map(BigRational::from_integer).collect();
        self.entries.quadratic(&xr)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.is_integral()
    }

    pub fn integral_matrix(&self) -> Option<IntMatrix> {
        self.entries.to_integer()
    }

    pub fn det(&self) -> BigRational {
        exactlin::det(&self.entries).expect("square")
    }

    pub fn inverse(&self) -> GramForm {
        let inv = exactlin::inverse(&self.entries).expect("positive definite forms are invertible");
        GramForm { entries: inv }
    }

    /// `s * G` for a positive rational `s`.
    pub fn scaled(&self, s: &BigRational) -> Result<GramForm> {
        if !s.is_positive() {
            return Err(Error::validation("scale factor must be positive"));
        }
        Ok(GramForm {
            entries: self.entries.scale(s),
        })
    }

    /// `S G S^T` for a square integer matrix `S` of full rank.
    pub fn transform(&self, s: &IntMatrix) -> Result<GramForm> {
        let g = s.to_rational().congruence(&self.entries)?;
        GramForm::new(g)
    }

    pub fn kronecker(&self, other: &GramForm) -> GramForm {
        GramForm {
            entries: self.entries.kronecker(&other.entries),
        }
    }
}

/// Minimum of a form over nonzero integer vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormMinimum {
    pub value: BigRational,
    /// All minimal vectors, one per `±x` pair, sign-normalized and sorted.
    pub vectors: Vec<Vec<BigInt>>,
}

/// Exact minimum `min { x G x^T : 0 != x in Z^n }`.
pub fn minimum(g: &GramForm) -> Result<FormMinimum> {
    minimum_with_budget(g, DEFAULT_ENUM_BUDGET)
}

pub fn minimum_with_budget(g: &GramForm, budget: u64) -> Result<FormMinimum> {
    if g.dim() > MAX_MINIMUM_DIM {
        return Err(Error::resource("form dimension", MAX_MINIMUM_DIM as u64));
    }
    let (reduced, _) = lll_gram(g.entries());
    let bound = (0..reduced.rows())
        .map(|i| reduced[(i, i)].clone())
        .min()
        .expect("nonempty form");
    let vecs = short_vectors(g.entries(), &bound, budget)?;
    let value = vecs
        .iter()
        .map(|v| v.value.clone())
        .min()
        .expect("a basis vector attains the bound");
    let vectors = vecs
        .into_iter()
        .filter(|v| v.value == value)
        .map(|v| v.coords)
        .collect();
    Ok(FormMinimum { value, vectors })
}

/// Representation numbers `#{x : x G x^T = m}` for `1 <= m <= bound`.
///
/// Counts both `x` and `-x`; norms with no vectors are omitted.
pub fn theta_prefix(g: &GramForm, bound: &BigInt) -> Result<Vec<(BigInt, u64)>> {
    theta_prefix_with_budget(g, bound, DEFAULT_ENUM_BUDGET)
}

pub fn theta_prefix_with_budget(g: &GramForm, bound: &BigInt, budget: u64) -> Result<Vec<(BigInt, u64)>> {
    if !g.is_integral() {
        return Err(Error::validation("representation numbers need an integral form"));
    }
    if !bound.is_positive() {
        return Ok(Vec::new());
    }
    let vecs = short_vectors(g.entries(), &BigRational::from_integer(bound.clone()), budget)?;
    let mut counts: BTreeMap<BigInt, u64> = BTreeMap::new();
    for v in vecs {
        *counts.entry(v.value.to_integer()).or_default() += 2;
    }
    Ok(counts.into_iter().collect())
}

/// Entrywise pairing `sum_ij W_ij C_ij` used as an upper bound for `k(B)`.
///
/// The weight must define an integral quadratic form: integral diagonal and
/// `2W` integral. `C` must be symmetric positive definite of the same size.
pub fn weighted_bound(w: &GramForm, c: &IntMatrix) -> Result<BigRational> {
    let we = w.entries();
    let n = w.dim();
    if c.shape() != (n, n) {
        return Err(Error::shape(format!(
            "weight is {n}x{n} but Cartan matrix is {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    for i in 0..n {
        if !we[(i, i)].is_integer() {
            return Err(Error::validation(format!("weight diagonal entry {i} is not integral")));
        }
        for j in 0..n {
            if !(&we[(i, j)] * &two).is_integer() {
                return Err(Error::validation(format!(
                    "weight entry ({i},{j}) is not half-integral"
                )));
            }
        }
    }
    GramForm::from_int(c).map_err(|e| match e {
        Error::Validation(msg) => Error::validation(format!("Cartan matrix: {msg}")),
        other => other,
    })?;
    we.frobenius_dot(&c.to_rational())
}

/// Integer matrix `scale * G` when it is integral.
pub fn scaled_integral(g: &GramForm) -> (IntMatrix, BigInt) {
    let l = g.entries().denominator_lcm();
    let m = g
        .entries()
        .scale(&BigRational::from_integer(l.clone()))
        .to_integer()
        .expect("scaled by the denominator lcm");
    (m, l)
}

/// Product of two integers as a rational, used when building `|D| C^{-1}`.
pub fn scaled_inverse(c: &IntMatrix, factor: &BigInt) -> Result<GramForm> {
    let g = GramForm::from_int(c)?;
    g.inverse().scaled(&BigRational::from_integer(factor.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Matrix;
    use num_traits::One;

    fn int(rows: &[Vec<i64>]) -> IntMatrix {
        Matrix::from_i64_rows(rows).unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rejects_invalid_forms() {
        assert!(GramForm::from_int(&int(&[vec![1, 2], vec![2, 1]])).is_err());
        assert!(GramForm::from_int(&int(&[vec![1, 0], vec![1, 1]])).is_err());
        assert!(GramForm::from_int(&int(&[vec![1, 0, 0]])).is_err());
    }

    #[test]
    fn identity_minimum() {
        let g = GramForm::from_int(&Matrix::identity(4)).unwrap();
        let m = minimum(&g).unwrap();
        assert_eq!(m.value, rat(1));
        assert_eq!(m.vectors.len(), 4);
    }

    #[test]
    fn dimension_cap() {
        let g = GramForm::from_int(&Matrix::identity(13)).unwrap();
        assert!(minimum(&g).unwrap_err().is_resource_limit());
    }

    #[test]
    fn theta_examples() {
        let g = GramForm::from_int(&Matrix::identity(2)).unwrap();
        let t = theta_prefix(&g, &BigInt::from(2)).unwrap();
        assert_eq!(t, vec![(BigInt::from(1), 4), (BigInt::from(2), 4)]);

        let m = Matrix::constant_plus_identity(3, BigInt::one(), BigInt::one());
        let g = GramForm::from_int(&m).unwrap();
        // Twelve roots: the six vectors e_i and e_i - e_j, with signs.
        assert_eq!(theta_prefix(&g, &BigInt::from(2)).unwrap(), vec![(BigInt::from(2), 12)]);
        assert!(theta_prefix(&g, &BigInt::from(0)).unwrap().is_empty());
    }

    #[test]
    fn theta_needs_integral() {
        let g = GramForm::new(Matrix::identity(2).scale(&BigRational::new(1.into(), 2.into()))).unwrap();
        assert!(theta_prefix(&g, &BigInt::from(1)).is_err());
    }

    #[test]
    fn weighted_bound_identity_is_trace() {
        let w = GramForm::from_int(&Matrix::identity(2)).unwrap();
        let c = int(&[vec![5, 2], vec![2, 3]]);
        assert_eq!(weighted_bound(&w, &c).unwrap(), rat(8));
    }

    #[test]
    fn weighted_bound_validation() {
        let quarter = GramForm::new(Matrix::identity(2).scale(&BigRational::new(1.into(), 4.into()))).unwrap();
        let c = int(&[vec![2, 1], vec![1, 2]]);
        assert!(matches!(weighted_bound(&quarter, &c), Err(Error::Validation(_))));
        let w = GramForm::from_int(&Matrix::identity(2)).unwrap();
        let bad_c = int(&[vec![1, 2], vec![2, 1]]);
        assert!(matches!(weighted_bound(&w, &bad_c), Err(Error::Validation(_))));
        assert!(matches!(weighted_bound(&w, &Matrix::identity(3)), Err(Error::Shape(_))));
    }

    #[test]
    fn scaled_inverse_of_ones_plus_identity() {
        let m = Matrix::constant_plus_identity(3, BigInt::one(), BigInt::one());
        let g = scaled_inverse(&m, &BigInt::from(4)).unwrap();
        let expected = Matrix::constant_plus_identity(3, BigInt::from(-1), BigInt::from(4));
        assert_eq!(g.integral_matrix().unwrap(), expected);
        assert_eq!(minimum(&g).unwrap().value, rat(3));
    }
}

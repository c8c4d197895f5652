//! Exact Fincke–Pohst enumeration of short lattice vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::lll::lll_gram;
use crate::error::{Error, Result};
use crate::exactlin::{ldl, Matrix};

/// A nonzero integer vector together with its form value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortVector {
    pub coords: Vec<BigInt>,
    pub value: BigRational,
}

/// `floor(sqrt(s))` for a nonnegative rational.
fn floor_sqrt(s: &BigRational) -> BigInt {
    if !s.is_positive() {
        return BigInt::zero();
    }
    let prod = s.numer() * s.denom();
    prod.sqrt() / s.denom()
}

/// Flips `v` so that its first nonzero coordinate is positive.
pub(crate) fn normalize_sign(v: &mut [BigInt]) {
    if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
}

struct Enumerator<'a> {
    upper: &'a Matrix<BigRational>,
    diag: &'a [BigRational],
    bound: &'a BigRational,
    budget: u64,
    nodes: u64,
    x: Vec<BigInt>,
    out: Vec<(Vec<BigInt>, BigRational)>,
}

impl Enumerator<'_> {
    /// Level `i` with `used` the form value contributed by coordinates `> i`.
    fn descend(&mut self, i: usize, used: BigRational, higher_zero: bool) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::resource("short-vector enumeration nodes", self.budget));
        }
        let n = self.x.len();
        let remaining = self.bound - &used;
        if remaining.is_negative() {
            return Ok(());
        }
        let mut center = BigRational::zero();
        for j in i + 1..n {
            if !Zero::is_zero(&self.x[j]) {
                center -= &self.upper[(i, j)] * BigRational::from_integer(self.x[j].clone());
            }
        }
        let d = &self.diag[i];
        let radius = floor_sqrt(&(&remaining / d));
        let base = center.floor().to_integer();
        let mut lo: BigInt = &base - &radius - 1u32;
        let hi: BigInt = &base + &radius + 2u32;
        if higher_zero && lo.is_negative() {
            lo = BigInt::zero();
        }
        let mut y = lo;
        while y <= hi {
            let diff = BigRational::from_integer(y.clone()) - &center;
            let contrib = &diff * &diff * d;
            if contrib <= remaining {
                self.x[i] = y.clone();
                let value = &used + &contrib;
                if i == 0 {
                    if !(higher_zero && y.is_zero()) {
                        self.out.push((self.x.clone(), value));
                    }
                } else {
                    self.descend(i - 1, value, higher_zero && y.is_zero())?;
                }
            }
            y += 1u32;
        }
        self.x[i] = BigInt::zero();
        Ok(())
    }
}

/// All nonzero `x` with `x G x^T <= bound`, one per `±x` pair.
///
/// Vectors are sign-normalized (first nonzero coordinate positive) and
/// sorted by value, then lexicographically. The search is exact: the basis is
/// LLL-reduced in rational arithmetic and enumerated over an exact `LDL^T`.
pub fn short_vectors(g: &Matrix<BigRational>, bound: &BigRational, budget: u64) -> Result<Vec<ShortVector>> {
    let n = g.rows();
    if n == 0 || !bound.is_positive() {
        return Ok(Vec::new());
    }
    let (reduced, t) = lll_gram(g);
    let f = ldl(&reduced)?;
    if f.diag.iter().any(|d| !d.is_positive()) {
        return Err(Error::validation("form is not positive definite"));
    }
    let mut e = Enumerator {
        upper: &f.upper,
        diag: &f.diag,
        bound,
        budget,
        nodes: 0,
        x: vec![BigInt::zero(); n],
        out: Vec::new(),
    };
    e.descend(n - 1, BigRational::zero(), true)?;
    let mut out: Vec<ShortVector> = e
        .out
        .into_iter()
        .map(|(y, value)| {
            let mut coords = t.left_apply(&y);
            normalize_sign(&mut coords);
            ShortVector { coords, value }
        })
        .collect();
    out.sort_by(|a, b| a.value.cmp(&b.value).then_with(|| a.coords.cmp(&b.coords)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn floor_sqrt_exact() {
        assert_eq!(floor_sqrt(&rat(16)), BigInt::from(4));
        assert_eq!(floor_sqrt(&rat(15)), BigInt::from(3));
        assert_eq!(floor_sqrt(&BigRational::new(9.into(), 4.into())), BigInt::from(1));
        assert_eq!(floor_sqrt(&BigRational::new(1.into(), 5.into())), BigInt::from(0));
    }

    #[test]
    fn identity_shells() {
        let g = Matrix::<BigInt>::identity(2).to_rational();
        let v = short_vectors(&g, &rat(2), 1 << 20).unwrap();
        let coords: Vec<Vec<i64>> = v
            .iter()
            .map(|s| s.coords.iter().map(|c| i64::try_from(c).unwrap()).collect())
            .collect();
        assert_eq!(coords, vec![vec![0, 1], vec![1, 0], vec![1, -1], vec![1, 1]]);
    }

    #[test]
    fn budget_is_enforced() {
        let g = Matrix::<BigInt>::identity(6).to_rational();
        let err = short_vectors(&g, &rat(6), 10).unwrap_err();
        assert!(err.is_resource_limit());
    }
}

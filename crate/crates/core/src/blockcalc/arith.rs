//! Closed-form `k(B)` / `l(B)` arithmetic and the minimum criterion.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::qform::{minimum_with_budget, scaled_inverse, DEFAULT_ENUM_BUDGET};
use crate::IntMatrix;

/// `z ((m - 1) / e + delta_ij)`, the `e x e` Cartan matrix of a free action.
pub fn free_case_cartan(z_part: u64, m: u64, e: u64) -> Result<IntMatrix> {
    if e == 0 || m == 0 {
        return Err(Error::precondition("m and e must be positive"));
    }
    if !(m - 1).is_multiple_of(e) {
        return Err(Error::precondition(format!(
            "e = {e} does not divide m - 1 = {}",
            m - 1
        )));
    }
    let z = BigInt::from(z_part);
    let off = BigInt::from((m - 1) / e) * &z;
    Ok(Matrix::constant_plus_identity(e as usize, off, z))
}

/// Outcome of the criterion `min { x |D| C^{-1} x^T } >= l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KbCheck {
    pub minimum: BigRational,
    pub l: u64,
    /// `minimum >= l`, which licenses `k(B) <= |D|`.
    pub holds: bool,
}

pub fn kb_check_min(c: &IntMatrix, d_order: u64, l: u64) -> Result<KbCheck> {
    kb_check_min_with_budget(c, d_order, l, DEFAULT_ENUM_BUDGET)
}

pub fn kb_check_min_with_budget(c: &IntMatrix, d_order: u64, l: u64, budget: u64) -> Result<KbCheck> {
    if c.rows() as u64 != l || !c.is_square() {
        return Err(Error::shape(format!(
            "Cartan matrix is {}x{} but l = {l}",
            c.rows(),
            c.cols()
        )));
    }
    let g = scaled_inverse(c, &BigInt::from(d_order))?;
    let minimum = minimum_with_budget(&g, budget)?.value;
    let holds = minimum >= BigRational::from_integer(l.into());
    Ok(KbCheck { minimum, l, holds })
}

fn check_two_power(d_order: u64) -> Result<()> {
    if !d_order.is_power_of_two() || d_order < 2 {
        return Err(Error::precondition(format!("|D| = {d_order} is not a power of 2")));
    }
    Ok(())
}

/// All `l in 1..=e` with `(|D| - 1) / e + l = |D| (mod 8)`.
pub fn l_candidates_mod8(d_order: u64, e: u64) -> Result<Vec<u64>> {
    check_two_power(d_order)?;
    if e == 0 || e.is_multiple_of(2) {
        return Err(Error::precondition(format!("e = {e} must be odd")));
    }
    if !(d_order - 1).is_multiple_of(e) {
        return Err(Error::precondition(format!("e = {e} does not divide |D| - 1")));
    }
    let base = (d_order - 1) / e;
    Ok((1..=e).filter(|l| (base + l) % 8 == d_order % 8).collect())
}

/// `l(B)` forced by the mod-8 congruence in the free case.
///
/// Returns `e` when it is among the solutions; when `e > 8` this resolves
/// the two-fold ambiguity in favour of `l = e`, which the free action forces.
pub fn l_from_mod8(d_order: u64, e: u64) -> Result<u64> {
    let sols = l_candidates_mod8(d_order, e)?;
    if sols.contains(&e) {
        Ok(e)
    } else if sols.is_empty() {
        Err(Error::Inconsistent(format!(
            "no l in 1..={e} satisfies the congruence for |D| = {d_order}"
        )))
    } else {
        Err(Error::Inconsistent(format!(
            "congruence allows {sols:?} but not l = e = {e}"
        )))
    }
}

/// Both sides of `(|D|-1)/e + l <= (|D|-1)/l + l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IbrCheck {
    pub k_value: BigRational,
    pub upper: BigRational,
    /// Equivalent to `l <= e`.
    pub holds: bool,
}

pub fn ibr_bound_check(d_order: u64, e: u64, l: u64) -> Result<IbrCheck> {
    if e == 0 || l == 0 || d_order == 0 {
        return Err(Error::precondition("|D|, e and l must be positive"));
    }
    if !(d_order - 1).is_multiple_of(e) {
        return Err(Error::precondition(format!("e = {e} does not divide |D| - 1")));
    }
    let r = |n: u64, d: u64| BigRational::new(n.into(), d.into());
    let k_value = r(d_order - 1, e) + r(l, 1);
    let upper = r(d_order - 1, l) + r(l, 1);
    Ok(IbrCheck {
        holds: k_value <= upper,
        k_value,
        upper,
    })
}

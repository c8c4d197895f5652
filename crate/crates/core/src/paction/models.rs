//! Standard actions on `Z_{p^e}^r` viewed as a Galois ring `GR(p^e, r)`.
//!
//! The companion matrix of a primitive polynomial `f` over `F_p`, lifted to
//! `Z / p^e` and raised to the power `p^{e-1}`, is multiplication by a
//! Teichmüller generator of order `p^r - 1` (a Singer cycle when `e = 1`).
//! The Frobenius automorphism sends that generator to its `p`-th power.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::action::{ActionGroup, ActionMatrix};
use super::group::AbelianPGroup;
use crate::error::{Error, Result};
use crate::exactlin::{adjugate, det, Matrix};

/// Companion matrix of `x^r + c_{r-1} x^{r-1} + ... + c_0` acting on column
/// vectors in the basis `1, x, ..., x^{r-1}`.
pub fn companion_matrix(coeffs: &[i64]) -> Vec<Vec<i64>> {
    let r = coeffs.len();
    let mut m = vec![vec![0; r]; r];
    for i in 1..r {
        m[i][i - 1] = 1;
    }
    for (i, c) in coeffs.iter().enumerate() {
        m[i][r - 1] = -c;
    }
    m
}

fn power(group: &AbelianPGroup, a: &ActionMatrix, mut k: u64) -> ActionMatrix {
    let mut result = ActionMatrix::identity(group);
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = base.compose(group, &result);
        }
        base = base.compose(group, &base);
        k >>= 1;
    }
    result
}

/// Teichmüller generator on `Z_{p^e}^r` for the monic polynomial with low coefficients `coeffs`.
pub fn teichmuller_generator(p: u64, e: u32, coeffs: &[i64]) -> Result<(AbelianPGroup, ActionMatrix)> {
    if coeffs.is_empty() {
        return Err(Error::validation("polynomial must have positive degree"));
    }
    let group = AbelianPGroup::homocyclic(p, e, coeffs.len())?;
    let t = ActionMatrix::from_rows(&group, &companion_matrix(coeffs))?;
    let lift = power(&group, &t, p.pow(e - 1));
    Ok((group, lift))
}

fn column(group: &AbelianPGroup, a: &ActionMatrix, k: u64) -> Vec<i64> {
    power(group, a, k).apply(group, &group.generator(0))
}

/// Frobenius `xi -> xi^p` of the Galois ring generated by `xi = t`.
pub fn frobenius_matrix(group: &AbelianPGroup, t: &ActionMatrix) -> Result<ActionMatrix> {
    let r = group.rank();
    let p = group.p() as u64;
    let q = BigInt::from(group.moduli()[0]);
    let cols_b: Vec<Vec<i64>> = (0..r as u64).map(|k| column(group, t, k)).collect();
    let cols_f: Vec<Vec<i64>> = (0..r as u64).map(|k| column(group, t, p * k)).collect();
    let to_matrix = |cols: &[Vec<i64>]| {
        Matrix::from_i64_rows(&(0..r).map(|i| cols.iter().map(|c| c[i]).collect()).collect::<Vec<_>>())
    };
    let b = to_matrix(&cols_b)?;
    let f = to_matrix(&cols_f)?;
    let d = det(&b)?.mod_floor(&q);
    let ext = d.extended_gcd(&q);
    if ext.gcd != BigInt::from(1) {
        return Err(Error::validation("first basis vector is not cyclic for the generator"));
    }
    let b_inv = adjugate(&b)?.scale(&ext.x);
    let m = f.mul(&b_inv)?.map(|v| v.mod_floor(&q).to_i64().expect("reduced"));
    ActionMatrix::from_rows(group, &m.to_rows())
}

/// `<xi>` or `<xi> x| <Frobenius>` on `Z_{p^e}^r`.
pub fn galois_model(p: u64, e: u32, coeffs: &[i64], with_frobenius: bool) -> Result<ActionGroup> {
    let (group, t) = teichmuller_generator(p, e, coeffs)?;
    let mut gens = vec![t.clone()];
    if with_frobenius {
        gens.push(frobenius_matrix(&group, &t)?);
    }
    ActionGroup::new(&group, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paction::{coprime_split_check, fixed_points, has_free_action, orbits};

    #[test]
    fn f8_model() {
        let a = galois_model(2, 1, &[1, 1, 0], true).unwrap();
        assert_eq!(
            a.generators()[0].to_matrix(),
            Matrix::from_i64_rows(&[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]]).unwrap()
        );
        assert_eq!(
            a.generators()[1].to_matrix(),
            Matrix::from_i64_rows(&[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 1]]).unwrap()
        );
        assert_eq!(a.order(), 21);
        let o = orbits(&a);
        assert_eq!(o.len(), 2);
        assert_eq!((o[1].size, o[1].stabilizer_order), (7, 3));
        assert!(fixed_points(&a).is_trivial());
    }

    #[test]
    fn lifted_singer_on_z4_squared() {
        let a = galois_model(2, 2, &[1, 1], false).unwrap();
        assert_eq!(a.order(), 3);
        assert!(has_free_action(&a));
    }

    #[test]
    fn f128_frobenius_split() {
        let (g, t) = teichmuller_generator(2, 1, &[1, 1, 0, 0, 0, 0, 0]).unwrap();
        let frob = ActionGroup::new(&g, vec![frobenius_matrix(&g, &t).unwrap()]).unwrap();
        assert_eq!(frob.order(), 7);
        let s = coprime_split_check(&frob).unwrap();
        assert_eq!((s.fixed_order, s.commutator_order), (2, 64));
        assert!(s.holds);
    }
}

//! `A`-equivariant splitting `P -> Omega(P) x Omega(P)` for `P = Z_{p^2}^r`.
//!
//! Pick, for every `A`-orbit on the cosets `P / Omega(P)`, a representative
//! fixed by the coset stabilizer `A_1` and translate it along the orbit. The
//! resulting transversal `R` is `A`-invariant, and `x = t + y` with `t in R`,
//! `y in Omega(P)` gives `phi(x) = (p t, y)`.

use super::action::ActionGroup;
use super::group::AbelianPGroup;
use super::ops::omega;
use crate::error::{Error, Result};

/// A verified equivariant bijection `P -> Omega(P) x Omega(P)`.
#[derive(Debug, Clone)]
pub struct Transversal {
    /// Transversal element chosen for each coset, indexed by canonical index of `p x`.
    reps: Vec<Vec<i64>>,
    group: AbelianPGroup,
    /// Whether some representative needed the exhaustive fallback.
    pub used_fallback: bool,
}

impl Transversal {
    /// The transversal `R`, one element per coset of `Omega(P)`, in canonical order.
    pub fn representatives(&self) -> Vec<Vec<i64>> {
        let mut r: Vec<Vec<i64>> = self.reps.iter().filter(|r| !r.is_empty()).cloned().collect();
        r.sort();
        r
    }

    /// `phi(x) = (p t, x - t)` where `t` is the representative of `x + Omega(P)`.
    pub fn map(&self, x: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let g = &self.group;
        let px = g.scale(g.p(), x);
        let t = &self.reps[g.index(&px)];
        (px, g.sub(x, t))
    }

    /// `phi^{-1}(a, b)` for `a, b in Omega(P)`.
    pub fn inverse(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let g = &self.group;
        g.add(&self.reps[g.index(a)], b)
    }

    /// The full table `x -> phi(x)` in canonical order of `x`.
    pub fn table(&self) -> Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> {
        self.group
            .elements()
            .map(|x| {
                let (a, b) = self.map(&x);
                (x, a, b)
            })
            .collect()
    }
}

fn coset_key(g: &AbelianPGroup, x: &[i64]) -> usize {
    // Multiplication by p identifies P / Omega(P) with Omega(P).
    g.index(&g.scale(g.p(), x))
}

/// Modular inverse of `m` modulo `n`, for `gcd(m, n) = 1`.
fn inverse_mod(m: i64, n: i64) -> i64 {
    let (mut a, mut b, mut x0, mut x1) = (m.rem_euclid(n), n, 1i64, 0i64);
    while b != 0 {
        let q = a / b;
        (a, b) = (b, a - q * b);
        (x0, x1) = (x1, x0 - q * x1);
    }
    x0.rem_euclid(n)
}

pub fn invariant_transversal(a: &ActionGroup) -> Result<Transversal> {
    let g = a.group();
    if !g.exponents().iter().all(|&e| e == 2) {
        return Err(Error::precondition(
            "invariant transversal needs P homocyclic of exponent p^2",
        ));
    }
    a.require_coprime()?;
    let p2 = g.p() * g.p();
    let mut reps: Vec<Option<Vec<i64>>> = vec![None; g.order()];
    let mut used_fallback = false;
    for x0 in g.elements() {
        let key = coset_key(g, &x0);
        if reps[key].is_some() {
            continue;
        }
        // x0 is the least element of its coset: cosets are visited in canonical order.
        let stab: Vec<usize> = (0..a.order())
            .filter(|&i| coset_key(g, &a.apply(i, &x0)) == key)
            .collect();
        let mut sum = g.zero();
        for &i in &stab {
            sum = g.add(&sum, &a.apply(i, &x0));
        }
        let mut t = g.scale(inverse_mod(stab.len() as i64, p2), &sum);
        let fixed = |t: &[i64]| stab.iter().all(|&i| a.apply(i, t) == t);
        if coset_key(g, &t) != key || !fixed(&t) {
            used_fallback = true;
            let om = omega(g, 1);
            let found = om
                .elements()
                .iter()
                .map(|w| g.add(&x0, w))
                .find(|c| fixed(c))
                .ok_or_else(|| Error::Inconsistent("no coset representative fixed by its stabilizer".into()))?;
            t = found;
        }
        for i in 0..a.order() {
            let img = a.apply(i, &t);
            let k = coset_key(g, &img);
            match &reps[k] {
                None => reps[k] = Some(img),
                Some(old) if *old == img => {}
                Some(_) => {
                    return Err(Error::Inconsistent("transversal is not invariant".into()));
                }
            }
        }
    }
    // Slots that are not of the form p*x stay empty.
    let reps = reps.into_iter().map(Option::unwrap_or_default).collect();
    let tr = Transversal {
        reps,
        group: g.clone(),
        used_fallback,
    };
    verify(a, &tr)?;
    Ok(tr)
}

/// Exhaustive bijectivity and equivariance check of `phi`.
pub fn verify(a: &ActionGroup, tr: &Transversal) -> Result<()> {
    let g = a.group();
    let om = omega(g, 1);
    let mut hit = vec![false; g.order() * g.order()];
    for x in g.elements() {
        let (u, v) = tr.map(&x);
        if !om.contains_index(g.index(&u)) || !om.contains_index(g.index(&v)) {
            return Err(Error::Inconsistent(format!("phi({x:?}) leaves Omega(P) x Omega(P)")));
        }
        let slot = g.index(&u) * g.order() + g.index(&v);
        if std::mem::replace(&mut hit[slot], true) {
            return Err(Error::Inconsistent("phi is not injective".into()));
        }
        for gen in a.generators() {
            let (gu, gv) = tr.map(&gen.apply(g, &x));
            if gu != gen.apply(g, &u) || gv != gen.apply(g, &v) {
                return Err(Error::Inconsistent(format!("phi is not equivariant at {x:?}")));
            }
        }
    }
    Ok(())
}

/// A regular point built as `phi^{-1}(a, b)` from a base `{a, b}` of the action on `Omega(P)`.
///
/// Scans pairs in canonical order; `None` when `A` has no base of size two
/// on `Omega(P)`.
pub fn regular_point_via_transversal(a: &ActionGroup, tr: &Transversal) -> Option<Vec<i64>> {
    let g = a.group();
    let om = omega(g, 1);
    let stabs: Vec<Vec<usize>> = om.elements().iter().map(|x| a.stabilizer(x)).collect();
    for (i, sa) in stabs.iter().enumerate() {
        for (j, sb) in stabs.iter().enumerate() {
            let joint = sa.iter().filter(|k| sb.contains(k)).count();
            if joint == 1 {
                return Some(tr.inverse(&om.elements()[i], &om.elements()[j]));
            }
        }
    }
    None
}

//! Group-theoretic criteria that feed the `k(B) <= |D|` arguments.

use crate::error::{Error, Result};
use crate::paction::{acts_freely_on, commutator_part_of, has_free_action, ActionGroup};

/// An element `u` with small `[D, C_A(u)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodElement {
    pub element: Vec<i64>,
    pub commutator_order: usize,
    pub centralizer_order: usize,
    /// Whether `C_A(u)` acts freely on `[D, C_A(u)]`.
    pub free: bool,
}

/// First `u` in canonical order with `|[D, C_A(u)]| <= threshold`.
pub fn find_good_element(a: &ActionGroup, threshold: usize) -> Result<Option<GoodElement>> {
    a.require_coprime()?;
    for u in a.group().elements() {
        let stab = a.stabilizer(&u);
        let comm = commutator_part_of(a, &stab);
        if comm.order() <= threshold {
            return Ok(Some(GoodElement {
                free: acts_freely_on(a, &stab, &comm),
                commutator_order: comm.order(),
                centralizer_order: stab.len(),
                element: u,
            }));
        }
    }
    Ok(None)
}

/// Both halves of the rank-two criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainCheck {
    /// Determinant mod `p` of each generator on `Omega`.
    pub dets: Vec<i64>,
    /// Every generator lies in `SL(Omega)`.
    pub special_linear: bool,
    pub free: bool,
}

impl MainCheck {
    pub fn holds(&self) -> bool {
        self.special_linear && self.free
    }
}

/// Determinant conditions on `Omega` and freeness for an action on a group of rank at most two.
pub fn rank_two_criterion(a: &ActionGroup) -> Result<MainCheck> {
    let g = a.group();
    if g.rank() > 2 {
        return Err(Error::precondition(format!("group has rank {} > 2", g.rank())));
    }
    a.require_coprime()?;
    let p = g.p();
    let e = g.exponents();
    let r = g.rank();
    let dets: Vec<i64> = a
        .generators()
        .iter()
        .map(|m| {
            // Matrix of m in the basis p^{e_i - 1} e_i of Omega.
            let w = |i: usize, j: usize| {
                let v = m.get(i, j);
                let v = if e[i] > e[j] {
                    v / p.pow(e[i] - e[j])
                } else {
                    v * p.pow(e[j] - e[i])
                };
                v.rem_euclid(p)
            };
            let d = if r == 1 {
                w(0, 0)
            } else {
                w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0)
            };
            d.rem_euclid(p)
        })
        .collect();
    Ok(MainCheck {
        special_linear: dets.iter().all(|&d| d == 1 % p),
        free: has_free_action(a),
        dets,
    })
}

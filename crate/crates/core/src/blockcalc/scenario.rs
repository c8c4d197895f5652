use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;

use super::arith::free_case_cartan;
use crate::error::{Error, Result};
use crate::paction::{
    acts_freely_on, commutator_part, commutator_part_of, fixed_points, fixed_points_of, orbit_representative, orbits,
    AbelianPGroup, ActionGroup,
};
use crate::qform::GramForm;
use crate::IntMatrix;

/// One `I(B)`-orbit of subsections `(u, b_u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsectionDatum {
    pub rep: Vec<i64>,
    pub orbit_size: usize,
    pub u_order: u64,
    /// `|C_A(u)|`, the inertial index of `b_u`.
    pub centralizer_order: usize,
    /// `|[D, C_A(u)]|`.
    pub commutator_order: usize,
    /// `|C_D(C_A(u))|`.
    pub z_part: usize,
    /// Whether `C_A(u)` acts freely on `[D, C_A(u)]`.
    pub free: bool,
    pub l_value: Option<u64>,
    pub cartan: Option<IntMatrix>,
}

impl SubsectionDatum {
    pub fn is_trivial(&self) -> bool {
        self.rep.iter().all(|&x| x == 0)
    }
}

/// How `l(b_u)` and the Cartan matrices of subsections are obtained.
///
/// Supplied values take precedence. With `free_action` set, orbits whose
/// centralizer acts freely on its commutator part get `l = |C_A(u)|` and the
/// free-case Cartan matrix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LRule {
    pub free_action: bool,
    pub l_values: BTreeMap<Vec<i64>, u64>,
    pub cartans: BTreeMap<Vec<i64>, IntMatrix>,
}

impl LRule {
    pub fn free_action() -> Self {
        LRule {
            free_action: true,
            ..LRule::default()
        }
    }

    pub fn supplied() -> Self {
        LRule::default()
    }

    pub fn with_l(mut self, rep: Vec<i64>, l: u64) -> Self {
        self.l_values.insert(rep, l);
        self
    }

    pub fn with_cartan(mut self, rep: Vec<i64>, c: IntMatrix) -> Self {
        self.cartans.insert(rep, c);
        self
    }
}

/// Defect group, inertial action and the subsection inventory.
#[derive(Debug, Clone)]
pub struct BlockScenario {
    pub action: ActionGroup,
    /// One entry per orbit on `D`, in canonical order; the trivial one first.
    pub subsections: Vec<SubsectionDatum>,
    /// Where each externally supplied or rule-derived value came from.
    pub assumptions: Vec<String>,
    /// `k` of the dominated block of `C_G(Z)/Z`, when supplied.
    pub k_bar: Option<u64>,
}

impl BlockScenario {
    pub fn defect(&self) -> &AbelianPGroup {
        self.action.group()
    }

    /// `e(B) = |I(B)|`.
    pub fn e(&self) -> usize {
        self.action.order()
    }

    /// `|Z| = |C_D(I(B))|`.
    pub fn z_order(&self) -> usize {
        fixed_points(&self.action).order()
    }

    pub fn l_block(&self) -> Option<u64> {
        self.subsections.first().and_then(|s| s.l_value)
    }

    pub fn subsection(&self, rep: &[i64]) -> Option<&SubsectionDatum> {
        self.subsections.iter().find(|s| s.rep == rep)
    }

    /// Subsections with representatives in `[D, I(B)]`, trivial one first.
    pub fn commutator_subsections(&self) -> Vec<&SubsectionDatum> {
        let comm = commutator_part(&self.action);
        let g = self.defect();
        self.subsections
            .iter()
            .filter(|s| comm.contains_index(g.index(&s.rep)))
            .collect()
    }
}

fn validate_cartan(rep: &[i64], c: &IntMatrix, l: Option<u64>, z_part: usize) -> Result<()> {
    GramForm::from_int(c).map_err(|e| Error::validation(format!("Cartan matrix of {rep:?}: {e}")))?;
    if let Some(l) = l {
        if c.rows() as u64 != l {
            return Err(Error::validation(format!(
                "Cartan matrix of {rep:?} has {} rows but l = {l}",
                c.rows()
            )));
        }
    }
    let z = BigInt::from(z_part);
    if c.as_slice().iter().any(|x| !x.is_multiple_of(&z)) {
        return Err(Error::validation(format!(
            "Cartan matrix of {rep:?} is not divisible by z_part = {z_part}"
        )));
    }
    Ok(())
}

/// Orbits of `A` on `D` with centralizer data and `l`-values from `rule`.
pub fn subsection_inventory(a: &ActionGroup, rule: &LRule) -> Result<BlockScenario> {
    a.require_coprime()?;
    let g = a.group();
    let mut l_values = BTreeMap::new();
    for (rep, l) in &rule.l_values {
        validate_element(g, rep)?;
        l_values.insert(orbit_representative(a, rep), *l);
    }
    let mut cartans = BTreeMap::new();
    for (rep, c) in &rule.cartans {
        validate_element(g, rep)?;
        cartans.insert(orbit_representative(a, rep), c.clone());
    }
    let mut subsections = Vec::new();
    let mut assumptions = Vec::new();
    for orbit in orbits(a) {
        let u = orbit.rep;
        let stab = a.stabilizer(&u);
        let comm = commutator_part_of(a, &stab);
        let z_part = fixed_points_of(a, &stab).order();
        let free = acts_freely_on(a, &stab, &comm);
        let u_order = (g.p() as u64).pow(g.element_log_order(&u));
        let mut l_value = l_values.get(&u).copied();
        let mut cartan = cartans.get(&u).cloned();
        if l_value.is_some() {
            assumptions.push(format!("l(b_u) for u = {u:?} supplied"));
        }
        if cartan.is_some() {
            assumptions.push(format!("Cartan matrix for u = {u:?} supplied"));
        }
        if rule.free_action && free {
            let e = stab.len() as u64;
            if l_value.is_none() {
                l_value = Some(e);
                assumptions.push(format!("l(b_u) = {e} for u = {u:?} from the free-action rule"));
            }
            if cartan.is_none() && l_value == Some(e) {
                cartan = Some(free_case_cartan(z_part as u64, comm.order() as u64, e)?);
                assumptions.push(format!("Cartan matrix for u = {u:?} from the free-action rule"));
            }
        }
        if let Some(c) = &cartan {
            validate_cartan(&u, c, l_value, z_part)?;
        }
        if l_value.is_none() && !rule.free_action {
            return Err(Error::Incomplete(format!("no l-value for the orbit of {u:?}")));
        }
        subsections.push(SubsectionDatum {
            rep: u,
            orbit_size: orbit.size,
            u_order,
            centralizer_order: stab.len(),
            commutator_order: comm.order(),
            z_part,
            free,
            l_value,
            cartan,
        });
    }
    Ok(BlockScenario {
        action: a.clone(),
        subsections,
        assumptions,
        k_bar: None,
    })
}

fn validate_element(g: &AbelianPGroup, x: &[i64]) -> Result<()> {
    if x.len() != g.rank() {
        return Err(Error::shape(format!(
            "element {x:?} does not have {} coordinates",
            g.rank()
        )));
    }
    Ok(())
}

/// `k(B) = |Z| * sum of l(b_u)` over orbit representatives in `[D, I(B)]`.
pub fn k_from_subsections(s: &BlockScenario) -> Result<u64> {
    Ok(s.z_order() as u64 * k_bar_from_subsections(s)?)
}

/// `k` of the dominated block: the sum of `l(b_u)` over representatives in `[D, I(B)]`.
pub fn k_bar_from_subsections(s: &BlockScenario) -> Result<u64> {
    let mut total = 0;
    for sub in s.commutator_subsections() {
        total += sub
            .l_value
            .ok_or_else(|| Error::Incomplete(format!("no l-value for the orbit of {:?}", sub.rep)))?;
    }
    Ok(total)
}

/// Sum of orbit sizes; equals `|D|` for every inventory.
pub fn orbit_total(s: &BlockScenario) -> usize {
    s.subsections.iter().map(|x| x.orbit_size).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paction::galois_model;

    #[test]
    fn klein_four_with_z3() {
        let a = galois_model(2, 1, &[1, 1], false).unwrap();
        let s = subsection_inventory(&a, &LRule::free_action().with_l(vec![0, 0], 3)).unwrap();
        assert_eq!(s.subsections.len(), 2);
        let u = &s.subsections[1];
        assert_eq!((u.orbit_size, u.centralizer_order, u.l_value), (3, 1, Some(1)));
        assert_eq!(k_from_subsections(&s).unwrap(), 4);
        assert_eq!(orbit_total(&s), 4);
    }

    #[test]
    fn f21_inventory() {
        let a = galois_model(2, 1, &[1, 1, 0], true).unwrap();
        let s = subsection_inventory(&a, &LRule::free_action()).unwrap();
        let u = &s.subsections[1];
        assert_eq!(
            (u.orbit_size, u.centralizer_order, u.commutator_order, u.z_part),
            (7, 3, 4, 2)
        );
        assert_eq!(u.l_value, Some(3));
        let two = BigInt::from(2);
        assert_eq!(u.cartan, Some(IntMatrix::constant_plus_identity(3, two.clone(), two)));
        assert!(k_from_subsections(&s).unwrap_err().to_string().contains("no l-value"));
        let s = subsection_inventory(&a, &LRule::free_action().with_l(vec![0, 0, 0], 5)).unwrap();
        assert_eq!(k_from_subsections(&s).unwrap(), 8);
    }

    #[test]
    fn nilpotent_case() {
        let g = AbelianPGroup::new(2, vec![2, 1]).unwrap();
        let s = subsection_inventory(&ActionGroup::trivial(&g), &LRule::free_action()).unwrap();
        assert_eq!(k_from_subsections(&s).unwrap(), 8);
    }

    #[test]
    fn missing_values_without_rule() {
        let a = galois_model(2, 1, &[1, 1], false).unwrap();
        let err = subsection_inventory(&a, &LRule::supplied()).unwrap_err();
        assert!(matches!(err, Error::Incomplete(_)));
    }
}

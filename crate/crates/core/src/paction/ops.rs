use super::action::{ActionGroup, ActionMatrix};
use super::group::{AbelianPGroup, Subgroup};
use crate::error::{Error, Result};

/// One orbit of the acting group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Lexicographically least element of the orbit.
    pub rep: Vec<i64>,
    pub size: usize,
    pub stabilizer_order: usize,
}

/// Orbits in canonical order of their representatives.
pub fn orbits(a: &ActionGroup) -> Vec<Orbit> {
    let group = a.group();
    let perms = a.generator_permutations();
    let mut seen = vec![false; group.order()];
    let mut out = Vec::new();
    for start in 0..group.order() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for p in &perms {
                let y = p[x];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.push(Orbit {
            rep: group.element(start),
            size,
            stabilizer_order: a.order() / size,
        });
    }
    out
}

/// Least element of the orbit of `x`.
pub fn orbit_representative(a: &ActionGroup, x: &[i64]) -> Vec<i64> {
    let group = a.group();
    let x = group.reduce(x);
    (0..a.order())
        .map(|i| a.apply(i, &x))
        .min()
        .expect("the identity is an element")
}

/// `C_P(A)`.
pub fn fixed_points(a: &ActionGroup) -> Subgroup {
    let group = a.group();
    group.filter(|x| a.generators().iter().all(|g| g.apply(group, x) == x))
}

/// `[P, A]`, generated by `g(e_j) - e_j` over generators `g` and basis vectors `e_j`.
pub fn commutator_part(a: &ActionGroup) -> Subgroup {
    commutator_of(a.group(), a.generators())
}

/// `C_P(H)` for the subgroup `H` of `A` with the given element indices.
pub fn fixed_points_of(a: &ActionGroup, acting: &[usize]) -> Subgroup {
    let group = a.group();
    group.filter(|x| acting.iter().all(|&i| a.apply(i, x) == x))
}

/// `[P, H]` for the subgroup `H` of `A` with the given element indices.
pub fn commutator_part_of(a: &ActionGroup, acting: &[usize]) -> Subgroup {
    let gens: Vec<ActionMatrix> = acting.iter().map(|&i| a.elements()[i].clone()).collect();
    commutator_of(a.group(), &gens)
}

fn commutator_of(group: &AbelianPGroup, gens: &[ActionMatrix]) -> Subgroup {
    let mut diffs = Vec::new();
    for g in gens {
        for j in 0..group.rank() {
            let e = group.generator(j);
            diffs.push(group.sub(&g.apply(group, &e), &e));
        }
    }
    group.span(&diffs)
}

/// Outcome of the coprime decomposition check `P = [P, A] + C_P(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCheck {
    pub fixed_order: usize,
    pub commutator_order: usize,
    pub intersection_order: usize,
    pub holds: bool,
}

pub fn coprime_split_check(a: &ActionGroup) -> Result<SplitCheck> {
    a.require_coprime()?;
    let fixed = fixed_points(a);
    let comm = commutator_part(a);
    let inter = fixed.intersection_order(&comm);
    Ok(SplitCheck {
        fixed_order: fixed.order(),
        commutator_order: comm.order(),
        intersection_order: inter,
        holds: inter == 1 && fixed.order() * comm.order() == a.group().order(),
    })
}

/// Every nonidentity element fixes only zero.
pub fn has_free_action(a: &ActionGroup) -> bool {
    orbits(a).iter().skip(1).all(|o| o.stabilizer_order == 1)
}

/// Whether the elements `acting` (indices into `a`) act freely on `sub`.
pub fn acts_freely_on(a: &ActionGroup, acting: &[usize], sub: &Subgroup) -> bool {
    let group = a.group();
    acting
        .iter()
        .filter(|&&i| !a.elements()[i].is_identity(group))
        .all(|&i| sub.elements().iter().skip(1).all(|x| a.apply(i, x) != *x))
}

/// First element in canonical order whose stabilizer is trivial.
pub fn regular_orbit_search(a: &ActionGroup) -> Option<Vec<i64>> {
    orbits(a).into_iter().find(|o| o.stabilizer_order == 1).map(|o| o.rep)
}

/// `Omega_i(P) = {x : p^i x = 0}`.
pub fn omega(group: &AbelianPGroup, i: u32) -> Subgroup {
    let gens: Vec<Vec<i64>> = (0..group.rank())
        .map(|j| {
            let e = group.exponents()[j];
            let k = e.saturating_sub(i);
            group.scale(group.p().pow(k), &group.generator(j))
        })
        .collect();
    group.span(&gens)
}

/// `Phi(P) = pP` for abelian `P`.
pub fn frattini(group: &AbelianPGroup) -> Subgroup {
    let gens: Vec<Vec<i64>> = (0..group.rank())
        .map(|j| group.scale(group.p(), &group.generator(j)))
        .collect();
    group.span(&gens)
}

/// `Omega(P) <= Phi(P)`, computed from the subgroups themselves.
pub fn regular_orbit_hypothesis(group: &AbelianPGroup) -> bool {
    omega(group, 1).is_subgroup_of(&frattini(group))
}

/// `Omega_2(P)` as a group `Z_{p^2}^r` with the restricted action.
///
/// Requires all exponents `>= 2`. The new generators are `p^{e_i - 2} e_i`;
/// `embed` maps coordinates on `Omega_2(P)` back into `P`.
#[derive(Debug, Clone)]
pub struct Omega2Restriction {
    pub group: AbelianPGroup,
    pub action: ActionGroup,
    scales: Vec<i64>,
}

impl Omega2Restriction {
    pub fn embed(&self, parent: &AbelianPGroup, y: &[i64]) -> Vec<i64> {
        let x: Vec<i64> = y.iter().zip(&self.scales).map(|(v, s)| v * s).collect();
        parent.reduce(&x)
    }
}

pub fn restrict_to_omega2(a: &ActionGroup) -> Result<Omega2Restriction> {
    let parent = a.group();
    let e = parent.exponents();
    if e.iter().any(|&x| x < 2) {
        return Err(Error::precondition("Omega_2 restriction needs all exponents >= 2"));
    }
    let p = parent.p();
    let r = parent.rank();
    let group = AbelianPGroup::homocyclic(p as u64, 2, r)?;
    let mut gens = Vec::new();
    for g in a.generators() {
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let v = g.get(i, j);
                        if e[i] > e[j] {
                            v / p.pow(e[i] - e[j])
                        } else {
                            v * p.pow(e[j] - e[i])
                        }
                    })
                    .collect()
            })
            .collect();
        gens.push(ActionMatrix::from_rows(&group, &rows)?);
    }
    let action = ActionGroup::new(&group, gens)?;
    let scales = e.iter().map(|&x| p.pow(x - 2)).collect();
    Ok(Omega2Restriction { group, action, scales })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z22_full() -> ActionGroup {
        let g = AbelianPGroup::homocyclic(2, 1, 2).unwrap();
        ActionGroup::from_rows(&g, &[vec![vec![0, 1], vec![1, 1]], vec![vec![0, 1], vec![1, 0]]]).unwrap()
    }

    fn z42_z3() -> ActionGroup {
        let g = AbelianPGroup::homocyclic(2, 2, 2).unwrap();
        ActionGroup::from_rows(&g, &[vec![vec![0, 3], vec![1, 3]]]).unwrap()
    }

    #[test]
    fn trivial_action() {
        let g = AbelianPGroup::new(3, vec![1, 1]).unwrap();
        let a = ActionGroup::trivial(&g);
        assert_eq!(orbits(&a).len(), 9);
        assert_eq!(fixed_points(&a).order(), 9);
        assert!(commutator_part(&a).is_trivial());
        assert!(coprime_split_check(&a).unwrap().holds);
    }

    #[test]
    fn full_automorphisms_of_klein_four() {
        let a = z22_full();
        assert_eq!(a.order(), 6);
        let o = orbits(&a);
        assert_eq!(o.len(), 2);
        assert_eq!((o[1].size, o[1].stabilizer_order), (3, 2));
        assert!(!has_free_action(&a));
        assert_eq!(regular_orbit_search(&a), None);
        assert!(coprime_split_check(&a).unwrap_err().to_string().contains("coprime"));
    }

    #[test]
    fn z3_on_z4_squared() {
        let a = z42_z3();
        assert_eq!(a.order(), 3);
        assert!(has_free_action(&a));
        assert_eq!(regular_orbit_search(&a), Some(vec![0, 1]));
    }

    #[test]
    fn omega_and_frattini() {
        let g = AbelianPGroup::homocyclic(2, 2, 2).unwrap();
        assert_eq!(omega(&g, 1), frattini(&g));
        assert!(regular_orbit_hypothesis(&g));
        assert!(!regular_orbit_hypothesis(&AbelianPGroup::homocyclic(2, 1, 2).unwrap()));
        let mixed = AbelianPGroup::new(2, vec![3, 1]).unwrap();
        assert!(!regular_orbit_hypothesis(&mixed));
        assert_eq!(omega(&mixed, 1).order(), 4);
        assert_eq!(omega(&mixed, 2).order(), 8);
    }

    #[test]
    fn omega2_restriction() {
        let g = AbelianPGroup::homocyclic(2, 3, 2).unwrap();
        let a = ActionGroup::from_rows(&g, &[vec![vec![0, 7], vec![1, 7]]]).unwrap();
        let r = restrict_to_omega2(&a).unwrap();
        assert_eq!(r.group.order(), 16);
        assert_eq!(r.action.order(), 3);
        let y = vec![1, 0];
        assert_eq!(r.embed(&g, &y), vec![2, 0]);
        // Equivariance of the embedding.
        let img = r.action.apply(1, &y);
        assert_eq!(r.embed(&g, &img), a.apply(1, &r.embed(&g, &y)));
    }
}

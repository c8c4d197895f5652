use crate::error::{Error, Result};

/// Largest group order accepted for exhaustive operations.
pub const MAX_GROUP_ORDER: u64 = 1 << 20;

/// `Z_{p^e1} + ... + Z_{p^er}` with `e1 >= ... >= er >= 1`.
///
/// Elements are coordinate vectors; element `i` in canonical order is the
/// mixed-radix expansion of `i` with the first coordinate most significant,
/// so index order agrees with lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianPGroup {
    p: i64,
    exponents: Vec<u32>,
    moduli: Vec<i64>,
    order: usize,
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl AbelianPGroup {
    pub fn new(p: u64, exponents: Vec<u32>) -> Result<Self> {
        let p = i64::try_from(p).map_err(|_| Error::validation("prime too large"))?;
        if !is_prime(p) {
            return Err(Error::validation(format!("{p} is not prime")));
        }
        if exponents.is_empty() {
            return Err(Error::validation("group needs at least one cyclic factor"));
        }
        if exponents.contains(&0) {
            return Err(Error::validation("exponents must be at least 1"));
        }
        if exponents.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::validation("exponents must be nonincreasing"));
        }
        let total: u32 = exponents.iter().sum();
        let order = (p as u128)
            .checked_pow(total)
            .filter(|&o| o <= u128::from(MAX_GROUP_ORDER));
        let Some(order) = order else {
            return Err(Error::resource("group order", MAX_GROUP_ORDER));
        };
        let moduli = exponents.iter().map(|&e| p.pow(e)).collect();
        Ok(AbelianPGroup {
            p,
            exponents,
            moduli,
            order: order as usize,
        })
    }

    /// `Z_{p^e}^r`.
    pub fn homocyclic(p: u64, e: u32, r: usize) -> Result<Self> {
        AbelianPGroup::new(p, vec![e; r])
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `p^{e_i}` per coordinate.
    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn is_homocyclic(&self) -> bool {
        self.exponents.windows(2).all(|w| w[0] == w[1])
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.moduli).map(|(v, m)| v.rem_euclid(*m)).collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.moduli).all(|(v, m)| (0..*m).contains(v))
    }

    pub fn index(&self, x: &[i64]) -> usize {
        x.iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (v, m)| acc * (*m as usize) + v.rem_euclid(*m) as usize)
    }

    pub fn element(&self, mut idx: usize) -> Vec<i64> {
        let mut x = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let m = self.moduli[i] as usize;
            x[i] = (idx % m) as i64;
            idx /= m;
        }
        x
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(y)
            .zip(&self.moduli)
            .map(|((a, b), m)| (a + b).rem_euclid(*m))
            .collect()
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(y)
            .zip(&self.moduli)
            .map(|((a, b), m)| (a - b).rem_euclid(*m))
            .collect()
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(&self.moduli)
            .map(|(a, m)| ((i128::from(k) * i128::from(*a)).rem_euclid(i128::from(*m))) as i64)
            .collect()
    }

    pub fn is_zero(x: &[i64]) -> bool {
        x.iter().all(|&v| v == 0)
    }

    /// `e_i`, the `i`-th standard generator.
    pub fn generator(&self, i: usize) -> Vec<i64> {
        let mut x = self.zero();
        x[i] = 1;
        x
    }

    /// Order of `x` as an exponent of `p`.
    pub fn element_log_order(&self, x: &[i64]) -> u32 {
        let mut y = self.reduce(x);
        let mut k = 0;
        while !Self::is_zero(&y) {
            y = self.scale(self.p, &y);
            k += 1;
        }
        k
    }

    fn closure(&self, gens: &[Vec<i64>]) -> Vec<bool> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![self.zero()];
        for g in gens {
            let g = self.reduce(g);
            // The cosets j*g + H are new until a multiple of g falls into H.
            let snapshot = elems.clone();
            let mut mult = g.clone();
            while !member[self.index(&mult)] {
                for e in &snapshot {
                    let s = self.add(e, &mult);
                    member[self.index(&s)] = true;
                    elems.push(s);
                }
                mult = self.add(&mult, &g);
            }
        }
        member
    }

    /// Subgroup generated by `gens`.
    pub fn span(&self, gens: &[Vec<i64>]) -> Subgroup {
        Subgroup::from_members(self, self.closure(gens))
    }

    /// Subgroup of elements satisfying `pred`; the caller guarantees closure.
    pub(crate) fn filter(&self, mut pred: impl FnMut(&[i64]) -> bool) -> Subgroup {
        let member = (0..self.order).map(|i| pred(&self.element(i))).collect();
        Subgroup::from_members(self, member)
    }
}

impl std::fmt::Display for AbelianPGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("Z{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A subgroup given by its full element list and a canonical generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    /// Canonical indices of the elements, ascending.
    members: Vec<usize>,
    generators: Vec<Vec<i64>>,
    elements: Vec<Vec<i64>>,
}

impl Subgroup {
    fn from_members(group: &AbelianPGroup, member: Vec<bool>) -> Self {
        let members: Vec<usize> = (0..member.len()).filter(|&i| member[i]).collect();
        let elements: Vec<Vec<i64>> = members.iter().map(|&i| group.element(i)).collect();
        // Greedy generating set in canonical order.
        let mut generators: Vec<Vec<i64>> = Vec::new();
        let mut covered = group.closure(&[]);
        for x in &elements {
            if !covered[group.index(x)] {
                generators.push(x.clone());
                covered = group.closure(&generators);
            }
        }
        Subgroup {
            members,
            generators,
            elements,
        }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn elements(&self) -> &[Vec<i64>] {
        &self.elements
    }

    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.members.binary_search(&idx).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&i| other.contains_index(i))
    }

    pub fn intersection_order(&self, other: &Subgroup) -> usize {
        self.members.iter().filter(|&&i| other.contains_index(i)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(AbelianPGroup::new(4, vec![1]).is_err());
        assert!(AbelianPGroup::new(2, vec![1, 2]).is_err());
        assert!(AbelianPGroup::new(2, vec![]).is_err());
        assert!(AbelianPGroup::new(2, vec![21]).unwrap_err().is_resource_limit());
        assert_eq!(AbelianPGroup::new(2, vec![20]).unwrap().order(), 1 << 20);
    }

    #[test]
    fn indexing_is_lexicographic() {
        let g = AbelianPGroup::new(2, vec![3, 1]).unwrap();
        let elems: Vec<Vec<i64>> = g.elements().collect();
        let mut sorted = elems.clone();
        sorted.sort();
        assert_eq!(elems, sorted);
        for (i, x) in elems.iter().enumerate() {
            assert_eq!(g.index(x), i);
        }
    }

    #[test]
    fn span_and_generators() {
        let g = AbelianPGroup::new(2, vec![2, 2]).unwrap();
        let s = g.span(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(s.order(), 4);
        assert_eq!(s.generators(), &[vec![0, 2], vec![2, 0]]);
        let all = g.span(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(all.order(), 16);
        assert_eq!(all.generators().len(), 2);
    }
}

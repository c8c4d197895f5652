use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::group::AbelianPGroup;
use crate::error::{Error, Result};
use crate::exactlin::{det, Matrix};
use crate::IntMatrix;

/// Largest acting group the closure will build.
pub const MAX_ACTION_ORDER: usize = 1 << 16;

/// An automorphism `x -> A x` of an abelian p-group.
///
/// Column `j` holds the image of the `j`-th generator; row `i` is read
/// modulo `p^{e_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionMatrix {
    entries: Vec<i64>,
    rank: usize,
}

impl ActionMatrix {
    /// Validates the homomorphism condition and bijectivity on `group`.
    pub fn new(group: &AbelianPGroup, m: &IntMatrix) -> Result<Self> {
        let r = group.rank();
        if m.shape() != (r, r) {
            return Err(Error::shape(format!(
                "action matrix is {}x{} but the group has rank {r}",
                m.rows(),
                m.cols()
            )));
        }
        let mut entries = Vec::with_capacity(r * r);
        for i in 0..r {
            let modulus = group.moduli()[i];
            for j in 0..r {
                let v = (&m[(i, j)] % modulus).to_i64().expect("reduced entry fits");
                entries.push(v.rem_euclid(modulus));
            }
        }
        let a = ActionMatrix { entries, rank: r };
        a.validate(group)?;
        Ok(a)
    }

    pub fn from_rows(group: &AbelianPGroup, rows: &[Vec<i64>]) -> Result<Self> {
        ActionMatrix::new(group, &Matrix::from_i64_rows(rows)?)
    }

    pub fn identity(group: &AbelianPGroup) -> Self {
        let r = group.rank();
        let mut entries = vec![0; r * r];
        for i in 0..r {
            entries[i * r + i] = 1 % group.moduli()[i];
        }
        ActionMatrix { entries, rank: r }
    }

    fn validate(&self, group: &AbelianPGroup) -> Result<()> {
        let r = self.rank;
        let e = group.exponents();
        let p = group.p();
        for i in 0..r {
            for j in 0..r {
                if e[i] > e[j] {
                    let m = p.pow(e[i] - e[j]);
                    if self.get(i, j) % m != 0 {
                        return Err(Error::validation(format!(
                            "entry ({i},{j}) must be divisible by {m} to define a homomorphism"
                        )));
                    }
                }
            }
        }
        // Injective on a finite group iff bijective.
        for x in group.elements().skip(1) {
            if AbelianPGroup::is_zero(&self.apply(group, &x)) {
                return Err(Error::validation(format!("matrix kills {x:?}; not an automorphism")));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.rank + j]
    }

    pub fn to_matrix(&self) -> IntMatrix {
        Matrix::new(self.rank, self.rank, self.entries.iter().map(|&v| v.into()).collect()).expect("nonempty")
    }

    pub fn apply(&self, group: &AbelianPGroup, x: &[i64]) -> Vec<i64> {
        let r = self.rank;
        (0..r)
            .map(|i| {
                let m = i128::from(group.moduli()[i]);
                let s: i128 = (0..r).map(|j| i128::from(self.get(i, j)) * i128::from(x[j])).sum();
                s.rem_euclid(m) as i64
            })
            .collect()
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, group: &AbelianPGroup, other: &ActionMatrix) -> ActionMatrix {
        let r = self.rank;
        let mut entries = vec![0; r * r];
        for i in 0..r {
            let m = i128::from(group.moduli()[i]);
            for j in 0..r {
                let s: i128 = (0..r)
                    .map(|k| i128::from(self.get(i, k)) * i128::from(other.get(k, j)))
                    .sum();
                entries[i * r + j] = s.rem_euclid(m) as i64;
            }
        }
        ActionMatrix { entries, rank: r }
    }

    pub fn is_identity(&self, group: &AbelianPGroup) -> bool {
        *self == ActionMatrix::identity(group)
    }

    /// Determinant of the reduction modulo `p`, in `[0, p)`.
    pub fn det_mod_p(&self, p: i64) -> i64 {
        let m = self.to_matrix();
        let d = det(&m).expect("square");
        (d % p).to_i64().expect("small").rem_euclid(p)
    }
}

/// A finite group of automorphisms given by generators, with its closure.
#[derive(Debug, Clone)]
pub struct ActionGroup {
    group: AbelianPGroup,
    generators: Vec<ActionMatrix>,
    elements: Vec<ActionMatrix>,
    /// Generator indices whose product (leftmost applied last) is the element.
    words: Vec<Vec<usize>>,
}

impl ActionGroup {
    /// Builds the closure by breadth-first multiplication by generators.
    ///
    /// The identity comes first; elements are in order of discovery, so the
    /// stored words are shortest.
    pub fn new(group: &AbelianPGroup, generators: Vec<ActionMatrix>) -> Result<Self> {
        if generators.iter().any(|g| g.rank() != group.rank()) {
            return Err(Error::shape("generator rank does not match the group"));
        }
        let id = ActionMatrix::identity(group);
        let mut elements = vec![id.clone()];
        let mut words = vec![Vec::new()];
        let mut seen: HashMap<ActionMatrix, usize> = HashMap::from([(id, 0)]);
        let mut head = 0;
        while head < elements.len() {
            for (gi, g) in generators.iter().enumerate() {
                let h = g.compose(group, &elements[head]);
                if seen.contains_key(&h) {
                    continue;
                }
                if elements.len() == MAX_ACTION_ORDER {
                    return Err(Error::resource("acting group order", MAX_ACTION_ORDER as u64));
                }
                let mut w = words[head].clone();
                w.push(gi);
                seen.insert(h.clone(), elements.len());
                elements.push(h);
                words.push(w);
            }
            head += 1;
        }
        Ok(ActionGroup {
            group: group.clone(),
            generators,
            elements,
            words,
        })
    }

    pub fn from_rows(group: &AbelianPGroup, gens: &[Vec<Vec<i64>>]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| ActionMatrix::from_rows(group, g))
            .collect::<Result<Vec<_>>>()?;
        ActionGroup::new(group, gens)
    }

    pub fn trivial(group: &AbelianPGroup) -> Self {
        ActionGroup::new(group, Vec::new()).expect("trivial group")
    }

    pub fn group(&self) -> &AbelianPGroup {
        &self.group
    }

    pub fn generators(&self) -> &[ActionMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[ActionMatrix] {
        &self.elements
    }

    pub fn word(&self, idx: usize) -> &[usize] {
        &self.words[idx]
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `gcd(|A|, p) = 1`.
    pub fn is_coprime(&self) -> bool {
        self.order() as i64 % self.group.p() != 0
    }

    pub(crate) fn require_coprime(&self) -> Result<()> {
        if self.is_coprime() {
            Ok(())
        } else {
            Err(Error::precondition(format!(
                "acting group of order {} is not coprime to p = {}",
                self.order(),
                self.group.p()
            )))
        }
    }

    /// `a(x)` for the element with index `a`.
    pub fn apply(&self, a: usize, x: &[i64]) -> Vec<i64> {
        self.elements[a].apply(&self.group, x)
    }

    /// Permutation of canonical element indices induced by each generator.
    pub(crate) fn generator_permutations(&self) -> Vec<Vec<usize>> {
        self.generators
            .iter()
            .map(|g| {
                self.group
                    .elements()
                    .map(|x| self.group.index(&g.apply(&self.group, &x)))
                    .collect()
            })
            .collect()
    }

    /// Indices of the elements fixing `x`, i.e. `C_A(x)`.
    pub fn stabilizer(&self, x: &[i64]) -> Vec<usize> {
        let x = self.group.reduce(x);
        (0..self.order()).filter(|&a| self.apply(a, &x) == x).collect()
    }

    /// The subgroup with the given element indices, generated by those elements.
    pub fn subgroup(&self, indices: &[usize]) -> Result<ActionGroup> {
        // A small generating set: keep elements that enlarge the closure.
        let mut gens: Vec<ActionMatrix> = Vec::new();
        let mut current = ActionGroup::trivial(&self.group);
        for &i in indices {
            let e = &self.elements[i];
            if current.elements.contains(e) {
                continue;
            }
            gens.push(e.clone());
            current = ActionGroup::new(&self.group, gens.clone())?;
        }
        if current.order() != indices.len() {
            return Err(Error::validation("indices do not form a subgroup"));
        }
        Ok(current)
    }
}

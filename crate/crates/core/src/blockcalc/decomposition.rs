//! Enumeration of generalized decomposition matrices for involutions.
//!
//! For the dominated block of `C_G(Z)/Z` the columns `Q~_x` belonging to the
//! nontrivial subsections satisfy `Q~_x^T Q~_y = delta_xy C~_x`, so jointly
//! they form one orthogonal embedding of `diag(C~_x)` with `k` rows. Every
//! row is nonzero on every block because all characters have height zero.
//! The ordinary part `Q~_1` spans the lattice `Gamma` orthogonal to all
//! `Q~_x`, which determines the Cartan matrix up to basic sets.

use num_bigint::BigInt;
use num_integer::Integer;

use super::scenario::{k_bar_from_subsections, BlockScenario};
use crate::embed::{block_orthogonal_embeddings, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::exactlin::{elementary_divisors, kernel_basis};
use crate::qform::{congruent_with_budget, GramForm, DEFAULT_CONGRUENCE_BUDGET};
use crate::IntMatrix;

/// One solution of the block orthogonality relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionSet {
    /// Row count `k` of the dominated block.
    pub k: usize,
    /// `(representative, Q~_x)` for every nontrivial subsection in `[D, I(B)]`.
    pub blocks: Vec<(Vec<i64>, IntMatrix)>,
    /// Basis of `Gamma` as rows, in Hermite normal form.
    pub gamma_basis: IntMatrix,
    /// `Q~_1^T Q~_1 = Gamma Gamma^T`.
    pub candidate_cartan: IntMatrix,
    /// Number of enumerated solutions whose Cartan matrix is congruent to this one.
    pub class_size: usize,
    /// `|C_D(I(B))|`.
    pub z_order: usize,
}

impl DecompositionSet {
    /// Cartan matrix of `B` itself: `|Z|` times the candidate.
    pub fn block_cartan(&self) -> IntMatrix {
        self.candidate_cartan.scale(&BigInt::from(self.z_order))
    }

    pub fn l(&self) -> usize {
        self.gamma_basis.rows()
    }

    /// `[Q~_x ...]` with the blocks side by side.
    pub fn joint_matrix(&self) -> IntMatrix {
        let mut it = self.blocks.iter().map(|(_, q)| q);
        let first = it.next().expect("at least one block").clone();
        it.fold(first, |acc, q| acc.hstack(q).expect("same row count"))
    }

    /// Rechecks the orthogonality relations, the kernel and the Cartan product.
    pub fn check(&self, scenario: &BlockScenario) -> Result<()> {
        let z = BigInt::from(self.z_order);
        for (i, (rep, q)) in self.blocks.iter().enumerate() {
            let c = scenario
                .subsection(rep)
                .and_then(|s| s.cartan.clone())
                .ok_or_else(|| Error::Incomplete(format!("no Cartan matrix for {rep:?}")))?;
            if q.gram_of_columns().scale(&z) != c {
                return Err(Error::Inconsistent(format!("Q~^T Q~ differs from C~ at {rep:?}")));
            }
            for (_, other) in &self.blocks[i + 1..] {
                if !q.transpose().mul(other)?.is_zero() {
                    return Err(Error::Inconsistent("blocks are not orthogonal".into()));
                }
            }
            if !self.gamma_basis.mul(q)?.is_zero() {
                return Err(Error::Inconsistent("Gamma does not annihilate a block".into()));
            }
        }
        if elementary_divisors(&self.gamma_basis)
            .iter()
            .any(|d| *d != BigInt::from(1))
        {
            return Err(Error::Inconsistent("Gamma is not saturated".into()));
        }
        if self.gamma_basis.mul_transpose(&self.gamma_basis)? != self.candidate_cartan {
            return Err(Error::Inconsistent("candidate Cartan is not Gamma Gamma^T".into()));
        }
        Ok(())
    }
}

/// Options for [`decomposition_enumerate_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Merge candidates with congruent Cartan matrices.
    pub dedupe: bool,
    pub node_budget: u64,
    pub congruence_budget: u64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            dedupe: true,
            node_budget: DEFAULT_NODE_BUDGET,
            congruence_budget: DEFAULT_CONGRUENCE_BUDGET,
        }
    }
}

pub fn decomposition_enumerate(scenario: &BlockScenario, dedupe: bool) -> Result<Vec<DecompositionSet>> {
    decomposition_enumerate_with(
        scenario,
        &EnumerateOptions {
            dedupe,
            ..EnumerateOptions::default()
        },
    )
}

/// All joint solutions up to row permutations and row signs, in canonical order.
///
/// With `l(B)` known, solutions whose `Gamma` has the wrong rank are dropped.
pub fn decomposition_enumerate_with(
    scenario: &BlockScenario,
    opts: &EnumerateOptions,
) -> Result<Vec<DecompositionSet>> {
    let z_order = scenario.z_order();
    let k = match scenario.k_bar {
        Some(k) => k,
        None => k_bar_from_subsections(scenario)?,
    } as usize;
    let z = BigInt::from(z_order);
    let mut reps = Vec::new();
    let mut targets = Vec::new();
    for sub in scenario.commutator_subsections() {
        if sub.is_trivial() {
            continue;
        }
        if sub.u_order > 2 {
            return Err(Error::precondition(format!(
                "subsection {:?} has order {} > 2; decomposition numbers are not rational integers",
                sub.rep, sub.u_order
            )));
        }
        let c = sub
            .cartan
            .as_ref()
            .ok_or_else(|| Error::Incomplete(format!("no Cartan matrix for {:?}", sub.rep)))?;
        if c.as_slice().iter().any(|x| !x.is_multiple_of(&z)) {
            return Err(Error::validation(format!(
                "Cartan matrix of {:?} is not divisible by |Z|",
                sub.rep
            )));
        }
        reps.push(sub.rep.clone());
        targets.push(c.map(|x| x / &z));
    }
    if targets.is_empty() {
        return Err(Error::precondition("no nontrivial subsection in [D, I(B)]"));
    }
    let sizes: Vec<usize> = targets.iter().map(|t| t.rows()).collect();
    let l_block = scenario.l_block().map(|l| l as usize);
    let mut found = Vec::new();
    for emb in block_orthogonal_embeddings(&targets, k, opts.node_budget)? {
        let q = emb.matrix();
        let gamma = kernel_basis(q);
        if l_block.is_some_and(|l| l != gamma.rows()) {
            continue;
        }
        let mut blocks = Vec::new();
        let mut start = 0;
        for (rep, len) in reps.iter().zip(&sizes) {
            blocks.push((rep.clone(), q.col_block(start, start + len)));
            start += len;
        }
        let candidate_cartan = gamma.mul_transpose(&gamma)?;
        found.push(DecompositionSet {
            k,
            blocks,
            gamma_basis: gamma,
            candidate_cartan,
            class_size: 1,
            z_order,
        });
    }
    if !opts.dedupe {
        return Ok(found);
    }
    // An empty Gamma has no form; all such solutions share the empty Cartan matrix.
    let mut classes: Vec<(DecompositionSet, Option<GramForm>)> = Vec::new();
    'next: for set in found {
        let form = if set.l() == 0 {
            None
        } else {
            Some(GramForm::from_int(&set.candidate_cartan)?)
        };
        for (c, f) in classes.iter_mut() {
            let same = match (&*f, &form) {
                (None, None) => true,
                (Some(f), Some(g)) if c.l() == set.l() => {
                    congruent_with_budget(f, g, opts.congruence_budget)?.is_congruent()
                }
                _ => false,
            };
            if same {
                c.class_size += 1;
                continue 'next;
            }
        }
        classes.push((set, form));
    }
    Ok(classes.into_iter().map(|(c, _)| c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockcalc::scenario::{subsection_inventory, LRule};
    use crate::exactlin::Matrix;
    use crate::paction::galois_model;
    use crate::qform::congruent;

    #[test]
    fn klein_four_with_z3() {
        let a = galois_model(2, 1, &[1, 1], false).unwrap();
        let s = subsection_inventory(&a, &LRule::free_action()).unwrap();
        assert_eq!(s.l_block(), Some(3));
        let sets = decomposition_enumerate(&s, true).unwrap();
        assert_eq!(sets.len(), 1);
        let d = &sets[0];
        assert_eq!(
            d.blocks[0].1,
            Matrix::from_i64_rows(&[vec![1], vec![1], vec![1], vec![1]]).unwrap()
        );
        d.check(&s).unwrap();
        let one = BigInt::from(1);
        let expect = Matrix::constant_plus_identity(3, one.clone(), one);
        let got = GramForm::from_int(&d.candidate_cartan).unwrap();
        assert!(congruent(&got, &GramForm::from_int(&expect).unwrap())
            .unwrap()
            .is_congruent());
    }

    #[test]
    fn f21_single_class() {
        let a = galois_model(2, 1, &[1, 1, 0], true).unwrap();
        let mut s = subsection_inventory(&a, &LRule::free_action()).unwrap();
        s.k_bar = Some(8);
        let sets = decomposition_enumerate(&s, false).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].l(), 5);
        sets[0].check(&s).unwrap();
        assert_eq!(sets[0].block_cartan(), sets[0].candidate_cartan);
    }

    #[test]
    fn odd_order_rejected() {
        let a = galois_model(3, 1, &[2, 1], false).unwrap();
        let s = subsection_inventory(&a, &LRule::free_action().with_l(vec![0, 0], 1)).unwrap();
        assert!(matches!(decomposition_enumerate(&s, true), Err(Error::Precondition(_))));
    }
}

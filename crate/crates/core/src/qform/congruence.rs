//! Unimodular congruence `S G1 S^T = G2` of integral positive-definite forms.
//!
//! Both forms are LLL-reduced, cheap invariants are compared, and then the
//! basis of the second form is matched against vectors of the first by
//! backtracking: level `i` picks a vector of norm `G2_ii` with the right inner
//! products against the earlier picks, and the partial system must stay
//! primitive so that it extends to a lattice basis.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::enumerate::short_vectors;
use super::lll::lll_gram;
use super::GramForm;
use crate::error::{Error, Result};
use crate::exactlin::{adjugate, det, elementary_divisors, snf, Matrix};
use crate::IntMatrix;

/// Largest dimension accepted by [`congruent`].
pub const MAX_CONGRUENCE_DIM: usize = 9;

/// Default backtracking budget.
pub const DEFAULT_CONGRUENCE_BUDGET: u64 = 20_000_000;

/// Outcome of a congruence test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Congruence {
    /// Unimodular `S` with `S G1 S^T = G2`.
    Congruent(IntMatrix),
    Distinct(Distinction),
}

impl Congruence {
    pub fn is_congruent(&self) -> bool {
        matches!(self, Congruence::Congruent(_))
    }

    pub fn witness(&self) -> Option<&IntMatrix> {
        match self {
            Congruence::Congruent(s) => Some(s),
            Congruence::Distinct(_) => None,
        }
    }
}

/// Certificate that two forms are not congruent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distinction {
    Dimension {
        left: usize,
        right: usize,
    },
    Determinant {
        left: BigInt,
        right: BigInt,
    },
    ElementaryDivisors {
        left: Vec<BigInt>,
        right: Vec<BigInt>,
    },
    Minimum {
        left: BigInt,
        right: BigInt,
    },
    /// Representation numbers first differ at `norm`.
    ThetaPrefix {
        norm: BigInt,
        left: u64,
        right: u64,
    },
    /// The basis-matching search completed without a witness.
    Exhaustive,
}

impl std::fmt::Display for Distinction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distinction::Dimension { left, right } => write!(f, "dimension {left} != {right}"),
            Distinction::Determinant { left, right } => write!(f, "determinant {left} != {right}"),
            Distinction::ElementaryDivisors { left, right } => {
                write!(f, "elementary divisors {left:?} != {right:?}")
            }
            Distinction::Minimum { left, right } => write!(f, "minimum {left} != {right}"),
            Distinction::ThetaPrefix { norm, left, right } => {
                write!(f, "{left} vs {right} vectors of norm {norm}")
            }
            Distinction::Exhaustive => write!(f, "no basis of matching Gram matrix exists"),
        }
    }
}

fn integral(g: &GramForm, side: &str) -> Result<IntMatrix> {
    g.integral_matrix()
        .ok_or_else(|| Error::validation(format!("{side} form is not integral")))
}

fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            x.to_i64()
                .ok_or_else(|| Error::resource("coordinate magnitude (i64)", i64::MAX as u64))
        })
        .collect()
}

fn shells(g: &IntMatrix, bound: &BigInt, budget: u64) -> Result<BTreeMap<BigInt, Vec<Vec<BigInt>>>> {
    let vecs = short_vectors(&g.to_rational(), &BigRational::from_integer(bound.clone()), budget)?;
    let mut out: BTreeMap<BigInt, Vec<Vec<BigInt>>> = BTreeMap::new();
    for v in vecs {
        out.entry(v.value.to_integer()).or_default().push(v.coords);
    }
    Ok(out)
}

/// A vector's coordinates and its image under `G1`.
type VecImage = (Vec<i64>, Vec<i64>);

struct Search<'a> {
    /// Target Gram matrix in search order.
    target: &'a Matrix<i64>,
    /// Candidates per level.
    levels: Vec<&'a [VecImage]>,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| i128::from(x) * i128::from(y)).sum()
}

impl Search<'_> {
    fn primitive(&self, rows: &[&[i64]]) -> bool {
        let n = rows[0].len();
        let m = Matrix::new(
            rows.len(),
            n,
            rows.iter().flat_map(|r| r.iter().map(|&x| BigInt::from(x))).collect(),
        )
        .expect("nonempty");
        let f = snf(&m);
        f.diagonal.iter().all(One::is_one)
    }

    fn run(&mut self, level: usize) -> Result<bool> {
        let n = self.target.rows();
        if level == n {
            return Ok(true);
        }
        let cands = self.levels[level];
        for (idx, (v, _)) in cands.iter().enumerate() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::resource("congruence search nodes", self.budget));
            }
            let ok = (0..level).all(|j| {
                let (_, w) = &self.levels[j][self.chosen[j]];
                dot(w, v) == i128::from(self.target[(level, j)])
            });
            if !ok {
                continue;
            }
            self.chosen.push(idx);
            let rows: Vec<&[i64]> = (0..=level)
                .map(|j| self.levels[j][self.chosen[j]].0.as_slice())
                .collect();
            if self.primitive(&rows) && self.run(level + 1)? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}

/// Decides unimodular congruence with the default budget.
pub fn congruent(g1: &GramForm, g2: &GramForm) -> Result<Congruence> {
    congruent_with_budget(g1, g2, DEFAULT_CONGRUENCE_BUDGET)
}

pub fn congruent_with_budget(g1: &GramForm, g2: &GramForm, budget: u64) -> Result<Congruence> {
    let a = integral(g1, "first")?;
    let b = integral(g2, "second")?;
    let n = a.rows();
    if n > MAX_CONGRUENCE_DIM || b.rows() > MAX_CONGRUENCE_DIM {
        return Err(Error::resource("congruence dimension", MAX_CONGRUENCE_DIM as u64));
    }
    if n != b.rows() {
        return Ok(Congruence::Distinct(Distinction::Dimension {
            left: n,
            right: b.rows(),
        }));
    }
    let (da, db) = (det(&a)?, det(&b)?);
    if da != db {
        return Ok(Congruence::Distinct(Distinction::Determinant { left: da, right: db }));
    }
    let (ea, eb) = (elementary_divisors(&a), elementary_divisors(&b));
    if ea != eb {
        return Ok(Congruence::Distinct(Distinction::ElementaryDivisors {
            left: ea,
            right: eb,
        }));
    }

    let (ra, ta) = lll_gram(&a.to_rational());
    let (rb, tb) = lll_gram(&b.to_rational());
    let ra = ra.to_integer().expect("integral");
    let rb = rb.to_integer().expect("integral");
    let bound = (0..n)
        .map(|i| ra[(i, i)].clone().max(rb[(i, i)].clone()))
        .max()
        .expect("nonempty");
    let sa = shells(&ra, &bound, budget)?;
    let sb = shells(&rb, &bound, budget)?;
    let min_a = sa.keys().next().cloned().expect("basis vectors lie below the bound");
    let min_b = sb.keys().next().cloned().expect("basis vectors lie below the bound");
    if min_a != min_b {
        return Ok(Congruence::Distinct(Distinction::Minimum {
            left: min_a,
            right: min_b,
        }));
    }
    let mut norms: Vec<&BigInt> = sa.keys().chain(sb.keys()).collect();
    norms.sort();
    norms.dedup();
    for norm in norms {
        let ca = sa.get(norm).map_or(0, Vec::len) as u64 * 2;
        let cb = sb.get(norm).map_or(0, Vec::len) as u64 * 2;
        if ca != cb {
            return Ok(Congruence::Distinct(Distinction::ThetaPrefix {
                norm: norm.clone(),
                left: ca,
                right: cb,
            }));
        }
    }

    let ra64 = ra
        .to_i64()
        .ok_or_else(|| Error::resource("Gram entry magnitude (i64)", i64::MAX as u64))?;
    let rb64 = rb
        .to_i64()
        .ok_or_else(|| Error::resource("Gram entry magnitude (i64)", i64::MAX as u64))?;

    // Candidates per norm: both signs, each with its image v * G1.
    let mut by_norm: BTreeMap<i64, Vec<VecImage>> = BTreeMap::new();
    let mut first_sign: BTreeMap<i64, Vec<VecImage>> = BTreeMap::new();
    for (norm, vecs) in &sa {
        let key = norm.to_i64().expect("norm fits");
        for v in vecs {
            let v = to_i64_vec(v)?;
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            let w = ra64.left_apply(&v);
            let wn: Vec<i64> = w.iter().map(|x| -x).collect();
            first_sign.entry(key).or_default().push((v.clone(), w.clone()));
            let e = by_norm.entry(key).or_default();
            e.push((v, w));
            e.push((neg, wn));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (by_norm.get(&rb64[(i, i)]).map_or(0, Vec::len), i));
    let target = rb64.submatrix(&order, &order);
    let empty: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let levels: Vec<&[(Vec<i64>, Vec<i64>)]> = (0..n)
        .map(|lvl| {
            let norm = target[(lvl, lvl)];
            let src = if lvl == 0 { &first_sign } else { &by_norm };
            src.get(&norm).unwrap_or(&empty).as_slice()
        })
        .collect();
    let mut search = Search {
        target: &target,
        levels,
        chosen: Vec::new(),
        nodes: 0,
        budget,
    };
    if !search.run(0)? {
        return Ok(Congruence::Distinct(Distinction::Exhaustive));
    }

    // Row `order[l]` of the reduced witness is the vector picked at level `l`.
    let mut rows = vec![Vec::new(); n];
    for (lvl, &pos) in order.iter().enumerate() {
        let v = &search.levels[lvl][search.chosen[lvl]].0;
        rows[pos] = v.iter().map(|&x| BigInt::from(x)).collect();
    }
    let s_reduced = Matrix::from_rows(rows)?;
    // rb = S' ra S'^T, ra = ta a ta^T, rb = tb b tb^T  =>  b = S a S^T with S = tb^-1 S' ta.
    let tb_inv = {
        let d = det(&tb)?;
        let adj = adjugate(&tb)?;
        if d.is_negative() {
            adj.scale(&-BigInt::one())
        } else {
            adj
        }
    };
    let s = tb_inv.mul(&s_reduced)?.mul(&ta)?;
    debug_assert_eq!(s.congruence(&a)?, b);
    if s.congruence(&a)? != b {
        return Err(Error::Inconsistent("congruence witness failed verification".into()));
    }
    Ok(Congruence::Congruent(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::is_unimodular;

    fn form(rows: &[Vec<i64>]) -> GramForm {
        GramForm::from_int(&Matrix::from_i64_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn reflexive_gives_unimodular() {
        let g = GramForm::from_int(&Matrix::constant_plus_identity(3, BigInt::one(), BigInt::one())).unwrap();
        let c = congruent(&g, &g).unwrap();
        let s = c.witness().unwrap();
        assert!(is_unimodular(s));
        assert_eq!(
            s.congruence(&g.integral_matrix().unwrap()).unwrap(),
            g.integral_matrix().unwrap()
        );
    }

    #[test]
    fn constructed_congruence() {
        let m = Matrix::constant_plus_identity(3, BigInt::one(), BigInt::one());
        let s = Matrix::from_i64_rows(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let g2 = s.transpose().congruence(&m).unwrap();
        let c = congruent(&GramForm::from_int(&m).unwrap(), &GramForm::from_int(&g2).unwrap()).unwrap();
        let w = c.witness().expect("congruent");
        assert_eq!(w.congruence(&m).unwrap(), g2);
    }

    #[test]
    fn determinant_certificate() {
        let c = congruent(&form(&[vec![1, 0], vec![0, 1]]), &form(&[vec![1, 0], vec![0, 2]])).unwrap();
        assert_eq!(
            c,
            Congruence::Distinct(Distinction::Determinant {
                left: BigInt::from(1),
                right: BigInt::from(2)
            })
        );
    }

    #[test]
    fn minimum_certificate() {
        // Same determinant and elementary divisors, different minima.
        let c = congruent(&form(&[vec![1, 0], vec![0, 6]]), &form(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(
            c,
            Congruence::Distinct(Distinction::Minimum {
                left: BigInt::from(1),
                right: BigInt::from(2)
            })
        );
    }

    #[test]
    fn theta_certificate() {
        // Determinant 90, divisors (1, 90), minimum 9 on both sides.
        let c = congruent(&form(&[vec![9, 0], vec![0, 10]]), &form(&[vec![9, 3], vec![3, 11]])).unwrap();
        assert_eq!(
            c,
            Congruence::Distinct(Distinction::ThetaPrefix {
                norm: BigInt::from(10),
                left: 2,
                right: 0
            })
        );
    }

    #[test]
    fn rejects_rational_forms() {
        let g = GramForm::new(Matrix::identity(2).scale(&BigRational::new(1.into(), 2.into()))).unwrap();
        assert!(matches!(congruent(&g, &g), Err(Error::Validation(_))));
    }
}

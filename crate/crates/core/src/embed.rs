//! Integral factorizations `C = Q^T Q`.
//!
//! Every row `v` of a solution satisfies `v C^{-1} v^T <= 1`, and the row
//! norms under `C^{-1}` sum to `n = dim C`. Candidate rows are enumerated as
//! short vectors of `C^{-1}`; the search then picks a multiset of candidates
//! whose outer products sum to `C`. Since `v^T v` does not see the sign of
//! `v` and a multiset has no order, each equivalence class under row
//! permutation and row sign changes is visited exactly once.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{adjugate, det, Matrix};
use crate::qform::{short_vectors, GramForm};
use crate::IntMatrix;

/// Largest target dimension accepted by the search.
pub const MAX_EMBED_DIM: usize = 9;

/// Default backtracking budget.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Search options for [`orthogonal_embeddings_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedOptions {
    /// Fixes the number of rows `k`.
    pub rows: Option<usize>,
    /// With a fixed row count, also return solutions padded by zero rows.
    pub allow_zero_rows: bool,
    pub node_budget: u64,
    /// Column block sizes; when nonempty every row must be nonzero on every block.
    pub column_blocks: Vec<usize>,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            rows: None,
            allow_zero_rows: false,
            node_budget: DEFAULT_NODE_BUDGET,
            column_blocks: Vec::new(),
        }
    }
}

/// A factorization `Q^T Q = C` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    matrix: IntMatrix,
    target: IntMatrix,
}

impl Embedding {
    /// Checks `Q^T Q = C` and canonicalizes `Q`.
    pub fn new(q: IntMatrix, target: IntMatrix) -> Result<Self> {
        if q.gram_of_columns() != target {
            return Err(Error::validation("Q^T Q does not equal the target"));
        }
        Ok(Embedding {
            matrix: canonical_form(&q),
            target,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn target(&self) -> &IntMatrix {
        &self.target
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn has_zero_rows(&self) -> bool {
        self.matrix.iter_rows().any(|r| r.iter().all(Zero::is_zero))
    }
}

fn sq_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

/// Representative of `q` under row permutations and row sign changes.
///
/// Each row is flipped so that its first nonzero entry is positive; rows are
/// then sorted by descending squared length and ascending lexicographic order,
/// which puts zero rows last.
pub fn canonical_form(q: &IntMatrix) -> IntMatrix {
    let mut rows = q.to_rows();
    for r in &mut rows {
        if r.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
            for x in r.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    rows.sort_by(|a, b| sq_norm(b).cmp(&sq_norm(a)).then_with(|| a.cmp(b)));
    Matrix::from_rows_or_empty(rows, q.cols()).expect("same width")
}

/// Necessary conditions for a symmetric residual to be positive semidefinite.
fn residual_plausible(r: &[i64], n: usize) -> bool {
    for i in 0..n {
        let d = r[i * n + i];
        if d < 0 {
            return false;
        }
        for j in 0..n {
            let off = r[i * n + j];
            if d == 0 && off != 0 {
                return false;
            }
            if j > i && i128::from(off) * i128::from(off) > i128::from(d) * i128::from(r[j * n + j]) {
                return false;
            }
        }
    }
    true
}

struct Candidate {
    v: Vec<i64>,
    /// `v adj(C) v^T`, i.e. `det C` times the `C^{-1}`-norm.
    norm: i128,
}

struct Search<'a> {
    cands: &'a [Candidate],
    n: usize,
    residual: Vec<i64>,
    picked: Vec<usize>,
    max_rows: Option<usize>,
    exact_rows: bool,
    /// Column ranges on which every row is nonzero.
    blocks: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
    out: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn psd_plausible(&self) -> bool {
        residual_plausible(&self.residual, self.n)
    }

    /// Each of the `slots` rows still to come adds at least 1 to the trace of every block.
    fn blocks_plausible(&self, slots: usize) -> bool {
        let n = self.n;
        self.blocks
            .iter()
            .all(|&(a, b)| (a..b).map(|i| i128::from(self.residual[i * n + i])).sum::<i128>() >= slots as i128)
    }

    fn apply(&mut self, v: &[i64], sign: i64) {
        let n = self.n;
        for i in 0..n {
            if v[i] == 0 {
                continue;
            }
            for j in 0..n {
                self.residual[i * n + j] -= sign * v[i] * v[j];
            }
        }
    }

    fn run(&mut self, start: usize, trace_left: i128) -> Result<()> {
        if trace_left == 0 {
            // The trace identity forces a zero residual here.
            if self.residual.iter().all(|&x| x == 0) {
                let ok = match self.max_rows {
                    Some(k) => !self.exact_rows || self.picked.len() == k,
                    None => true,
                };
                if ok {
                    self.out.push(self.picked.clone());
                }
            }
            return Ok(());
        }
        let slots = self.max_rows.map(|k| k - self.picked.len());
        if slots == Some(0) {
            return Ok(());
        }
        for idx in start..self.cands.len() {
            let c = &self.cands[idx];
            if c.norm > trace_left {
                continue;
            }
            // Candidates are sorted by decreasing norm, so later rows are no larger.
            if let Some(s) = slots {
                if c.norm * (s as i128) < trace_left {
                    break;
                }
                if self.exact_rows {
                    let min_norm = self.cands.last().map_or(0, |l| l.norm);
                    if trace_left - c.norm < min_norm * (s as i128 - 1) {
                        continue;
                    }
                }
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::resource("embedding search nodes", self.budget));
            }
            let n = self.n;
            if (0..n).any(|i| c.v[i] * c.v[i] > self.residual[i * n + i]) {
                continue;
            }
            let v = c.v.clone();
            self.apply(&v, 1);
            let after = slots.map_or(0, |s| s - 1);
            if self.psd_plausible() && (!self.exact_rows || self.blocks_plausible(after)) {
                self.picked.push(idx);
                self.run(idx, trace_left - self.cands[idx].norm)?;
                self.picked.pop();
            }
            self.apply(&v, -1);
        }
        Ok(())
    }
}

fn check_target(c: &IntMatrix) -> Result<GramForm> {
    if c.rows() > MAX_EMBED_DIM {
        return Err(Error::resource("embedding target dimension", MAX_EMBED_DIM as u64));
    }
    GramForm::from_int(c)
}

fn block_ranges(sizes: &[usize]) -> Vec<(usize, usize)> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&len| {
            start += len;
            (start - len, start)
        })
        .collect()
}

fn blocks_ok(v: &[BigInt], blocks: &[usize]) -> bool {
    let mut start = 0;
    blocks.iter().all(|&len| {
        let ok = v[start..start + len].iter().any(|x| !x.is_zero());
        start += len;
        ok
    })
}

/// All factorizations `C = Q^T Q` without zero rows, optionally with exactly `rows` rows.
pub fn orthogonal_embeddings(c: &IntMatrix, rows: Option<usize>) -> Result<Vec<Embedding>> {
    orthogonal_embeddings_with(
        c,
        &EmbedOptions {
            rows,
            ..EmbedOptions::default()
        },
    )
}

/// Complete list of factorizations up to row permutation and row signs,
/// sorted by canonical matrix.
pub fn orthogonal_embeddings_with(c: &IntMatrix, opts: &EmbedOptions) -> Result<Vec<Embedding>> {
    let form = check_target(c)?;
    let n = c.rows();
    if !opts.column_blocks.is_empty() && opts.column_blocks.iter().sum::<usize>() != n {
        return Err(Error::shape("column blocks do not cover the target"));
    }
    let d = det(c)?;
    let adj = adjugate(c)?;
    let inv = form.inverse();
    let found = short_vectors(inv.entries(), &BigRational::one(), opts.node_budget)?;
    let too_big = || Error::resource("embedding entry magnitude (i64)", i64::MAX as u64);
    let mut cands = Vec::new();
    for sv in found {
        if !opts.column_blocks.is_empty() && !blocks_ok(&sv.coords, &opts.column_blocks) {
            continue;
        }
        let norm = adj.quadratic(&sv.coords).to_i128().ok_or_else(too_big)?;
        let v = sv
            .coords
            .iter()
            .map(|x| x.to_i64().ok_or_else(too_big))
            .collect::<Result<Vec<_>>>()?;
        cands.push(Candidate { v, norm });
    }
    cands.sort_by(|a, b| b.norm.cmp(&a.norm).then_with(|| a.v.cmp(&b.v)));
    let total = d.to_i128().ok_or_else(too_big)? * n as i128;
    let c64 = c.to_i64().ok_or_else(too_big)?;
    let mut search = Search {
        cands: &cands,
        n,
        residual: c64.into_vec(),
        picked: Vec::new(),
        max_rows: opts.rows,
        exact_rows: !opts.allow_zero_rows,
        blocks: block_ranges(&opts.column_blocks),
        nodes: 0,
        budget: opts.node_budget,
        out: Vec::new(),
    };
    search.run(0, total)?;
    let mut out = Vec::with_capacity(search.out.len());
    for picked in &search.out {
        let mut rows: Vec<Vec<BigInt>> = picked
            .iter()
            .map(|&i| cands[i].v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        if let Some(k) = opts.rows {
            rows.resize(k, vec![BigInt::zero(); n]);
        }
        let q = Matrix::from_rows(rows)?;
        out.push(Embedding::new(q, c.clone())?);
    }
    out.sort_by(|a, b| a.matrix.as_slice().cmp(b.matrix.as_slice()));
    Ok(out)
}

/// All `Q = [Q_1 ... Q_m]` with `Q_i^T Q_j = delta_ij C_i`, exactly `rows`
/// rows and every row nonzero on every block, up to row permutations and row
/// signs, sorted by canonical matrix.
///
/// Returns the same classes as [`orthogonal_embeddings_with`] on the block
/// diagonal target with `column_blocks`, but builds one block at a time. The
/// smallest block is embedded row by row; every further block is added
/// column by column inside the orthogonal complement of the columns placed
/// so far, with its first column reduced modulo the rows that agree on them.
pub fn block_orthogonal_embeddings(targets: &[IntMatrix], rows: usize, node_budget: u64) -> Result<Vec<Embedding>> {
    if targets.is_empty() {
        return Err(Error::shape("no blocks"));
    }
    for t in targets {
        check_target(t)?;
    }
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by_key(|&i| targets[i].rows());
    let too_big = || Error::resource("embedding entry magnitude (i64)", i64::MAX as u64);
    let first = orthogonal_embeddings_with(
        &targets[order[0]],
        &EmbedOptions {
            rows: Some(rows),
            allow_zero_rows: false,
            node_budget,
            column_blocks: Vec::new(),
        },
    )?;
    let mut partial: Vec<Vec<Vec<i64>>> = first
        .iter()
        .map(|e| e.matrix().to_i64().map(|m| m.to_rows()).ok_or_else(too_big))
        .collect::<Result<_>>()?;
    let mut nodes = 0u64;
    for &b in &order[1..] {
        let c = targets[b].to_i64().ok_or_else(too_big)?;
        let mut next = Vec::new();
        for p in &partial {
            for y in ColumnExtension::new(p, &c, node_budget, &mut nodes).run()? {
                let mut q: Vec<Vec<i64>> = p
                    .iter()
                    .zip(&y)
                    .map(|(a, b)| a.iter().chain(b).copied().collect())
                    .collect();
                canonical_rows(&mut q);
                next.push(q);
            }
        }
        next.sort();
        next.dedup();

        partial = next;
    }
    // Undo the block reordering.
    let mut offsets = vec![0; targets.len()];
    let mut acc = 0;
    for &b in &order {
        offsets[b] = acc;
        acc += targets[b].rows();
    }
    let joint = Matrix::block_diagonal(targets);
    let mut out = Vec::with_capacity(partial.len());
    for p in partial {
        let rows: Vec<Vec<BigInt>> = p
            .iter()
            .map(|r| {
                (0..targets.len())
                    .flat_map(|b| {
                        r[offsets[b]..offsets[b] + targets[b].rows()]
                            .iter()
                            .map(|&x| BigInt::from(x))
                    })
                    .collect()
            })
            .collect();
        out.push(Embedding::new(Matrix::from_rows(rows)?, joint.clone())?);
    }
    out.sort_by(|a, b| a.matrix.as_slice().cmp(b.matrix.as_slice()));
    out.dedup();
    Ok(out)
}

/// Same normalization as [`canonical_form`], on machine integers.
fn canonical_rows(rows: &mut [Vec<i64>]) {
    for r in rows.iter_mut() {
        if r.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            r.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let sq = |r: &[i64]| r.iter().map(|x| x * x).sum::<i64>();
    rows.sort_by(|a, b| sq(b).cmp(&sq(a)).then_with(|| a.cmp(b)));
}

/// New columns `y_1..y_n` with `y_s . y_t = C_st` and `P^T y_t = 0`.
///
/// Column `t` is searched row by row against the constraint matrix
/// `A = [P | y_1 .. y_{t-1}]`. Rows that agree on `A` can still be permuted,
/// so entries of `y_t` are taken nonincreasing within each such class; this
/// picks one representative of every orbit of the remaining symmetry.
struct ColumnExtension<'a> {
    c: &'a Matrix<i64>,
    cols: Vec<Vec<i64>>,
    targets: Vec<i64>,
    k: usize,
    budget: u64,
    nodes: &'a mut u64,
}

impl<'a> ColumnExtension<'a> {
    fn new(p: &[Vec<i64>], c: &'a Matrix<i64>, budget: u64, nodes: &'a mut u64) -> Self {
        let k = p.len();
        let m = p.first().map_or(0, Vec::len);
        let cols = (0..m).map(|j| p.iter().map(|r| r[j]).collect()).collect();
        ColumnExtension {
            c,
            cols,
            targets: vec![0; m],
            k,
            budget,
            nodes,
        }
    }

    fn run(&mut self) -> Result<Vec<Vec<Vec<i64>>>> {
        let mut out = Vec::new();
        self.column(0, &mut out)?;
        Ok(out)
    }

    fn column(&mut self, t: usize, out: &mut Vec<Vec<Vec<i64>>>) -> Result<()> {
        let n = self.c.rows();
        let m0 = self.cols.len() - t;
        if t == n {
            let k = self.k;
            let new = &self.cols[m0..];
            if (0..k).all(|r| new.iter().any(|col| col[r] != 0)) {
                out.push((0..k).map(|r| new.iter().map(|col| col[r]).collect()).collect());
            }
            return Ok(());
        }
        for s in 0..t {
            self.targets[m0 + s] = self.c[(s, t)];
        }
        let found = self.columns(self.c[(t, t)])?;
        for y in found {
            self.cols.push(y);
            self.targets.push(0);
            self.column(t + 1, out)?;
            self.targets.pop();
            self.cols.pop();
        }
        Ok(())
    }

    /// Columns `y` of squared norm `norm` with `A^T y = targets`, sorted within classes.
    fn columns(&mut self, norm: i64) -> Result<Vec<Vec<i64>>> {
        let k = self.k;
        let m = self.cols.len();
        let class_of: Vec<usize> = (0..k)
            .map(|i| {
                (0..=i)
                    .find(|&j| self.cols.iter().all(|c| c[j] == c[i]))
                    .expect("i itself")
            })
            .collect();
        let prev: Vec<Option<usize>> = (0..k)
            .map(|r| (0..r).rev().find(|&j| class_of[j] == class_of[r]))
            .collect();
        let mut tail = vec![vec![0i128; m]; k + 1];
        for r in (0..k).rev() {
            let (head, rest) = tail.split_at_mut(r + 1);
            for ((t, next), col) in head[r].iter_mut().zip(&rest[0]).zip(&self.cols) {
                *t = next + i128::from(col[r]).pow(2);
            }
        }
        let mut st = ColumnDfs {
            cols: &self.cols,
            prev,
            tail,
            y: vec![0; k],
            lin: self.targets.iter().map(|&b| -b).collect(),
            out: Vec::new(),
            nodes: &mut *self.nodes,
            budget: self.budget,
        };
        st.run(0, norm)?;
        Ok(st.out)
    }
}

struct ColumnDfs<'a> {
    cols: &'a [Vec<i64>],
    prev: Vec<Option<usize>>,
    /// Squared norms of the constraint columns over rows `r..`.
    tail: Vec<Vec<i128>>,
    y: Vec<i64>,
    /// `A^T y - targets` over the rows fixed so far.
    lin: Vec<i64>,
    out: Vec<Vec<i64>>,
    nodes: &'a mut u64,
    budget: u64,
}

impl ColumnDfs<'_> {
    fn run(&mut self, r: usize, left: i64) -> Result<()> {
        let k = self.y.len();
        if r == k {
            if left == 0 && self.lin.iter().all(|&x| x == 0) {
                self.out.push(self.y.clone());
            }
            return Ok(());
        }
        let mut bound = (left as f64).sqrt() as i64 + 1;
        while bound * bound > left {
            bound -= 1;
        }
        let upper = self.prev[r].map_or(bound, |j| self.y[j].min(bound));
        let mut v = upper;
        while v >= -bound {
            *self.nodes += 1;
            if *self.nodes > self.budget {
                return Err(Error::resource("embedding search nodes", self.budget));
            }
            let rest = left - v * v;
            for (l, c) in self.lin.iter_mut().zip(self.cols) {
                *l += v * c[r];
            }
            let tail = &self.tail[r + 1];
            let ok = self
                .lin
                .iter()
                .zip(tail)
                .all(|(&l, &t)| i128::from(l).pow(2) <= t * i128::from(rest));
            if ok {
                self.y[r] = v;
                self.run(r + 1, rest)?;
            }
            for (l, c) in self.lin.iter_mut().zip(self.cols) {
                *l -= v * c[r];
            }
            v -= 1;
        }
        self.y[r] = 0;
        Ok(())
    }
}

/// Connected components of the bipartite row/column graph of `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// `(rows, cols)` per component, sorted by smallest row then column.
    pub parts: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Decomposition {
    /// More than one component: some permutation gives a nontrivial block diagonal.
    pub fn is_decomposable(&self) -> bool {
        self.parts.len() > 1
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Splits `Q` into blocks by connectivity of its nonzero pattern.
///
/// Rows are nodes `0..m`, columns are nodes `m..m+n`. A zero row or zero
/// column forms a component of its own.
pub fn is_decomposable(q: &IntMatrix) -> Decomposition {
    let (m, n) = q.shape();
    let mut parent: Vec<usize> = (0..m + n).collect();
    for i in 0..m {
        for j in 0..n {
            if !q[(i, j)].is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, m + j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
    for x in 0..m + n {
        let root = find(&mut parent, x);
        let e = groups.entry(root).or_default();
        if x < m {
            e.0.push(x);
        } else {
            e.1.push(x - m);
        }
    }
    Decomposition {
        parts: groups.into_values().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[Vec<i64>]) -> IntMatrix {
        Matrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn two_as_sum_of_squares() {
        let e = orthogonal_embeddings(&int(&[vec![2]]), Some(2)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].matrix(), &int(&[vec![1], vec![1]]));
        assert!(orthogonal_embeddings(&int(&[vec![2]]), Some(3)).unwrap().is_empty());
    }

    #[test]
    fn zero_padding() {
        let opts = EmbedOptions {
            rows: Some(3),
            allow_zero_rows: true,
            ..EmbedOptions::default()
        };
        let e = orthogonal_embeddings_with(&int(&[vec![2]]), &opts).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].has_zero_rows());
    }

    #[test]
    fn identity_is_unique() {
        let e = orthogonal_embeddings(&Matrix::identity(3), None).unwrap();
        assert_eq!(e.len(), 1);
        let anti = int(&[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(e[0].matrix(), &anti);
    }

    #[test]
    fn a2_root_lattice() {
        // [[2,1],[1,2]] embeds only as the A2 root system in Z^3.
        let e = orthogonal_embeddings(&int(&[vec![2, 1], vec![1, 2]]), None).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].matrix(), &int(&[vec![1, 1], vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn canonical_form_is_invariant() {
        let q = int(&[vec![0, -1], vec![1, 1], vec![-1, 0]]);
        let p = int(&[vec![-1, -1], vec![0, 1], vec![1, 0]]);
        assert_eq!(canonical_form(&q), canonical_form(&p));
    }

    #[test]
    fn decomposability() {
        let d = is_decomposable(&Matrix::identity(2));
        assert!(d.is_decomposable());
        assert_eq!(d.parts, vec![(vec![0], vec![0]), (vec![1], vec![1])]);
        assert!(!is_decomposable(&int(&[vec![1], vec![2], vec![-1]])).is_decomposable());
    }

    #[test]
    fn dimension_cap() {
        assert!(orthogonal_embeddings(&Matrix::identity(10), None)
            .unwrap_err()
            .is_resource_limit());
    }
}

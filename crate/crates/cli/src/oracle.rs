//! Brute-force reference computations used by the verification suite.
//!
//! These avoid the reduction and pruning machinery of the core crate so that
//! agreement between the two is meaningful.

use std::collections::BTreeSet;

use cartankit::embed::canonical_form;
use cartankit::exactlin::{det, inverse, Matrix, SmithForm};
use cartankit::{IntMatrix, RatMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Checks `U A V = diag`, unimodularity of `U` and `V`, and the divisor chain.
pub fn snf_is_valid(a: &IntMatrix, s: &SmithForm<BigInt>) -> bool {
    let (m, n) = a.shape();
    let Ok(prod) = s.left.mul(a).and_then(|x| x.mul(&s.right)) else {
        return false;
    };
    let unit = |u: &IntMatrix| det(u).is_ok_and(|d| d.abs().is_one());
    let chain = s.diagonal.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        }
    });
    prod == s.diagonal_matrix(m, n)
        && unit(&s.left)
        && unit(&s.right)
        && chain
        && s.diagonal.iter().all(|d| !d.is_negative())
}

fn isqrt_floor(x: &BigRational) -> i64 {
    let f = x.floor().to_integer();
    if f.is_negative() {
        return 0;
    }
    f.sqrt().to_i64().expect("small box")
}

/// Half-widths of the search box used by [`box_minimum`].
pub fn box_bounds(g: &RatMatrix) -> Vec<i64> {
    let inv = inverse(g).expect("positive definite");
    let top = (0..g.rows()).map(|i| g[(i, i)].clone()).min().expect("nonempty");
    (0..g.rows()).map(|i| isqrt_floor(&(&top * &inv[(i, i)]))).collect()
}

/// Minimum of `x G x^T` over the box `|x_i| <= sqrt(g_min * (G^-1)_ii)`.
///
/// Any diagonal entry bounds the minimum from above, and `x_i^2 <= q(x) (G^-1)_ii`
/// for every `x`, so the box contains every minimal vector.
pub fn box_minimum(g: &RatMatrix) -> BigRational {
    let n = g.rows();
    let bounds = box_bounds(g);
    let mut best = (0..n).map(|i| g[(i, i)].clone()).min().expect("nonempty");
    let mut x = bounds.iter().map(|b| -b).collect::<Vec<i64>>();
    loop {
        if x.iter().any(|&v| v != 0) {
            let v: Vec<BigRational> = x.iter().map(|&t| BigRational::from_integer(t.into())).collect();
            let q = g.quadratic(&v);
            if q < best {
                best = q;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

/// Every `Q` without zero rows with `Q^T Q = C`, up to row order and signs.
///
/// Rows are drawn from sign-normalized vectors with `v_j^2 <= c_jj`; multisets
/// are built in nonincreasing candidate order and accepted when the Gram
/// matrix matches exactly.
pub fn brute_embeddings(c: &IntMatrix) -> BTreeSet<IntMatrix> {
    let n = c.rows();
    let diag: Vec<i64> = (0..n).map(|i| c[(i, i)].to_i64().expect("small")).collect();
    let target: Vec<i64> = c.as_slice().iter().map(|x| x.to_i64().expect("small")).collect();
    let bounds: Vec<i64> = diag.iter().map(|&d| (d as f64).sqrt().floor() as i64).collect();
    let mut cands = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    'all: loop {
        let first = x.iter().find(|&&v| v != 0);
        if first.is_some_and(|&v| v > 0) {
            cands.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                break 'all;
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
    let mut out = BTreeSet::new();
    let mut chosen = Vec::new();
    let mut gram = vec![0i64; n * n];
    extend(&cands, 0, &target, &diag, n, &mut gram, &mut chosen, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    cands: &[Vec<i64>],
    from: usize,
    target: &[i64],
    diag: &[i64],
    n: usize,
    gram: &mut [i64],
    chosen: &mut Vec<usize>,
    out: &mut BTreeSet<IntMatrix>,
) {
    if gram == target {
        let rows: Vec<Vec<i64>> = chosen.iter().map(|&i| cands[i].clone()).collect();
        out.insert(canonical_form(&IntMatrix::from_i64_rows(&rows).expect("rectangular")));
        return;
    }
    for (k, v) in cands.iter().enumerate().skip(from) {
        if (0..n).any(|i| gram[i * n + i] + v[i] * v[i] > diag[i]) {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                gram[i * n + j] += v[i] * v[j];
            }
        }
        if residual_feasible(target, gram, n) {
            chosen.push(k);
            extend(cands, k, target, diag, n, gram, chosen, out);
            chosen.pop();
        }
        for i in 0..n {
            for j in 0..n {
                gram[i * n + j] -= v[i] * v[j];
            }
        }
    }
}

/// The remaining rows form a Gram matrix, so its entries obey Cauchy-Schwarz.
fn residual_feasible(target: &[i64], gram: &[i64], n: usize) -> bool {
    let r = |i: usize, j: usize| target[i * n + j] - gram[i * n + j];
    (0..n).all(|i| (i + 1..n).all(|j| r(i, j) * r(i, j) <= r(i, i) * r(j, j)))
}

/// `sum_ij w_ij c_ij`, computed entry by entry.
pub fn frobenius_pairing(w: &RatMatrix, c: &IntMatrix) -> BigRational {
    let mut s = BigRational::zero();
    for i in 0..w.rows() {
        for j in 0..w.cols() {
            s += &w[(i, j)] * BigRational::from_integer(c[(i, j)].clone());
        }
    }
    s
}

/// Integer matrix from small rows; panics on ragged input.
pub fn int(rows: &[Vec<i64>]) -> IntMatrix {
    Matrix::from_i64_rows(rows).expect("rectangular")
}

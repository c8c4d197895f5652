//! Exact LLL reduction of a Gram matrix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactlin::Matrix;

fn round(x: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (x + half).floor().to_integer()
}

/// Gram–Schmidt coefficients `mu` (strictly lower) and squared lengths `b`.
fn gram_schmidt(g: &Matrix<BigRational>) -> (Matrix<BigRational>, Vec<BigRational>) {
    let n = g.rows();
    let mut mu = Matrix::zeros(n, n);
    let mut b: Vec<BigRational> = Vec::with_capacity(n);
    let mut r = Matrix::<BigRational>::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[(i, j)].clone();
            for k in 0..j {
                s -= &mu[(j, k)] * &r[(i, k)];
            }
            r[(i, j)] = s;
        }
        for j in 0..i {
            mu[(i, j)] = &r[(i, j)] / &b[j];
        }
        b.push(r[(i, i)].clone());
    }
    (mu, b)
}

fn row_sub(g: &mut Matrix<BigRational>, t: &mut Matrix<BigInt>, k: usize, j: usize, q: &BigInt) {
    let n = g.rows();
    let qr = BigRational::from_integer(q.clone());
    for c in 0..n {
        let v = &g[(k, c)] - &qr * &g[(j, c)];
        g[(k, c)] = v;
    }
    for r in 0..n {
        let v = &g[(r, k)] - &qr * &g[(r, j)];
        g[(r, k)] = v;
    }
    for c in 0..t.cols() {
        let v = &t[(k, c)] - q * &t[(j, c)];
        t[(k, c)] = v;
    }
}

fn swap(g: &mut Matrix<BigRational>, t: &mut Matrix<BigInt>, a: usize, b: usize) {
    g.swap_rows(a, b);
    g.swap_cols(a, b);
    t.swap_rows(a, b);
}

/// LLL-reduces a positive-definite Gram matrix with `delta = 3/4`.
///
/// Returns `(reduced, t)` with `reduced = t * g * t^T` and `t` unimodular.
pub fn lll_gram(g: &Matrix<BigRational>) -> (Matrix<BigRational>, Matrix<BigInt>) {
    let n = g.rows();
    let mut g = g.clone();
    let mut t = Matrix::<BigInt>::identity(n);
    if n <= 1 {
        return (g, t);
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&g);
            let q = round(&mu[(k, j)]);
            if !q.is_zero() {
                row_sub(&mut g, &mut t, k, j, &q);
            }
        }
        let (mu, b) = gram_schmidt(&g);
        let m = &mu[(k, k - 1)];
        if b[k] < (&delta - m * m) * &b[k - 1] {
            swap(&mut g, &mut t, k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        } else {
            k += 1;
        }
    }
    sort_by_norm(&mut g, &mut t);
    (g, t)
}

/// Stable reorder of basis vectors by nondecreasing norm.
fn sort_by_norm(g: &mut Matrix<BigRational>, t: &mut Matrix<BigInt>) {
    let n = g.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g[(a, a)].cmp(&g[(b, b)]).then(a.cmp(&b)));
    *g = g.submatrix(&order, &order);
    *t = t.permute_rows(&order);
}

//! Smith and Hermite normal forms and saturated integer kernels.

use num_integer::Integer;
use num_traits::Signed;

use super::matrix::{Matrix, Scalar};

/// Scalar types that support the Euclidean normal-form algorithms.
pub trait EuclideanScalar: Scalar + Integer + Signed {}

impl<T: Scalar + Integer + Signed> EuclideanScalar for T {}

/// Smith normal form `U * A * V = diag(d_1, ..., d_r)` padded to the shape of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithForm<T> {
    /// `min(rows, cols)` nonnegative entries with `d_i | d_{i+1}`; zeros trail.
    pub diagonal: Vec<T>,
    pub left: Matrix<T>,
    pub right: Matrix<T>,
}

impl<T: EuclideanScalar> SmithForm<T> {
    /// Nonzero diagonal entries, i.e. the elementary divisors.
    pub fn elementary_divisors(&self) -> Vec<T> {
        self.diagonal.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// The diagonal padded to a `rows x cols` matrix.
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> Matrix<T> {
        let mut m = Matrix::zeros(rows, cols);
        for (i, d) in self.diagonal.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }
}

fn row_axpy<T: EuclideanScalar>(m: &mut Matrix<T>, target: usize, source: usize, factor: &T) {
    if factor.is_zero() {
        return;
    }
    for c in 0..m.cols() {
        let v = m[(target, c)].clone() - factor.clone() * m[(source, c)].clone();
        m[(target, c)] = v;
    }
}

fn col_axpy<T: EuclideanScalar>(m: &mut Matrix<T>, target: usize, source: usize, factor: &T) {
    if factor.is_zero() {
        return;
    }
    for r in 0..m.rows() {
        let v = m[(r, target)].clone() - factor.clone() * m[(r, source)].clone();
        m[(r, target)] = v;
    }
}

fn negate_row<T: EuclideanScalar>(m: &mut Matrix<T>, r: usize) {
    for v in m.row_mut(r) {
        *v = -v.clone();
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivots are chosen as the entry of smallest absolute value in the active
/// submatrix, ties broken by lowest row and then lowest column, so the
/// output is a deterministic function of the input.
pub fn snf<T: EuclideanScalar>(a: &Matrix<T>) -> SmithForm<T> {
    let (m, n) = a.shape();
    let mut s = a.clone();
    let mut u = Matrix::identity(m);
    let mut v = Matrix::identity(n);
    let steps = m.min(n);
    let mut diagonal = Vec::with_capacity(steps);

    'outer: for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &s[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => x.abs() < s[(bi, bj)].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pr, pc)) = best else {
                diagonal.extend(std::iter::repeat_n(T::zero(), steps - t));
                break 'outer;
            };
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let pivot = s[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..m {
                let q = s[(i, t)].clone() / pivot.clone();
                row_axpy(&mut s, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                dirty |= !s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                let q = s[(t, j)].clone() / pivot.clone();
                col_axpy(&mut s, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                dirty |= !s[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = offender {
                let minus_one = -T::one();
                row_axpy(&mut s, t, i, &minus_one);
                row_axpy(&mut u, t, i, &minus_one);
                continue;
            }
            if pivot.is_negative() {
                negate_row(&mut s, t);
                negate_row(&mut u, t);
            }
            diagonal.push(s[(t, t)].clone());
            break;
        }
    }

    SmithForm {
        diagonal,
        left: u,
        right: v,
    }
}

/// Elementary divisors (nonzero invariant factors) of `a`.
pub fn elementary_divisors<T: EuclideanScalar>(a: &Matrix<T>) -> Vec<T> {
    snf(a).elementary_divisors()
}

/// Rank over the integers (equal to the rank over the rationals).
pub fn integer_rank<T: EuclideanScalar>(a: &Matrix<T>) -> usize {
    hermite_with_transform(a).pivots.len()
}

/// Row-style Hermite normal form `H = U * A` together with its transform.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteForm<T> {
    pub hermite: Matrix<T>,
    pub transform: Matrix<T>,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

/// Hermite normal form with its unimodular left transform.
///
/// `H` is in row echelon form, pivots are positive and entries above a
/// pivot are reduced into `[0, pivot)`; zero rows are collected at the bottom.
pub fn hermite_with_transform<T: EuclideanScalar>(a: &Matrix<T>) -> HermiteForm<T> {
    let (m, n) = a.shape();
    let mut h = a.clone();
    let mut u = Matrix::identity(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| h[(i, c)].abs() < h[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let pivot = h[(r, c)].clone();
            let mut clean = true;
            for i in r + 1..m {
                let q = h[(i, c)].clone() / pivot.clone();
                row_axpy(&mut h, i, r, &q);
                row_axpy(&mut u, i, r, &q);
                clean &= h[(i, c)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&pivot);
            row_axpy(&mut h, i, r, &q);
            row_axpy(&mut u, i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    HermiteForm {
        hermite: h,
        transform: u,
        pivots,
    }
}

/// Row-style Hermite normal form of `a` (same shape, zero rows last).
pub fn hnf<T: EuclideanScalar>(a: &Matrix<T>) -> Matrix<T> {
    hermite_with_transform(a).hermite
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
pub fn row_lattice_basis<T: EuclideanScalar>(a: &Matrix<T>) -> Matrix<T> {
    let hf = hermite_with_transform(a);
    let rows: Vec<usize> = (0..hf.pivots.len()).collect();
    let cols: Vec<usize> = (0..a.cols()).collect();
    hf.hermite.submatrix(&rows, &cols)
}

/// Basis (as rows) of the saturated left kernel `{v : v * A = 0}`.
///
/// The rows are taken from a unimodular transform, so the kernel lattice is
/// pure, and they are then put into Hermite normal form.
pub fn kernel_basis<T: EuclideanScalar>(a: &Matrix<T>) -> Matrix<T> {
    let hf = hermite_with_transform(a);
    let r = hf.pivots.len();
    let m = a.rows();
    if r == m {
        return Matrix::empty(m);
    }
    let rows: Vec<usize> = (r..m).collect();
    let cols: Vec<usize> = (0..m).collect();
    let raw = hf.transform.submatrix(&rows, &cols);
    row_lattice_basis(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;
    use num_traits::Zero;

    fn big(rows: &[Vec<i64>]) -> Matrix<BigInt> {
        Matrix::from_i64_rows(rows).unwrap()
    }

    fn check_snf(a: &Matrix<BigInt>) -> SmithForm<BigInt> {
        let f = snf(a);
        let prod = f.left.mul(a).unwrap().mul(&f.right).unwrap();
        assert_eq!(prod, f.diagonal_matrix(a.rows(), a.cols()));
        assert!(super::super::det::det(&f.left).unwrap().abs().is_one());
        assert!(super::super::det::det(&f.right).unwrap().abs().is_one());
        for w in f.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]) || w[0].is_zero() && w[1].is_zero());
        }
        f
    }

    #[test]
    fn snf_identity() {
        let f = check_snf(&Matrix::identity(3));
        assert_eq!(f.diagonal, vec![BigInt::one(); 3]);
    }

    #[test]
    fn snf_ones_plus_identity() {
        let m = Matrix::constant_plus_identity(3, BigInt::one(), BigInt::one());
        let f = check_snf(&m);
        assert_eq!(f.diagonal, [1, 1, 4].map(BigInt::from).to_vec());
        let f2 = check_snf(&m.scale(&BigInt::from(2)));
        assert_eq!(f2.diagonal, [2, 2, 8].map(BigInt::from).to_vec());
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let f = check_snf(&big(&[vec![2, 4, 4], vec![-6, 6, 12]]));
        assert_eq!(f.diagonal, [2, 6].map(BigInt::from).to_vec());
        let z = check_snf(&Matrix::<BigInt>::zeros(2, 3));
        assert_eq!(z.diagonal, vec![BigInt::zero(); 2]);
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        let f = check_snf(&big(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.diagonal, [1, 6].map(BigInt::from).to_vec());
    }

    #[test]
    fn snf_is_deterministic() {
        let a = big(&[vec![3, 5, 7], vec![2, -4, 6], vec![1, 1, 1]]);
        assert_eq!(snf(&a), snf(&a));
    }

    #[test]
    fn snf_over_machine_integers() {
        let a = Matrix::new(2, 2, vec![4i64, 6, 6, 4]).unwrap();
        let f = snf(&a);
        assert_eq!(f.diagonal, vec![2, 10]);
    }

    #[test]
    fn hnf_shape() {
        let a = big(&[vec![2, 3, 6], vec![4, 1, 2], vec![6, 4, 8]]);
        let hf = hermite_with_transform(&a);
        assert_eq!(hf.transform.mul(&a).unwrap(), hf.hermite);
        let h = &hf.hermite;
        for (r, &c) in hf.pivots.iter().enumerate() {
            assert!(h[(r, c)].is_positive());
            for i in 0..r {
                assert!(!h[(i, c)].is_negative() && h[(i, c)] < h[(r, c)]);
            }
            for j in 0..c {
                assert!(h[(r, j)].is_zero());
            }
        }
        // rows 0 and 1 sum to row 2
        assert_eq!(hf.pivots.len(), 2);
        assert!(h.row(2).iter().all(Zero::is_zero));
    }

    #[test]
    fn hnf_is_canonical_under_row_ops() {
        let a = big(&[vec![1, 2, 3], vec![0, 4, 5]]);
        let mixed = big(&[vec![1, 6, 8], vec![1, 10, 13]]);
        assert_eq!(hnf(&a), hnf(&mixed));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = kernel_basis(&Matrix::<BigInt>::identity(3));
        assert_eq!(k.shape(), (0, 3));
    }

    #[test]
    fn kernel_is_saturated() {
        let a = big(&[vec![2], vec![0]]);
        let k = kernel_basis(&a);
        assert_eq!(k, big(&[vec![0, 1]]));
    }

    #[test]
    fn kernel_of_eight_by_three() {
        let a = big(&[
            vec![1, 1, 1],
            vec![1, 1, 1],
            vec![1, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![0, 0, 1],
        ]);
        let k = kernel_basis(&a);
        assert_eq!(k.rows(), 5);
        assert!(k.mul(&a).unwrap().is_zero());
        assert!(elementary_divisors(&k).iter().all(One::is_one));
    }
}

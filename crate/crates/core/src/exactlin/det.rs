use super::matrix::{Field, Matrix, Scalar};
use crate::error::{Error, Result};

fn require_square<T>(a: &Matrix<T>) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
///
/// Every division is exact, so this works over any integral domain as well
/// as over fields.
pub fn det<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    require_square(a)?;
    let n = a.rows();
    if n == 0 {
        return Ok(T::one());
    }
    let mut m = a.clone();
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(T::zero());
            };
            m.swap_rows(k, p);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m[(i, j)].clone() * m[(k, k)].clone() - m[(i, k)].clone() * m[(k, j)].clone()) / prev.clone();
                m[(i, j)] = v;
            }
            m[(i, k)] = T::zero();
        }
        prev = m[(k, k)].clone();
    }
    let d = m[(n - 1, n - 1)].clone();
    Ok(if sign_flip { -d } else { d })
}

/// Classical adjugate: transpose of the cofactor matrix.
pub fn adjugate<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    require_square(a)?;
    let n = a.rows();
    if n == 1 {
        return Ok(Matrix::identity(1));
    }
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let minor = det(&a.submatrix(&rows, &cols))?;
            out[(i, j)] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    Ok(out)
}

/// Inverse over a field by Gauss–Jordan elimination.
pub fn inverse<T: Field>(a: &Matrix<T>) -> Result<Matrix<T>> {
    require_square(a)?;
    let n = a.rows();
    let mut m = a.clone();
    let mut inv = Matrix::<T>::identity(n);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
            return Err(Error::validation("matrix is singular"));
        };
        m.swap_rows(k, p);
        inv.swap_rows(k, p);
        let pivot = m[(k, k)].clone();
        for j in 0..n {
            m[(k, j)] = m[(k, j)].clone() / pivot.clone();
            inv[(k, j)] = inv[(k, j)].clone() / pivot.clone();
        }
        for i in 0..n {
            if i == k || m[(i, k)].is_zero() {
                continue;
            }
            let f = m[(i, k)].clone();
            for j in 0..n {
                m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(k, j)].clone();
                inv[(i, j)] = inv[(i, j)].clone() - f.clone() * inv[(k, j)].clone();
            }
        }
    }
    Ok(inv)
}

/// Rank over a field.
pub fn rank<T: Field>(a: &Matrix<T>) -> usize {
    let mut m = a.clone();
    let (rows, cols) = m.shape();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        for i in r + 1..rows {
            if m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone() / m[(r, c)].clone();
            for j in c..cols {
                m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// `G = U^T D U` with `U` unit upper triangular, computed without pivoting.
#[derive(Debug, Clone, PartialEq)]
pub struct Ldl<T> {
    /// Strictly upper part holds the multipliers; diagonal is implicit 1.
    pub upper: Matrix<T>,
    pub diag: Vec<T>,
}

/// Symmetric decomposition used by the lattice enumerators.
///
/// Fails when some leading principal minor vanishes, so a successful result
/// with a positive diagonal certifies positive definiteness.
pub fn ldl<T: Field>(g: &Matrix<T>) -> Result<Ldl<T>> {
    require_square(g)?;
    if !g.is_symmetric() {
        return Err(Error::validation("matrix is not symmetric"));
    }
    let n = g.rows();
    let mut upper = Matrix::<T>::identity(n);
    let mut diag: Vec<T> = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = g[(i, i)].clone();
        for k in 0..i {
            let u = upper[(k, i)].clone();
            d = d - u.clone() * u * diag[k].clone();
        }
        if d.is_zero() {
            return Err(Error::validation("leading principal minor vanishes"));
        }
        for j in i + 1..n {
            let mut s = g[(i, j)].clone();
            for k in 0..i {
                s = s - upper[(k, i)].clone() * upper[(k, j)].clone() * diag[k].clone();
            }
            upper[(i, j)] = s / d.clone();
        }
        diag.push(d);
    }
    Ok(Ldl { upper, diag })
}

/// True when every leading principal minor is positive.
pub fn is_positive_definite<T: Field + PartialOrd>(g: &Matrix<T>) -> bool {
    match ldl(g) {
        Ok(f) => f.diag.iter().all(|d| *d > T::zero()),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn ones_plus_id(n: usize) -> Matrix<BigInt> {
        Matrix::constant_plus_identity(n, BigInt::one(), BigInt::one())
    }

    /// Cofactor expansion along the first row.
    fn det_by_cofactors(a: &Matrix<BigInt>) -> BigInt {
        let n = a.rows();
        if n == 1 {
            return a[(0, 0)].clone();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let term = a[(0, j)].clone() * det_by_cofactors(&a.submatrix(&rows, &cols));
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn det_of_ones_plus_identity() {
        let m = ones_plus_id(3);
        assert_eq!(det_by_cofactors(&m), BigInt::from(4));
        assert_eq!(det(&m).unwrap(), BigInt::from(4));
    }

    #[test]
    fn det_needs_pivoting() {
        let m = Matrix::from_i64_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).unwrap();
        assert_eq!(det(&m).unwrap(), det_by_cofactors(&m));
    }

    #[test]
    fn det_rejects_non_square() {
        let m = Matrix::from_i64_rows(&[vec![1, 2, 3]]).unwrap();
        assert!(matches!(det(&m), Err(Error::NotSquare { .. })));
        assert!(matches!(adjugate(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn adjugate_of_scalar_matrix() {
        let m = Matrix::<BigInt>::identity(2).scale(&BigInt::from(4));
        let adj = adjugate(&m).unwrap();
        assert_eq!(adj, m);
        assert_eq!(m.mul(&adj).unwrap(), Matrix::identity(2).scale(&BigInt::from(16)));
    }

    #[test]
    fn adjugate_of_singular() {
        let m = Matrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        let adj = adjugate(&m).unwrap();
        assert!(m.mul(&adj).unwrap().is_zero());
    }

    #[test]
    fn inverse_times_matrix() {
        let m = ones_plus_id(3).to_rational();
        let inv = inverse(&m).unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert_eq!(inv[(0, 0)], BigRational::new(3.into(), 4.into()));
    }

    #[test]
    fn ldl_reconstructs() {
        let m = ones_plus_id(4).to_rational();
        let f = ldl(&m).unwrap();
        let d = Matrix::diagonal(&f.diag);
        let back = f.upper.transpose().mul(&d).unwrap().mul(&f.upper).unwrap();
        assert_eq!(back, m);
        assert!(is_positive_definite(&m));
    }

    #[test]
    fn ldl_over_floats_matches_rationals() {
        let m = ones_plus_id(3);
        let exact = ldl(&m.to_rational()).unwrap();
        let float = ldl(&m.map(|x| f64::from(i32::try_from(x.clone()).unwrap()))).unwrap();
        for (e, f) in exact.diag.iter().zip(&float.diag) {
            let e = f64::from(i32::try_from(e.numer().clone()).unwrap())
                / f64::from(i32::try_from(e.denom().clone()).unwrap());
            assert!((e - f).abs() < 1e-12);
        }
    }

    #[test]
    fn indefinite_detected() {
        let m = Matrix::from_i64_rows(&[vec![1, 2], vec![2, 1]]).unwrap().to_rational();
        assert!(!is_positive_definite(&m));
    }

    #[test]
    fn rank_over_rationals() {
        let m = Matrix::from_i64_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]])
            .unwrap()
            .to_rational();
        assert_eq!(rank(&m), 2);
    }
}

//! Small exact linear algebra over the certified scalar field: products,
//! Gauss-Jordan inversion with certified pivot selection, and rational
//! kernel computations used by the irrationality and shift searches.

use num::{BigRational, One, Zero};

use crate::scalars::{Scalar, ScalarError, Sign};

pub type Mat = Vec<Vec<Scalar>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat, ScalarError> {
    let (ra, ca) = (a.len(), a[0].len());
    let cb = b[0].len();
    assert_eq!(ca, b.len(), "dimension mismatch");
    let mut out = zeros(ra, cb);
    for i in 0..ra {
        for j in 0..cb {
            let mut acc = Scalar::zero();
            for k in 0..ca {
                acc = acc.add(&a[i][k].mul(&b[k][j])?)?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

/// Row vector times matrix.
pub fn row_mul(v: &[Scalar], m: &Mat) -> Result<Vec<Scalar>, ScalarError> {
    let cols = m[0].len();
    let mut out = vec![Scalar::zero(); cols];
    for (i, vi) in v.iter().enumerate() {
        for j in 0..cols {
            out[j] = out[j].add(&vi.mul(&m[i][j])?)?;
        }
    }
    Ok(out)
}

/// Matrix times column vector.
pub fn mat_vec(m: &Mat, v: &[Scalar]) -> Result<Vec<Scalar>, ScalarError> {
    let mut out = vec![Scalar::zero(); m.len()];
    for (i, row) in m.iter().enumerate() {
        let mut acc = Scalar::zero();
        for (j, x) in row.iter().enumerate() {
            acc = acc.add(&x.mul(&v[j])?)?;
        }
        out[i] = acc;
    }
    Ok(out)
}

/// Gauss-Jordan inverse with certified nonzero pivots. Returns
/// `Err(DivisionByZero)` when no certifiably nonzero pivot exists in some
/// column (singular or undecidable input).
pub fn mat_inv(m: &Mat) -> Result<Mat, ScalarError> {
    let n = m.len();
    let mut a: Mat = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let mut pivot = None;
        for row in col..n {
            match a[row][col].cert_sign() {
                Sign::Positive | Sign::Negative => {
                    pivot = Some(row);
                    break;
                }
                Sign::Zero => continue,
                Sign::Undecided => return Err(ScalarError::Undecided),
            }
        }
        let p = pivot.ok_or(ScalarError::DivisionByZero)?;
        a.swap(col, p);
        inv.swap(col, p);
        let scale = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&scale)?;
            inv[col][j] = inv[col][j].mul(&scale)?;
        }
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let f = a[row][col].clone();
            for j in 0..n {
                let ta = a[col][j].mul(&f)?;
                a[row][j] = a[row][j].sub(&ta)?;
                let ti = inv[col][j].mul(&f)?;
                inv[row][j] = inv[row][j].sub(&ti)?;
            }
        }
    }
    Ok(inv)
}

/// True when the matrix has certified nonzero determinant.
pub fn cert_nonsingular(m: &Mat) -> Result<bool, ScalarError> {
    match mat_inv(m) {
        Ok(_) => Ok(true),
        Err(ScalarError::DivisionByZero) => Ok(false),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Rational linear algebra (kernels and solves for integer searches)

pub type QMat = Vec<Vec<BigRational>>;

/// Basis of the left kernel {v : v M = 0} of a rational matrix with `rows`
/// rows, via elimination on the transpose.
pub fn left_kernel(m: &QMat) -> Vec<Vec<BigRational>> {
    if m.is_empty() {
        return vec![];
    }
    let rows = m.len();
    let cols = m[0].len();
    // right kernel of the transpose (cols x rows)
    let mut t: QMat = (0..cols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect();
    // row reduce t
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; rows];
    let mut r = 0usize;
    for c in 0..rows {
        let mut sel = None;
        for row in r..cols {
            if !t[row][c].is_zero() {
                sel = Some(row);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        t.swap(r, sel);
        let inv = t[r][c].clone().recip();
        for x in t[r].iter_mut() {
            *x *= &inv;
        }
        for row in 0..cols {
            if row != r && !t[row][c].is_zero() {
                let f = t[row][c].clone();
                for j in 0..rows {
                    let adj = &f * &t[r][j];
                    t[row][j] -= adj;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == cols {
            break;
        }
    }
    // free variables = columns (of t) without pivots
    let mut basis = vec![];
    for free in 0..rows {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![BigRational::zero(); rows];
        v[free] = BigRational::one();
        for c in 0..rows {
            if let Some(pr) = pivot_of_col[c] {
                v[c] = -t[pr][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Solve M x = b exactly. Returns `Ok(None)` when inconsistent,
/// `Err(())`-like None-with-flag is avoided: an underdetermined system
/// returns a particular solution with free variables set to zero together
/// with `unique = false`.
pub fn solve_rational(m: &QMat, b: &[BigRational]) -> Option<(Vec<BigRational>, bool)> {
    let rows = m.len();
    if rows == 0 {
        return Some((vec![], true));
    }
    let cols = m[0].len();
    let mut aug: QMat = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0usize;
    for c in 0..cols {
        let mut sel = None;
        for row in r..rows {
            if !aug[row][c].is_zero() {
                sel = Some(row);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        aug.swap(r, sel);
        let inv = aug[r][c].clone().recip();
        for x in aug[r].iter_mut() {
            *x *= &inv;
        }
        for row in 0..rows {
            if row != r && !aug[row][c].is_zero() {
                let f = aug[row][c].clone();
                for j in 0..=cols {
                    let adj = &f * &aug[r][j];
                    aug[row][j] -= adj;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    // inconsistency: zero row with nonzero rhs
    for row in r..rows {
        if aug[row][..cols].iter().all(|x| x.is_zero()) && !aug[row][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    let mut unique = true;
    for c in 0..cols {
        match pivot_of_col[c] {
            Some(pr) => x[c] = aug[pr][cols].clone(),
            None => unique = false,
        }
    }
    Some((x, unique))
}

/// All integer vectors of the given dimension with l1 norm exactly `rho`,
/// in lexicographic order.
pub fn l1_shell(dim: usize, rho: i64) -> Vec<Vec<i64>> {
    let mut out = vec![];
    let mut cur = Vec::with_capacity(dim);
    fn rec(dim: usize, remaining: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == dim {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if cur.len() == dim - 1 {
            // last slot takes the remainder with either sign
            if remaining == 0 {
                cur.push(0);
                out.push(cur.clone());
                cur.pop();
            } else {
                for v in [-remaining, remaining] {
                    cur.push(v);
                    out.push(cur.clone());
                    cur.pop();
                }
            }
            return;
        }
        for v in -remaining..=remaining {
            cur.push(v);
            rec(dim, remaining - v.abs(), cur, out);
            cur.pop();
        }
    }
    rec(dim, rho, &mut cur, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn invert_sqrt2_matrix() {
        let a = Scalar::sqrt_of(2);
        let m = vec![
            vec![a.clone(), Scalar::zero()],
            vec![Scalar::one(), Scalar::one()],
        ];
        let inv = mat_inv(&m).unwrap();
        let prod = mat_mul(&m, &inv).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { Scalar::one() } else { Scalar::zero() };
                assert_eq!(prod[i][j].sub(&want).unwrap().cert_sign(), Sign::Zero);
            }
        }
    }

    #[test]
    fn singular_detected() {
        let m = vec![
            vec![Scalar::one(), Scalar::from_int(2)],
            vec![Scalar::from_int(2), Scalar::from_int(4)],
        ];
        assert!(!cert_nonsingular(&m).unwrap());
    }

    #[test]
    fn kernel_of_rank_one() {
        // M = [[1],[2],[3]] (3x1): left kernel is 2-dimensional
        let m = vec![vec![q(1)], vec![q(2)], vec![q(3)]];
        let k = left_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: BigRational = v.iter().zip(&m).map(|(a, row)| a * &row[0]).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_unique_and_inconsistent() {
        let m = vec![vec![q(2), q(0)], vec![q(0), q(3)]];
        let (x, unique) = solve_rational(&m, &[q(4), q(9)]).unwrap();
        assert!(unique);
        assert_eq!(x, vec![q(2), q(3)]);
        let bad = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve_rational(&bad, &[q(1), q(3)]).is_none());
    }
}

//! Exact integer and rational linear algebra on small dense matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `self * x`, or `None` on overflow.
    pub fn mul_vec(&self, x: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(x.len(), self.cols);
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc: i128 = 0;
            for (a, b) in self.row(i).iter().zip(x) {
                acc = acc.checked_add(*a as i128 * *b as i128)?;
            }
            out.push(i64::try_from(acc).ok()?);
        }
        Some(out)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn to_big(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    /// Principal submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }
}

/// Fraction-free (Bareiss) determinant.
pub fn bareiss_det(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_big();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// `L D L^T` factorization of a symmetric matrix, without pivoting.
#[derive(Clone, Debug)]
pub struct Ldl {
    /// Unit lower triangular factor, row-major, only `j < i` entries used.
    pub l: Vec<Vec<BigRational>>,
    pub d: Vec<BigRational>,
}

/// Index of the first vanishing pivot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroPivot(pub usize);

pub fn ldl(m: &IntMatrix) -> Result<Ldl, ZeroPivot> {
    assert!(m.is_symmetric());
    let n = m.rows();
    let mut l = vec![vec![BigRational::zero(); n]; n];
    let mut d: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..i {
            let mut s = BigRational::from_integer(m.get(i, j).into());
            for k in 0..j {
                s -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = s / &d[j];
        }
        let mut s = BigRational::from_integer(m.get(i, i).into());
        for k in 0..i {
            s -= &l[i][k] * &l[i][k] * &d[k];
        }
        if s.is_zero() {
            return Err(ZeroPivot(i));
        }
        d.push(s);
        l[i][i] = BigRational::one();
    }
    Ok(Ldl { l, d })
}

impl Ldl {
    /// Solves `M z = b`.
    pub fn solve(&self, b: &[BigRational]) -> Vec<BigRational> {
        let n = self.d.len();
        let mut y: Vec<BigRational> = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let t = &self.l[i][k] * &y[k];
                y[i] -= t;
            }
        }
        for i in 0..n {
            y[i] = &y[i] / &self.d[i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = &self.l[k][i] * &y[k];
                y[i] -= t;
            }
        }
        y
    }
}

/// Adjugate and determinant of a nonsingular matrix: `adj * M = det * I`.
pub fn adjugate(m: &IntMatrix) -> Option<(Vec<Vec<BigInt>>, BigInt)> {
    let n = m.rows();
    let det = bareiss_det(m);
    if det.is_zero() {
        return None;
    }
    // Gauss-Jordan on [M | I] over the rationals.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                m.row(i).iter().map(|&v| BigRational::from_integer(v.into())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    let detq = BigRational::from_integer(det.clone());
    let adj = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = &a[i][n + j] * &detq;
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    Some((adj, det))
}

/// Converts a matrix of big integers to `i64`, if every entry fits.
pub fn small_matrix(a: &[Vec<BigInt>]) -> Option<IntMatrix> {
    let rows: Option<Vec<Vec<i64>>> =
        a.iter().map(|r| r.iter().map(|v| v.to_i64()).collect()).collect();
    rows.map(|r| IntMatrix::from_rows(&r))
}

pub fn rational_dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// `floor(a / b)` for `b != 0`.
#[inline]
pub fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

/// Smallest integer `s` with `s * s >= n`, for `n >= 0`.
pub fn ceil_sqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1
    }
}

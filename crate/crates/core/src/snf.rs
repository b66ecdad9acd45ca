//! Smith and Hermite normal forms over the integers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::IntMatrix;

type Mat = Vec<Vec<BigInt>>;

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry dividing the next, all nonnegative.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: Mat,
    pub v: Mat,
    pub diagonal: Vec<BigInt>,
}

fn swap_cols(a: &mut Mat, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

// row_i += f * row_j
fn add_row(a: &mut Mat, i: usize, j: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    let rj = a[j].clone();
    for (x, y) in a[i].iter_mut().zip(rj.iter()) {
        *x += f * y;
    }
}

// col_i += f * col_j
fn add_col(a: &mut Mat, i: usize, j: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let t = f * &row[j];
        row[i] += t;
    }
}

fn negate_row(a: &mut Mat, i: usize) {
    for x in a[i].iter_mut() {
        *x = -core::mem::take(x);
    }
}

pub fn smith(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.to_big();
    let mut u = identity(r);
    let mut v = identity(c);
    let mut diagonal = Vec::new();
    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the trailing block goes to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                // the rest is zero
                diagonal.resize(r.min(c), BigInt::zero());
                return Smith { u, v, diagonal };
            };
            a.swap(t, bi);
            u.swap(t, bi);
            swap_cols(&mut a, t, bj);
            swap_cols(&mut v, t, bj);

            let mut clean = true;
            for i in t + 1..r {
                let q = a[i][t].div_floor(&a[t][t]);
                let nq = -q;
                add_row(&mut a, i, t, &nq);
                add_row(&mut u, i, t, &nq);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let q = a[t][j].div_floor(&a[t][t]);
                let nq = -q;
                add_col(&mut a, j, t, &nq);
                add_col(&mut v, j, t, &nq);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and go again
            let offending = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    add_row(&mut a, t, i, &one);
                    add_row(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
        diagonal.push(a[t][t].clone());
    }
    Smith { u, v, diagonal }
}

impl Smith {
    /// Invariant factors different from 1.
    pub fn nontrivial(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// Whether `b` lies in the column span of the decomposed matrix.
    pub fn in_column_lattice(&self, b: &[BigInt]) -> bool {
        let ub: Vec<BigInt> = self
            .u
            .iter()
            .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
            .collect();
        ub.iter().enumerate().all(|(i, x)| match self.diagonal.get(i) {
            Some(d) if !d.is_zero() => x.is_multiple_of(d),
            _ => x.is_zero(),
        })
    }
}

/// Lower triangular column Hermite form `H = B V` of a nonsingular square
/// matrix: positive diagonal, `0 <= H[i][j] < H[i][i]` for `j < i`.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub h: Mat,
}

pub fn column_hermite(m: &IntMatrix) -> Option<Hermite> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut h = m.to_big();
    for i in 0..n {
        // clear row i to the right of the diagonal with column gcd steps
        for j in i + 1..n {
            if h[i][j].is_zero() {
                continue;
            }
            let a = h[i][i].clone();
            let b = h[i][j].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (p, q) = (&a / &g, &b / &g);
            for row in h.iter_mut() {
                let ci = row[i].clone();
                let cj = row[j].clone();
                row[i] = &x * &ci + &y * &cj;
                row[j] = &p * &cj - &q * &ci;
            }
        }
        if h[i][i].is_zero() {
            return None;
        }
        if h[i][i].is_negative() {
            for row in h.iter_mut() {
                row[i] = -core::mem::take(&mut row[i]);
            }
        }
        for j in 0..i {
            let q = h[i][j].div_floor(&h[i][i]);
            if !q.is_zero() {
                for row in h.iter_mut() {
                    let t = &q * &row[i];
                    row[j] -= t;
                }
            }
        }
    }
    Some(Hermite { h })
}

impl Hermite {
    /// Canonical representative of `r` modulo the column lattice.
    pub fn reduce(&self, r: &[BigInt]) -> Vec<BigInt> {
        let n = self.h.len();
        let mut r = r.to_vec();
        for i in 0..n {
            let q = r[i].div_floor(&self.h[i][i]);
            if !q.is_zero() {
                for k in i..n {
                    let t = &q * &self.h[k][i];
                    r[k] -= t;
                }
            }
        }
        r
    }

    /// Index of the lattice, i.e. the product of the diagonal.
    pub fn index(&self) -> BigInt {
        (0..self.h.len()).fold(BigInt::one(), |acc, i| acc * &self.h[i][i])
    }
}

pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn zero_mat(r: usize, c: usize) -> Mat {
    vec![vec![BigInt::zero(); c]; r]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::bareiss_det;

    fn mul(a: &Mat, b: &Mat) -> Mat {
        let mut out = zero_mat(a.len(), b[0].len());
        for i in 0..a.len() {
            for j in 0..b[0].len() {
                for k in 0..b.len() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
        out
    }

    fn check(rows: &[Vec<i64>]) {
        let m = IntMatrix::from_rows(rows);
        let s = smith(&m);
        let d = mul(&mul(&s.u, &m.to_big()), &s.v);
        for i in 0..d.len() {
            for j in 0..d[0].len() {
                if i == j {
                    assert_eq!(d[i][j], s.diagonal[i]);
                } else {
                    assert!(d[i][j].is_zero());
                }
            }
        }
        for w in s.diagonal.windows(2) {
            assert!(w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
        if m.rows() == m.cols() {
            let prod: BigInt = s.diagonal.iter().product();
            assert_eq!(prod, bareiss_det(&m).abs());
        }
    }

    #[test]
    fn smith_examples() {
        check(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        check(&[vec![-2, 1], vec![1, -2]]);
        check(&[vec![6, 0], vec![0, 4]]);
        check(&[vec![0, 0], vec![0, 0]]);
        check(&[vec![1, 2, 3], vec![4, 5, 6]]);
        let s = smith(&IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(s.diagonal, big_vec(&[2, 6, 12]));
    }

    #[test]
    fn hermite_reduction_is_canonical() {
        let m = IntMatrix::from_rows(&[vec![-4, 2, 0], vec![2, -6, 2], vec![0, 2, -10]]);
        let h = column_hermite(&m).unwrap();
        assert_eq!(h.index(), bareiss_det(&m).abs());
        let s = smith(&m);
        // r and r + lattice vector reduce to the same point; membership agrees with Smith
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let r = big_vec(&[a, b, 1]);
                let shifted: Vec<BigInt> = (0..3)
                    .map(|i| &r[i] + BigInt::from(2 * m.get(i, 0) - m.get(i, 2)))
                    .collect();
                assert_eq!(h.reduce(&r), h.reduce(&shifted));
                let zero = h.reduce(&r).iter().all(|x| x.is_zero());
                assert_eq!(zero, s.in_column_lattice(&r));
            }
        }
    }
}

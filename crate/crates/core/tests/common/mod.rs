#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use plumbroot_core::exact::adjugate;
use plumbroot_core::lattice::{chi, CharVector, LatticePoint};
use plumbroot_core::IntersectionForm;

/// Per-coordinate half widths of a box around 0 that contains every `x`
/// with `chi_K(x) <= level`. With `A = -M` and centre `c = A^-1 k / 2`,
/// `(x_i - c_i)^2 <= (2 level + k^T A^-1 k / 4) (A^-1)_ii`.
pub fn oracle_box(f: &IntersectionForm, k: &CharVector, level: i64) -> Vec<i64> {
    let n = f.rank();
    let mut a = f.matrix().clone();
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, -f.entry(i, j));
        }
    }
    let (adj, det) = adjugate(&a).unwrap();
    let q = |x: BigInt| BigRational::new(x, det.clone());
    let kv: Vec<BigInt> = k.evals().iter().map(|&v| BigInt::from(v)).collect();
    let ainv_k: Vec<BigRational> =
        (0..n).map(|i| q((0..n).map(|j| &adj[i][j] * &kv[j]).sum())).collect();
    let kak: BigRational = (0..n).map(|i| &ainv_k[i] * BigRational::from_integer(kv[i].clone())).fold(BigRational::zero(), |s, x| s + x);
    let slack = BigRational::from_integer(BigInt::from(2 * level)) + kak / BigRational::from_integer(4.into());
    (0..n)
        .map(|i| {
            if slack.is_negative() {
                return 0;
            }
            let c = (&ainv_k[i] / BigRational::from_integer(2.into())).abs();
            let bound = &slack * q(adj[i][i].clone());
            let mut r = 0i64;
            loop {
                let rr = BigRational::from_integer(r.into());
                if rr >= c && (&rr - &c) * (&rr - &c) >= bound {
                    return r;
                }
                r += 1;
            }
        })
        .collect()
}

/// Every point of the oracle box with `chi <= level`, in lexicographic order.
pub fn naive_sublevel(f: &IntersectionForm, k: &CharVector, level: i64) -> Vec<(Vec<i64>, i64)> {
    let r = oracle_box(f, k, level);
    let n = f.rank();
    let mut out = Vec::new();
    let mut x: Vec<i64> = r.iter().map(|&v| -v).collect();
    'outer: loop {
        let c = chi(f, k, &LatticePoint(x.clone())).unwrap();
        if c <= level {
            out.push((x.clone(), c));
        }
        let mut i = n;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if x[i] < r[i] {
                x[i] += 1;
                continue 'outer;
            }
            x[i] = -r[i];
        }
    }
    out
}

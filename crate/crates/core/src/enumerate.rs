//! Exact enumeration of `{x : chi_K(x) <= n}`.
//!
//! With `A = -M`, `chi_K(x) <= n` is `x^T A x - k^T x <= 2n`. Coordinates are
//! fixed left to right; the remaining ones are minimised out over the reals,
//! which after clearing denominators gives an integer quadratic in the next
//! coordinate whose solution interval is found with integer arithmetic only.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::exact::{adjugate, floor_div, IntMatrix};
use crate::graph::IntersectionForm;
use crate::lattice::CharVector;

pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("enumeration budget of {limit} points exceeded")]
    BudgetExceeded { limit: usize },
    #[error("integer overflow during enumeration")]
    Overflow,
}

macro_rules! ck {
    ($e:expr) => {
        $e.ok_or(EnumError::Overflow)?
    };
}

struct Depth {
    // 4 * det of the trailing block A[m+1.., m+1..]
    four_d: i128,
    // adjugate of the trailing block, row-major
    adj: Vec<i128>,
    // 2 * A[m+1.., m]
    p: Vec<i128>,
    // 4 D A_mm - p^T adj p
    a: i128,
}

/// Precomputed data for repeated sublevel queries of one `(M, K)`.
pub struct Ellipsoid {
    n: usize,
    a: Vec<i128>,
    k: Vec<i128>,
    depths: Vec<Depth>,
}

impl Ellipsoid {
    pub fn new(form: &IntersectionForm, k: &CharVector) -> Result<Self, EnumError> {
        let n = form.rank();
        let m = form.matrix();
        let a: Vec<i128> = (0..n * n).map(|i| -(m.get(i / n, i % n) as i128)).collect();
        let k: Vec<i128> = k.evals().iter().map(|&v| v as i128).collect();
        let mut depths = Vec::with_capacity(n);
        for d in 0..n {
            let free: Vec<usize> = (d + 1..n).collect();
            let f = free.len();
            let (adj, det) = if f == 0 {
                (Vec::new(), 1i128)
            } else {
                let mut block = IntMatrix::zeros(f, f);
                for (i, &r) in free.iter().enumerate() {
                    for (j, &c) in free.iter().enumerate() {
                        block.set(i, j, -m.get(r, c));
                    }
                }
                let (adj, det) = adjugate(&block).expect("principal minors of a definite form are nonzero");
                let mut flat = Vec::with_capacity(f * f);
                for row in &adj {
                    for v in row {
                        flat.push(ck!(v.to_i128()));
                    }
                }
                (flat, ck!(det.to_i128()))
            };
            let p: Vec<i128> = free.iter().map(|&r| 2 * a[r * n + d]).collect();
            let pap = quad_form(&adj, &p, &p)?;
            let four_d = ck!(det.checked_mul(4));
            let lead = ck!(ck!(four_d.checked_mul(a[d * n + d])).checked_sub(pap));
            debug_assert!(lead > 0);
            depths.push(Depth { four_d, adj, p, a: lead });
        }
        Ok(Ellipsoid { n, a, k, depths })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Calls `visit(x, chi(x))` for every `x` with `chi(x) <= level`, in
    /// lexicographic order.
    pub fn for_each<F>(&self, level: i64, budget: usize, mut visit: F) -> Result<usize, EnumError>
    where
        F: FnMut(&[i64], i64),
    {
        let bound = ck!((level as i128).checked_mul(2));
        let mut st = State {
            x: vec![0; self.n],
            lin: vec![0; self.n],
            count: 0,
            budget,
            bound,
        };
        self.recurse(0, 0, &mut st, &mut visit)?;
        Ok(st.count)
    }

    fn recurse<F>(&self, m: usize, quad: i128, st: &mut State, visit: &mut F) -> Result<(), EnumError>
    where
        F: FnMut(&[i64], i64),
    {
        let n = self.n;
        let dp = &self.depths[m];
        let f = n - m - 1;
        // q = 2 * A[F, fixed] t - k_F
        let mut q = Vec::with_capacity(f);
        for j in m + 1..n {
            q.push(ck!(ck!(st.lin[j].checked_mul(2)).checked_sub(self.k[j])));
        }
        let mut adj_q = vec![0i128; f];
        for i in 0..f {
            let mut s: i128 = 0;
            for j in 0..f {
                s = ck!(s.checked_add(ck!(dp.adj[i * f + j].checked_mul(q[j]))));
            }
            adj_q[i] = s;
        }
        let p_adj_q = dot(&dp.p, &adj_q)?;
        let q_adj_q = dot(&q, &adj_q)?;
        let lin_m = ck!(ck!(st.lin[m].checked_mul(2)).checked_sub(self.k[m]));
        let a = dp.a;
        let b = ck!(ck!(dp.four_d.checked_mul(lin_m)).checked_sub(ck!(p_adj_q.checked_mul(2))));
        let c = ck!(ck!(dp.four_d.checked_mul(quad)).checked_sub(q_adj_q));
        let r = ck!(dp.four_d.checked_mul(st.bound));
        let Some((lo, hi)) = interval(a, b, c, r)? else {
            return Ok(());
        };
        let amm = self.a[m * n + m];
        for s in lo..=hi {
            // value of x^T A x - k^T x restricted to the fixed coordinates
            let s128 = s as i128;
            let lin_s = ck!(ck!(amm.checked_mul(s128)).checked_add(lin_m));
            let nq = ck!(quad.checked_add(ck!(lin_s.checked_mul(s128))));
            st.x[m] = s;
            if m + 1 == n {
                st.count += 1;
                if st.count > st.budget {
                    return Err(EnumError::BudgetExceeded { limit: st.budget });
                }
                // nq = x^T A x - k^T x = 2 chi
                debug_assert!(nq % 2 == 0);
                visit(&st.x, ck!(i64::try_from(nq / 2).ok()));
            } else {
                for j in m + 1..n {
                    st.lin[j] = ck!(st.lin[j].checked_add(ck!(self.a[j * n + m].checked_mul(s128))));
                }
                let res = self.recurse(m + 1, nq, st, visit);
                for j in m + 1..n {
                    st.lin[j] -= self.a[j * n + m] * s128;
                }
                res?;
            }
        }
        st.x[m] = 0;
        Ok(())
    }
}

struct State {
    x: Vec<i64>,
    // A[j, fixed] . t for every j
    lin: Vec<i128>,
    count: usize,
    budget: usize,
    bound: i128,
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128, EnumError> {
    let mut s: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        s = ck!(s.checked_add(ck!(x.checked_mul(*y))));
    }
    Ok(s)
}

fn quad_form(adj: &[i128], u: &[i128], v: &[i128]) -> Result<i128, EnumError> {
    let f = u.len();
    let mut s: i128 = 0;
    for i in 0..f {
        for j in 0..f {
            s = ck!(s.checked_add(ck!(ck!(u[i].checked_mul(adj[i * f + j])).checked_mul(v[j]))));
        }
    }
    Ok(s)
}

fn eval(a: i128, b: i128, c: i128, s: i128) -> Result<i128, EnumError> {
    Ok(ck!(ck!(ck!(ck!(a.checked_mul(s)).checked_add(b)).checked_mul(s)).checked_add(c)))
}

/// Integer interval of `a s^2 + b s + c <= r` for `a > 0`.
fn interval(a: i128, b: i128, c: i128, r: i128) -> Result<Option<(i64, i64)>, EnumError> {
    let s0 = floor_div(-b, 2 * a);
    let (g0, g1) = (eval(a, b, c, s0)?, eval(a, b, c, s0 + 1)?);
    let best = if g0 <= g1 { s0 } else { s0 + 1 };
    if g0.min(g1) > r {
        return Ok(None);
    }
    let ok = |s: i128| -> Result<bool, EnumError> { Ok(eval(a, b, c, s)? <= r) };
    // largest feasible s >= best
    let mut step: i128 = 1;
    while ok(best + step)? {
        step *= 2;
    }
    let (mut lo, mut hi) = (best + step / 2, best + step);
    if step == 1 {
        lo = best;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let top = lo;
    let mut step: i128 = 1;
    while ok(best - step)? {
        step *= 2;
    }
    let (mut hi, mut lo) = (best - step / 2, best - step);
    if step == 1 {
        hi = best;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let bottom = hi;
    Ok(Some((ck!(i64::try_from(bottom).ok()), ck!(i64::try_from(top).ok()))))
}

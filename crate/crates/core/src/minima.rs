//! Weak local minima of `chi_K`, the plateaus that found new components of
//! sublevel sets, and explicit paths joining them.
//!
//! `x` is a weak local minimum iff `chi(x +- v) >= chi(x)` for every basis
//! vector, which in terms of `y = M x` reads
//! `(M_vv - k_v)/2 <= y_v <= -(M_vv + k_v)/2`. So the minima are the points
//! `x = M^{-1} y` that are integral for `y` in an explicit integer box.
//!
//! A founder is the level set component (plateau) of a minimum that has no
//! strictly lower neighbour. Founders are exactly the leaves of the graded
//! root, and every component of every sublevel set contains one.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::enumerate::EnumError;
use crate::exact::adjugate;
use crate::graph::IntersectionForm;
use crate::lattice::{chi, chi_delta, pd, CharVector, ChiWalker, LatticePoint};
use crate::pointset::PointSet;

/// All weak local minima with their levels, sorted by point.
pub fn local_minima(
    form: &IntersectionForm,
    k: &CharVector,
    budget: usize,
) -> Result<Vec<(LatticePoint, i64)>, EnumError> {
    let n = form.rank();
    let m = form.matrix();
    let kv = k.evals();
    let lo: Vec<i64> = (0..n).map(|v| (m.get(v, v) - kv[v]) / 2).collect();
    let hi: Vec<i64> = (0..n).map(|v| -(m.get(v, v) + kv[v]) / 2).collect();
    let mut volume: usize = 1;
    for v in 0..n {
        let w = (hi[v] - lo[v] + 1) as usize;
        volume = volume.checked_mul(w).filter(|&t| t <= budget).ok_or(EnumError::BudgetExceeded { limit: budget })?;
    }
    let (adj, det) = adjugate(m).expect("definite form is nonsingular");
    let det = det.to_i128().ok_or(EnumError::Overflow)?;
    let adj: Vec<i128> = adj
        .iter()
        .flat_map(|r| r.iter().map(|v| v.to_i128()))
        .collect::<Option<Vec<_>>>()
        .ok_or(EnumError::Overflow)?;

    // odometer over y, keeping xn = adj * y
    let mut y = lo.clone();
    let mut xn: Vec<i128> = (0..n)
        .map(|i| (0..n).map(|j| adj[i * n + j] * y[j] as i128).sum())
        .collect();
    let mut out = Vec::new();
    loop {
        if xn.iter().all(|v| v % det == 0) {
            let x: Vec<i64> = xn.iter().map(|v| (v / det) as i64).collect();
            let p = LatticePoint(x);
            let c = chi(form, k, &p).map_err(|_| EnumError::Overflow)?;
            out.push((p, c));
        }
        let mut v = 0;
        while v < n {
            if y[v] < hi[v] {
                y[v] += 1;
                for i in 0..n {
                    xn[i] += adj[i * n + v];
                }
                break;
            }
            let span = (hi[v] - lo[v]) as i128;
            for i in 0..n {
                xn[i] -= adj[i * n + v] * span;
            }
            y[v] = lo[v];
            v += 1;
        }
        if v == n {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// A leaf of the graded root: a complete component of `L_{<= level}` all of
/// whose points sit at `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Founder {
    pub level: i64,
    /// Sorted; the first point is the representative.
    pub plateau: Vec<LatticePoint>,
}

impl Founder {
    pub fn representative(&self) -> &LatticePoint {
        &self.plateau[0]
    }
}

/// Founders among the given minima, sorted by level then representative.
pub fn founders(
    form: &IntersectionForm,
    k: &CharVector,
    minima: &[(LatticePoint, i64)],
    budget: usize,
) -> Result<Vec<Founder>, EnumError> {
    let n = form.rank();
    let m = form.matrix();
    let kv = k.evals();
    let mut order: Vec<usize> = (0..minima.len()).collect();
    order.sort_by(|&a, &b| (minima[a].1, &minima[a].0).cmp(&(minima[b].1, &minima[b].0)));
    let mut seen = PointSet::new(n);
    let mut out = Vec::new();
    for idx in order {
        let (start, level) = (&minima[idx].0, minima[idx].1);
        if seen.contains(&start.0) {
            continue;
        }
        let mut plateau = PointSet::new(n);
        plateau.insert(&start.0);
        let mut queue = VecDeque::new();
        queue.push_back((start.0.clone(), pd(form, start).map_err(|_| EnumError::Overflow)?));
        let mut escapes = false;
        while let Some((x, y)) = queue.pop_front() {
            for v in 0..n {
                for s in [-1i64, 1] {
                    let d = chi_delta(m, kv, &y, v, s);
                    if d < 0 {
                        escapes = true;
                    } else if d == 0 {
                        let mut x2 = x.clone();
                        x2[v] += s;
                        if plateau.insert(&x2).1 {
                            if plateau.len() > budget {
                                return Err(EnumError::BudgetExceeded { limit: budget });
                            }
                            let y2: Vec<i64> = (0..n).map(|i| y[i] + s * m.get(i, v)).collect();
                            queue.push_back((x2, y2));
                        }
                    }
                }
            }
        }
        for p in plateau.iter() {
            seen.insert(p);
        }
        if !escapes {
            out.push(Founder { level, plateau: plateau.to_sorted_points() });
        }
    }
    out.sort_by(|a, b| (a.level, a.representative()).cmp(&(b.level, b.representative())));
    Ok(out)
}

/// Walks from `from` to `to` one coordinate step at a time, always taking
/// the admissible step of least `chi` increase. Returns the largest `chi`
/// met and the number of steps.
pub fn greedy_path_max(form: &IntersectionForm, k: &CharVector, from: &LatticePoint, to: &LatticePoint) -> (i64, usize) {
    let mut w = ChiWalker::new(form, k, from);
    let mut top = w.chi;
    let mut steps = 0;
    loop {
        let mut best: Option<(i64, usize, i64)> = None;
        for v in 0..to.len() {
            let diff = to.0[v] - w.x[v];
            if diff == 0 {
                continue;
            }
            let s = diff.signum();
            let d = w.delta(v, s);
            if best.is_none_or(|(bd, _, _)| d < bd) {
                best = Some((d, v, s));
            }
        }
        let Some((_, v, s)) = best else { break };
        w.step(v, s);
        steps += 1;
        top = top.max(w.chi);
    }
    (top, steps)
}

/// Level at which all founders are certified to lie in one component, via
/// greedy paths to the highest founder in both directions.
#[derive(Clone, Debug)]
pub struct ConnectionCertificate {
    pub level: i64,
    pub hub: usize,
    /// per founder: the path maximum used and the path length
    pub paths: Vec<(i64, usize)>,
}

pub fn certify_connection(form: &IntersectionForm, k: &CharVector, founders: &[Founder]) -> ConnectionCertificate {
    assert!(!founders.is_empty());
    let hub = founders.len() - 1;
    let target = founders[hub].representative().clone();
    let mut level = founders[hub].level;
    let mut paths = vec![(founders[hub].level, 0); founders.len()];
    for (i, f) in founders.iter().enumerate().take(hub) {
        let a = greedy_path_max(form, k, f.representative(), &target);
        let b = greedy_path_max(form, k, &target, f.representative());
        let best = if b.0 < a.0 { b } else { a };
        paths[i] = best;
        level = level.max(best.0);
    }
    ConnectionCertificate { level, hub, paths }
}

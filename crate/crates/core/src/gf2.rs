//! Linear systems over GF(2).
//!
//! The systems built by the tower and model code are dominated by equations
//! in one or two unknowns (`a = b`, `a = 0`, `a = 1`). Those are solved first
//! by a union-find that tracks parities; whatever is left goes through dense
//! bitset elimination on the reduced unknowns.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)], len }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        let m = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    fn first_one_from(&self, start: usize) -> Option<usize> {
        let mut wi = start / 64;
        if wi >= self.words.len() {
            return None;
        }
        let mut w = self.words[wi] & (!0u64 << (start % 64));
        loop {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
            wi += 1;
            if wi == self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }
}

impl core::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Sum of the listed unknowns equals `rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub vars: Vec<usize>,
    pub rhs: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Gf2System {
    n_vars: usize,
    equations: Vec<Equation>,
}

/// Affine solution set `particular + span(basis)`.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub particular: BitVec,
    pub basis: Vec<BitVec>,
}

impl SolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

impl Gf2System {
    pub fn new(n_vars: usize) -> Self {
        Gf2System { n_vars, equations: Vec::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn add(&mut self, vars: &[usize], rhs: bool) {
        debug_assert!(vars.iter().all(|&v| v < self.n_vars));
        self.equations.push(Equation { vars: vars.to_vec(), rhs });
    }

    /// Whether `x` satisfies every equation.
    pub fn satisfied_by(&self, x: &BitVec) -> bool {
        self.equations.iter().all(|e| e.vars.iter().fold(false, |acc, &v| acc ^ x.get(v)) == e.rhs)
    }

    /// Solution space, or `None` if inconsistent.
    pub fn solve(&self) -> Option<SolutionSpace> {
        let n = self.n_vars;
        let zero = n;
        let mut uf = ParityUnionFind::new(n + 1, zero);
        let mut rest: Vec<(Vec<usize>, bool)> = Vec::new();
        for e in &self.equations {
            let vars = cancel_pairs(&e.vars);
            match vars.len() {
                0 if e.rhs => return None,
                0 => {}
                1 => uf.union(vars[0], zero, e.rhs)?,
                2 => uf.union(vars[0], vars[1], e.rhs)?,
                _ => rest.push((vars, e.rhs)),
            }
        }
        // columns for the remaining classes
        let rp: Vec<(usize, bool)> = (0..n).map(|v| uf.find(v)).collect();
        let mut col_of = vec![usize::MAX; n + 1];
        let mut class_roots = Vec::new();
        for &(r, _) in &rp {
            if r != zero && col_of[r] == usize::MAX {
                col_of[r] = class_roots.len();
                class_roots.push(r);
            }
        }
        let width = class_roots.len();
        let mut rows: Vec<(BitVec, bool)> = Vec::with_capacity(rest.len());
        for (vars, rhs) in rest {
            let mut row = BitVec::zeros(width);
            let mut rhs = rhs;
            for v in vars {
                let (r, p) = rp[v];
                rhs ^= p;
                if r != zero {
                    row.flip(col_of[r]);
                }
            }
            rows.push((row, rhs));
        }
        let reduced = rref(rows, width)?;
        let class_values = |free_value: &dyn Fn(usize) -> bool, with_rhs: bool| -> BitVec {
            let mut vals = BitVec::zeros(width);
            for c in 0..width {
                if !reduced.is_pivot[c] && free_value(c) {
                    vals.set(c, true);
                }
            }
            for (row, rhs, pc) in &reduced.rows {
                let mut v = with_rhs && *rhs;
                for c in row.ones() {
                    if c != *pc && vals.get(c) {
                        v = !v;
                    }
                }
                vals.set(*pc, v);
            }
            vals
        };
        let expand = |vals: &BitVec, with_parity: bool| -> BitVec {
            let mut out = BitVec::zeros(n);
            for (v, &(r, p)) in rp.iter().enumerate() {
                let base = if r == zero { false } else { vals.get(col_of[r]) };
                out.set(v, base ^ (with_parity && p));
            }
            out
        };
        let particular = expand(&class_values(&|_| false, true), true);
        let basis = (0..width)
            .filter(|&c| !reduced.is_pivot[c])
            .map(|f| expand(&class_values(&|c| c == f, false), false))
            .collect();
        Some(SolutionSpace { particular, basis })
    }

    /// Plain dense elimination without the union-find pass.
    pub fn solve_dense(&self) -> Option<SolutionSpace> {
        let n = self.n_vars;
        let rows: Vec<(BitVec, bool)> = self
            .equations
            .iter()
            .map(|e| {
                let mut row = BitVec::zeros(n);
                for &v in &e.vars {
                    row.flip(v);
                }
                (row, e.rhs)
            })
            .collect();
        let reduced = rref(rows, n)?;
        let mut particular = BitVec::zeros(n);
        for (_, rhs, pc) in &reduced.rows {
            particular.set(*pc, *rhs);
        }
        let mut basis = Vec::new();
        for f in (0..n).filter(|&c| !reduced.is_pivot[c]) {
            let mut b = BitVec::zeros(n);
            b.set(f, true);
            for (row, _, pc) in &reduced.rows {
                if row.get(f) {
                    b.set(*pc, true);
                }
            }
            basis.push(b);
        }
        Some(SolutionSpace { particular, basis })
    }
}

fn cancel_pairs(vars: &[usize]) -> Vec<usize> {
    let mut v = vars.to_vec();
    v.sort_unstable();
    let mut out: Vec<usize> = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

struct Reduced {
    // (row, rhs, pivot column); rows fully reduced
    rows: Vec<(BitVec, bool, usize)>,
    is_pivot: Vec<bool>,
}

fn rref(mut rows: Vec<(BitVec, bool)>, width: usize) -> Option<Reduced> {
    let mut done: Vec<(BitVec, bool, usize)> = Vec::new();
    let mut is_pivot = vec![false; width];
    let mut r = 0;
    while r < rows.len() {
        let Some(pc) = rows[r].0.first_one_from(0) else {
            if rows[r].1 {
                return None;
            }
            r += 1;
            continue;
        };
        let (prow, prhs) = rows.swap_remove(r);
        for (row, rhs) in rows.iter_mut() {
            if row.get(pc) {
                row.xor_assign(&prow);
                *rhs ^= prhs;
            }
        }
        for (row, rhs, _) in done.iter_mut() {
            if row.get(pc) {
                row.xor_assign(&prow);
                *rhs ^= prhs;
            }
        }
        is_pivot[pc] = true;
        done.push((prow, prhs, pc));
        r = 0;
        // rows before r were all zero and stay zero
        rows.retain(|(row, rhs)| !row.is_zero() || *rhs);
        if rows.iter().any(|(row, rhs)| row.is_zero() && *rhs) {
            return None;
        }
    }
    Some(Reduced { rows: done, is_pivot })
}

struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
    size: Vec<u32>,
    anchor: usize,
}

impl ParityUnionFind {
    fn new(n: usize, anchor: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![false; n], size: vec![1; n], anchor }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut r = x;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // compress, accumulating parity from the top
        let mut acc = false;
        for &v in path.iter().rev() {
            acc ^= self.parity[v];
            self.parity[v] = acc;
            self.parent[v] = r;
        }
        (r, if path.is_empty() { false } else { self.parity[x] })
    }

    /// Records `a + b = c`; `None` on contradiction.
    fn union(&mut self, a: usize, b: usize, c: bool) -> Option<()> {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return (pa ^ pb == c).then_some(());
        }
        let (child, root) = if ra == self.anchor || (rb != self.anchor && self.size[ra] > self.size[rb]) {
            (rb, ra)
        } else {
            (ra, rb)
        };
        self.parent[child] = root;
        self.parity[child] = pa ^ pb ^ c;
        self.size[root] += self.size[child];
        Some(())
    }
}

/// Rank of a family of vectors of equal length.
pub fn rank(vectors: &[BitVec]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let rows: Vec<(BitVec, bool)> = vectors.iter().map(|v| (v.clone(), false)).collect();
    rref(rows, first.len()).map_or(0, |r| r.rows.len())
}

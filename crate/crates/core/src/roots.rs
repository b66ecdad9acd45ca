//! Sublevel sets of `chi_K`, their components, and the graded root.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use thiserror::Error;

use crate::enumerate::{Ellipsoid, EnumError, DEFAULT_BUDGET};
use crate::graph::IntersectionForm;
use crate::lattice::{canonical_class, chi_delta, pd, CharVector, LatticePoint};
use crate::minima::{certify_connection, founders, local_minima, Founder};
use crate::pointset::PointSet;
use crate::unionfind::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum RootError {
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error("root needs levels up to {needed}, above the cap {cap}")]
    LevelCap { needed: i64, cap: i64 },
}

/// `{x : chi_K(x) <= level}` in lexicographic order.
#[derive(Clone, Debug)]
pub struct SublevelSet {
    pub level: i64,
    points: PointSet,
    chi: Vec<i64>,
}

pub fn enumerate_sublevel(
    form: &IntersectionForm,
    k: &CharVector,
    level: i64,
    budget: usize,
) -> Result<SublevelSet, EnumError> {
    let ell = Ellipsoid::new(form, k)?;
    sublevel_with(&ell, level, budget)
}

fn sublevel_with(ell: &Ellipsoid, level: i64, budget: usize) -> Result<SublevelSet, EnumError> {
    // counting is much cheaper than storing, so find out first
    ell.for_each(level, budget, |_, _| {})?;
    let mut points = PointSet::new(ell.dim());
    let mut chi = Vec::new();
    ell.for_each(level, budget, |x, c| {
        points.insert(x);
        chi.push(c);
    })?;
    Ok(SublevelSet { level, points, chi })
}

impl SublevelSet {
    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        self.points.point(i)
    }

    pub fn chi(&self, i: usize) -> i64 {
        self.chi[i]
    }

    pub fn index_of(&self, x: &[i64]) -> Option<usize> {
        self.points.get(x)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.points.contains(x)
    }

    pub fn points(&self) -> Vec<LatticePoint> {
        (0..self.len()).map(|i| self.points.lattice_point(i)).collect()
    }

    /// Pairs `(i, j)` with `point(j) = point(i) + e_v` for some basis `v`.
    pub fn adjacency(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut buf = vec![0i64; self.points.dim()];
        for i in 0..self.len() {
            buf.copy_from_slice(self.point(i));
            for v in 0..buf.len() {
                buf[v] += 1;
                if let Some(j) = self.points.get(&buf) {
                    out.push((i, j));
                }
                buf[v] -= 1;
            }
        }
        out
    }
}

/// Connected components, ordered by their smallest point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
}

pub fn components(s: &SublevelSet) -> Partition {
    let mut uf = UnionFind::new(s.len());
    for (i, j) in s.adjacency() {
        uf.union(i, j);
    }
    // indices are in lexicographic order, so first seen = smallest point
    let mut id_of_root: HashMap<usize, usize> = HashMap::new();
    let mut component_of = Vec::with_capacity(s.len());
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for i in 0..s.len() {
        let r = uf.find(i);
        let next = comps.len();
        let id = *id_of_root.entry(r).or_insert(next);
        if id == comps.len() {
            comps.push(Vec::new());
        }
        comps[id].push(i);
        component_of.push(id);
    }
    Partition { component_of, components: comps }
}

/// The component of `start` in `L_{<= level}`, found by search, sorted.
pub fn component_containing(
    form: &IntersectionForm,
    k: &CharVector,
    start: &LatticePoint,
    level: i64,
    budget: usize,
) -> Result<Vec<LatticePoint>, EnumError> {
    let n = form.rank();
    let m = form.matrix();
    let kv = k.evals();
    let c0 = crate::lattice::chi(form, k, start).map_err(|_| EnumError::Overflow)?;
    if c0 > level {
        return Ok(Vec::new());
    }
    let mut seen = PointSet::new(n);
    seen.insert(&start.0);
    let mut queue = VecDeque::new();
    queue.push_back((start.0.clone(), pd(form, start).map_err(|_| EnumError::Overflow)?, c0));
    while let Some((x, y, c)) = queue.pop_front() {
        for v in 0..n {
            for s in [-1i64, 1] {
                let c2 = c + chi_delta(m, kv, &y, v, s);
                if c2 > level {
                    continue;
                }
                let mut x2 = x.clone();
                x2[v] += s;
                if seen.insert(&x2).1 {
                    if seen.len() > budget {
                        return Err(EnumError::BudgetExceeded { limit: budget });
                    }
                    let y2: Vec<i64> = (0..n).map(|i| y[i] + s * m.get(i, v)).collect();
                    queue.push_back((x2, y2, c2));
                }
            }
        }
    }
    Ok(seen.to_sorted_points())
}

/// `C_0`: the component of `0` in `L_{<= 0}`.
pub fn zero_component(form: &IntersectionForm, k: &CharVector, budget: usize) -> Result<Vec<LatticePoint>, EnumError> {
    component_containing(form, k, &LatticePoint::zero(form.rank()), 0, budget)
}

/// How much of the root was obtained by full enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// Every level from the minimum up to `top_level` is complete.
    Complete,
    /// Only the levels from `floor_level` up; the vertices present form an
    /// induced subtree of the true root and the stable level is exact.
    Window,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootVertex {
    pub level: i64,
    /// Smallest point of the component when `size` is known; otherwise some
    /// point of it.
    pub witness: LatticePoint,
    pub size: Option<u64>,
    /// The vertex one level up, `None` at the top of the window.
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct GradedRoot {
    pub k: CharVector,
    /// Sorted by level, then witness.
    pub vertices: Vec<RootVertex>,
    /// Global minimum of `chi_K`.
    pub min_level: i64,
    /// Lowest level present in `vertices`.
    pub floor_level: i64,
    /// Least `s` with `L_{<= n}` connected for every `n >= s`.
    pub stable_level: i64,
    /// Highest level present; a single infinite chain continues above.
    pub top_level: i64,
    pub zero_vertex: Option<usize>,
    pub coverage: Coverage,
    /// Levels of all leaves of the root (one per founder), sorted.
    pub leaf_levels: Vec<i64>,
    /// Level at which explicit founder paths connect everything.
    pub path_certificate_level: i64,
}

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    pub budget: usize,
    pub max_level: Option<i64>,
    /// Fall back to a window root when enumeration exceeds the budget.
    pub allow_window: bool,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { budget: DEFAULT_BUDGET, max_level: None, allow_window: true }
    }
}

pub fn graded_root(form: &IntersectionForm, k: &CharVector, opts: &RootOptions) -> Result<GradedRoot, RootError> {
    let minima = local_minima(form, k, opts.budget)?;
    let founders = founders(form, k, &minima, opts.budget)?;
    let cert = certify_connection(form, k, &founders);
    let top = cert.level.max(0);
    if let Some(cap) = opts.max_level {
        if top > cap {
            return Err(RootError::LevelCap { needed: top, cap });
        }
    }
    match complete_root(form, k, &founders, top, opts.budget) {
        Ok(mut root) => {
            root.path_certificate_level = cert.level;
            Ok(root)
        }
        Err(EnumError::BudgetExceeded { limit }) if opts.allow_window => {
            window_root(form, k, &founders, cert.level).ok_or(RootError::Enum(EnumError::BudgetExceeded { limit }))
        }
        Err(e) => Err(e.into()),
    }
}

/// Root of `chi_{K_0}` with default options.
pub fn canonical_root(form: &IntersectionForm) -> Result<GradedRoot, RootError> {
    graded_root(form, &canonical_class(form), &RootOptions::default())
}

struct Snapshot {
    level: i64,
    // (representative index, size), sorted
    comps: Vec<(usize, u64)>,
    // for each component of the previous level, its position here
    up: Vec<usize>,
}

fn complete_root(
    form: &IntersectionForm,
    k: &CharVector,
    founders: &[Founder],
    top: i64,
    budget: usize,
) -> Result<GradedRoot, EnumError> {
    let n = form.rank();
    let ell = Ellipsoid::new(form, k)?;
    let set = sublevel_with(&ell, top, budget)?;
    let min_level = founders[0].level;
    let span = (top - min_level) as usize + 1;
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); span];
    for i in 0..set.len() {
        buckets[(set.chi(i) - min_level) as usize].push(i);
    }
    let zero_idx = set.index_of(&vec![0; n]).expect("0 lies at level 0");

    let mut uf = UnionFind::new(set.len());
    let mut min_of = (0..set.len()).collect::<Vec<usize>>();
    let mut present = vec![false; set.len()];
    let mut roots: Vec<usize> = Vec::new();
    let mut snaps: Vec<Snapshot> = Vec::with_capacity(span);
    let mut zero_pos = None;
    let mut buf = vec![0i64; n];
    for (off, bucket) in buckets.iter().enumerate() {
        let level = min_level + off as i64;
        for &i in bucket {
            present[i] = true;
            roots.push(i);
            buf.copy_from_slice(set.point(i));
            for v in 0..n {
                for s in [-1i64, 1] {
                    buf[v] += s;
                    if let Some(j) = set.index_of(&buf) {
                        if present[j] {
                            let (a, b) = (uf.find(i), uf.find(j));
                            if uf.union(a, b) {
                                let r = uf.find(a);
                                min_of[r] = min_of[a].min(min_of[b]);
                            }
                        }
                    }
                    buf[v] -= s;
                }
            }
        }
        roots.retain(|&r| uf.find(r) == r);
        let mut comps: Vec<(usize, u64, usize)> =
            roots.iter().map(|&r| (min_of[r], uf.size_of(r) as u64, r)).collect();
        comps.sort_unstable();
        let pos_of: HashMap<usize, usize> = comps.iter().enumerate().map(|(p, c)| (c.2, p)).collect();
        let up = match snaps.last() {
            Some(prev) => prev.comps.iter().map(|&(rep, _)| pos_of[&uf.find(rep)]).collect(),
            None => Vec::new(),
        };
        if level == 0 {
            zero_pos = Some(pos_of[&uf.find(zero_idx)]);
        }
        snaps.push(Snapshot { level, comps: comps.iter().map(|c| (c.0, c.1)).collect(), up });
    }
    // the certificate guarantees connectivity at `top`
    debug_assert_eq!(snaps.last().map(|s| s.comps.len()), Some(1));
    let mut stable = top;
    while stable > min_level && snaps[(stable - 1 - min_level) as usize].comps.len() == 1 {
        stable -= 1;
    }
    let top_level = stable.max(0);

    let mut vertices: Vec<RootVertex> = Vec::new();
    let mut zero_vertex = None;
    let mut prev_base = 0;
    for snap in snaps.iter().take((top_level - min_level) as usize + 1) {
        let base = vertices.len();
        for &(rep, size) in &snap.comps {
            vertices.push(RootVertex {
                level: snap.level,
                witness: set.points.lattice_point(rep),
                size: Some(size),
                parent: None,
                children: Vec::new(),
            });
        }
        if snap.level == 0 {
            zero_vertex = zero_pos.map(|p| base + p);
        }
        for (j, &p) in snap.up.iter().enumerate() {
            vertices[prev_base + j].parent = Some(base + p);
            vertices[base + p].children.push(prev_base + j);
        }
        prev_base = base;
    }
    Ok(GradedRoot {
        k: k.clone(),
        vertices,
        min_level,
        floor_level: min_level,
        stable_level: stable,
        top_level,
        zero_vertex,
        coverage: Coverage::Complete,
        leaf_levels: founders.iter().map(|f| f.level).collect(),
        path_certificate_level: top,
    })
}

fn window_root(form: &IntersectionForm, k: &CharVector, founders: &[Founder], s: i64) -> Option<GradedRoot> {
    let _ = form;
    let below = s - 1;
    let plateaus: Vec<&Founder> = founders.iter().filter(|f| f.level == below).collect();
    let deep = founders.iter().find(|f| f.level < below);
    if plateaus.is_empty() || plateaus.len() + usize::from(deep.is_some()) < 2 {
        return None;
    }
    let mut level_below: Vec<RootVertex> = plateaus
        .iter()
        .map(|f| RootVertex {
            level: below,
            witness: f.representative().clone(),
            size: Some(f.plateau.len() as u64),
            parent: None,
            children: Vec::new(),
        })
        .collect();
    if let Some(f) = deep {
        level_below.push(RootVertex {
            level: below,
            witness: f.representative().clone(),
            size: None,
            parent: None,
            children: Vec::new(),
        });
    }
    level_below.sort_by(|a, b| a.witness.cmp(&b.witness));
    let n = k.evals().len();
    let zero = LatticePoint::zero(n);
    let mut zero_vertex = if below == 0 {
        level_below
            .iter()
            .position(|v| v.size.is_some() && plateaus.iter().any(|f| f.representative() == &v.witness && f.plateau.binary_search(&zero).is_ok()))
    } else {
        None
    };
    let hub = founders.last().expect("nonempty").representative().clone();
    let mut vertices = level_below;
    let first_chain = vertices.len();
    let top_level = s.max(0);
    for level in s..=top_level {
        let id = vertices.len();
        vertices.push(RootVertex { level, witness: hub.clone(), size: None, parent: None, children: Vec::new() });
        if level == 0 {
            zero_vertex = Some(id);
        }
        if id > first_chain {
            vertices[id - 1].parent = Some(id);
            vertices[id].children.push(id - 1);
        }
    }
    for v in 0..first_chain {
        vertices[v].parent = Some(first_chain);
        vertices[first_chain].children.push(v);
    }
    Some(GradedRoot {
        k: k.clone(),
        vertices,
        min_level: founders[0].level,
        floor_level: below,
        stable_level: s,
        top_level,
        zero_vertex,
        coverage: Coverage::Window,
        leaf_levels: founders.iter().map(|f| f.level).collect(),
        path_certificate_level: s,
    })
}

impl GradedRoot {
    pub fn vertices_at(&self, level: i64) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().enumerate().filter(move |(_, v)| v.level == level).map(|(i, _)| i)
    }

    /// `(level, vertex count)` for every level present.
    pub fn level_counts(&self) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = Vec::new();
        for v in &self.vertices {
            match out.last_mut() {
                Some((l, c)) if *l == v.level => *c += 1,
                _ => out.push((v.level, 1)),
            }
        }
        out
    }

    /// Whether every level present has exactly one vertex.
    pub fn is_single_chain(&self) -> bool {
        self.level_counts().iter().all(|&(_, c)| c == 1)
    }

    /// The zero vertex and everything above it.
    pub fn trunk(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.zero_vertex;
        while let Some(v) = cur {
            out.push(v);
            cur = self.vertices[v].parent;
        }
        out
    }

    /// Vertices with no children, i.e. components that appear at their level.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].children.is_empty() && self.vertices[v].level >= self.floor_level)
            .collect()
    }

    /// Vertices at which at least two branches meet.
    pub fn branch_points(&self) -> usize {
        self.vertices.iter().filter(|v| v.children.len() >= 2).count()
    }
}

/// Outcome of one clause check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseCheck {
    pub passed: bool,
    pub detail: String,
}

impl ClauseCheck {
    fn pass(detail: String) -> Self {
        ClauseCheck { passed: true, detail }
    }

    fn fail(detail: String) -> Self {
        ClauseCheck { passed: false, detail }
    }
}

#[derive(Clone, Debug)]
pub struct RootShapeReport {
    /// `chi_{K_0}` vanishes on `C_0`.
    pub zero_on_c0: ClauseCheck,
    /// `L_{<= n}` connected for the tested `n >= 1`.
    pub connected_above_zero: ClauseCheck,
    /// One vertex per level `>= 1` and `w_0` is the end of the trunk.
    pub trunk_end: ClauseCheck,
    pub c0: Vec<LatticePoint>,
}

impl RootShapeReport {
    pub fn passed(&self) -> bool {
        self.zero_on_c0.passed && self.connected_above_zero.passed && self.trunk_end.passed
    }
}

/// Checks the three structural properties of the canonical root.
pub fn verify_canonical_root_shape(
    form: &IntersectionForm,
    root: &GradedRoot,
    budget: usize,
) -> Result<RootShapeReport, EnumError> {
    let k0 = canonical_class(form);
    let c0 = zero_component(form, &k0, budget)?;
    let bad = c0.iter().find(|x| crate::lattice::chi(form, &k0, x).ok() != Some(0));
    let mut zero_on_c0 = match bad {
        Some(x) => ClauseCheck::fail(format!("chi({:?}) != 0 on C0", x.0)),
        None => ClauseCheck::pass(format!("|C0| = {}", c0.len())),
    };
    match root.zero_vertex.map(|v| &root.vertices[v]) {
        None => zero_on_c0 = ClauseCheck::fail(String::from("no vertex holds 0 at level 0")),
        Some(w0) => {
            if let Some(sz) = w0.size {
                if sz != c0.len() as u64 {
                    zero_on_c0 = ClauseCheck::fail(format!("root vertex of 0 has {} points, search found {}", sz, c0.len()));
                }
            }
        }
    }

    let upper = root.stable_level.max(1) + 3;
    let mut connected = ClauseCheck::pass(format!("L_<=n connected for n in 1..={upper}"));
    let ell = Ellipsoid::new(form, &k0)?;
    for level in 1..=upper {
        match sublevel_with(&ell, level, budget) {
            Ok(set) => {
                let parts = components(&set);
                if parts.components.len() != 1 {
                    let a = set.points.lattice_point(parts.components[0][0]);
                    let b = set.points.lattice_point(parts.components[1][0]);
                    connected = ClauseCheck::fail(format!(
                        "L_<={level} has {} components, e.g. {:?} and {:?}",
                        parts.components.len(),
                        a.0,
                        b.0
                    ));
                    break;
                }
            }
            Err(EnumError::BudgetExceeded { .. }) => {
                // beyond the budget: rely on the founder path certificate
                connected = if root.path_certificate_level <= 1 {
                    ClauseCheck::pass(format!(
                        "every founder joined to the highest one by lattice paths inside L_<={}; no founder above level 0",
                        root.path_certificate_level
                    ))
                } else {
                    ClauseCheck::fail(format!("founder paths only certify connectivity from level {}", root.path_certificate_level))
                };
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let mut trunk_end = ClauseCheck::pass(String::from("single chain above w0"));
    for (level, count) in root.level_counts() {
        if level >= 1 && count != 1 {
            trunk_end = ClauseCheck::fail(format!("{count} vertices at level {level}"));
        }
    }
    if let Some(w0) = root.zero_vertex {
        let v = &root.vertices[w0];
        if !v.children.is_empty() {
            trunk_end = ClauseCheck::fail(format!("w0 has {} lower neighbours", v.children.len()));
        } else if let Some(p) = v.parent {
            if root.vertices[p].level != 1 {
                trunk_end = ClauseCheck::fail(String::from("w0 not joined to level 1"));
            }
        }
    } else {
        trunk_end = ClauseCheck::fail(String::from("no w0"));
    }
    if root.stable_level > 1 {
        trunk_end = ClauseCheck::fail(format!("root branches up to level {}", root.stable_level - 1));
    }
    Ok(RootShapeReport { zero_on_c0, connected_above_zero: connected, trunk_end, c0 })
}

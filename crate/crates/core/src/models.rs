//! The three descriptions of 0-dimensional lattice cohomology on a finite
//! window: functions on characteristic vectors, functions on `L`, and
//! functions on the graded root of `chi_K` restricted to the window.
//!
//! Each space is the GF(2) solution space of its compatibility relations
//! with tower values truncated at depth `d`. On a window the root is built
//! from the components of `{x in W : chi(x) <= n}` with window adjacency,
//! and its top vertices carry no upward constraint.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use thiserror::Error;

use crate::gf2::{rank, BitVec, Gf2System};
use crate::graph::IntersectionForm;
use crate::lattice::{chi, CharVector, LatticePoint};
use crate::pointset::PointSet;
use crate::tower::TowerElement;
use crate::unionfind::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("window point {0:?} has no image in the characteristic window")]
    WindowMisaligned(LatticePoint),
    #[error("function is not compatible at {0:?}")]
    Incompatible(LatticePoint),
    #[error("values differ at {a:?} and {b:?}, which share a root vertex")]
    NotConstantOnComponent { a: LatticePoint, b: LatticePoint },
    #[error("window of {points} points exceeds the budget {budget}")]
    BudgetExceeded { points: usize, budget: usize },
    #[error("function has {got} values, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
}

/// Finite set of lattice points.
#[derive(Clone, Debug)]
pub struct Window {
    points: PointSet,
}

impl Window {
    pub fn from_points(dim: usize, points: &[LatticePoint]) -> Self {
        let mut set = PointSet::new(dim);
        for p in points {
            set.insert(&p.0);
        }
        Window { points: set }
    }

    /// The box `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        let mut set = PointSet::new(dim);
        let mut x = vec![lo; dim];
        if lo > hi {
            return Window { points: set };
        }
        loop {
            set.insert(&x);
            let mut i = 0;
            loop {
                if i == dim {
                    return Window { points: set };
                }
                if x[i] < hi {
                    x[i] += 1;
                    break;
                }
                x[i] = lo;
                i += 1;
            }
        }
    }

    /// The points together with all their lattice neighbours.
    pub fn with_neighbors(dim: usize, points: &[LatticePoint]) -> Self {
        let mut set = PointSet::new(dim);
        for p in points {
            set.insert(&p.0);
            for v in 0..dim {
                for s in [-1, 1] {
                    let mut q = p.0.clone();
                    q[v] += s;
                    set.insert(&q);
                }
            }
        }
        Window { points: set }
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        self.points.point(i)
    }

    pub fn index_of(&self, x: &[i64]) -> Option<usize> {
        self.points.get(x)
    }

    /// Pairs `(i, j, v)` with `point(j) = point(i) + e_v`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut buf = vec![0i64; self.dim()];
        for i in 0..self.len() {
            buf.copy_from_slice(self.point(i));
            for v in 0..self.dim() {
                buf[v] += 1;
                if let Some(j) = self.points.get(&buf) {
                    out.push((i, j, v));
                }
                buf[v] -= 1;
            }
        }
        out
    }
}

/// Tower-valued function on an indexed finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowFunction {
    pub values: Vec<TowerElement>,
}

impl WindowFunction {
    pub fn zero(len: usize, depth: usize) -> Self {
        WindowFunction { values: vec![TowerElement::zero(depth); len] }
    }

    fn flatten(&self, depth: usize) -> BitVec {
        let mut b = BitVec::zeros(self.values.len() * depth);
        for (i, e) in self.values.iter().enumerate() {
            for j in e.support() {
                b.set(i * depth + j, true);
            }
        }
        b
    }

    fn unflatten(b: &BitVec, len: usize, depth: usize) -> Self {
        let values = (0..len)
            .map(|i| {
                let support: Vec<usize> = (0..depth).filter(|&j| b.get(i * depth + j)).collect();
                TowerElement::from_support(depth, &support)
            })
            .collect();
        WindowFunction { values }
    }
}

/// Adds `value(high) = U^gap value(low)` coefficientwise.
fn shift_equations(sys: &mut Gf2System, depth: usize, low: usize, high: usize, gap: usize) {
    for j in 0..depth {
        if j + gap < depth {
            sys.add(&[high * depth + j, low * depth + j + gap], false);
        } else {
            sys.add(&[high * depth + j], false);
        }
    }
}

/// The relations of the `L` description on a window.
pub fn l_model_system(form: &IntersectionForm, k: &CharVector, window: &Window, depth: usize) -> Gf2System {
    let chis = window_chi(form, k, window);
    let mut sys = Gf2System::new(window.len() * depth);
    for (i, j, _) in window.edges() {
        // n = chi(x) - chi(x + v)
        let n = chis[i] - chis[j];
        if n >= 0 {
            shift_equations(&mut sys, depth, j, i, n as usize);
        } else {
            shift_equations(&mut sys, depth, i, j, (-n) as usize);
        }
    }
    sys
}

fn window_chi(form: &IntersectionForm, k: &CharVector, window: &Window) -> Vec<i64> {
    (0..window.len())
        .map(|i| chi(form, k, &LatticePoint(window.point(i).to_vec())).expect("window point chi"))
        .collect()
}

/// Characteristic vectors `K + 2 PD(x)` for `x` in a window, indexed by
/// their evaluations.
#[derive(Clone, Debug)]
pub struct CharWindow {
    pub vectors: Vec<CharVector>,
    index: HashMap<Vec<i64>, usize>,
}

impl CharWindow {
    pub fn image(form: &IntersectionForm, k: &CharVector, window: &Window) -> Self {
        let vectors: Vec<CharVector> = (0..window.len())
            .map(|i| k.shifted(form, &LatticePoint(window.point(i).to_vec())).expect("window point image"))
            .collect();
        let index = vectors.iter().enumerate().map(|(i, c)| (c.evals().to_vec(), i)).collect();
        CharWindow { vectors, index }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn index_of(&self, evals: &[i64]) -> Option<usize> {
        self.index.get(evals).copied()
    }
}

/// The relations of the characteristic-vector description: for `K'` and
/// `K' + 2 PD(v)` both present, `2n = <K', v> + v.v`.
pub fn char_model_system(form: &IntersectionForm, cw: &CharWindow, depth: usize) -> Gf2System {
    let m = form.matrix();
    let n = form.rank();
    let mut sys = Gf2System::new(cw.len() * depth);
    let mut buf = vec![0i64; n];
    for (a, kv) in cw.vectors.iter().enumerate() {
        let e = kv.evals();
        for v in 0..n {
            for i in 0..n {
                buf[i] = e[i] + 2 * m.get(i, v);
            }
            let Some(b) = cw.index_of(&buf) else { continue };
            let twice = e[v] + m.get(v, v);
            debug_assert!(twice % 2 == 0);
            let shift = twice / 2;
            if shift >= 0 {
                // U^n phi(K + 2PD v) = phi(K)
                shift_equations(&mut sys, depth, b, a, shift as usize);
            } else {
                shift_equations(&mut sys, depth, a, b, (-shift) as usize);
            }
        }
    }
    sys
}

/// Graded root of `chi_K` restricted to a window.
#[derive(Clone, Debug)]
pub struct WindowRoot {
    pub level: Vec<i64>,
    pub parent: Vec<Option<usize>>,
    /// `theta(x)`: the vertex of the component of `x` at level `chi(x)`.
    pub theta: Vec<usize>,
    /// The vertex holding 0, if 0 is in the window.
    pub zero_vertex: Option<usize>,
}

impl WindowRoot {
    pub fn new(form: &IntersectionForm, k: &CharVector, window: &Window) -> Self {
        let chis = window_chi(form, k, window);
        let mut by_level: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &c) in chis.iter().enumerate() {
            by_level.entry(c).or_default().push(i);
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); window.len()];
        for (i, j, _) in window.edges() {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut uf = UnionFind::new(window.len());
        let mut present = vec![false; window.len()];
        let mut present_list: Vec<usize> = Vec::new();
        let mut level = Vec::new();
        let mut parent: Vec<Option<usize>> = Vec::new();
        let mut theta = vec![usize::MAX; window.len()];
        // vertex of each union-find root at the previous level
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let (Some(&lo), Some(&hi)) = (by_level.keys().next(), by_level.keys().next_back()) else {
            return WindowRoot { level, parent, theta, zero_vertex: None };
        };
        for n in lo..=hi {
            if let Some(pts) = by_level.get(&n) {
                for &i in pts {
                    present[i] = true;
                    present_list.push(i);
                    for &j in &adj[i] {
                        if present[j] {
                            uf.union(i, j);
                        }
                    }
                }
            }
            let mut here: HashMap<usize, usize> = HashMap::new();
            let mut reps: Vec<usize> = present_list.iter().map(|&i| uf.find(i)).collect();
            reps.sort_unstable();
            reps.dedup();
            for r in reps {
                let id = level.len();
                level.push(n);
                parent.push(None);
                here.insert(r, id);
            }
            for (&old_root, &old_vertex) in &prev {
                parent[old_vertex] = Some(here[&uf.find(old_root)]);
            }
            if let Some(pts) = by_level.get(&n) {
                for &i in pts {
                    theta[i] = here[&uf.find(i)];
                }
            }
            prev = here.into_iter().collect();
        }
        let zero_vertex = window.index_of(&vec![0; window.dim()]).map(|i| theta[i]);
        WindowRoot { level, parent, theta, zero_vertex }
    }

    pub fn len(&self) -> usize {
        self.level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level.is_empty()
    }

    /// `U psi(v) = psi(parent v)` on every edge.
    pub fn system(&self, depth: usize) -> Gf2System {
        let mut sys = Gf2System::new(self.len() * depth);
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                shift_equations(&mut sys, depth, v, *p, 1);
            }
        }
        sys
    }

    /// `theta^* psi = psi o theta`.
    pub fn pullback(&self, psi: &WindowFunction) -> WindowFunction {
        WindowFunction { values: self.theta.iter().map(|&v| psi.values[v].clone()).collect() }
    }

    /// `psi_0` of this root: `1` at the vertex of 0.
    pub fn psi0(&self, depth: usize) -> Option<WindowFunction> {
        let w0 = self.zero_vertex?;
        let mut f = WindowFunction::zero(self.len(), depth);
        f.values[w0] = TowerElement::one(depth);
        Some(f)
    }
}

/// `iota_K^* phi = phi o iota_K`, checked against the `L` relations.
pub fn iota_pullback(
    form: &IntersectionForm,
    k: &CharVector,
    window: &Window,
    cw: &CharWindow,
    phi: &WindowFunction,
) -> Result<WindowFunction, ModelError> {
    if phi.values.len() != cw.len() {
        return Err(ModelError::LengthMismatch { got: phi.values.len(), expected: cw.len() });
    }
    let mut values = Vec::with_capacity(window.len());
    for i in 0..window.len() {
        let x = LatticePoint(window.point(i).to_vec());
        let img = k.shifted(form, &x).expect("window point image");
        let a = cw.index_of(img.evals()).ok_or(ModelError::WindowMisaligned(x))?;
        values.push(phi.values[a].clone());
    }
    let out = WindowFunction { values };
    check_l_compatible(form, k, window, &out)?;
    Ok(out)
}

/// Checks the `L` relations, naming a point where one fails.
pub fn check_l_compatible(
    form: &IntersectionForm,
    k: &CharVector,
    window: &Window,
    phi: &WindowFunction,
) -> Result<(), ModelError> {
    let chis = window_chi(form, k, window);
    for (i, j, _) in window.edges() {
        let n = chis[i] - chis[j];
        let ok = if n >= 0 {
            phi.values[j].u_pow(n as usize) == phi.values[i]
        } else {
            phi.values[i].u_pow((-n) as usize) == phi.values[j]
        };
        if !ok {
            return Err(ModelError::Incompatible(LatticePoint(window.point(i).to_vec())));
        }
    }
    Ok(())
}

/// The `psi` with `psi o theta = phi`, if `phi` is constant on the points
/// sent to each vertex. Vertices not hit by `theta` get `U psi(child)`.
pub fn theta_pushforward_check(
    root: &WindowRoot,
    window: &Window,
    phi: &WindowFunction,
    depth: usize,
) -> Result<WindowFunction, ModelError> {
    let mut psi: Vec<Option<TowerElement>> = vec![None; root.len()];
    let mut owner: Vec<usize> = vec![usize::MAX; root.len()];
    for (i, &v) in root.theta.iter().enumerate() {
        match &psi[v] {
            None => {
                psi[v] = Some(phi.values[i].clone());
                owner[v] = i;
            }
            Some(e) if *e != phi.values[i] => {
                return Err(ModelError::NotConstantOnComponent {
                    a: LatticePoint(window.point(owner[v]).to_vec()),
                    b: LatticePoint(window.point(i).to_vec()),
                });
            }
            Some(_) => {}
        }
    }
    // vertices are created level by level, so children precede parents
    for v in 0..root.len() {
        if let Some(p) = root.parent[v] {
            if psi[p].is_none() {
                let up = psi[v].as_ref().map_or_else(|| TowerElement::zero(depth), TowerElement::u);
                psi[p] = Some(up);
            }
        }
    }
    let out = WindowFunction { values: psi.into_iter().map(|e| e.unwrap_or_else(|| TowerElement::zero(depth))).collect() };
    for (v, p) in root.parent.iter().enumerate() {
        if let Some(p) = p {
            if out.values[v].u() != out.values[*p] {
                let i = root.theta.iter().position(|&t| t == v).unwrap_or(0);
                return Err(ModelError::Incompatible(LatticePoint(window.point(i).to_vec())));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelReport {
    pub points: usize,
    pub depth: usize,
    pub root_vertices: usize,
    pub char_dim: usize,
    pub l_dim: usize,
    pub root_dim: usize,
    /// The pullback of a basis of the characteristic space is a basis of
    /// the `L` space.
    pub iota_bijective: bool,
    /// Likewise for `theta^*` from the root space.
    pub theta_bijective: bool,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.char_dim == self.l_dim && self.l_dim == self.root_dim && self.iota_bijective && self.theta_bijective
    }
}

pub const DEFAULT_MODEL_BUDGET: usize = 200_000;

pub fn check_model_equivalence(
    form: &IntersectionForm,
    k: &CharVector,
    window: &Window,
    depth: usize,
    budget: usize,
) -> Result<ModelReport, ModelError> {
    if window.len() > budget {
        return Err(ModelError::BudgetExceeded { points: window.len(), budget });
    }
    let l_sys = l_model_system(form, k, window, depth);
    let cw = CharWindow::image(form, k, window);
    let c_sys = char_model_system(form, &cw, depth);
    let root = WindowRoot::new(form, k, window);
    let r_sys = root.system(depth);
    // every system is homogeneous, so all three are solvable
    let l_space = l_sys.solve().expect("homogeneous");
    let c_space = c_sys.solve().expect("homogeneous");
    let r_space = r_sys.solve().expect("homogeneous");

    let l_dim = l_space.dimension();
    let pulled: Vec<BitVec> = c_space
        .basis
        .iter()
        .map(|b| {
            let phi = WindowFunction::unflatten(b, cw.len(), depth);
            iota_pullback(form, k, window, &cw, &phi).map(|f| f.flatten(depth))
        })
        .collect::<Result<_, _>>()
        .unwrap_or_default();
    let iota_bijective = pulled.len() == c_space.dimension() && rank(&pulled) == l_dim && c_space.dimension() == l_dim;
    let theta_images: Vec<BitVec> = r_space
        .basis
        .iter()
        .map(|b| root.pullback(&WindowFunction::unflatten(b, root.len(), depth)).flatten(depth))
        .collect();
    let theta_bijective = theta_images.iter().all(|b| l_sys.satisfied_by(b))
        && rank(&theta_images) == r_space.dimension()
        && r_space.dimension() == l_dim;
    Ok(ModelReport {
        points: window.len(),
        depth,
        root_vertices: root.len(),
        char_dim: c_space.dimension(),
        l_dim,
        root_dim: r_space.dimension(),
        iota_bijective,
        theta_bijective,
    })
}

/// Outcome of following `phi_0` through both maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phi0Chain {
    /// Support of `phi_0` inside the window.
    pub char_support: usize,
    pub char_compatible: bool,
    /// `iota^* phi_0` is the indicator of `support_points`.
    pub pullback_is_indicator: bool,
    /// The pushforward through `theta` is `psi_0` of the window root.
    pub pushforward_is_psi0: bool,
}

impl Phi0Chain {
    pub fn passed(&self) -> bool {
        self.char_compatible && self.pullback_is_indicator && self.pushforward_is_psi0
    }
}

/// Takes the characteristic function equal to `1` on `support` (the
/// vectors `K + 2 PD(s)` for the listed `s`), pulls it back to `L` and
/// pushes it to the window root.
pub fn phi0_chain(
    form: &IntersectionForm,
    k: &CharVector,
    window: &Window,
    support_points: &[LatticePoint],
    depth: usize,
) -> Result<Phi0Chain, ModelError> {
    let cw = CharWindow::image(form, k, window);
    let mut phi = WindowFunction::zero(cw.len(), depth);
    let mut char_support = 0;
    for s in support_points {
        let img = k.shifted(form, s).expect("support image");
        let a = cw.index_of(img.evals()).ok_or_else(|| ModelError::WindowMisaligned(s.clone()))?;
        phi.values[a] = TowerElement::one(depth);
        char_support += 1;
    }
    let char_compatible = char_model_system(form, &cw, depth).satisfied_by(&phi.flatten(depth));
    let pulled = iota_pullback(form, k, window, &cw, &phi)?;
    let mut indicator = WindowFunction::zero(window.len(), depth);
    for s in support_points {
        let i = window.index_of(&s.0).ok_or_else(|| ModelError::WindowMisaligned(s.clone()))?;
        indicator.values[i] = TowerElement::one(depth);
    }
    let root = WindowRoot::new(form, k, window);
    let pushed = theta_pushforward_check(&root, window, &pulled, depth)?;
    let pushforward_is_psi0 = root.psi0(depth).is_some_and(|p| p == pushed);
    Ok(Phi0Chain { char_support, char_compatible, pullback_is_indicator: pulled == indicator, pushforward_is_psi0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::lattice::canonical_class;

    fn setup(g: &crate::graph::PlumbingGraph) -> (IntersectionForm, CharVector) {
        let f = IntersectionForm::new(g).unwrap();
        let k = canonical_class(&f);
        (f, k)
    }

    #[test]
    fn single_minus_two() {
        let (f, k) = setup(&corpus::single(-2));
        let w = Window::cube(1, -2, 2);
        let r = check_model_equivalence(&f, &k, &w, 3, 1000).unwrap();
        assert!(r.passed(), "{r:?}");
        let chain = phi0_chain(&f, &k, &w, &[LatticePoint(vec![0])], 3).unwrap();
        assert!(chain.passed(), "{chain:?}");
    }

    #[test]
    fn single_minus_one_forces_equal_values() {
        let (f, k) = setup(&corpus::single(-1));
        let w = Window::cube(1, -2, 3);
        let r = check_model_equivalence(&f, &k, &w, 3, 1000).unwrap();
        assert!(r.passed(), "{r:?}");
        let root = WindowRoot::new(&f, &k, &w);
        let i0 = w.index_of(&[0]).unwrap();
        let i1 = w.index_of(&[1]).unwrap();
        assert_eq!(root.theta[i0], root.theta[i1]);
        // a function separating 0 and E cannot come from the root
        let mut phi = WindowFunction::zero(w.len(), 3);
        phi.values[i0] = TowerElement::one(3);
        assert!(matches!(
            theta_pushforward_check(&root, &w, &phi, 3),
            Err(ModelError::NotConstantOnComponent { .. })
        ));
        let chain = phi0_chain(&f, &k, &w, &[LatticePoint(vec![0]), LatticePoint(vec![1])], 3).unwrap();
        assert!(chain.passed(), "{chain:?}");
    }

    #[test]
    fn zero_function_pulls_back_to_zero() {
        let (f, k) = setup(&corpus::a_n(2));
        let w = Window::cube(2, -1, 1);
        let cw = CharWindow::image(&f, &k, &w);
        let z = iota_pullback(&f, &k, &w, &cw, &WindowFunction::zero(cw.len(), 2)).unwrap();
        assert!(z.values.iter().all(TowerElement::is_zero));
    }
}

//! Functions on a graded root with values in `T_0^+ = F[U, U^-1] / U F[U]`
//! over GF(2), and the `Ker U`, `Im U` and height tests for `psi_0`.
//!
//! A root is modelled by its materialised vertices plus `depth` extra chain
//! vertices standing in for the infinite chain above `top_level`. Tower
//! elements keep the coefficients of `U^0, U^-1, ..., U^-(depth-1)`.

use alloc::vec::Vec;

use thiserror::Error;

use crate::gf2::{BitVec, Gf2System};
use crate::roots::GradedRoot;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("truncation depth {depth} is below the faithful bound {required}")]
    TruncationTooShallow { depth: usize, required: usize },
    #[error("the root has no vertex for the component of 0")]
    NoZeroVertex,
    #[error("edge condition fails between vertex {vertex} and its parent")]
    EdgeConditionViolated { vertex: usize },
    #[error("function has {got} values, the model has {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },
}

/// Element of the truncated tower; bit `j` is the coefficient of `U^-j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerElement(BitVec);

impl TowerElement {
    pub fn zero(depth: usize) -> Self {
        TowerElement(BitVec::zeros(depth))
    }

    /// `U^-j`.
    pub fn u_inv(depth: usize, j: usize) -> Self {
        let mut e = Self::zero(depth);
        e.0.set(j, true);
        e
    }

    /// `1 = U^0`.
    pub fn one(depth: usize) -> Self {
        Self::u_inv(depth, 0)
    }

    pub fn from_support(depth: usize, support: &[usize]) -> Self {
        let mut e = Self::zero(depth);
        for &j in support {
            e.0.flip(j);
        }
        e
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn coeff(&self, j: usize) -> bool {
        j < self.0.len() && self.0.get(j)
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.ones().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn u(&self) -> Self {
        self.u_pow(1)
    }

    pub fn u_pow(&self, n: usize) -> Self {
        let d = self.depth();
        let mut out = Self::zero(d);
        for j in self.0.ones().filter(|&j| j >= n) {
            out.0.set(j - n, true);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.0.xor_assign(&other.0);
        out
    }
}

/// Extended root: the root's vertices followed by the tail chain.
#[derive(Clone, Debug)]
pub struct TowerModel {
    depth: usize,
    root_len: usize,
    level: Vec<i64>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    zero_vertex: Option<usize>,
    complete: bool,
}

/// Smallest depth at which the truncated model is faithful for `root`.
pub fn faithful_depth(root: &GradedRoot) -> usize {
    (root.stable_level - root.floor_level).max(0) as usize + 2
}

impl TowerModel {
    pub fn new(root: &GradedRoot, depth: usize) -> Result<Self, TowerError> {
        let required = faithful_depth(root);
        if depth < required {
            return Err(TowerError::TruncationTooShallow { depth, required });
        }
        let root_len = root.vertices.len();
        let mut level: Vec<i64> = root.vertices.iter().map(|v| v.level).collect();
        let mut parent: Vec<Option<usize>> = root.vertices.iter().map(|v| v.parent).collect();
        let top = root
            .vertices
            .iter()
            .position(|v| v.parent.is_none() && v.level == root.top_level)
            .expect("root has a top vertex");
        let mut below = top;
        for t in 0..depth {
            let id = root_len + t;
            parent[below] = Some(id);
            parent.push(None);
            level.push(root.top_level + 1 + t as i64);
            below = id;
        }
        let mut children = alloc::vec![Vec::new(); parent.len()];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(v);
            }
        }
        Ok(TowerModel {
            depth,
            root_len,
            level,
            parent,
            children,
            zero_vertex: root.zero_vertex,
            complete: root.coverage == crate::roots::Coverage::Complete,
        })
    }

    pub fn with_default_depth(root: &GradedRoot) -> Self {
        Self::new(root, faithful_depth(root)).expect("faithful depth")
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Vertices including the tail.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of vertices that come from the root itself.
    pub fn root_len(&self) -> usize {
        self.root_len
    }

    pub fn level(&self, v: usize) -> i64 {
        self.level[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn zero(&self) -> RootFunction {
        RootFunction { values: alloc::vec![TowerElement::zero(self.depth); self.len()] }
    }

    /// Checks `U psi(v) = psi(parent v)` on every edge, and that the value
    /// leaving the top of the tail vanishes.
    pub fn validate(&self, psi: &RootFunction) -> Result<(), TowerError> {
        if psi.values.len() != self.len() {
            return Err(TowerError::LengthMismatch { got: psi.values.len(), expected: self.len() });
        }
        for v in 0..self.len() {
            let up = psi.values[v].u();
            let ok = match self.parent[v] {
                Some(p) => up == psi.values[p],
                None => up.is_zero(),
            };
            if !ok {
                return Err(TowerError::EdgeConditionViolated { vertex: v });
            }
        }
        Ok(())
    }
}

impl TowerModel {
    /// A basis of the functions satisfying the edge condition.
    pub fn function_basis(&self) -> Vec<RootFunction> {
        let d = self.depth;
        let mut sys = Gf2System::new(self.len() * d);
        for v in 0..self.len() {
            for j in 0..d {
                let lower = (j + 1 < d).then(|| v * d + j + 1);
                let upper = self.parent[v].map(|p| p * d + j);
                let vars: Vec<usize> = lower.into_iter().chain(upper).collect();
                if !vars.is_empty() {
                    sys.add(&vars, false);
                }
            }
        }
        let space = sys.solve().expect("homogeneous");
        space
            .basis
            .iter()
            .map(|b| RootFunction {
                values: (0..self.len())
                    .map(|v| {
                        let support: Vec<usize> = (0..d).filter(|&j| b.get(v * d + j)).collect();
                        TowerElement::from_support(d, &support)
                    })
                    .collect(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootFunction {
    pub values: Vec<TowerElement>,
}

impl RootFunction {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(TowerElement::is_zero)
    }

    pub fn add(&self, other: &RootFunction) -> RootFunction {
        RootFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect() }
    }
}

/// `psi_0`: `1` at `w_0`, zero elsewhere.
pub fn psi0(model: &TowerModel) -> Result<RootFunction, TowerError> {
    let w0 = model.zero_vertex.ok_or(TowerError::NoZeroVertex)?;
    let mut psi = model.zero();
    psi.values[w0] = TowerElement::one(model.depth);
    model.validate(&psi)?;
    Ok(psi)
}

pub fn u_apply(psi: &RootFunction) -> RootFunction {
    RootFunction { values: psi.values.iter().map(TowerElement::u).collect() }
}

pub fn in_ker_u(psi: &RootFunction) -> bool {
    u_apply(psi).is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    /// Parity union-find followed by dense elimination.
    Presolve,
    /// Dense elimination on all unknowns.
    Dense,
}

#[derive(Clone, Debug)]
pub struct ImageTest {
    pub in_image: bool,
    /// `psi'` with `U^n psi' = psi`, when one exists.
    pub witness: Option<RootFunction>,
    /// False when the root is a window and a solution was found there; the
    /// full root may still obstruct it. A negative answer is always final.
    pub conclusive: bool,
    pub unknowns: usize,
    pub equations: usize,
}

/// Decides `psi in Im U`.
pub fn in_im_u(model: &TowerModel, psi: &RootFunction) -> Result<ImageTest, TowerError> {
    in_im_u_power(model, psi, 1, Solver::Presolve)
}

/// Decides `psi in U^n H` by elimination over the coefficients of `psi'`.
pub fn in_im_u_power(model: &TowerModel, psi: &RootFunction, n: usize, solver: Solver) -> Result<ImageTest, TowerError> {
    model.validate(psi)?;
    let d = model.depth;
    let var = |v: usize, j: usize| v * d + j;
    let mut sys = Gf2System::new(model.len() * d);
    for v in 0..model.len() {
        // U^n psi'(v) = psi(v)
        for j in 0..d {
            let rhs = psi.values[v].coeff(j);
            if j + n < d {
                sys.add(&[var(v, j + n)], rhs);
            } else {
                sys.add(&[], rhs);
            }
        }
        // U psi'(v) = psi'(parent), and nothing leaves the top of the tail
        for j in 0..d {
            let lower = (j + 1 < d).then(|| var(v, j + 1));
            let upper = model.parent[v].map(|p| var(p, j));
            let vars: Vec<usize> = lower.into_iter().chain(upper).collect();
            if !vars.is_empty() {
                sys.add(&vars, false);
            }
        }
    }
    let solved = match solver {
        Solver::Presolve => sys.solve(),
        Solver::Dense => sys.solve_dense(),
    };
    let (unknowns, equations) = (sys.n_vars(), sys.equations().len());
    Ok(match solved {
        None => ImageTest { in_image: false, witness: None, conclusive: true, unknowns, equations },
        Some(space) => {
            let values = (0..model.len())
                .map(|v| {
                    let mut e = TowerElement::zero(d);
                    for j in 0..d {
                        e.0.set(j, space.particular.get(var(v, j)));
                    }
                    e
                })
                .collect();
            ImageTest {
                in_image: true,
                witness: Some(RootFunction { values }),
                conclusive: model.complete,
                unknowns,
                equations,
            }
        }
    })
}

/// Structural test: the root is a single chain.
pub fn is_rational(root: &GradedRoot) -> bool {
    root.is_single_chain()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Height {
    Finite(usize),
    Infinite,
    /// `psi_0 in U^cap H` and no decision was reached below the cap.
    AtLeast(usize),
}

pub const DEFAULT_HEIGHT_CAP: usize = 64;

/// Largest `n` with `psi_0 in U^n H`, each `n` solved directly.
pub fn height_of_tower(root: &GradedRoot, cap: usize) -> Result<Height, TowerError> {
    if is_rational(root) {
        return Ok(Height::Infinite);
    }
    let base = faithful_depth(root);
    for n in 1..=cap {
        let model = TowerModel::new(root, base + n)?;
        let psi = psi0(&model)?;
        let t = in_im_u_power(&model, &psi, n, Solver::Presolve)?;
        if !t.in_image {
            return Ok(Height::Finite(n - 1));
        }
    }
    Ok(Height::AtLeast(cap))
}

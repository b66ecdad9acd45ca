//! Plumbing trees and their intersection forms.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::{adjugate, ldl, IntMatrix, Ldl, ZeroPivot};
use crate::snf::{smith, Smith};
use crate::unionfind::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("edge refers to unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self loop at `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge `{0}` -- `{1}`")]
    DuplicateEdge(String, String),
    #[error("edge `{0}` -- `{1}` closes a cycle")]
    Cycle(String, String),
    #[error("graph is disconnected: `{0}` is not reachable from `{1}`")]
    Disconnected(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("intersection form is not negative definite (pivot {pivot} at vertex `{vertex}`)")]
    NotNegativeDefinite { vertex: String, index: usize, pivot: BigRational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub weight: i64,
}

/// A weighted tree. Vertices keep their declaration order; edges are stored
/// as sorted index pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl PlumbingGraph {
    pub fn new<S: AsRef<str>>(
        vertices: &[(S, i64)],
        edges: &[(S, S)],
    ) -> Result<Self, GraphError> {
        let vs: Vec<Vertex> = vertices
            .iter()
            .map(|(n, w)| Vertex { name: n.as_ref().to_string(), weight: *w })
            .collect();
        let lookup = |name: &str| {
            vs.iter()
                .position(|v| v.name == name)
                .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
        };
        let mut es = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            es.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_indices(vs, &es)
    }

    /// Builds from vertices and index pairs.
    pub fn from_indices(vertices: Vec<Vertex>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let n = vertices.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].iter().any(|u| u.name == v.name) {
                return Err(GraphError::DuplicateVertex(v.name.clone()));
            }
        }
        let name = |i: usize| vertices[i].name.clone();
        let mut uf = UnionFind::new(n);
        let mut sorted = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            assert!(a < n && b < n, "edge index out of range");
            if a == b {
                return Err(GraphError::SelfLoop(name(a)));
            }
            let e = (a.min(b), a.max(b));
            if sorted.contains(&e) {
                return Err(GraphError::DuplicateEdge(name(a), name(b)));
            }
            if !uf.union(a, b) {
                return Err(GraphError::Cycle(name(a), name(b)));
            }
            sorted.push(e);
        }
        if let Some(i) = (1..n).find(|&i| uf.find(i) != uf.find(0)) {
            return Err(GraphError::Disconnected(name(i), name(0)));
        }
        sorted.sort_unstable();
        let mut adjacency = alloc::vec![Vec::new(); n];
        for &(a, b) in &sorted {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        Ok(PlumbingGraph { vertices, edges: sorted, adjacency })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.vertices[v].weight
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vertices[v].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn intersection_matrix(&self) -> IntMatrix {
        let n = self.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, v) in self.vertices.iter().enumerate() {
            m.set(i, i, v.weight);
        }
        for &(a, b) in &self.edges {
            m.set(a, b, 1);
            m.set(b, a, 1);
        }
        m
    }

    /// Same graph with vertex `perm[i]` of the result being vertex `i` here.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let n = self.len();
        assert_eq!(perm.len(), n);
        let mut vertices: Vec<Option<Vertex>> = (0..n).map(|_| None).collect();
        for (i, &p) in perm.iter().enumerate() {
            vertices[p] = Some(self.vertices[i].clone());
        }
        let vertices: Vec<Vertex> = vertices.into_iter().map(|v| v.expect("not a permutation")).collect();
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        Self::from_indices(vertices, &edges).expect("relabeling preserves validity")
    }
}

/// The intersection lattice of a negative definite plumbing tree.
#[derive(Clone, Debug)]
pub struct IntersectionForm {
    matrix: IntMatrix,
    det: BigInt,
    ldl: Ldl,
    adj: Vec<Vec<BigInt>>,
}

impl IntersectionForm {
    pub fn new(graph: &PlumbingGraph) -> Result<Self, FormError> {
        let names: Vec<String> = graph.vertices().iter().map(|v| v.name.clone()).collect();
        Self::with_names(graph.intersection_matrix(), &names)
    }

    /// Any symmetric integer matrix; vertex names are only used in errors.
    pub fn from_matrix(matrix: IntMatrix) -> Result<Self, FormError> {
        let names: Vec<String> = (0..matrix.rows()).map(|i| alloc::format!("{i}")).collect();
        Self::with_names(matrix, &names)
    }

    fn with_names(matrix: IntMatrix, names: &[String]) -> Result<Self, FormError> {
        assert!(matrix.is_symmetric(), "intersection matrix must be symmetric");
        let ldl = match ldl(&matrix) {
            Ok(f) => f,
            Err(ZeroPivot(i)) => {
                return Err(FormError::NotNegativeDefinite {
                    vertex: names[i].clone(),
                    index: i,
                    pivot: BigRational::zero(),
                })
            }
        };
        if let Some(i) = ldl.d.iter().position(|p| !p.is_negative()) {
            return Err(FormError::NotNegativeDefinite {
                vertex: names[i].clone(),
                index: i,
                pivot: ldl.d[i].clone(),
            });
        }
        let (adj, det) = adjugate(&matrix).expect("definite form is nonsingular");
        Ok(IntersectionForm { matrix, det, ldl, adj })
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix.get(i, j)
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// Order of the discriminant group `H = Z^n / M Z^n`.
    pub fn discriminant_order(&self) -> BigInt {
        self.det.abs()
    }

    /// `adj(M)`, so that `M^-1 = adj / det`.
    pub fn adjugate(&self) -> &[Vec<BigInt>] {
        &self.adj
    }

    pub fn ldl(&self) -> &Ldl {
        &self.ldl
    }

    /// Smith decomposition of `M`; the nontrivial invariant factors give `H`.
    pub fn smith(&self) -> Smith {
        smith(&self.matrix)
    }
}

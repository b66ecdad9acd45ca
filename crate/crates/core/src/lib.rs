//! Lattice cohomology data of negative definite plumbing trees: the canonical
//! class, graded roots of `chi_K`, the distinguished element `psi_0` of the
//! root module and its `U`-divisibility, and the blowdown calculus producing
//! the exceptional classes and their subset sums.
#![no_std]

extern crate alloc;

pub mod blowdown;
pub mod corpus;
pub mod enumerate;
pub mod exact;
pub mod gf2;
pub mod graph;
pub mod lattice;
pub mod minima;
pub mod models;
pub mod pointset;
pub mod roots;
pub mod snf;
pub mod tower;
pub mod unionfind;

pub use graph::{FormError, GraphError, IntersectionForm, PlumbingGraph, Vertex};
pub use lattice::{canonical_class, chi, k_squared, pd, same_orbit, w, CharVector, LatticePoint};
pub use roots::{graded_root, GradedRoot, RootOptions};

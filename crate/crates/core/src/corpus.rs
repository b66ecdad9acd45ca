//! Named graphs and random generators used by tests and the command line.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::graph::{IntersectionForm, PlumbingGraph, Vertex};

fn named(vertices: &[(&str, i64)], edges: &[(&str, &str)]) -> PlumbingGraph {
    PlumbingGraph::new(vertices, edges).expect("corpus graph is a tree")
}

pub fn single(weight: i64) -> PlumbingGraph {
    named(&[("E", weight)], &[])
}

/// Linear chain `v0 - v1 - ...`.
pub fn chain(weights: &[i64]) -> PlumbingGraph {
    let vertices: Vec<Vertex> =
        weights.iter().enumerate().map(|(i, &w)| Vertex { name: format!("v{i}"), weight: w }).collect();
    let edges: Vec<(usize, usize)> = (1..weights.len()).map(|i| (i - 1, i)).collect();
    PlumbingGraph::from_indices(vertices, &edges).expect("chain")
}

pub fn a_n(n: usize) -> PlumbingGraph {
    chain(&vec![-2; n])
}

/// `E_8`: a chain of seven `-2` vertices with an eighth attached to the fifth.
pub fn e8() -> PlumbingGraph {
    let vertices: Vec<Vertex> = (0..8).map(|i| Vertex { name: format!("v{i}"), weight: -2 }).collect();
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    PlumbingGraph::from_indices(vertices, &edges).expect("E8")
}

/// The star with central `-1` and arms `-2, -3, -7`; boundary `Sigma(2,3,7)`.
pub fn sigma_2_3_7() -> PlumbingGraph {
    named(&[("C", -1), ("A", -2), ("B", -3), ("F", -7)], &[("C", "A"), ("C", "B"), ("C", "F")])
}

/// Minimal embedded resolution of `x^p = y^q`: multiplicities of the
/// infinitely near points in blowup order, and for each point the later
/// points proximate to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveResolution {
    pub multiplicities: Vec<i64>,
    pub proximate: Vec<Vec<usize>>,
}

/// Panics unless `1 < p < q` are coprime.
pub fn plane_curve_resolution(p: i64, q: i64) -> CurveResolution {
    assert!(1 < p && p < q, "need 1 < p < q");
    assert_eq!(num_integer::gcd(p, q), 1, "need coprime exponents");
    // Euclid: q = a p + r gives a points of multiplicity p, and so on
    let mut multiplicities = Vec::new();
    let (mut a, mut b) = (q, p);
    while b != 0 {
        for _ in 0..a / b {
            multiplicities.push(b);
        }
        (a, b) = (b, a % b);
    }
    // proximity equalities: m_i is the sum over a consecutive run after i
    let n = multiplicities.len();
    let mut proximate = vec![Vec::new(); n];
    for i in 0..n {
        let mut rest = multiplicities[i];
        let mut j = i + 1;
        while rest > 0 && j < n {
            rest -= multiplicities[j];
            proximate[i].push(j);
            j += 1;
        }
        debug_assert!(rest == 0 || (i == n - 1 && rest == 1));
    }
    CurveResolution { multiplicities, proximate }
}

/// Plumbing of `-1` surgery on the `(p, q)` torus knot: the minimal good
/// embedded resolution graph of `x^p = y^q` plus the surgery vertex `E0` of
/// weight `-1 - sum m_i^2`. Exceptional vertices are named `E1, E2, ...` with
/// `E1` the last blowup.
pub fn torus_knot_surgery(p: i64, q: i64) -> PlumbingGraph {
    let res = plane_curve_resolution(p, q);
    let n = res.multiplicities.len();
    // strict transform F_i = E_i - sum_{j prox i} E_j in the orthogonal basis
    let meet = |i: usize, j: usize| -> i64 {
        let (i, j) = (i.min(j), i.max(j));
        let direct = i64::from(res.proximate[i].contains(&j));
        let shared = res.proximate[i].iter().filter(|a| res.proximate[j].contains(a)).count() as i64;
        direct - shared
    };
    let label = |i: usize| format!("E{}", n - i);
    let mut vertices = vec![(String::from("E0"), -1 - res.multiplicities.iter().map(|m| m * m).sum::<i64>())];
    for k in 1..=n {
        let i = n - k;
        vertices.push((label(i), -1 - res.proximate[i].len() as i64));
    }
    let mut edges = Vec::new();
    // the curve meets only the last exceptional divisor
    edges.push((String::from("E0"), label(n - 1)));
    for i in 0..n {
        for j in i + 1..n {
            match meet(i, j) {
                0 => {}
                1 => edges.push((label(i), label(j))),
                other => panic!("resolution is not good: F{i} . F{j} = {other}"),
            }
        }
    }
    let vs: Vec<(&str, i64)> = vertices.iter().map(|(s, w)| (s.as_str(), *w)).collect();
    let es: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    named(&vs, &es)
}

/// The seven vertex graph of `-1` surgery on the `(8, 11)` torus knot.
pub fn surgery_8_11() -> PlumbingGraph {
    torus_knot_surgery(8, 11)
}

/// Random negative definite tree with at most `max_vertices` vertices and
/// weights in `[-5, -2]`.
pub fn random_definite_tree<R: Rng>(rng: &mut R, max_vertices: usize) -> PlumbingGraph {
    loop {
        let n = rng.gen_range(1..=max_vertices);
        let vertices: Vec<Vertex> =
            (0..n).map(|i| Vertex { name: format!("v{i}"), weight: rng.gen_range(-5..=-2) }).collect();
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
        let g = PlumbingGraph::from_indices(vertices, &edges).expect("random tree");
        if IntersectionForm::new(&g).is_ok() {
            return g;
        }
    }
}

/// Blows up a free point of a vertex (new `-1` leaf) or an edge (new `-1`
/// vertex subdividing it), `count` times at random.
pub fn random_blowups<R: Rng>(rng: &mut R, g: &PlumbingGraph, count: usize) -> PlumbingGraph {
    let mut vertices: Vec<Vertex> = g.vertices().to_vec();
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    for t in 0..count {
        let new = vertices.len();
        let name = format!("x{t}");
        if !edges.is_empty() && rng.gen_bool(0.5) {
            let e = rng.gen_range(0..edges.len());
            let (a, b) = edges.swap_remove(e);
            vertices[a].weight -= 1;
            vertices[b].weight -= 1;
            edges.push((a, new));
            edges.push((b, new));
        } else {
            let v = rng.gen_range(0..vertices.len());
            vertices[v].weight -= 1;
            edges.push((v, new));
        }
        vertices.push(Vertex { name, weight: -1 });
    }
    PlumbingGraph::from_indices(vertices, &edges).expect("blowups keep a tree")
}

/// A random tree from `random_definite_tree` blown up one to three times.
pub fn random_blown_up_tree<R: Rng>(rng: &mut R) -> PlumbingGraph {
    let base = random_definite_tree(rng, 6);
    let count = rng.gen_range(1..=3);
    random_blowups(rng, &base, count)
}

/// The fixed named corpus.
pub fn named_corpus() -> Vec<(&'static str, PlumbingGraph)> {
    vec![
        ("single -1", single(-1)),
        ("single -2", single(-2)),
        ("A2", a_n(2)),
        ("chain -2 -3", chain(&[-2, -3])),
        ("chain -1 -2", chain(&[-1, -2])),
        ("chain -3 -2 -2", chain(&[-3, -2, -2])),
        ("E8", e8()),
        ("Sigma(2,3,7)", sigma_2_3_7()),
        ("(2,5) surgery", torus_knot_surgery(2, 5)),
        ("(8,11) surgery", surgery_8_11()),
    ]
}

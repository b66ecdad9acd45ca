//! Blowing down `-1` curves in `H_2(X)`, proximity, the classes `D` and the
//! subset sums `S`.
//!
//! Classes are integer vectors in the vertex basis of the original plumbing
//! and all pairings use the original form. Blowing down `d` sends a class
//! `C` to `C + (C.d) d`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use thiserror::Error;

use crate::enumerate::EnumError;
use crate::graph::IntersectionForm;
use crate::lattice::{canonical_class, chi, dot, w, CharVector, LatticePoint, OrbitData};
use crate::roots::zero_component;

pub const S_SET_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BlowdownError {
    #[error("blowdown invariant violated: {0}")]
    InvariantViolated(String),
    #[error("proximity recursion disagrees with the pushforward for class {class}")]
    RecursionMismatch { class: usize },
    #[error("{size} blown-down classes exceed the subset-sum cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error(transparent)]
    Enum(#[from] EnumError),
}

/// One blown-down class `D^round_index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlownDown {
    /// Vertex whose image this is; its basis vector is `E^round_index`.
    pub vertex: usize,
    /// 1-based round.
    pub round: usize,
    /// 1-based position within the round.
    pub index: usize,
    pub class: LatticePoint,
}

/// `D_from` meets the image of `to_vertex` with the given number at the time
/// it is blown down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proximity {
    pub from: usize,
    pub to_vertex: usize,
    pub number: i64,
    /// Position in `classes` if the target is blown down later.
    pub to_class: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivor {
    pub vertex: usize,
    pub class: LatticePoint,
    pub self_intersection: i64,
    pub smooth: bool,
}

#[derive(Clone, Debug)]
pub struct BlowdownTrace {
    /// Positions in `classes`, round by round.
    pub rounds: Vec<Vec<usize>>,
    /// The list `D`, ordered by round then vertex.
    pub classes: Vec<BlownDown>,
    pub proximity: Vec<Proximity>,
    pub survivors: Vec<Survivor>,
    /// Pairings between the survivors, in `survivors` order.
    pub terminal_intersections: Vec<Vec<i64>>,
}

impl BlowdownTrace {
    /// Proximity pairs between two blown-down classes.
    pub fn internal_proximity(&self) -> impl Iterator<Item = &Proximity> {
        self.proximity.iter().filter(|p| p.to_class.is_some())
    }
}

pub fn blowdown_sequence(form: &IntersectionForm) -> Result<BlowdownTrace, BlowdownError> {
    let n = form.rank();
    let mut class: Vec<LatticePoint> = (0..n).map(|v| LatticePoint::basis(n, v)).collect();
    let mut alive = vec![true; n];
    let mut smooth = vec![true; n];
    let mut rounds = Vec::new();
    let mut classes: Vec<BlownDown> = Vec::new();
    let mut proximity: Vec<Proximity> = Vec::new();
    loop {
        let eligible: Vec<usize> =
            (0..n).filter(|&v| alive[v] && smooth[v] && dot(form, &class[v], &class[v]) == -1).collect();
        if eligible.is_empty() {
            break;
        }
        for (a, &u) in eligible.iter().enumerate() {
            for &v in &eligible[a + 1..] {
                let m = dot(form, &class[u], &class[v]);
                if m != 0 {
                    return Err(BlowdownError::InvariantViolated(format!(
                        "simultaneous -1 classes of vertices {u} and {v} meet with number {m}"
                    )));
                }
            }
        }
        let round = rounds.len() + 1;
        let mut this_round = Vec::new();
        for (i, &v) in eligible.iter().enumerate() {
            alive[v] = false;
            this_round.push(classes.len());
            classes.push(BlownDown { vertex: v, round, index: i + 1, class: class[v].clone() });
        }
        for &pos in &this_round {
            let d = classes[pos].class.clone();
            for b in (0..n).filter(|&b| alive[b]) {
                let m = dot(form, &d, &class[b]);
                if m < 0 {
                    return Err(BlowdownError::InvariantViolated(format!(
                        "class of vertex {} meets vertex {b} negatively",
                        classes[pos].vertex
                    )));
                }
                if m != 0 {
                    proximity.push(Proximity { from: pos, to_vertex: b, number: m, to_class: None });
                }
            }
        }
        // the round's classes are orthogonal, so the pushforwards commute
        for b in (0..n).filter(|&b| alive[b]) {
            let mut next = class[b].clone();
            for &pos in &this_round {
                let d = &classes[pos].class;
                let m = dot(form, d, &class[b]);
                if m >= 2 {
                    smooth[b] = false;
                }
                for (c, dv) in next.0.iter_mut().zip(&d.0) {
                    *c += m * dv;
                }
            }
            class[b] = next;
        }
        rounds.push(this_round);
    }
    let class_of_vertex = |v: usize| classes.iter().position(|c| c.vertex == v);
    for p in proximity.iter_mut() {
        p.to_class = class_of_vertex(p.to_vertex);
        if p.to_class.is_some() && p.number != 1 {
            return Err(BlowdownError::InvariantViolated(format!(
                "proximity number {} between two blown-down classes",
                p.number
            )));
        }
    }
    let survivors: Vec<Survivor> = (0..n)
        .filter(|&v| alive[v])
        .map(|v| Survivor {
            vertex: v,
            class: class[v].clone(),
            self_intersection: dot(form, &class[v], &class[v]),
            smooth: smooth[v],
        })
        .collect();
    let terminal_intersections =
        survivors.iter().map(|a| survivors.iter().map(|b| dot(form, &a.class, &b.class)).collect()).collect();
    Ok(BlowdownTrace { rounds, classes, proximity, survivors, terminal_intersections })
}

/// For each class, the earlier classes proximate to its vertex.
fn proximate_to(trace: &BlowdownTrace) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); trace.classes.len()];
    for p in trace.internal_proximity() {
        out[p.to_class.expect("internal")].push(p.from);
    }
    for v in &mut out {
        v.sort_unstable();
    }
    out
}

/// The list `D`, after checking `D_j = E_j + sum of the D_i proximate to E_j`.
pub fn d_classes(trace: &BlowdownTrace) -> Result<Vec<LatticePoint>, BlowdownError> {
    let prox = proximate_to(trace);
    let n = trace.classes.first().map_or(0, |c| c.class.len());
    let mut rebuilt: Vec<LatticePoint> = Vec::with_capacity(trace.classes.len());
    for (j, c) in trace.classes.iter().enumerate() {
        let mut d = LatticePoint::basis(n, c.vertex);
        for &i in &prox[j] {
            if i >= j {
                return Err(BlowdownError::RecursionMismatch { class: j });
            }
            d = d.add(&rebuilt[i]);
        }
        if d != c.class {
            return Err(BlowdownError::RecursionMismatch { class: j });
        }
        rebuilt.push(d);
    }
    Ok(rebuilt)
}

/// All subset sums of `D`, indexed by bitmask over `trace.classes`.
#[derive(Clone, Debug)]
pub struct SSet {
    pub sums: Vec<LatticePoint>,
    proximate: Vec<Vec<usize>>,
    vertex: Vec<usize>,
    members: BTreeSet<LatticePoint>,
}

pub fn s_set(form: &IntersectionForm, trace: &BlowdownTrace) -> Result<SSet, BlowdownError> {
    let ds = d_classes(trace)?;
    if ds.len() > S_SET_CAP {
        return Err(BlowdownError::CapExceeded { size: ds.len(), cap: S_SET_CAP });
    }
    let k0 = canonical_class(form);
    let bad = |what: String| Err(BlowdownError::InvariantViolated(what));
    for (i, d) in ds.iter().enumerate() {
        let kd: i64 = k0.evals().iter().zip(&d.0).map(|(a, b)| a * b).sum();
        if kd != 1 {
            return bad(format!("<K0, D{i}> = {kd}"));
        }
        if dot(form, d, d) != -1 {
            return bad(format!("D{i} has square {}", dot(form, d, d)));
        }
        for (j, e) in ds.iter().enumerate().skip(i + 1) {
            if dot(form, d, e) != 0 {
                return bad(format!("D{i} and D{j} are not orthogonal"));
            }
        }
    }
    let n = form.rank();
    let mut sums: Vec<LatticePoint> = vec![LatticePoint::zero(n)];
    for d in &ds {
        let more: Vec<LatticePoint> = sums.iter().map(|s| s.add(d)).collect();
        sums.extend(more);
    }
    for s in &sums {
        let c = chi(form, &k0, s).map_err(|_| BlowdownError::Enum(EnumError::Overflow))?;
        if c != 0 {
            return bad(format!("chi = {c} at a subset sum"));
        }
    }
    let members: BTreeSet<LatticePoint> = sums.iter().cloned().collect();
    if members.len() != sums.len() {
        return bad(String::from("two subsets have the same sum"));
    }
    Ok(SSet {
        sums,
        proximate: proximate_to(trace),
        vertex: trace.classes.iter().map(|c| c.vertex).collect(),
        members,
    })
}

impl SSet {
    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    pub fn contains(&self, x: &LatticePoint) -> bool {
        self.members.contains(x)
    }

    /// Sorted elements.
    pub fn sorted(&self) -> Vec<LatticePoint> {
        self.members.iter().cloned().collect()
    }

    /// Edge steps (vertex indices) of the path from 0 to the sum with the
    /// given mask, built by repeatedly replacing the shallowest summand `D_u`
    /// by the classes proximate to `E_u`. `None` if a replacement collides
    /// with a summand already present.
    pub fn path(&self, mask: u32) -> Option<Vec<usize>> {
        let mut steps = Vec::new();
        let mut f = mask;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= !(1 << u);
            for &i in &self.proximate[u] {
                if f & (1 << i) != 0 {
                    return None;
                }
                f |= 1 << i;
            }
            steps.push(self.vertex[u]);
        }
        steps.reverse();
        Some(steps)
    }
}

#[derive(Clone, Debug)]
pub struct SComparison {
    pub s_size: usize,
    pub c0_size: usize,
    pub equal: bool,
    pub missing_from_c0: Vec<LatticePoint>,
    pub extra_in_c0: Vec<LatticePoint>,
    pub paths_checked: usize,
    /// Sums whose reconstructed path leaves `S` or ends elsewhere.
    pub path_failures: Vec<LatticePoint>,
}

impl SComparison {
    pub fn passed(&self) -> bool {
        self.equal && self.path_failures.is_empty()
    }
}

/// Compares `S` with the component of 0 in `L_{<= 0}` for `K_0` and checks
/// the path to every element of `S`.
pub fn verify_s_equals_c0(form: &IntersectionForm, budget: usize) -> Result<SComparison, BlowdownError> {
    let trace = blowdown_sequence(form)?;
    let s = s_set(form, &trace)?;
    let c0 = zero_component(form, &canonical_class(form), budget)?;
    let c0_set: BTreeSet<LatticePoint> = c0.iter().cloned().collect();
    let missing_from_c0: Vec<LatticePoint> = s.members.difference(&c0_set).cloned().collect();
    let extra_in_c0: Vec<LatticePoint> = c0_set.difference(&s.members).cloned().collect();
    let n = form.rank();
    let mut path_failures = Vec::new();
    for (mask, target) in s.sums.iter().enumerate() {
        let ok = s.path(mask as u32).is_some_and(|steps| {
            let mut x = LatticePoint::zero(n);
            steps.iter().all(|&v| {
                x.0[v] += 1;
                s.contains(&x)
            }) && &x == target
        });
        if !ok {
            path_failures.push(target.clone());
        }
    }
    Ok(SComparison {
        s_size: s.len(),
        c0_size: c0.len(),
        equal: missing_from_c0.is_empty() && extra_in_c0.is_empty(),
        missing_from_c0,
        extra_in_c0,
        paths_checked: s.len(),
        path_failures,
    })
}

#[derive(Clone, Debug)]
pub struct Phi0Support {
    /// `K_0 + 2 PD(s)` for `s` in `S`, sorted.
    pub vectors: Vec<CharVector>,
    pub all_in_orbit: bool,
    pub w_values_equal: bool,
    pub w: BigRational,
}

pub fn phi0_support(form: &IntersectionForm, s: &SSet) -> Phi0Support {
    let k0 = canonical_class(form);
    let orbit = OrbitData::new(form);
    let w0 = w(form, &k0);
    let mut vectors: Vec<CharVector> = s
        .sums
        .iter()
        .map(|x| k0.shifted(form, x).expect("subset sums are small"))
        .collect();
    vectors.sort_by(|a, b| a.evals().cmp(b.evals()));
    let all_in_orbit = vectors.iter().all(|k| orbit.same_orbit(&k0, k));
    let w_values_equal = vectors.iter().all(|k| w(form, k) == w0);
    Phi0Support { vectors, all_in_orbit, w_values_equal, w: w0 }
}

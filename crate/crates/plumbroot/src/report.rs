//! Machine readable reports. Every report carries `schema_version`; all
//! collections are emitted in a fixed order so equal inputs give equal bytes.

use plumbroot_core::blowdown::{blowdown_sequence, d_classes, phi0_support, s_set, verify_s_equals_c0, BlowdownTrace};
use plumbroot_core::lattice::{canonical_class, k_squared, CharVector, LatticePoint};
use plumbroot_core::models::{check_model_equivalence, phi0_chain, Window};
use plumbroot_core::roots::{verify_canonical_root_shape, ClauseCheck, Coverage};
use plumbroot_core::tower::{height_of_tower, in_im_u, in_ker_u, is_rational, psi0, Height, TowerModel, DEFAULT_HEIGHT_CAP};
use plumbroot_core::{GradedRoot, IntersectionForm, PlumbingGraph};
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: String,
    /// Present whenever `passed` is false.
    pub witness: Option<String>,
}

impl Check {
    fn new(name: &str, passed: bool, value: impl Into<String>, witness: impl FnOnce() -> String) -> Self {
        let value = value.into();
        let witness = if passed { None } else { Some(witness()) };
        Check { name: name.into(), passed, value, witness }
    }

    fn clause(name: &str, c: &ClauseCheck) -> Self {
        Check::new(name, c.passed, c.passed.to_string(), || c.detail.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub det: String,
    /// `|H|` for `H = Z^n / M Z^n`.
    pub h_order: String,
    pub h_invariants: Vec<String>,
    pub canonical_class: Vec<i64>,
    pub k0_squared: String,
}

pub fn graph_summary(g: &PlumbingGraph, f: &IntersectionForm) -> GraphSummary {
    GraphSummary {
        vertices: g.len(),
        edges: g.edges().len(),
        det: f.det().to_string(),
        h_order: f.discriminant_order().to_string(),
        h_invariants: f.smith().nontrivial().iter().map(|d| d.to_string()).collect(),
        canonical_class: canonical_class(f).evals().to_vec(),
        k0_squared: k_squared(f, &canonical_class(f)).to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub schema_version: u32,
    pub graph: GraphSummary,
}

pub fn validate_report(g: &PlumbingGraph, f: &IntersectionForm) -> ValidateReport {
    ValidateReport { schema_version: SCHEMA_VERSION, graph: graph_summary(g, f) }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub level: i64,
    /// Component sizes, `None` where the window did not enumerate them.
    pub sizes: Vec<Option<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootReport {
    pub schema_version: u32,
    pub class: Vec<i64>,
    pub coverage: String,
    pub min_level: i64,
    pub floor_level: i64,
    pub stable_level: i64,
    pub top_level: i64,
    pub zero_level: Option<i64>,
    pub single_chain: bool,
    pub branch_points: usize,
    pub leaf_levels: Vec<i64>,
    pub levels: Vec<Level>,
}

fn coverage_name(c: Coverage) -> String {
    match c {
        Coverage::Complete => "complete",
        Coverage::Window => "window",
    }
    .into()
}

pub fn root_report(root: &GradedRoot) -> RootReport {
    let levels = root
        .level_counts()
        .into_iter()
        .map(|(level, _)| Level { level, sizes: root.vertices_at(level).map(|v| root.vertices[v].size).collect() })
        .collect();
    RootReport {
        schema_version: SCHEMA_VERSION,
        class: root.k.evals().to_vec(),
        coverage: coverage_name(root.coverage),
        min_level: root.min_level,
        floor_level: root.floor_level,
        stable_level: root.stable_level,
        top_level: root.top_level,
        zero_level: root.zero_vertex.map(|v| root.vertices[v].level),
        single_chain: root.is_single_chain(),
        branch_points: root.branch_points(),
        leaf_levels: root.leaf_levels.clone(),
        levels,
    }
}

pub fn height_name(h: Height) -> String {
    match h {
        Height::Finite(n) => n.to_string(),
        Height::Infinite => "inf".into(),
        Height::AtLeast(n) => format!(">={n}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalReport {
    pub schema_version: u32,
    pub depth: usize,
    pub single_chain: bool,
    pub psi0_in_ker_u: bool,
    pub psi0_in_im_u: bool,
    /// False when a positive answer came from a partial root.
    pub conclusive: bool,
    pub height: String,
}

struct TowerFacts {
    depth: usize,
    ker: bool,
    im: bool,
    conclusive: bool,
    height: Height,
    ker_witness: Vec<i64>,
}

fn tower_facts(root: &GradedRoot, depth: Option<usize>) -> Result<TowerFacts, Error> {
    let model = match depth {
        Some(d) => TowerModel::new(root, d)?,
        None => TowerModel::with_default_depth(root),
    };
    let psi = psi0(&model)?;
    let image = in_im_u(&model, &psi)?;
    let up = plumbroot_core::tower::u_apply(&psi);
    let ker_witness = (0..model.root_len()).filter(|&v| !up.values[v].is_zero()).map(|v| model.level(v)).collect();
    Ok(TowerFacts {
        depth: model.depth(),
        ker: in_ker_u(&psi),
        im: image.in_image,
        conclusive: image.conclusive || !image.in_image,
        height: height_of_tower(root, DEFAULT_HEIGHT_CAP)?,
        ker_witness,
    })
}

pub fn rational_report(root: &GradedRoot, depth: Option<usize>) -> Result<RationalReport, Error> {
    let t = tower_facts(root, depth)?;
    Ok(RationalReport {
        schema_version: SCHEMA_VERSION,
        depth: t.depth,
        single_chain: is_rational(root),
        psi0_in_ker_u: t.ker,
        psi0_in_im_u: t.im,
        conclusive: t.conclusive,
        height: height_name(t.height),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub vertex: String,
    pub round: usize,
    pub index: usize,
    /// Coordinates in the vertex basis.
    pub class: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProximityEntry {
    pub from: String,
    pub to: String,
    pub number: i64,
    /// Position of the target in `classes`, or `None` for a surviving vertex.
    pub to_class: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorEntry {
    pub vertex: String,
    pub class: Vec<i64>,
    pub self_intersection: i64,
    pub smooth: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowdownReport {
    pub schema_version: u32,
    pub rounds: Vec<Vec<String>>,
    pub classes: Vec<ClassEntry>,
    pub d_classes: Vec<Vec<i64>>,
    pub proximity: Vec<ProximityEntry>,
    pub survivors: Vec<SurvivorEntry>,
    pub terminal_intersections: Vec<Vec<i64>>,
}

pub fn blowdown_report(g: &PlumbingGraph, t: &BlowdownTrace) -> Result<BlowdownReport, Error> {
    let name = |v: usize| g.name(v).to_string();
    Ok(BlowdownReport {
        schema_version: SCHEMA_VERSION,
        rounds: t.rounds.iter().map(|r| r.iter().map(|&c| name(t.classes[c].vertex)).collect()).collect(),
        classes: t
            .classes
            .iter()
            .map(|c| ClassEntry { vertex: name(c.vertex), round: c.round, index: c.index, class: c.class.0.clone() })
            .collect(),
        d_classes: d_classes(t)?.into_iter().map(|p| p.0).collect(),
        proximity: t
            .proximity
            .iter()
            .map(|p| ProximityEntry {
                from: name(t.classes[p.from].vertex),
                to: name(p.to_vertex),
                number: p.number,
                to_class: p.to_class,
            })
            .collect(),
        survivors: t
            .survivors
            .iter()
            .map(|s| SurvivorEntry {
                vertex: name(s.vertex),
                class: s.class.0.clone(),
                self_intersection: s.self_intersection,
                smooth: s.smooth,
            })
            .collect(),
        terminal_intersections: t.terminal_intersections.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SSetReport {
    pub schema_version: u32,
    pub d_classes: Vec<Vec<i64>>,
    pub size: usize,
    /// All subset sums, sorted.
    pub sums: Vec<Vec<i64>>,
    /// `K_0 + 2 PD(x)` for `x` in the set, sorted.
    pub phi0_support: Vec<Vec<i64>>,
    pub phi0_w: String,
    pub all_in_orbit: bool,
    pub w_values_equal: bool,
}

pub fn sset_report(f: &IntersectionForm, t: &BlowdownTrace) -> Result<SSetReport, Error> {
    let s = s_set(f, t)?;
    let phi = phi0_support(f, &s);
    let mut support: Vec<Vec<i64>> = phi.vectors.iter().map(|k| k.evals().to_vec()).collect();
    support.sort();
    Ok(SSetReport {
        schema_version: SCHEMA_VERSION,
        d_classes: d_classes(t)?.into_iter().map(|p| p.0).collect(),
        size: s.len(),
        sums: s.sorted().into_iter().map(|p| p.0).collect(),
        phi0_support: support,
        phi0_w: phi.w.to_string(),
        all_in_orbit: phi.all_in_orbit,
        w_values_equal: phi.w_values_equal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelsReport {
    pub schema_version: u32,
    pub window: String,
    pub points: usize,
    pub depth: usize,
    pub root_vertices: usize,
    pub char_dim: usize,
    pub l_dim: usize,
    pub root_dim: usize,
    pub checks: Vec<Check>,
}

impl ModelsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn models_report(f: &IntersectionForm, radius: i64, depth: usize, budget: usize) -> Result<ModelsReport, Error> {
    let k = canonical_class(f);
    let points = (2 * radius + 1).checked_pow(f.rank() as u32).map(|p| p as usize);
    if points.is_none_or(|p| p > budget) {
        return Err(Error::Budget(format!("a radius {radius} cube in rank {} exceeds the budget {budget}", f.rank())));
    }
    let window = Window::cube(f.rank(), -radius, radius);
    let r = check_model_equivalence(f, &k, &window, depth, budget)?;
    let s = s_set(f, &blowdown_sequence(f)?)?;
    let mut checks = vec![
        Check::new("iota_bijective", r.iota_bijective, r.iota_bijective.to_string(), || {
            format!("char space dim {}, L space dim {}", r.char_dim, r.l_dim)
        }),
        Check::new("theta_bijective", r.theta_bijective, r.theta_bijective.to_string(), || {
            format!("root space dim {}, L space dim {}", r.root_dim, r.l_dim)
        }),
    ];
    let inside = s.sorted().iter().all(|p| window.index_of(&p.0).is_some());
    if inside {
        match phi0_chain(f, &k, &window, &s.sorted(), depth) {
            Ok(c) => {
                let detail = || format!("{c:?}");
                checks.push(Check::new("phi0_compatible", c.char_compatible, c.char_compatible.to_string(), detail));
                checks.push(Check::new("phi0_pullback", c.pullback_is_indicator, c.pullback_is_indicator.to_string(), detail));
                checks.push(Check::new("phi0_pushforward", c.pushforward_is_psi0, c.pushforward_is_psi0.to_string(), detail));
            }
            Err(e @ plumbroot_core::models::ModelError::BudgetExceeded { .. }) => return Err(e.into()),
            Err(e) => checks.push(Check::new("phi0_chain", false, "error", || e.to_string())),
        }
    }
    Ok(ModelsReport {
        schema_version: SCHEMA_VERSION,
        window: format!("cube [{}, {radius}]^{}", -radius, f.rank()),
        points: r.points,
        depth: r.depth,
        root_vertices: r.root_vertices,
        char_dim: r.char_dim,
        l_dim: r.l_dim,
        root_dim: r.root_dim,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSummary {
    pub coverage: String,
    pub min_level: i64,
    pub stable_level: i64,
    /// `(level, vertex count)`; a partial root lists only its levels.
    pub level_counts: Vec<(i64, usize)>,
    pub branch_points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowdownSummary {
    pub rounds: usize,
    pub d_size: usize,
    pub s_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub graph: GraphSummary,
    pub root: RootSummary,
    pub blowdown: BlowdownSummary,
    pub tower_depth: usize,
    pub rational: bool,
    pub height: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn points(ps: &[LatticePoint]) -> String {
    let v: Vec<&Vec<i64>> = ps.iter().take(8).map(|p| &p.0).collect();
    let more = if ps.len() > 8 { format!(" and {} more", ps.len() - 8) } else { String::new() };
    format!("{v:?}{more}")
}

pub fn verify(
    g: &PlumbingGraph,
    f: &IntersectionForm,
    root: &GradedRoot,
    depth: Option<usize>,
    budget: usize,
) -> Result<VerifyReport, Error> {
    let shape = verify_canonical_root_shape(f, root, budget)?;
    let trace = blowdown_sequence(f)?;
    let cmp = verify_s_equals_c0(f, budget)?;
    let tower = tower_facts(root, depth)?;
    let rational = is_rational(root);
    let mut checks = vec![
        Check::clause("root_zero_on_c0", &shape.zero_on_c0),
        Check::clause("root_connected_above_zero", &shape.connected_above_zero),
        Check::clause("root_trunk_end", &shape.trunk_end),
        Check::new("s_equals_c0", cmp.passed(), format!("|S| = {}, |C0| = {}", cmp.s_size, cmp.c0_size), || {
            format!(
                "missing from C0: {}; extra in C0: {}; path failures: {}",
                points(&cmp.missing_from_c0),
                points(&cmp.extra_in_c0),
                points(&cmp.path_failures)
            )
        }),
        Check::new("psi0_in_ker_u", tower.ker, tower.ker.to_string(), || {
            format!("U psi0 is nonzero at levels {:?}", tower.ker_witness)
        }),
        Check::new("psi0_in_im_u", tower.conclusive, tower.im.to_string(), || {
            "solvable only on a partial root, so not decided".into()
        }),
        Check::new("rationality_agreement", tower.im == rational, format!("single chain {rational}"), || {
            format!("psi0 in Im U is {} but single chain is {rational}", tower.im)
        }),
    ];
    let ht_ok = match tower.height {
        Height::Infinite => rational,
        Height::Finite(0) => !rational,
        _ => false,
    };
    checks.push(Check::new("height", ht_ok, height_name(tower.height), || {
        format!("height {} with single chain {rational}", height_name(tower.height))
    }));
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        graph: graph_summary(g, f),
        root: RootSummary {
            coverage: coverage_name(root.coverage),
            min_level: root.min_level,
            stable_level: root.stable_level,
            level_counts: root.level_counts(),
            branch_points: root.branch_points(),
        },
        blowdown: BlowdownSummary { rounds: trace.rounds.len(), d_size: trace.classes.len(), s_size: cmp.s_size },
        tower_depth: tower.depth,
        rational,
        height: height_name(tower.height),
        checks,
    })
}

/// Parses a comma separated evaluation vector such as `1,-1,3`.
pub fn parse_class(f: &IntersectionForm, s: &str) -> Result<CharVector, Error> {
    if s == "canonical" {
        return Ok(canonical_class(f));
    }
    let evals: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Usage(format!("--class expects 'canonical' or integers like 1,-1,3, got '{s}'")))?;
    CharVector::new(f, evals).map_err(|e| Error::Usage(format!("--class: {e}")))
}

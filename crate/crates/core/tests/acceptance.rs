//! The acceptance criteria, run in order with their time limits. Each prints
//! one PASS/FAIL line; the test fails if any criterion does.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plumbroot_core::blowdown::{blowdown_sequence, d_classes, phi0_support, s_set, verify_s_equals_c0};
use plumbroot_core::corpus;
use plumbroot_core::enumerate::Ellipsoid;
use plumbroot_core::lattice::{canonical_class, chi, dot, w, CharVector, LatticePoint};
use plumbroot_core::models::{check_model_equivalence, phi0_chain, Window};
use plumbroot_core::roots::{canonical_root, verify_canonical_root_shape, zero_component};
use plumbroot_core::tower::{height_of_tower, in_im_u, in_ker_u, is_rational, psi0, Height, TowerModel};
use plumbroot_core::{GradedRoot, IntersectionForm, PlumbingGraph};

const RANDOM_SEEDS: [u64; 6] = [11, 23, 37, 41, 59, 73];

fn random_trees() -> Vec<(String, PlumbingGraph)> {
    RANDOM_SEEDS
        .iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (format!("random blown-up tree #{s}"), corpus::random_blown_up_tree(&mut rng))
        })
        .collect()
}

fn full_corpus() -> Vec<(String, PlumbingGraph)> {
    let mut out: Vec<(String, PlumbingGraph)> =
        corpus::named_corpus().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    out.extend(random_trees());
    out
}

fn form(g: &PlumbingGraph) -> IntersectionForm {
    IntersectionForm::new(g).unwrap()
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let g = corpus::surgery_8_11();
    let f = form(&g);
    let t = blowdown_sequence(&f).map_err(|e| e.to_string())?;
    let ds: Vec<Vec<i64>> = d_classes(&t).map_err(|e| e.to_string())?.into_iter().map(|p| p.0).collect();
    let want: Vec<Vec<i64>> = vec![
        vec![0, 1, 0, 0, 0, 0, 0],
        vec![0, 1, 1, 0, 0, 0, 0],
        vec![0, 2, 1, 1, 0, 0, 0],
        vec![0, 3, 2, 1, 1, 0, 0],
        vec![0, 3, 2, 1, 1, 1, 0],
        vec![0, 8, 5, 3, 2, 1, 1],
    ];
    ensure(ds == want, || format!("D classes {ds:?}"))?;
    let prox: BTreeSet<(String, String)> = t
        .internal_proximity()
        .map(|p| (g.name(t.classes[p.from].vertex).to_string(), g.name(p.to_vertex).to_string()))
        .collect();
    let want: BTreeSet<(String, String)> = [
        ("E1", "E2"),
        ("E1", "E3"),
        ("E2", "E3"),
        ("E2", "E4"),
        ("E3", "E4"),
        ("E3", "E6"),
        ("E4", "E5"),
        ("E4", "E6"),
        ("E5", "E6"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    ensure(prox == want, || format!("proximity {prox:?}"))?;
    Ok("six D classes and nine proximity pairs match".into())
}

fn criterion_2() -> Outcome {
    let mut cases: Vec<(String, PlumbingGraph, Option<usize>)> = vec![
        ("single -1".into(), corpus::single(-1), Some(2)),
        ("(8,11) surgery".into(), corpus::surgery_8_11(), Some(64)),
        ("Sigma(2,3,7)".into(), corpus::sigma_2_3_7(), Some(8)),
    ];
    cases.extend(random_trees().into_iter().map(|(n, g)| (n, g, None)));
    let mut sizes = Vec::new();
    for (name, g, size) in cases {
        let r = verify_s_equals_c0(&form(&g), 2_000_000).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passed(), || format!("{name}: {r:?}"))?;
        if let Some(s) = size {
            ensure(r.s_size == s, || format!("{name}: |S| = {}", r.s_size))?;
        }
        sizes.push(r.s_size);
    }
    Ok(format!("S = C0 on {} graphs, sizes {sizes:?}", sizes.len()))
}

fn criterion_3() -> Outcome {
    let corpus = full_corpus();
    for (name, g) in &corpus {
        let f = form(g);
        let root = canonical_root(&f).map_err(|e| format!("{name}: {e}"))?;
        let rep = verify_canonical_root_shape(&f, &root, 2_000_000).map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.passed(), || format!("{name}: {rep:?}"))?;
    }
    Ok(format!("three clauses hold on {} graphs", corpus.len()))
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for (name, g) in full_corpus() {
        if g.vertices().iter().any(|v| v.weight == -1) {
            continue;
        }
        let f = form(&g);
        let t = blowdown_sequence(&f).map_err(|e| e.to_string())?;
        ensure(t.classes.is_empty(), || format!("{name}: D not empty"))?;
        let c0 = zero_component(&f, &canonical_class(&f), 1_000_000).map_err(|e| e.to_string())?;
        ensure(c0 == vec![LatticePoint::zero(f.rank())], || format!("{name}: C0 = {c0:?}"))?;
        let s = s_set(&f, &t).map_err(|e| e.to_string())?;
        let phi = phi0_support(&f, &s);
        ensure(phi.vectors == vec![canonical_class(&f)], || format!("{name}: support {:?}", phi.vectors))?;
        checked += 1;
    }
    ensure(checked > 0, || "no graph without -1 vertices".into())?;
    Ok(format!("{checked} minimal graphs"))
}

fn tower_facts(root: &GradedRoot) -> Result<(bool, bool, bool, Height), String> {
    let model = TowerModel::with_default_depth(root);
    let psi = psi0(&model).map_err(|e| e.to_string())?;
    let t = in_im_u(&model, &psi).map_err(|e| e.to_string())?;
    if let Some(wit) = &t.witness {
        ensure(plumbroot_core::tower::u_apply(wit) == psi, || "witness does not map to psi0".into())?;
    }
    let ht = height_of_tower(root, 64).map_err(|e| e.to_string())?;
    Ok((in_ker_u(&psi), t.in_image, is_rational(root), ht))
}

fn criterion_5() -> Outcome {
    let rational_named = ["single -1", "single -2", "A2", "E8"];
    let nonrational_named = ["Sigma(2,3,7)", "(8,11) surgery"];
    let (mut rational, mut nonrational) = (0, 0);
    for (name, g) in full_corpus() {
        let root = canonical_root(&form(&g)).map_err(|e| format!("{name}: {e}"))?;
        let (ker, im, rat, ht) = tower_facts(&root).map_err(|e| format!("{name}: {e}"))?;
        ensure(ker, || format!("{name}: psi0 not in Ker U"))?;
        ensure(im == rat, || format!("{name}: Im U {im} but single chain {rat}"))?;
        if rat {
            ensure(ht == Height::Infinite, || format!("{name}: rational with ht {ht:?}"))?;
            ensure(!nonrational_named.contains(&name.as_str()), || format!("{name} is rational"))?;
            rational += 1;
        } else {
            ensure(ht == Height::Finite(0), || format!("{name}: ht {ht:?}"))?;
            ensure(!rational_named.contains(&name.as_str()), || format!("{name} is not rational"))?;
            nonrational += 1;
        }
    }
    Ok(format!("{rational} rational (ht = inf), {nonrational} non-rational (ht = 0)"))
}

fn criterion_6() -> Outcome {
    let cases: [(&str, PlumbingGraph, Window, usize); 4] = [
        ("single -2", corpus::single(-2), Window::cube(1, -2, 2), 3),
        ("single -1", corpus::single(-1), Window::cube(1, -2, 3), 3),
        ("E8", corpus::e8(), Window::cube(8, -1, 1), 2),
        ("E8", corpus::e8(), Window::cube(8, -1, 1), 3),
    ];
    let mut dims = Vec::new();
    for (name, g, win, d) in cases {
        let f = form(&g);
        let k = canonical_class(&f);
        let r = check_model_equivalence(&f, &k, &win, d, 100_000).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.passed(), || format!("{name}: {r:?}"))?;
        let s = s_set(&f, &blowdown_sequence(&f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let chain = phi0_chain(&f, &k, &win, &s.sorted(), d).map_err(|e| format!("{name}: {e}"))?;
        ensure(chain.passed(), || format!("{name}: {chain:?}"))?;
        dims.push(format!("{name} d={d}: {}", r.l_dim));
    }
    Ok(format!("dimensions agree ({})", dims.join(", ")))
}

fn criterion_7() -> Outcome {
    let per_graph = 10_000;
    let corpus = full_corpus();
    for (name, g) in &corpus {
        let f = form(g);
        let n = f.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..per_graph {
            let evals = (0..n).map(|v| f.entry(v, v) + 2 * rng.gen_range(-4..=4)).collect();
            let k = CharVector::new(&f, evals).unwrap();
            let x = LatticePoint((0..n).map(|_| rng.gen_range(-5..=5)).collect());
            let y = LatticePoint((0..n).map(|_| rng.gen_range(-5..=5)).collect());
            let v = rng.gen_range(0..n);
            let c = |p: &LatticePoint| chi(&f, &k, p).unwrap();
            ensure(c(&x.add(&y)) == c(&x) + c(&y) - dot(&f, &x, &y), || format!("{name}: chi identity at {x:?} {y:?}"))?;
            let xv = x.add(&LatticePoint::basis(n, v));
            let dw = w(&f, &k.shifted(&f, &xv).unwrap()) - w(&f, &k.shifted(&f, &x).unwrap());
            ensure(dw == BigRational::from_integer((c(&xv) - c(&x)).into()), || format!("{name}: bridge at {x:?} {v}"))?;
        }
    }
    Ok(format!("{per_graph} triples on each of {} graphs", corpus.len()))
}

fn criterion_8() -> Outcome {
    let mut compared = 0;
    for (name, g) in corpus::named_corpus() {
        if g.len() > 3 {
            continue;
        }
        let f = form(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut classes = vec![canonical_class(&f)];
        for _ in 0..3 {
            let evals = (0..f.rank()).map(|v| f.entry(v, v) + 2 * rng.gen_range(-3..=3)).collect();
            classes.push(CharVector::new(&f, evals).unwrap());
        }
        for k in &classes {
            let ell = Ellipsoid::new(&f, k).map_err(|e| e.to_string())?;
            for level in -5..=5 {
                let mut got = Vec::new();
                ell.for_each(level, 10_000_000, |x, c| got.push((x.to_vec(), c))).map_err(|e| e.to_string())?;
                let want = common::naive_sublevel(&f, k, level);
                ensure(got == want, || format!("{name}: level {level}, K {:?}", k.evals()))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} (graph, K, level) cases"))
}

fn criterion_9() -> Outcome {
    let perms = 10;
    let corpus = full_corpus();
    for (name, g) in &corpus {
        let summary = |g: &PlumbingGraph| -> Result<_, String> {
            let f = form(g);
            let t = blowdown_sequence(&f).map_err(|e| e.to_string())?;
            let s = s_set(&f, &t).map_err(|e| e.to_string())?;
            let root = canonical_root(&f).map_err(|e| e.to_string())?;
            let ht = height_of_tower(&root, 64).map_err(|e| e.to_string())?;
            Ok((t.classes.len(), s.len(), ht, is_rational(&root), root.leaf_levels.clone(), root.level_counts()))
        };
        let base = summary(g)?;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..perms {
            let mut perm: Vec<usize> = (0..g.len()).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let other = summary(&g.relabeled(&perm))?;
            ensure(other == base, || format!("{name}: permutation {perm:?} changes {base:?} to {other:?}"))?;
        }
    }
    Ok(format!("{perms} permutations on each of {} graphs", corpus.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("(8,11) surgery golden blowdown", criterion_1, Duration::from_secs(1)),
        ("S = C0 on the corpus", criterion_2, Duration::from_secs(30)),
        ("canonical root shape", criterion_3, Duration::from_secs(30)),
        ("minimal-case degeneration", criterion_4, Duration::MAX),
        ("Ker U, Im U, rationality, height", criterion_5, Duration::from_secs(60)),
        ("model equivalence windows", criterion_6, Duration::from_secs(60)),
        ("chi and bridge identities", criterion_7, Duration::from_secs(10)),
        ("enumeration against box oracle", criterion_8, Duration::from_secs(10)),
        ("order independence", criterion_9, Duration::MAX),
    ];
    let mut failed = Vec::new();
    for (i, (title, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}, but took longer than {limit:?}")),
            Err(e) => (false, e),
        };
        println!(
            "criterion {}: {} [{title}] {detail} ({:.2?})",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

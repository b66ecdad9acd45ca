use std::collections::{BTreeMap, BTreeSet, VecDeque};

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plumbroot_core::blowdown::{blowdown_sequence, d_classes, s_set, verify_s_equals_c0};
use plumbroot_core::corpus;
use plumbroot_core::enumerate::Ellipsoid;
use plumbroot_core::lattice::{canonical_class, chi, dot, w, CharVector, LatticePoint};
use plumbroot_core::roots::{canonical_root, components, enumerate_sublevel};
use plumbroot_core::tower::{in_im_u, psi0, u_apply, TowerModel};
use plumbroot_core::unionfind::UnionFind;
use plumbroot_core::{IntersectionForm, PlumbingGraph};

fn random_char(rng: &mut ChaCha8Rng, f: &IntersectionForm) -> CharVector {
    let evals = (0..f.rank()).map(|v| f.entry(v, v) + 2 * rng.gen_range(-3..=3)).collect();
    CharVector::new(f, evals).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, r: i64) -> LatticePoint {
    LatticePoint((0..n).map(|_| rng.gen_range(-r..=r)).collect())
}

fn tree(seed: u64) -> (PlumbingGraph, IntersectionForm) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = corpus::random_definite_tree(&mut rng, 6);
    let f = IntersectionForm::new(&g).unwrap();
    (g, f)
}

fn blown_up(seed: u64) -> (PlumbingGraph, IntersectionForm) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = corpus::random_blown_up_tree(&mut rng);
    let f = IntersectionForm::new(&g).unwrap();
    (g, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chi_is_quadratic(seed in any::<u64>()) {
        let (_, f) = tree(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let k = random_char(&mut rng, &f);
        let x = random_point(&mut rng, f.rank(), 6);
        let y = random_point(&mut rng, f.rank(), 6);
        let lhs = chi(&f, &k, &x.add(&y)).unwrap();
        let rhs = chi(&f, &k, &x).unwrap() + chi(&f, &k, &y).unwrap() - dot(&f, &x, &y);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bridge_identity(seed in any::<u64>()) {
        let (_, f) = tree(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let k = random_char(&mut rng, &f);
        let x = random_point(&mut rng, f.rank(), 4);
        let v = rng.gen_range(0..f.rank());
        let xv = x.add(&LatticePoint::basis(f.rank(), v));
        let kx = k.shifted(&f, &x).unwrap();
        let kxv = k.shifted(&f, &xv).unwrap();
        // <K', v> + v.v = <K, v> + v.v + 2 x.v
        prop_assert_eq!(kx.evals()[v] + f.entry(v, v), k.evals()[v] + f.entry(v, v) + 2 * dot(&f, &x, &LatticePoint::basis(f.rank(), v)));
        let dw = w(&f, &kxv) - w(&f, &kx);
        let dchi = chi(&f, &k, &xv).unwrap() - chi(&f, &k, &x).unwrap();
        prop_assert_eq!(dw, num_rational::BigRational::from_integer(dchi.into()));
    }

    #[test]
    fn w_difference_matches_adjunction(seed in any::<u64>()) {
        let (_, f) = tree(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let k = random_char(&mut rng, &f);
        let v = rng.gen_range(0..f.rank());
        let twice_n = k.evals()[v] + f.entry(v, v);
        prop_assert!(twice_n % 2 == 0);
        let kv = k.shifted(&f, &LatticePoint::basis(f.rank(), v)).unwrap();
        prop_assert_eq!(w(&f, &k) - w(&f, &kv), num_rational::BigRational::from_integer((twice_n / 2).into()));
    }

    #[test]
    fn enumeration_matches_box(seed in any::<u64>(), level in -2i64..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = corpus::random_definite_tree(&mut rng, 3);
        let f = IntersectionForm::new(&g).unwrap();
        let k = random_char(&mut rng, &f);
        let mut got = Vec::new();
        Ellipsoid::new(&f, &k).unwrap().for_each(level, 1_000_000, |x, c| got.push((x.to_vec(), c))).unwrap();
        let want = common::naive_sublevel(&f, &k, level);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn union_find_matches_bfs(n in 1usize..40, edges in proptest::collection::vec((0usize..40, 0usize..40), 0..60)) {
        let edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let mut uf = UnionFind::new(n);
        for &(a, b) in &edges {
            uf.union(a, b);
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for s in 0..n {
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] { seen[v] = true; q.push_back(v); }
                }
            }
            for t in 0..n {
                prop_assert_eq!(seen[t], uf.find(s) == uf.find(t));
            }
            prop_assert_eq!(uf.size_of(s), seen.iter().filter(|&&b| b).count());
        }
    }

    #[test]
    fn sublevel_components_nest(seed in any::<u64>()) {
        let (_, f) = tree(seed);
        let k = canonical_class(&f);
        let mut prev: Option<(plumbroot_core::roots::SublevelSet, plumbroot_core::roots::Partition)> = None;
        for level in 0..4 {
            let s = enumerate_sublevel(&f, &k, level, 1_000_000).unwrap();
            let p = components(&s);
            if let Some((ps, pp)) = &prev {
                prop_assert!(ps.len() <= s.len());
                for comp in &pp.components {
                    let targets: BTreeSet<usize> =
                        comp.iter().map(|&i| p.component_of[s.index_of(ps.point(i)).unwrap()]).collect();
                    prop_assert_eq!(targets.len(), 1);
                }
            }
            prev = Some((s, p));
        }
    }

    #[test]
    fn tower_closure_and_witnesses(seed in any::<u64>()) {
        let (_, f) = blown_up(seed);
        let Ok(root) = canonical_root(&f) else { return Ok(()) };
        let model = TowerModel::with_default_depth(&root);
        let basis = model.function_basis();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
        let mut psi = model.zero();
        for b in &basis {
            if rng.gen_bool(0.5) {
                psi = psi.add(b);
            }
        }
        prop_assert!(model.validate(&psi).is_ok());
        let up = u_apply(&psi);
        prop_assert!(model.validate(&up).is_ok());
        let t = in_im_u(&model, &up).unwrap();
        prop_assert!(t.in_image);
        prop_assert_eq!(u_apply(t.witness.as_ref().unwrap()), up);
    }

    #[test]
    fn truncation_stability(seed in any::<u64>()) {
        let (_, f) = blown_up(seed);
        let Ok(root) = canonical_root(&f) else { return Ok(()) };
        let d = TowerModel::with_default_depth(&root).depth();
        let answers: Vec<bool> = (d..d + 3)
            .map(|depth| {
                let m = TowerModel::new(&root, depth).unwrap();
                in_im_u(&m, &psi0(&m).unwrap()).unwrap().in_image
            })
            .collect();
        prop_assert!(answers.iter().all(|&a| a == answers[0]));
    }

    #[test]
    fn blowdown_invariants(seed in any::<u64>()) {
        let (_, f) = blown_up(seed);
        let t = blowdown_sequence(&f).unwrap();
        let ds = d_classes(&t).unwrap();
        let k0 = canonical_class(&f);
        for d in &ds {
            let kd: i64 = k0.evals().iter().zip(&d.0).map(|(a, b)| a * b).sum();
            prop_assert_eq!(kd, 1);
            prop_assert_eq!(dot(&f, d, d), -1);
            prop_assert_eq!(chi(&f, &k0, d).unwrap(), 0);
        }
        for r in &t.rounds {
            for (i, &a) in r.iter().enumerate() {
                for &b in &r[i + 1..] {
                    prop_assert_eq!(dot(&f, &t.classes[a].class, &t.classes[b].class), 0);
                }
            }
        }
        let s = s_set(&f, &t).unwrap();
        prop_assert_eq!(s.len(), 1usize << ds.len());
    }

    #[test]
    fn s_equals_c0_on_blown_up_trees(seed in any::<u64>()) {
        let (_, f) = blown_up(seed);
        let r = verify_s_equals_c0(&f, 1_000_000).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn relabeling_invariance(seed in any::<u64>()) {
        let (g, f) = blown_up(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 9);
        let mut perm: Vec<usize> = (0..g.len()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let h = g.relabeled(&perm);
        let fh = IntersectionForm::new(&h).unwrap();
        let (ta, tb) = (blowdown_sequence(&f).unwrap(), blowdown_sequence(&fh).unwrap());
        prop_assert_eq!(ta.classes.len(), tb.classes.len());
        prop_assert_eq!(ta.proximity.len(), tb.proximity.len());
        // S as a set of points, up to the basis permutation
        let sa: BTreeSet<Vec<i64>> = s_set(&f, &ta).unwrap().sorted().into_iter().map(|p| {
            let mut q = vec![0; p.len()];
            for (i, &c) in p.0.iter().enumerate() { q[perm[i]] = c; }
            q
        }).collect();
        let sb: BTreeSet<Vec<i64>> = s_set(&fh, &tb).unwrap().sorted().into_iter().map(|p| p.0).collect();
        prop_assert_eq!(sa, sb);
        if let (Ok(ra), Ok(rb)) = (canonical_root(&f), canonical_root(&fh)) {
            prop_assert_eq!(&ra.leaf_levels, &rb.leaf_levels);
            prop_assert_eq!(ra.stable_level, rb.stable_level);
            let counts = |r: &plumbroot_core::GradedRoot| r.level_counts().into_iter().collect::<BTreeMap<_, _>>();
            prop_assert_eq!(counts(&ra), counts(&rb));
        }
    }
}

use std::time::Instant;

use plumbroot_core::corpus;
use plumbroot_core::lattice::canonical_class;
use plumbroot_core::roots::{graded_root, verify_canonical_root_shape, Coverage, RootOptions};
use plumbroot_core::IntersectionForm;

#[test]
fn surgery_8_11_root() {
    let t = Instant::now();
    let f = IntersectionForm::new(&corpus::surgery_8_11()).unwrap();
    let k = canonical_class(&f);
    let root = graded_root(&f, &k, &RootOptions::default()).unwrap();
    assert_eq!(root.coverage, Coverage::Window);
    assert_eq!(root.min_level, -595);
    assert_eq!(root.leaf_levels.len(), 70);
    assert_eq!(root.stable_level, 1);
    let w0 = root.zero_vertex.unwrap();
    assert_eq!(root.vertices[w0].size, Some(64));
    assert!(!root.is_single_chain());
    let rep = verify_canonical_root_shape(&f, &root, 2_000_000).unwrap();
    assert!(rep.passed(), "{rep:?}");
    eprintln!("(8,11) surgery root in {:?}", t.elapsed());
}

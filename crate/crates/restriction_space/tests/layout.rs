use restriction_space::*;
use std::time::Instant;

#[test]
fn standard_layouts_satisfy_the_brick_invariants() {
    for (n, delta, r) in [(451, 1, 1), (3601, 2, 2)] {
        let t0 = Instant::now();
        let l = build_layout(&LayoutParams::standard(n, delta, r)).unwrap();
        let s = l.summary();
        println!("{s:?} in {:?}", t0.elapsed());
        assert!(s.max_horizontal <= 1 && s.max_vertical <= 1);
        assert_eq!(s.paths, 3 * r * s.pairs);
    }
}

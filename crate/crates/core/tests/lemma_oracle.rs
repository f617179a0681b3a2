mod common;

use vessiot::involution::{brute_force_combination, monster};

#[test]
fn lemma_equals_brute_force_combination() {
    for seed in 0..300 {
        let sys = common::random_system(seed);
        assert!(sys.validate().is_ok(), "seed {seed}");
        let r = monster(&sys).unwrap();
        for t in &r.triples {
            let lhs = brute_force_combination(&sys, t.alpha, t.i, t.j).unwrap();
            assert_eq!(t.assembled(sys.n()), lhs, "seed {seed} triple ({}, {}, {}) of {:?}", t.alpha, t.i, t.j, sys.display());
        }
    }
}

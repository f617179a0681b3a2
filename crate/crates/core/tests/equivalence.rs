mod common;

use vessiot::connection::{all_steps, build_family, Options};
use vessiot::involution::monster;
use vessiot::symbol::cartan_test;

#[test]
fn rank_conditions_match_lemma_and_symbol_test() {
    let mut passing = 0;
    let mut tested = 0;
    for seed in 0..250 {
        let sys = common::random_system(seed);
        if !common::upward_closed(&sys) {
            continue;
        }
        tested += 1;
        let report = monster(&sys).unwrap();
        let cartan = cartan_test(&sys.to_implicit()).unwrap();
        let out = build_family(&sys, &Options::default()).unwrap();
        let steps_pass = out.family().is_some();
        let steps = all_steps(&sys, &Options::default()).unwrap();
        let upper = steps.iter().all(|s| s.rank_condition.passes);
        let augmented = steps.iter().all(|s| s.passes());
        assert_eq!(augmented, steps_pass, "seed {seed}");
        assert_eq!(upper, report.symbol_involutive, "seed {seed}: {:?}", sys.display());
        assert_eq!(steps_pass, report.equation_involutive, "seed {seed}: {:?}", sys.display());
        assert_eq!(upper, cartan.passes, "seed {seed}: {:?}", sys.display());
        passing += steps_pass as usize;
    }
    assert!(tested >= 100, "{tested}");
    assert!(passing > 10 && passing < tested, "{passing}/{tested}");
}

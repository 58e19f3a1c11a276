mod common;

use common::{random_lasso, random_ltl, rng, PROPS};
use proptest::prelude::*;
use qatl_core::automata::{dpa_accepts_lasso, ltl_eval_lasso, ltl_to_nba, nba_accepts_lasso, nba_to_dpa, stretch_dpa};
use qatl_core::formula::Formula;
use rand::Rng;

fn props() -> Vec<String> {
    PROPS.iter().map(|p| p.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn every_acceptor_agrees(seed in any::<u64>(), size in 1usize..=7) {
        let mut r = rng(seed);
        let f = random_ltl(&mut r, size);
        let nba = ltl_to_nba(&f, &props()).unwrap();
        let dpa = nba_to_dpa(&nba).unwrap();
        for _ in 0..4 {
            let w = random_lasso(&mut r, 2);
            let truth = ltl_eval_lasso(&f, &props(), &w).unwrap();
            prop_assert_eq!(nba_accepts_lasso(&nba, &w).unwrap(), truth, "nba {} {:?}", f, w);
            prop_assert_eq!(dpa_accepts_lasso(&dpa, &w).unwrap(), truth, "dpa {} {:?}", f, w);
            let k = r.gen_range(2..=3);
            prop_assert_eq!(dpa_accepts_lasso(&stretch_dpa(&dpa, k), &w.pad(k)).unwrap(), truth);
        }
    }

    #[test]
    fn negation_flips_membership(seed in any::<u64>(), size in 1usize..=6) {
        let mut r = rng(seed);
        let f = random_ltl(&mut r, size);
        let w = random_lasso(&mut r, 2);
        let pos = nba_accepts_lasso(&ltl_to_nba(&f, &props()).unwrap(), &w).unwrap();
        let neg = nba_accepts_lasso(&ltl_to_nba(&Formula::not(f), &props()).unwrap(), &w).unwrap();
        prop_assert_ne!(pos, neg);
    }
}

mod common;

use common::{random_arena, random_counter_game, rng};
use proptest::prelude::*;
use qatl_core::model::expand_socg;
use qatl_core::parity::{
    dump_game, parse_game_dump, solve_bracketed, solve_spm, solve_zielonka, truncate, verify_strategy, BracketVerdict,
    Player, TruncationMode,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engines_agree_and_strategies_hold(seed in any::<u64>(), colors in 1u32..=5) {
        let a = random_arena(&mut rng(seed), 30, colors);
        let z = solve_zielonka(&a);
        prop_assert_eq!(&z.winner, &solve_spm(&a).winner);
        for p in [Player::Verifier, Player::Falsifier] {
            prop_assert_eq!(verify_strategy(&a, &z, p), Ok(true));
        }
    }

    #[test]
    fn dumps_round_trip(seed in any::<u64>()) {
        let g = random_counter_game(&mut rng(seed), 8, 3, 4);
        let parsed = parse_game_dump(&dump_game(&g)).unwrap();
        prop_assert_eq!(dump_game(&parsed.game), dump_game(&g));
    }

    #[test]
    fn truncations_bracket_each_other(seed in any::<u64>(), cap in 2u64..12) {
        let g = random_counter_game(&mut rng(seed), 6, 1, 4);
        let win = |mode| {
            let a = truncate(&g, cap, mode).unwrap();
            let r = solve_zielonka(&a);
            r.winner[a.node_of(g.entry, qatl_core::parity::Counter::Exact(0)).unwrap()]
        };
        // whatever Verifier wins pessimistically she also wins optimistically
        if win(TruncationMode::Pessimistic) == Player::Verifier {
            prop_assert_eq!(win(TruncationMode::Optimistic), Player::Verifier);
        }
        if win(TruncationMode::SaturatedPessimistic) == Player::Verifier {
            prop_assert_eq!(win(TruncationMode::SaturatedOptimistic), Player::Verifier);
        }
    }

    #[test]
    fn expansion_preserves_certain_verdicts(seed in any::<u64>()) {
        let g = random_counter_game(&mut rng(seed), 5, 4, 3);
        let native = solve_bracketed(&g, 24).unwrap();
        let expanded = solve_bracketed(&expand_socg(&g), 24).unwrap();
        if native != BracketVerdict::Unknown && expanded != BracketVerdict::Unknown {
            prop_assert_eq!(native, expanded);
        }
    }
}

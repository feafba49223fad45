//! Invariants of the manipulation analyses on random small games.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use powersplit_core::exact::{self, IndexKind};
use powersplit_core::manipulation::{
    annex_benefit, check_annex_bounds, check_split_bounds, merge_benefit, scan_two_way_splits,
    unanimity_split_recommendation, Classification,
};
use powersplit_core::{Coalition, Game, SplitSpec};
use proptest::prelude::*;

fn arb_game(max_n: usize, max_w: u64) -> impl Strategy<Value = Game> {
    prop::collection::vec(1..=max_w, 2..=max_n).prop_flat_map(|w| {
        let total: u64 = w.iter().sum();
        (1..=total).prop_map(move |q| Game::new(q, w.clone()).unwrap())
    })
}

fn arb_split() -> impl Strategy<Value = (Game, SplitSpec)> {
    arb_game(9, 20).prop_flat_map(|g| {
        let n = g.num_players();
        (Just(g), 0..n)
            .prop_filter("splittable", |(g, p)| g.weight(*p) >= 2)
            .prop_flat_map(|(g, p)| {
                let w = g.weight(p);
                (Just(g), Just(p), 1..w).prop_map(|(g, p, a)| {
                    let spec = SplitSpec::two_way(p, a, g.weight(p) - a);
                    (g, spec)
                })
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn split_bounds_hold((game, spec) in arb_split()) {
        let rep = check_split_bounds(&game, &spec);
        prop_assert!(rep.is_ok(), "{:?}", rep);
        let rep = rep.unwrap();
        prop_assert_eq!(rep.eta_after.clone(), rep.eta_before.clone() * 2u32);
    }

    #[test]
    fn annexation_bounds_hold(game in arb_game(8, 15), i in 0usize..8, j in 0usize..8) {
        let n = game.num_players();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let rep = check_annex_bounds(&game, i, &Coalition::singleton(j));
        prop_assert!(rep.is_ok(), "{:?}", rep);
    }

    #[test]
    fn scan_counts_partition_total(game in arb_game(8, 20), p in 0usize..8) {
        let p = p % game.num_players();
        for kind in IndexKind::ALL {
            let s = scan_two_way_splits(&game, p, kind).unwrap();
            prop_assert_eq!(s.beneficial + s.harmful + s.neutral, s.total_splits);
            prop_assert_eq!(s.total_splits as u64, game.weight(p) / 2);
            for r in &s.reports {
                prop_assert_eq!(r.classification, Classification::exact(&r.payoff_before, &r.payoff_after_total));
            }
        }
    }

    #[test]
    fn scan_ignores_order_of_equal_players(game in arb_game(7, 12), p in 0usize..7) {
        let p = p % game.num_players();
        // move the manipulator to the front, keep the others reversed
        let mut w: Vec<u64> = game.weights().iter().enumerate().filter(|&(j, _)| j != p).map(|(_, &x)| x).collect();
        w.reverse();
        w.insert(0, game.weight(p));
        let moved = Game::new(game.quota(), w).unwrap();
        for kind in IndexKind::ALL {
            let a = scan_two_way_splits(&game, p, kind).unwrap();
            let b = scan_two_way_splits(&moved, 0, kind).unwrap();
            prop_assert_eq!((a.beneficial, a.harmful, a.neutral), (b.beneficial, b.harmful, b.neutral));
        }
    }

    #[test]
    fn unanimity_games(w in prop::collection::vec(1u64..10, 2..7), s in 2usize..5) {
        let total: u64 = w.iter().sum();
        let game = Game::new(total, w.clone()).unwrap();
        let n = w.len();
        for kind in IndexKind::ALL {
            let s = s.min(n);
            let coalition: Coalition = (0..s).collect();
            prop_assert!(!merge_benefit(&game, &coalition, kind).unwrap().beneficial());
            if s < n {
                let annexed: Coalition = (1..s).collect();
                if !annexed.is_empty() {
                    prop_assert!(annex_benefit(&game, 0, &annexed, kind).unwrap().beneficial);
                }
            }
            if let Some(spec) = unanimity_split_recommendation(&game) {
                let rep = powersplit_core::manipulation::evaluate_split(&game, &spec, kind).unwrap();
                prop_assert_eq!(rep.classification, Classification::Beneficial);
            }
        }
    }

    #[test]
    fn indices_sum_to_one_and_dummies_get_zero(game in arb_game(9, 20)) {
        for kind in IndexKind::ALL {
            let idx = exact::index(&game, kind);
            prop_assert_eq!(idx.sum(), BigRational::from_integer(BigInt::from(1)));
            let counts = exact::banzhaf_counts_all_dp(&game);
            for i in 0..game.num_players() {
                if counts.counts[i].is_zero() {
                    prop_assert!(idx.values[i].is_zero());
                }
            }
        }
    }
}

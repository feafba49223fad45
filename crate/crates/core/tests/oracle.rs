//! Exact engines against a brute-force oracle written independently of the
//! library: Shapley–Shubik by walking every permutation, Banzhaf by walking
//! every coalition.

use num_bigint::BigInt;
use num_rational::BigRational;
use powersplit_core::exact::{self, IndexKind};
use powersplit_core::Game;
use proptest::prelude::*;

fn frac(n: u128, d: u128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn permutation_shapley(q: u64, w: &[u64]) -> Vec<BigRational> {
    let n = w.len();
    let mut pivots = vec![0u128; n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0u128;
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut visit = |p: &[usize]| {
        total += 1;
        let mut acc = 0;
        for &i in p {
            if acc < q && acc + w[i] >= q {
                pivots[i] += 1;
                break;
            }
            acc += w[i];
        }
    };
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    pivots.iter().map(|&p| frac(p, total)).collect()
}

fn coalition_banzhaf(q: u64, w: &[u64]) -> (Vec<u128>, Vec<BigRational>) {
    let n = w.len();
    let mut eta = vec![0u128; n];
    for mask in 0u32..(1 << n) {
        let s: u64 = (0..n).filter(|j| mask >> j & 1 == 1).map(|j| w[j]).sum();
        if s >= q {
            continue;
        }
        for i in 0..n {
            if mask >> i & 1 == 0 && s + w[i] >= q {
                eta[i] += 1;
            }
        }
    }
    let t: u128 = eta.iter().sum();
    let beta = eta.iter().map(|&e| frac(e, t)).collect();
    (eta, beta)
}

fn arb_game(max_n: usize, max_w: u64) -> impl Strategy<Value = Game> {
    prop::collection::vec(1..=max_w, 1..=max_n).prop_flat_map(|w| {
        let total: u64 = w.iter().sum();
        (1..=total).prop_map(move |q| Game::new(q, w.clone()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn shapley_matches_permutations(game in arb_game(7, 25)) {
        let oracle = permutation_shapley(game.quota(), game.weights());
        prop_assert_eq!(&exact::index(&game, IndexKind::ShapleyShubik).values, &oracle);
        prop_assert_eq!(&exact::shapley_all_dp(&powersplit_core::Sequential, &game).values, &oracle);
        for (i, v) in oracle.iter().enumerate() {
            prop_assert_eq!(&exact::shapley_dp(&game, i).unwrap(), v);
        }
    }

    #[test]
    fn banzhaf_matches_coalitions(game in arb_game(10, 25)) {
        let (eta, beta) = coalition_banzhaf(game.quota(), game.weights());
        let dp = exact::banzhaf_counts_all_dp(&game);
        let en = exact::banzhaf_counts_enumerate(&game).unwrap();
        for (i, &e) in eta.iter().enumerate() {
            prop_assert_eq!(dp.counts[i].clone(), e.into());
            prop_assert_eq!(en.counts[i].clone(), e.into());
            prop_assert_eq!(exact::banzhaf_counts_dp(&game, i).unwrap(), e.into());
        }
        prop_assert_eq!(&exact::index(&game, IndexKind::Banzhaf).values, &beta);
    }

    #[test]
    fn enumeration_and_dp_agree(game in arb_game(10, 25)) {
        for kind in IndexKind::ALL {
            let en = exact::index_with(&powersplit_core::Sequential, &game, kind, 12);
            let dp = exact::index_with(&powersplit_core::Sequential, &game, kind, 0);
            prop_assert_eq!(en, dp);
        }
    }
}

#[test]
fn worked_examples() {
    let g = Game::new(5, vec![2, 1, 1, 1, 1]).unwrap();
    assert_eq!(permutation_shapley(5, g.weights())[0], frac(2, 5));
    assert_eq!(
        exact::index(&g, IndexKind::ShapleyShubik).values[0],
        frac(2, 5)
    );
    assert_eq!(exact::index(&g, IndexKind::Banzhaf).values[0], frac(5, 17));
}

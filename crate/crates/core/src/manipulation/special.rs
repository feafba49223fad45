//! Closed-form split recommendations for two families of games where a
//! beneficial split is known to exist.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::Zero;

use crate::exact::banzhaf_counts_dp;
use crate::game::{Game, SplitSpec};

/// When `w(N) − s < q` with `s = min(min_i w_i, ⌊w_max/2⌋)`, splitting the
/// heaviest player into `(⌊w/2⌋, ⌈w/2⌉)` leaves a game in which only the
/// grand coalition wins, so the split raises that player's power by a
/// factor of `2n/(n+1)`.
pub fn unanimity_split_recommendation(game: &Game) -> Option<SplitSpec> {
    let wmax = game.max_weight();
    let s = game.min_weight().min(wmax / 2);
    if s == 0 || game.total_weight() - s >= game.quota() {
        return None;
    }
    let player = game.weights().iter().position(|&w| w == wmax)?;
    Some(SplitSpec::two_way(player, wmax / 2, wmax - wmax / 2))
}

fn divisors_desc(x: u64) -> Vec<u64> {
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let mut rest = x;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            primes.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        primes.push((rest, 1));
    }
    let mut divs = alloc::vec![1u64];
    for (p, e) in primes {
        let current = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable_by(|a, b| b.cmp(a));
    divs
}

/// For a player whose weight sits just above the remainder of a high quota
/// over a common multiple of the other weights, recommends the split
/// `(b − 1, w − b + 1)`, which is beneficial under Shapley–Shubik.
///
/// Conditions, with `A` a common divisor of the other weights (largest
/// first) and `q = A·T + b`:
/// `0 < b < A`, `b < w < min(2b − 1, A)`, `q` larger than the sum of the
/// `⌈n/2⌉` largest other weights, and the player critical for at least one
/// coalition.
pub fn high_quota_split_recommendation(game: &Game, player: usize) -> Option<SplitSpec> {
    game.check_player(player).ok()?;
    let w = game.weight(player);
    let mut others: Vec<u64> = game
        .weights()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != player)
        .map(|(_, &x)| x)
        .collect();
    if others.is_empty() {
        return None;
    }
    let g = others.iter().fold(0u64, |acc, &x| acc.gcd(&x));
    let q = game.quota();
    let n = game.num_players();
    others.sort_unstable_by(|a, b| b.cmp(a));
    let top: u64 = others.iter().take(n.div_ceil(2)).sum();
    if q <= top {
        return None;
    }
    for a in divisors_desc(g) {
        let b = q % a;
        if b == 0 || !(b < w && w < (2 * b).saturating_sub(1).min(a)) {
            continue;
        }
        if banzhaf_counts_dp(game, player).ok()?.is_zero() {
            return None;
        }
        return Some(SplitSpec::two_way(player, b - 1, w - b + 1));
    }
    None
}

//! Exact Shapley–Shubik and Banzhaf indices.
//!
//! Two independent routes are provided: subset enumeration (the reference
//! for small games) and pseudopolynomial dynamic programming over capped
//! weights. All results are exact rationals over arbitrary-precision
//! integers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::count::{with_counter, Count};
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::game::Game;
use crate::rational::{factorials, ratio};
use crate::tables::{SizedTable, WeightTable};

/// Default player limit for the enumeration engine.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 12;
/// Hard ceiling: enumeration indexes subsets with 64-bit masks.
pub const MAX_ENUMERATION_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexKind {
    ShapleyShubik,
    Banzhaf,
}

impl IndexKind {
    pub const ALL: [IndexKind; 2] = [IndexKind::ShapleyShubik, IndexKind::Banzhaf];

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::ShapleyShubik => "shapley_shubik",
            IndexKind::Banzhaf => "banzhaf_normalized",
        }
    }
}

/// Per-player index values; they sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexVector {
    pub kind: IndexKind,
    pub values: Vec<BigRational>,
}

impl IndexVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, player: usize) -> &BigRational {
        &self.values[player]
    }

    pub fn sum(&self) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |a, v| a + v)
    }
}

/// η_i: the number of coalitions each player is critical for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalCounts {
    pub counts: Vec<BigUint>,
}

impl CriticalCounts {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn normalize(&self) -> Result<IndexVector> {
        normalize_banzhaf(self)
    }
}

/// For one player: `counts[k]` = number of size-`k` coalitions of the other
/// players that the player is critical for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapleyPivotTable {
    pub player: usize,
    pub counts: Vec<BigUint>,
}

impl ShapleyPivotTable {
    /// φ_i = Σ_k counts[k] · k!(n−1−k)! / n!
    pub fn value(&self) -> BigRational {
        shapley_from_pivots(&self.counts)
    }
}

pub(crate) fn shapley_from_pivots(pivots: &[BigUint]) -> BigRational {
    let n = pivots.len();
    let fact = factorials(n);
    let numer: BigUint = pivots
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| c * &fact[k] * &fact[n - 1 - k])
        .sum();
    ratio(numer, fact[n].clone())
}

fn check_enumeration(game: &Game, limit: usize) -> Result<()> {
    let limit = limit.min(MAX_ENUMERATION_LIMIT);
    if game.num_players() > limit {
        Err(Error::SizeLimit {
            players: game.num_players(),
            limit,
        })
    } else {
        Ok(())
    }
}

/// w(S) for every mask over all players.
fn subset_weights(weights: &[u64]) -> Vec<u64> {
    let n = weights.len();
    let mut out = vec![0u64; 1usize << n];
    for mask in 1usize..out.len() {
        let low = mask.trailing_zeros() as usize;
        out[mask] = out[mask & (mask - 1)] + weights[low];
    }
    out
}

/// Shapley–Shubik index by enumerating every coalition of the other players,
/// each weighted by k!(n−1−k)!/n!.
pub fn shapley_enumerate(game: &Game) -> Result<IndexVector> {
    shapley_enumerate_with_limit(game, DEFAULT_ENUMERATION_LIMIT)
}

pub fn shapley_enumerate_with_limit(game: &Game, limit: usize) -> Result<IndexVector> {
    check_enumeration(game, limit)?;
    let n = game.num_players();
    let q = game.quota();
    let w = game.weights();
    let sw = subset_weights(w);
    let fact = factorials(n);
    let values = (0..n)
        .map(|i| {
            let mut by_size = vec![0u64; n];
            for (mask, &ws) in sw.iter().enumerate() {
                if mask >> i & 1 == 0 && ws < q && ws + w[i] >= q {
                    by_size[mask.count_ones() as usize] += 1;
                }
            }
            let numer: BigUint = by_size
                .iter()
                .enumerate()
                .map(|(k, &c)| BigUint::from(c) * &fact[k] * &fact[n - 1 - k])
                .sum();
            ratio(numer, fact[n].clone())
        })
        .collect();
    Ok(IndexVector {
        kind: IndexKind::ShapleyShubik,
        values,
    })
}

/// η_i = |{S ⊆ N∖{i} : q − w_i ≤ w(S) ≤ q − 1}| by enumeration.
pub fn banzhaf_counts_enumerate(game: &Game) -> Result<CriticalCounts> {
    banzhaf_counts_enumerate_with_limit(game, DEFAULT_ENUMERATION_LIMIT)
}

pub fn banzhaf_counts_enumerate_with_limit(game: &Game, limit: usize) -> Result<CriticalCounts> {
    check_enumeration(game, limit)?;
    let n = game.num_players();
    let q = game.quota();
    let w = game.weights();
    let sw = subset_weights(w);
    let counts = (0..n)
        .map(|i| {
            let c = sw
                .iter()
                .enumerate()
                .filter(|&(mask, &ws)| mask >> i & 1 == 0 && ws < q && ws + w[i] >= q)
                .count();
            BigUint::from(c)
        })
        .collect();
    Ok(CriticalCounts { counts })
}

fn others(game: &Game, player: usize) -> impl Iterator<Item = u64> + '_ {
    game.weights()
        .iter()
        .enumerate()
        .filter(move |&(j, _)| j != player)
        .map(|(_, &w)| w)
}

/// Size-resolved pivot counts for one player, by DP over the other players.
pub fn pivot_table(game: &Game, player: usize) -> Result<ShapleyPivotTable> {
    game.check_player(player)?;
    let counts = with_counter!(game.num_players(), C => {
        SizedTable::<C>::from_weights(game.quota(), others(game, player))
            .pivot_counts(game.weight(player))
            .iter()
            .map(Count::to_big)
            .collect()
    });
    Ok(ShapleyPivotTable { player, counts })
}

/// φ_i by DP over (coalition size, capped weight); O(n²q) counter updates.
pub fn shapley_dp(game: &Game, player: usize) -> Result<BigRational> {
    Ok(pivot_table(game, player)?.value())
}

/// η_i by DP over capped weight; O(nq) counter updates.
pub fn banzhaf_counts_dp(game: &Game, player: usize) -> Result<BigUint> {
    game.check_player(player)?;
    Ok(with_counter!(game.num_players(), C => {
        WeightTable::<C>::from_weights(game.quota(), others(game, player))
            .critical_count(game.weight(player))
            .to_big()
    }))
}

/// Shapley–Shubik index of every player: one table over all players, then
/// each player is divided back out.
pub fn shapley_all_dp<E: Executor>(exec: &E, game: &Game) -> IndexVector {
    let values = with_counter!(game.num_players(), C => {
        let full = SizedTable::<C>::from_weights(game.quota(), game.weights().iter().copied());
        exec.map(game.num_players(), |i| {
            let mut t = full.clone();
            t.remove(game.weight(i));
            let pivots: Vec<BigUint> = t.pivot_counts(game.weight(i)).iter().map(Count::to_big).collect();
            shapley_from_pivots(&pivots)
        })
    });
    IndexVector {
        kind: IndexKind::ShapleyShubik,
        values,
    }
}

/// η_i for every player via a single table and per-player removal.
pub fn banzhaf_counts_all_dp(game: &Game) -> CriticalCounts {
    let counts = with_counter!(game.num_players(), C => {
        let full = WeightTable::<C>::from_weights(game.quota(), game.weights().iter().copied());
        all_critical_counts(&full, game.weights())
    });
    CriticalCounts { counts }
}

/// η for each weight, given the table over exactly those weights.
pub(crate) fn all_critical_counts<C: Count>(
    full: &WeightTable<C>,
    weights: &[u64],
) -> Vec<BigUint> {
    let mut cache: Vec<(u64, BigUint)> = Vec::new();
    weights
        .iter()
        .map(|&w| {
            if let Some((_, c)) = cache.iter().find(|(cw, _)| *cw == w) {
                return c.clone();
            }
            let mut t = full.clone();
            t.remove(w);
            let c = t.critical_count(w).to_big();
            cache.push((w, c.clone()));
            c
        })
        .collect()
}

/// β_i = η_i / Σ_j η_j
pub fn normalize_banzhaf(counts: &CriticalCounts) -> Result<IndexVector> {
    let total = counts.total();
    if total.is_zero() {
        return Err(Error::DegenerateCounts);
    }
    let values = counts
        .counts
        .iter()
        .map(|c| ratio(c.clone(), total.clone()))
        .collect();
    Ok(IndexVector {
        kind: IndexKind::Banzhaf,
        values,
    })
}

/// Index of every player: enumeration up to `enumeration_limit` players,
/// dynamic programming above. Both paths give identical results.
pub fn index(game: &Game, kind: IndexKind) -> IndexVector {
    index_with(&Sequential, game, kind, DEFAULT_ENUMERATION_LIMIT)
}

pub fn index_with<E: Executor>(
    exec: &E,
    game: &Game,
    kind: IndexKind,
    enumeration_limit: usize,
) -> IndexVector {
    let small = game.num_players() <= enumeration_limit.min(MAX_ENUMERATION_LIMIT);
    let result = match (kind, small) {
        (IndexKind::ShapleyShubik, true) => shapley_enumerate_with_limit(game, enumeration_limit),
        (IndexKind::ShapleyShubik, false) => Ok(shapley_all_dp(exec, game)),
        (IndexKind::Banzhaf, true) => banzhaf_counts_enumerate_with_limit(game, enumeration_limit)
            .and_then(|c| normalize_banzhaf(&c)),
        (IndexKind::Banzhaf, false) => normalize_banzhaf(&banzhaf_counts_all_dp(game)),
    };
    // A valid game always has a critical player and fits the limit checked above.
    result.expect("index of a valid game")
}

/// Index of a single player by DP. Banzhaf needs every player's η for
/// normalization.
pub fn player_index(game: &Game, player: usize, kind: IndexKind) -> Result<BigRational> {
    match kind {
        IndexKind::ShapleyShubik => shapley_dp(game, player),
        IndexKind::Banzhaf => {
            game.check_player(player)?;
            let counts = banzhaf_counts_all_dp(game);
            let total = counts.total();
            Ok(ratio(counts.counts[player].clone(), total))
        }
    }
}

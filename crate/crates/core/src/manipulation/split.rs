use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Engine, ScanSummary, SplitReport};
use crate::count::{with_counter, Count};
use crate::error::{Error, Result};
use crate::exact::{all_critical_counts, shapley_from_pivots, IndexKind};
use crate::exec::{Executor, Sequential};
use crate::game::{Game, SplitSpec};
use crate::mc::{banzhaf_mc_with, shapley_mc_with, McConfig};
use crate::rational::{from_f64, ratio};
use crate::tables::{SizedTable, WeightTable};

/// Largest number of identities accepted by k-way scans.
pub const MAX_K_WAY: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum ScanEngine {
    Exact,
    /// Sampled payoffs; `margin` is the gain (or loss) an estimate must clear.
    MonteCarlo {
        config: McConfig,
        margin: f64,
    },
}

/// Unordered non-trivial two-way splits `(j, w − j)`, `j = 1..=⌊w/2⌋`.
pub fn two_way_splits(weight: u64) -> Vec<[u64; 2]> {
    (1..=weight / 2).map(|j| [j, weight - j]).collect()
}

/// Partitions of `n` into exactly `k` positive parts, each non-increasing.
pub fn integer_partitions(n: u64, k: usize) -> Vec<Vec<u64>> {
    fn go(rest: u64, slots: usize, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slots == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // every remaining slot needs at least 1, and no slot exceeds `max`
        let slots64 = slots as u64;
        if rest < slots64 || rest > max.saturating_mul(slots64) {
            return;
        }
        let hi = max.min(rest - (slots64 - 1));
        let lo = rest.div_ceil(slots64);
        for p in (lo..=hi).rev() {
            cur.push(p);
            go(rest - p, slots - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(n, k, n, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Precomputed tables over the non-manipulating players, reused across every
/// candidate split of one player.
struct Evaluator<C> {
    kind: IndexKind,
    others: Vec<u64>,
    before: BigRational,
    sized: Option<SizedTable<C>>,
    plain: Option<WeightTable<C>>,
}

impl<C: Count> Evaluator<C> {
    fn new(game: &Game, player: usize, kind: IndexKind) -> Self {
        let others: Vec<u64> = game
            .weights()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != player)
            .map(|(_, &w)| w)
            .collect();
        let w = game.weight(player);
        let q = game.quota();
        match kind {
            IndexKind::ShapleyShubik => {
                let base = SizedTable::<C>::from_weights(q, others.iter().copied());
                let before = pivots_value(&base.pivot_counts(w));
                Evaluator {
                    kind,
                    others,
                    before,
                    sized: Some(base),
                    plain: None,
                }
            }
            IndexKind::Banzhaf => {
                let base = WeightTable::<C>::from_weights(q, others.iter().copied());
                let before = banzhaf_share(&base, &others, &[w]);
                Evaluator {
                    kind,
                    others,
                    before,
                    sized: None,
                    plain: Some(base),
                }
            }
        }
    }

    fn after(&self, parts: &[u64]) -> BigRational {
        match self.kind {
            IndexKind::ShapleyShubik => {
                let mut full = self.sized.clone().expect("sized table");
                for &p in parts {
                    full.add(p);
                }
                let mut total = BigRational::zero();
                let mut seen: Vec<u64> = Vec::new();
                for &p in parts {
                    if seen.contains(&p) {
                        continue;
                    }
                    seen.push(p);
                    let mult = parts.iter().filter(|&&x| x == p).count() as u64;
                    let mut t = full.clone();
                    t.remove(p);
                    let v = pivots_value(&t.pivot_counts(p));
                    total += v * BigRational::from_integer(mult.into());
                }
                total
            }
            IndexKind::Banzhaf => banzhaf_share(
                self.plain.as_ref().expect("weight table"),
                &self.others,
                parts,
            ),
        }
    }
}

fn pivots_value<C: Count>(pivots: &[C]) -> BigRational {
    let big: Vec<BigUint> = pivots.iter().map(Count::to_big).collect();
    shapley_from_pivots(&big)
}

/// Σ_{parts} η / Σ_all η in the game whose players are `others ++ parts`.
fn banzhaf_share<C: Count>(base: &WeightTable<C>, others: &[u64], parts: &[u64]) -> BigRational {
    let mut full = base.clone();
    for &p in parts {
        full.add(p);
    }
    let mut weights = others.to_vec();
    weights.extend_from_slice(parts);
    let counts = all_critical_counts(&full, &weights);
    let total: BigUint = counts.iter().sum();
    let mine: BigUint = counts[others.len()..].iter().sum();
    if total.is_zero() {
        BigRational::zero()
    } else {
        ratio(mine, total)
    }
}

fn check_spec(game: &Game, spec: &SplitSpec) -> Result<()> {
    // validates parts and player; the resulting game is discarded
    game.apply_split(spec).map(|_| ())
}

/// Exact report for one split.
pub fn evaluate_split(game: &Game, spec: &SplitSpec, kind: IndexKind) -> Result<SplitReport> {
    check_spec(game, spec)?;
    let players = game.num_players() + spec.parts.len();
    Ok(with_counter!(players, C => {
        let ev = Evaluator::<C>::new(game, spec.player, kind);
        SplitReport::new(spec.clone(), kind, ev.before.clone(), ev.after(&spec.parts), Engine::Exact)
    }))
}

/// Evaluates the given candidate splits of `player` with the chosen engine.
pub fn scan_splits_with<E: Executor>(
    exec: &E,
    game: &Game,
    player: usize,
    kind: IndexKind,
    engine: &ScanEngine,
    specs: &[SplitSpec],
) -> Result<ScanSummary> {
    game.check_player(player)?;
    for spec in specs {
        if spec.player != player {
            return Err(Error::InvalidSplit(alloc::format!(
                "split of player {} in a scan of player {player}",
                spec.player
            )));
        }
        check_spec(game, spec)?;
    }
    let reports = match engine {
        ScanEngine::Exact => {
            let max_parts = specs.iter().map(|s| s.parts.len()).max().unwrap_or(1);
            with_counter!(game.num_players() + max_parts, C => {
                let ev = Evaluator::<C>::new(game, player, kind);
                exec.map(specs.len(), |i| {
                    let spec = &specs[i];
                    SplitReport::new(spec.clone(), kind, ev.before.clone(), ev.after(&spec.parts), Engine::Exact)
                })
            })
        }
        ScanEngine::MonteCarlo { config, margin } => {
            let margin = from_f64(*margin)
                .filter(|m| *m >= BigRational::zero())
                .ok_or_else(|| {
                    Error::InvalidConfig("margin must be a finite non-negative number".into())
                })?;
            config.validate()?;
            let before = mc_payoff(exec, game, player_ids(player), kind, &config.derive(0))?;
            let results = exec.map(specs.len(), |i| -> Result<SplitReport> {
                let spec = &specs[i];
                let out = game.apply_split(spec)?;
                let after = mc_payoff(
                    exec,
                    &out.game,
                    out.identities.clone(),
                    kind,
                    &config.derive(i as u64 + 1),
                )?;
                Ok(SplitReport::new(
                    spec.clone(),
                    kind,
                    before.clone(),
                    after,
                    Engine::MonteCarlo {
                        margin: margin.clone(),
                    },
                ))
            });
            results.into_iter().collect::<Result<Vec<_>>>()?
        }
    };
    Ok(ScanSummary::from_reports(player, kind, reports))
}

fn player_ids(player: usize) -> Vec<usize> {
    vec![player]
}

/// Estimated total index of `players` in `game`.
pub(crate) fn mc_payoff<E: Executor>(
    exec: &E,
    game: &Game,
    players: Vec<usize>,
    kind: IndexKind,
    config: &McConfig,
) -> Result<BigRational> {
    match kind {
        IndexKind::ShapleyShubik => {
            let mut total = BigRational::zero();
            for p in players {
                total += shapley_mc_with(exec, game, p, config)?.value();
            }
            Ok(total)
        }
        IndexKind::Banzhaf => {
            let est = banzhaf_mc_with(exec, game, config)?;
            Ok(players
                .iter()
                .fold(BigRational::zero(), |acc, &p| acc + est.normalized.get(p)))
        }
    }
}

pub fn scan_two_way_splits(game: &Game, player: usize, kind: IndexKind) -> Result<ScanSummary> {
    scan_two_way_splits_with(&Sequential, game, player, kind, &ScanEngine::Exact)
}

/// Every unordered non-trivial integer two-way split of `player`. A weight-1
/// player has none and gets an empty summary.
pub fn scan_two_way_splits_with<E: Executor>(
    exec: &E,
    game: &Game,
    player: usize,
    kind: IndexKind,
    engine: &ScanEngine,
) -> Result<ScanSummary> {
    game.check_player(player)?;
    let specs: Vec<SplitSpec> = two_way_splits(game.weight(player))
        .into_iter()
        .map(|[a, b]| SplitSpec::two_way(player, a, b))
        .collect();
    scan_splits_with(exec, game, player, kind, engine, &specs)
}

pub fn scan_k_way_splits(
    game: &Game,
    player: usize,
    k: usize,
    kind: IndexKind,
) -> Result<ScanSummary> {
    scan_k_way_splits_with(&Sequential, game, player, k, kind, &ScanEngine::Exact)
}

/// Every split of `player` into exactly `k` identities, as a multiset of
/// parts; identities are interchangeable so orderings are not repeated.
pub fn scan_k_way_splits_with<E: Executor>(
    exec: &E,
    game: &Game,
    player: usize,
    k: usize,
    kind: IndexKind,
    engine: &ScanEngine,
) -> Result<ScanSummary> {
    if !(2..=MAX_K_WAY).contains(&k) {
        return Err(Error::KWayGuard { k, max: MAX_K_WAY });
    }
    game.check_player(player)?;
    let specs: Vec<SplitSpec> = integer_partitions(game.weight(player), k)
        .into_iter()
        .map(|parts| SplitSpec::new(player, parts))
        .collect();
    scan_splits_with(exec, game, player, kind, engine, &specs)
}

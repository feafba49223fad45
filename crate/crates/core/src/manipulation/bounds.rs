//! Exact checkers for the worst-case gain and loss from two-way splits and
//! for the annexation inequalities. Each game is evaluated from scratch with
//! the general index routines, independently of the split scanner.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{
    banzhaf_counts_all_dp, banzhaf_counts_enumerate, index, player_index, CriticalCounts, IndexKind,
};
use crate::game::{Coalition, Game, SplitSpec};
use crate::rational::{from_u64, ratio, to_fraction};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitBoundReport {
    pub spec: SplitSpec,
    /// Players before the split.
    pub players: usize,
    pub shapley_before: BigRational,
    pub shapley_after: BigRational,
    pub shapley_ratio: Option<BigRational>,
    pub banzhaf_before: BigRational,
    pub banzhaf_after: BigRational,
    pub banzhaf_ratio: Option<BigRational>,
    pub eta_before: BigUint,
    /// η summed over both identities; always `2 · eta_before`.
    pub eta_after: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnexBoundReport {
    pub annexer: usize,
    pub annexed: Coalition,
    pub shapley_before: BigRational,
    pub shapley_after: BigRational,
    pub banzhaf_before: BigRational,
    pub banzhaf_after: BigRational,
    /// Annexations of lighter single players compared for monotonicity.
    pub monotonicity_comparisons: usize,
}

fn critical_counts(game: &Game) -> CriticalCounts {
    if game.num_players() <= crate::exact::DEFAULT_ENUMERATION_LIMIT {
        banzhaf_counts_enumerate(game).expect("within enumeration limit")
    } else {
        banzhaf_counts_all_dp(game)
    }
}

fn violation(what: &str, game: &Game, detail: alloc::string::String) -> Error {
    Error::BoundViolation(format!("{what} in {game}: {detail}"))
}

fn check_range(
    what: &str,
    game: &Game,
    lo: &BigRational,
    value: &BigRational,
    hi: &BigRational,
) -> Result<()> {
    if value < lo || value > hi {
        return Err(violation(
            what,
            game,
            format!(
                "{} outside [{}, {}]",
                to_fraction(value),
                to_fraction(lo),
                to_fraction(hi)
            ),
        ));
    }
    Ok(())
}

/// Verifies, for a two-part split, that the Shapley–Shubik total lies in
/// `[2/(n+1), 2n/(n+1)] · before`, the Banzhaf total in `[before/n, 2·before]`,
/// and that the identities' critical counts sum to exactly twice the
/// original player's.
pub fn check_split_bounds(game: &Game, spec: &SplitSpec) -> Result<SplitBoundReport> {
    if spec.parts.len() != 2 {
        return Err(Error::InvalidSplit(format!(
            "expected two parts, got {}",
            spec.parts.len()
        )));
    }
    let out = game.apply_split(spec)?;
    let n = game.num_players() as u64;
    let ids = &out.identities;

    let ss_before = index(game, IndexKind::ShapleyShubik).values[spec.player].clone();
    let ss_new = index(&out.game, IndexKind::ShapleyShubik);
    let ss_after = ss_new.get(ids[0]) + ss_new.get(ids[1]);
    if ss_before.is_zero() {
        if !ss_after.is_zero() {
            return Err(violation(
                "dummy gained Shapley–Shubik power",
                game,
                to_fraction(&ss_after),
            ));
        }
    } else {
        let lo = &ss_before * from_u64(2, n + 1);
        let hi = &ss_before * from_u64(2 * n, n + 1);
        check_range("Shapley–Shubik split bound", game, &lo, &ss_after, &hi)?;
    }

    let before_counts = critical_counts(game);
    let after_counts = critical_counts(&out.game);
    let eta_before = before_counts.counts[spec.player].clone();
    let eta_after = &after_counts.counts[ids[0]] + &after_counts.counts[ids[1]];
    if eta_after != &eta_before * 2u32 {
        return Err(violation(
            "critical-count identity",
            game,
            format!("{eta_after} ≠ 2 · {eta_before}"),
        ));
    }
    let bz_before = ratio(eta_before.clone(), before_counts.total());
    let bz_after = ratio(eta_after.clone(), after_counts.total());
    if !bz_before.is_zero() {
        let lo = &bz_before / BigRational::from_integer(n.into());
        let hi = &bz_before * BigRational::from_integer(2.into());
        check_range("Banzhaf split bound", game, &lo, &bz_after, &hi)?;
    }

    let ratio_of =
        |after: &BigRational, before: &BigRational| (!before.is_zero()).then(|| after / before);
    Ok(SplitBoundReport {
        spec: spec.clone(),
        players: game.num_players(),
        shapley_ratio: ratio_of(&ss_after, &ss_before),
        banzhaf_ratio: ratio_of(&bz_after, &bz_before),
        shapley_before: ss_before,
        shapley_after: ss_after,
        banzhaf_before: bz_before,
        banzhaf_after: bz_after,
        eta_before,
        eta_after,
    })
}

/// Verifies that annexation never lowers the Shapley–Shubik index. When a
/// single player `j` is annexed, also verifies that the Banzhaf index at
/// least halves (and does not drop when `w_i ≤ w_j`), and that annexing `j`
/// is worth at least as much Shapley–Shubik power as annexing any player of
/// weight at most `w_j`.
pub fn check_annex_bounds(
    game: &Game,
    annexer: usize,
    annexed: &Coalition,
) -> Result<AnnexBoundReport> {
    if annexed.is_empty() {
        return Err(Error::InvalidMerge("annexed coalition is empty".into()));
    }
    let spec = crate::game::AnnexSpec {
        annexer,
        annexed: annexed.clone(),
    };
    let out = game.apply_annex(&spec)?;
    let ss_before = index(game, IndexKind::ShapleyShubik).values[annexer].clone();
    let ss_after = index(&out.game, IndexKind::ShapleyShubik).values[out.merged].clone();
    if ss_after < ss_before {
        return Err(violation(
            "Shapley–Shubik annexation loss",
            game,
            format!("{} < {}", to_fraction(&ss_after), to_fraction(&ss_before)),
        ));
    }
    let bz_before = index(game, IndexKind::Banzhaf).values[annexer].clone();
    let bz_after = index(&out.game, IndexKind::Banzhaf).values[out.merged].clone();

    let mut comparisons = 0;
    if annexed.len() == 1 {
        let j = annexed.iter().next().expect("one member");
        if bz_after < &bz_before / BigRational::from_integer(2.into()) {
            return Err(violation(
                "Banzhaf annexation halving bound",
                game,
                format!("{} < {}/2", to_fraction(&bz_after), to_fraction(&bz_before)),
            ));
        }
        if game.weight(annexer) <= game.weight(j) && bz_after < bz_before {
            return Err(violation(
                "Banzhaf annexation of a heavier player",
                game,
                format!("{} < {}", to_fraction(&bz_after), to_fraction(&bz_before)),
            ));
        }
        let lighter: Vec<usize> = (0..game.num_players())
            .filter(|&k| k != annexer && k != j && game.weight(k) <= game.weight(j))
            .collect();
        for k in lighter {
            let other = game.apply_annex(&crate::game::AnnexSpec {
                annexer,
                annexed: Coalition::singleton(k),
            })?;
            let v = player_index(&other.game, other.merged, IndexKind::ShapleyShubik)?;
            if v > ss_after {
                return Err(violation(
                    "Shapley–Shubik annexation monotonicity",
                    game,
                    format!(
                        "annexing {k} gives {} > {} from annexing {j}",
                        to_fraction(&v),
                        to_fraction(&ss_after)
                    ),
                ));
            }
            comparisons += 1;
        }
    }
    Ok(AnnexBoundReport {
        annexer,
        annexed: annexed.clone(),
        shapley_before: ss_before,
        shapley_after: ss_after,
        banzhaf_before: bz_before,
        banzhaf_after: bz_after,
        monotonicity_comparisons: comparisons,
    })
}

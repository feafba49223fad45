use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use super::Classification;
use crate::error::{Error, Result};
use crate::exact::{player_index, IndexKind};
use crate::game::{AnnexSpec, Coalition, Game, MergeSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeReport {
    pub coalition: Coalition,
    pub kind: IndexKind,
    /// Σ_{i∈S} index_i(G)
    pub payoff_before: BigRational,
    /// index of &S in G_&S
    pub payoff_after: BigRational,
    pub classification: Classification,
}

impl MergeReport {
    pub fn beneficial(&self) -> bool {
        self.classification == Classification::Beneficial
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnexReport {
    pub annexer: usize,
    pub annexed: Coalition,
    pub kind: IndexKind,
    pub payoff_before: BigRational,
    pub payoff_after: BigRational,
    pub beneficial: bool,
    pub classification: Classification,
}

fn member_sum(game: &Game, coalition: &Coalition, kind: IndexKind) -> Result<BigRational> {
    match kind {
        IndexKind::ShapleyShubik => coalition.iter().try_fold(BigRational::zero(), |acc, i| {
            Ok(acc + player_index(game, i, kind)?)
        }),
        IndexKind::Banzhaf => {
            // one table serves every member
            let idx = crate::exact::index_with(&crate::exec::Sequential, game, kind, 0);
            Ok(coalition
                .iter()
                .fold(BigRational::zero(), |acc, i| acc + idx.get(i)))
        }
    }
}

/// Compares the merged player's index in G_&S with the members' summed
/// index in G.
pub fn merge_benefit(game: &Game, coalition: &Coalition, kind: IndexKind) -> Result<MergeReport> {
    game.check_coalition(coalition)?;
    if coalition.len() < 2 {
        return Err(Error::InvalidMerge(
            "a merge needs at least two players".into(),
        ));
    }
    let out = game.apply_merge(&MergeSpec {
        coalition: coalition.clone(),
    })?;
    let payoff_before = member_sum(game, coalition, kind)?;
    let payoff_after = player_index(&out.game, out.merged, kind)?;
    let classification = Classification::exact(&payoff_before, &payoff_after);
    Ok(MergeReport {
        coalition: coalition.clone(),
        kind,
        payoff_before,
        payoff_after,
        classification,
    })
}

/// Compares the annexer's index after absorbing `annexed` with its own
/// index before.
pub fn annex_benefit(
    game: &Game,
    annexer: usize,
    annexed: &Coalition,
    kind: IndexKind,
) -> Result<AnnexReport> {
    if annexed.is_empty() {
        return Err(Error::InvalidMerge("annexed coalition is empty".into()));
    }
    let spec = AnnexSpec {
        annexer,
        annexed: annexed.clone(),
    };
    let out = game.apply_annex(&spec)?;
    let payoff_before = player_index(game, annexer, kind)?;
    let payoff_after = player_index(&out.game, out.merged, kind)?;
    let classification = Classification::exact(&payoff_before, &payoff_after);
    Ok(AnnexReport {
        annexer,
        annexed: annexed.clone(),
        kind,
        beneficial: classification == Classification::Beneficial,
        payoff_before,
        payoff_after,
        classification,
    })
}

/// Triples `(i, j, k)` with `w_j > w_k` where annexing `j` leaves the annexer
/// `i` strictly worse off than annexing the lighter `k`.
pub fn annex_monotonicity_probe(
    game: &Game,
    annexer: usize,
    kind: IndexKind,
) -> Result<Vec<(usize, usize, usize)>> {
    game.check_player(annexer)?;
    let n = game.num_players();
    let mut after: Vec<Option<BigRational>> = Vec::with_capacity(n);
    for j in 0..n {
        if j == annexer {
            after.push(None);
        } else {
            after.push(Some(
                annex_benefit(game, annexer, &Coalition::singleton(j), kind)?.payoff_after,
            ));
        }
    }
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            if let (Some(aj), Some(ak)) = (&after[j], &after[k]) {
                if game.weight(j) > game.weight(k) && aj < ak {
                    out.push((annexer, j, k));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_u64;

    fn g(q: u64, w: &[u64]) -> Game {
        Game::new(q, w.to_vec()).unwrap()
    }

    #[test]
    fn bloc_paradox() {
        let game = g(11, &[6, 5, 1, 1, 1, 1, 1]);
        let rep = annex_benefit(&game, 0, &Coalition::singleton(2), IndexKind::Banzhaf).unwrap();
        assert_eq!(rep.payoff_before, from_u64(33, 69));
        assert_eq!(rep.payoff_after, from_u64(17, 36));
        assert!(!rep.beneficial);
        let rep =
            annex_benefit(&game, 0, &Coalition::singleton(2), IndexKind::ShapleyShubik).unwrap();
        assert!(rep.payoff_after >= rep.payoff_before);
    }

    #[test]
    fn non_monotone_annexation() {
        let game = g(9, &[3, 3, 2, 1, 1, 1]);
        let heavy = annex_benefit(&game, 0, &Coalition::singleton(1), IndexKind::Banzhaf).unwrap();
        let light = annex_benefit(&game, 0, &Coalition::singleton(2), IndexKind::Banzhaf).unwrap();
        assert_eq!(heavy.payoff_after, from_u64(8, 20));
        assert_eq!(light.payoff_after, from_u64(7, 17));
        let probe = annex_monotonicity_probe(&game, 0, IndexKind::Banzhaf).unwrap();
        assert!(probe.contains(&(0, 1, 2)));
        assert!(annex_monotonicity_probe(&game, 0, IndexKind::ShapleyShubik)
            .unwrap()
            .is_empty());
        assert!(
            annex_monotonicity_probe(&g(8, &[2, 2, 2, 2]), 1, IndexKind::Banzhaf)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn unanimity_merges_and_annexations() {
        let game = g(8, &[2, 2, 2, 2]);
        let s: Coalition = [0usize, 1].into_iter().collect();
        for kind in IndexKind::ALL {
            let rep = merge_benefit(&game, &s, kind).unwrap();
            assert_eq!(rep.payoff_before, from_u64(1, 2));
            assert_eq!(rep.payoff_after, from_u64(1, 3));
            assert!(!rep.beneficial());
            let rep = annex_benefit(&game, 3, &s, kind).unwrap();
            assert_eq!(
                (rep.payoff_before, rep.payoff_after),
                (from_u64(1, 4), from_u64(1, 2))
            );
            assert!(rep.beneficial);
        }
    }

    #[test]
    fn dummies_and_errors() {
        // players 2 and 3 are dummies and remain so after merging
        let game = g(10, &[5, 5, 1, 1]);
        let s: Coalition = [2usize, 3].into_iter().collect();
        let rep = merge_benefit(&game, &s, IndexKind::Banzhaf).unwrap();
        assert!(rep.payoff_before.is_zero() && rep.payoff_after.is_zero());
        assert_eq!(rep.classification, Classification::Neutral);
        assert!(merge_benefit(&game, &Coalition::singleton(1), IndexKind::Banzhaf).is_err());
        assert!(annex_benefit(&game, 2, &s, IndexKind::Banzhaf).is_err());
        assert!(annex_benefit(&game, 0, &Coalition::empty(), IndexKind::Banzhaf).is_err());
    }
}

//! Weighted voting games `[q; w_1, ..., w_n]` and the structural transforms
//! (split, merge, annexation) that every analysis operates on.
//!
//! Players are identified by their 0-based position. Transforms never mutate
//! a game; they return a new one together with a mapping from the old
//! identifiers to the new ones. Identities created by a transform are always
//! appended at the tail.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A weighted voting game: a coalition wins iff its total weight meets the quota.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Game {
    quota: u64,
    weights: Vec<u64>,
    total: u64,
    label: Option<String>,
}

impl Game {
    /// Builds a game, rejecting zero quota, zero weights and quotas the grand
    /// coalition cannot reach.
    pub fn new(quota: u64, weights: Vec<u64>) -> Result<Self> {
        if quota == 0 {
            return Err(Error::QuotaZero);
        }
        if let Some(player) = weights.iter().position(|&w| w == 0) {
            return Err(Error::ZeroWeight { player });
        }
        let total = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .ok_or(Error::WeightOverflow)?;
        if total < quota {
            return Err(Error::QuotaExceedsTotal { quota, total });
        }
        Ok(Game {
            quota,
            weights,
            total,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    #[inline]
    pub fn quota(&self) -> u64 {
        self.quota
    }

    #[inline]
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, player: usize) -> u64 {
        self.weights[player]
    }

    #[inline]
    pub fn num_players(&self) -> usize {
        self.weights.len()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Σ w_i.
    #[inline]
    pub fn total_weight(&self) -> u64 {
        self.total
    }

    /// True iff the only winning coalition is the grand coalition (`q = w(N)`).
    #[inline]
    pub fn is_unanimity(&self) -> bool {
        self.quota == self.total
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn min_weight(&self) -> u64 {
        self.weights.iter().copied().min().unwrap_or(0)
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player < self.num_players() {
            Ok(())
        } else {
            Err(Error::PlayerOutOfRange {
                player,
                players: self.num_players(),
            })
        }
    }

    pub fn check_coalition(&self, coalition: &Coalition) -> Result<()> {
        let players = self.num_players();
        match coalition.iter().find(|&p| p >= players) {
            Some(player) => Err(Error::InvalidCoalition { player, players }),
            None => Ok(()),
        }
    }

    /// Total weight of the coalition's members.
    pub fn coalition_weight(&self, coalition: &Coalition) -> Result<u64> {
        self.check_coalition(coalition)?;
        Ok(coalition.iter().map(|p| self.weights[p]).sum())
    }

    pub fn evaluate(&self, coalition: &Coalition) -> Result<Outcome> {
        let w = self.coalition_weight(coalition)?;
        Ok(if w >= self.quota {
            Outcome::Win
        } else {
            Outcome::Lose
        })
    }

    /// Whether `player` turns the losing `coalition` into a winning one.
    pub fn is_critical(&self, coalition: &Coalition, player: usize) -> Result<bool> {
        self.check_player(player)?;
        if coalition.contains(player) {
            return Err(Error::PlayerInCoalition { player });
        }
        let w = self.coalition_weight(coalition)?;
        Ok(w < self.quota && w + self.weights[player] >= self.quota)
    }

    /// Replaces `spec.player` by one identity per part, appended at the tail.
    pub fn apply_split(&self, spec: &SplitSpec) -> Result<SplitOutcome> {
        self.check_player(spec.player)
            .map_err(|_| Error::InvalidSplit(format!("player {} does not exist", spec.player)))?;
        spec.validate_against(self.weights[spec.player])?;

        let n = self.num_players();
        let mut weights = Vec::with_capacity(n - 1 + spec.parts.len());
        let mut mapping = Vec::with_capacity(n);
        for (i, &w) in self.weights.iter().enumerate() {
            if i == spec.player {
                mapping.push(None);
            } else {
                mapping.push(Some(weights.len()));
                weights.push(w);
            }
        }
        let first = weights.len();
        weights.extend_from_slice(&spec.parts);
        let identities = (first..weights.len()).collect();
        let game = self.derive(weights);
        Ok(SplitOutcome {
            game,
            mapping,
            identities,
        })
    }

    /// Replaces the members of `spec.coalition` by a single player of weight
    /// w(S), appended at the tail.
    pub fn apply_merge(&self, spec: &MergeSpec) -> Result<MergeOutcome> {
        if spec.coalition.is_empty() {
            return Err(Error::InvalidMerge("coalition is empty".into()));
        }
        let merged_weight = self.coalition_weight(&spec.coalition)?;
        let mut weights = Vec::with_capacity(self.num_players() + 1 - spec.coalition.len());
        let mut mapping = Vec::with_capacity(self.num_players());
        for (i, &w) in self.weights.iter().enumerate() {
            if spec.coalition.contains(i) {
                mapping.push(None);
            } else {
                mapping.push(Some(weights.len()));
                weights.push(w);
            }
        }
        let merged = weights.len();
        weights.push(merged_weight);
        Ok(MergeOutcome {
            game: self.derive(weights),
            mapping,
            merged,
        })
    }

    /// The annexer absorbs the annexed coalition; equivalent to merging
    /// `annexed ∪ {annexer}`.
    pub fn apply_annex(&self, spec: &AnnexSpec) -> Result<MergeOutcome> {
        self.check_player(spec.annexer)?;
        self.check_coalition(&spec.annexed)?;
        if spec.annexed.contains(spec.annexer) {
            return Err(Error::InvalidMerge(format!(
                "annexer {} is a member of the annexed coalition",
                spec.annexer
            )));
        }
        self.apply_merge(&spec.as_merge())
    }

    /// `[cq; cw]`, structurally identical to `self`.
    pub fn scaled(&self, factor: u64) -> Result<Game> {
        if factor == 0 {
            return Err(Error::QuotaZero);
        }
        let quota = self
            .quota
            .checked_mul(factor)
            .ok_or(Error::WeightOverflow)?;
        let weights = self
            .weights
            .iter()
            .map(|w| w.checked_mul(factor).ok_or(Error::WeightOverflow))
            .collect::<Result<Vec<_>>>()?;
        Game::new(quota, weights)
    }

    fn derive(&self, weights: Vec<u64>) -> Game {
        // Transforms preserve quota, total weight and positivity of weights.
        Game {
            quota: self.quota,
            total: self.total,
            weights,
            label: None,
        }
    }
}

impl fmt::Display for Game {
    /// `[q; w_1, ..., w_n]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};", self.quota)?;
        for (i, w) in self.weights.iter().enumerate() {
            if i == 0 {
                write!(f, " {w}")?;
            } else {
                write!(f, ", {w}")?;
            }
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Win,
    Lose,
}

impl Outcome {
    pub fn is_win(self) -> bool {
        self == Outcome::Win
    }
}

/// A set of players. Stored as a bitmask while every member fits in a
/// machine word, as a sorted list otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coalition {
    Bits(u64),
    Sparse(Vec<usize>),
}

impl Coalition {
    pub const fn empty() -> Self {
        Coalition::Bits(0)
    }

    pub fn from_mask(mask: u64) -> Self {
        Coalition::Bits(mask)
    }

    pub fn singleton(player: usize) -> Self {
        Self::from_iter([player])
    }

    pub fn contains(&self, player: usize) -> bool {
        match self {
            Coalition::Bits(m) => player < 64 && m >> player & 1 == 1,
            Coalition::Sparse(v) => v.binary_search(&player).is_ok(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Coalition::Bits(m) => m.count_ones() as usize,
            Coalition::Sparse(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members in increasing order.
    pub fn iter(&self) -> CoalitionIter<'_> {
        match self {
            Coalition::Bits(m) => CoalitionIter::Bits(*m),
            Coalition::Sparse(v) => CoalitionIter::Sparse(v.iter()),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn with(&self, player: usize) -> Self {
        self.iter().chain(core::iter::once(player)).collect()
    }
}

impl FromIterator<usize> for Coalition {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let set: BTreeSet<usize> = iter.into_iter().collect();
        if set.iter().all(|&p| p < 64) {
            Coalition::Bits(set.iter().fold(0u64, |m, &p| m | 1 << p))
        } else {
            Coalition::Sparse(set.into_iter().collect())
        }
    }
}

pub enum CoalitionIter<'a> {
    Bits(u64),
    Sparse(core::slice::Iter<'a, usize>),
}

impl Iterator for CoalitionIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self {
            CoalitionIter::Bits(m) => {
                if *m == 0 {
                    None
                } else {
                    let p = m.trailing_zeros() as usize;
                    *m &= *m - 1;
                    Some(p)
                }
            }
            CoalitionIter::Sparse(it) => it.next().copied(),
        }
    }
}

/// Player `player` splits its weight among `parts.len()` identities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitSpec {
    pub player: usize,
    pub parts: Vec<u64>,
}

impl SplitSpec {
    pub fn new(player: usize, parts: Vec<u64>) -> Self {
        SplitSpec { player, parts }
    }

    pub fn two_way(player: usize, first: u64, second: u64) -> Self {
        SplitSpec {
            player,
            parts: alloc::vec![first, second],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.len() < 2
    }

    fn validate_against(&self, weight: u64) -> Result<()> {
        if self.parts.is_empty() {
            return Err(Error::InvalidSplit("no parts given".into()));
        }
        if let Some(i) = self.parts.iter().position(|&p| p == 0) {
            return Err(Error::InvalidSplit(format!("part {i} is not positive")));
        }
        let sum = self.parts.iter().try_fold(0u64, |a, &p| a.checked_add(p));
        if sum != Some(weight) {
            return Err(Error::InvalidSplit(format!(
                "parts must sum to the player's weight {weight}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MergeSpec {
    pub coalition: Coalition,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnexSpec {
    pub annexer: usize,
    pub annexed: Coalition,
}

impl AnnexSpec {
    pub fn as_merge(&self) -> MergeSpec {
        MergeSpec {
            coalition: self.annexed.with(self.annexer),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitOutcome {
    pub game: Game,
    /// `mapping[old]` is the new identifier, `None` for the split player.
    pub mapping: Vec<Option<usize>>,
    /// Identifiers of the new identities, in part order.
    pub identities: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeOutcome {
    pub game: Game,
    /// `mapping[old]` is the new identifier, `None` for merged members.
    pub mapping: Vec<Option<usize>>,
    /// Identifier of the merged player `&S`.
    pub merged: usize,
}

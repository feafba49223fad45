//! False-name manipulations: weight splitting, merging and annexation.
//!
//! "Beneficial" is always a strict comparison. The exact engine compares
//! exact rationals; the Monte-Carlo engine only calls a split beneficial when
//! the estimated gain clears an explicit margin, and harmful when the
//! estimated loss does.

mod bounds;
mod find_split;
mod gadget;
mod merge;
mod special;
mod split;

pub use bounds::{check_annex_bounds, check_split_bounds, AnnexBoundReport, SplitBoundReport};
pub use find_split::{
    find_split_approx, find_split_approx_with, FindSplitConfig, FindSplitOutcome,
};
pub use gadget::{partition_exists, reduction_gadget, Designated, Gadget, GadgetVariant};
pub use merge::{annex_benefit, annex_monotonicity_probe, merge_benefit, AnnexReport, MergeReport};
pub use special::{high_quota_split_recommendation, unanimity_split_recommendation};
pub use split::{
    evaluate_split, integer_partitions, scan_k_way_splits, scan_k_way_splits_with,
    scan_splits_with, scan_two_way_splits, scan_two_way_splits_with, two_way_splits, ScanEngine,
    MAX_K_WAY,
};

use core::cmp::Ordering;

use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exact::IndexKind;
use crate::game::SplitSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Beneficial,
    Harmful,
    Neutral,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Beneficial => "beneficial",
            Classification::Harmful => "harmful",
            Classification::Neutral => "neutral",
        }
    }

    /// Strict exact comparison of payoffs.
    pub fn exact(before: &BigRational, after: &BigRational) -> Self {
        match after.cmp(before) {
            Ordering::Greater => Classification::Beneficial,
            Ordering::Less => Classification::Harmful,
            Ordering::Equal => Classification::Neutral,
        }
    }

    /// Beneficial iff `after > before + margin`, harmful iff
    /// `after < before − margin`, neutral otherwise.
    pub fn with_margin(before: &BigRational, after: &BigRational, margin: &BigRational) -> Self {
        if *after > before + margin {
            Classification::Beneficial
        } else if *after < before - margin {
            Classification::Harmful
        } else {
            Classification::Neutral
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Engine {
    Exact,
    MonteCarlo { margin: BigRational },
}

/// One candidate split and its effect on the manipulator's payoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitReport {
    pub spec: SplitSpec,
    pub kind: IndexKind,
    pub payoff_before: BigRational,
    pub payoff_after_total: BigRational,
    /// `after / before`; absent when `before = 0`.
    pub gain_ratio: Option<BigRational>,
    pub classification: Classification,
    pub engine: Engine,
}

impl SplitReport {
    pub(crate) fn new(
        spec: SplitSpec,
        kind: IndexKind,
        payoff_before: BigRational,
        payoff_after_total: BigRational,
        engine: Engine,
    ) -> Self {
        let classification = match &engine {
            Engine::Exact => Classification::exact(&payoff_before, &payoff_after_total),
            Engine::MonteCarlo { margin } => {
                Classification::with_margin(&payoff_before, &payoff_after_total, margin)
            }
        };
        let gain_ratio = if payoff_before.is_zero() {
            None
        } else {
            Some(&payoff_after_total / &payoff_before)
        };
        SplitReport {
            spec,
            kind,
            payoff_before,
            payoff_after_total,
            gain_ratio,
            classification,
            engine,
        }
    }
}

/// Outcome counts over every split examined for one player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    pub player: usize,
    pub kind: IndexKind,
    pub total_splits: usize,
    pub beneficial: usize,
    pub harmful: usize,
    pub neutral: usize,
    /// Split with the largest payoff after splitting (first on ties).
    pub best: Option<SplitReport>,
    pub reports: Vec<SplitReport>,
}

impl ScanSummary {
    pub fn from_reports(player: usize, kind: IndexKind, reports: Vec<SplitReport>) -> Self {
        let count = |c| reports.iter().filter(|r| r.classification == c).count();
        let beneficial = count(Classification::Beneficial);
        let harmful = count(Classification::Harmful);
        let neutral = count(Classification::Neutral);
        let best = reports
            .iter()
            .fold(None::<&SplitReport>, |best, r| match best {
                Some(b) if b.payoff_after_total >= r.payoff_after_total => Some(b),
                _ => Some(r),
            })
            .cloned();
        ScanSummary {
            player,
            kind,
            total_splits: reports.len(),
            beneficial,
            harmful,
            neutral,
            best,
            reports,
        }
    }

    pub fn has_beneficial(&self) -> bool {
        self.beneficial > 0
    }
}

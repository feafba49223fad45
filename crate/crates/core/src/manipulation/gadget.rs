//! Games built from PARTITION instances: each instance has an equal-sum
//! partition exactly when the designated manipulation in the built game is
//! meant to be beneficial.

use alloc::vec::Vec;

use super::{annex_benefit, merge_benefit, scan_two_way_splits};
use crate::error::{Error, Result};
use crate::exact::IndexKind;
use crate::game::{Coalition, Game};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetVariant {
    /// `[4X+2; 8a_1, …, 8a_k, 2]`, the last player splits (Banzhaf).
    BiSplit,
    /// `[4X+3; 8a_1, …, 8a_k, 1, 2]`, the last player splits (Shapley–Shubik).
    SsSplit,
    /// `[4X+2; 8a_1, …, 8a_k, 1, 1, 1]`, the last two players merge (both indices).
    Merge,
    /// `[4X+2; 8a_1, …, 8a_k, 1, 1]`, the last player annexes the one before it (Banzhaf).
    Annex,
}

impl GadgetVariant {
    pub const ALL: [GadgetVariant; 4] = [
        GadgetVariant::BiSplit,
        GadgetVariant::SsSplit,
        GadgetVariant::Merge,
        GadgetVariant::Annex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GadgetVariant::BiSplit => "bi_split",
            GadgetVariant::SsSplit => "ss_split",
            GadgetVariant::Merge => "merge",
            GadgetVariant::Annex => "annex",
        }
    }

    /// Indices under which the designated manipulation is judged.
    pub fn kinds(self) -> &'static [IndexKind] {
        match self {
            GadgetVariant::BiSplit | GadgetVariant::Annex => &[IndexKind::Banzhaf],
            GadgetVariant::SsSplit => &[IndexKind::ShapleyShubik],
            GadgetVariant::Merge => &IndexKind::ALL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Designated {
    Splitter(usize),
    Merge(Coalition),
    Annex { annexer: usize, annexed: Coalition },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub variant: GadgetVariant,
    pub game: Game,
    pub designated: Designated,
}

impl Gadget {
    /// Whether the designated manipulation is strictly beneficial under
    /// `kind`, decided exactly.
    pub fn decide_exact_with(&self, kind: IndexKind) -> Result<bool> {
        match &self.designated {
            Designated::Splitter(p) => {
                Ok(scan_two_way_splits(&self.game, *p, kind)?.has_beneficial())
            }
            Designated::Merge(s) => Ok(merge_benefit(&self.game, s, kind)?.beneficial()),
            Designated::Annex { annexer, annexed } => {
                Ok(annex_benefit(&self.game, *annexer, annexed, kind)?.beneficial)
            }
        }
    }

    /// Beneficial under every index the variant is judged by.
    pub fn decide_exact(&self) -> Result<bool> {
        for &kind in self.variant.kinds() {
            if !self.decide_exact_with(kind)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Builds the game for `variant` from the multiset `instance`.
pub fn reduction_gadget(instance: &[u64], variant: GadgetVariant) -> Result<Gadget> {
    if instance.is_empty() {
        return Err(Error::InvalidConfig("PARTITION instance is empty".into()));
    }
    if let Some(i) = instance.iter().position(|&a| a == 0) {
        return Err(Error::InvalidConfig(alloc::format!(
            "PARTITION element {i} is zero"
        )));
    }
    let sum = instance
        .iter()
        .try_fold(0u64, |acc, &a| acc.checked_add(a))
        .ok_or(Error::WeightOverflow)?;
    let four_x = sum.checked_mul(8).ok_or(Error::WeightOverflow)? / 2;
    let mut weights: Vec<u64> = instance.iter().map(|&a| a * 8).collect();
    let k = weights.len();
    let (quota, tail): (u64, &[u64]) = match variant {
        GadgetVariant::BiSplit => (four_x + 2, &[2]),
        GadgetVariant::SsSplit => (four_x + 3, &[1, 2]),
        GadgetVariant::Merge => (four_x + 2, &[1, 1, 1]),
        GadgetVariant::Annex => (four_x + 2, &[1, 1]),
    };
    weights.extend_from_slice(tail);
    let n = weights.len();
    let game = Game::new(quota, weights)?;
    let designated = match variant {
        GadgetVariant::BiSplit | GadgetVariant::SsSplit => Designated::Splitter(n - 1),
        GadgetVariant::Merge => Designated::Merge([n - 2, n - 1].into_iter().collect()),
        GadgetVariant::Annex => Designated::Annex {
            annexer: n - 1,
            annexed: Coalition::singleton(k),
        },
    };
    Ok(Gadget {
        variant,
        game,
        designated,
    })
}

/// Whether `instance` splits into two halves of equal sum (subset-sum DP).
pub fn partition_exists(instance: &[u64]) -> bool {
    let total: u64 = instance.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    let half = (total / 2) as usize;
    let mut reach = alloc::vec![false; half + 1];
    reach[0] = true;
    for &a in instance {
        let a = a as usize;
        if a > half {
            continue;
        }
        for s in (a..=half).rev() {
            if reach[s - a] {
                reach[s] = true;
            }
        }
    }
    reach[half]
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constructions() {
        let g = reduction_gadget(&[1, 1], GadgetVariant::BiSplit).unwrap();
        assert_eq!(g.game, Game::new(10, vec![8, 8, 2]).unwrap());
        assert_eq!(g.designated, Designated::Splitter(2));
        let g = reduction_gadget(&[1, 1], GadgetVariant::SsSplit).unwrap();
        assert_eq!(g.game, Game::new(11, vec![8, 8, 1, 2]).unwrap());
        let g = reduction_gadget(&[1, 1], GadgetVariant::Merge).unwrap();
        assert_eq!(g.game, Game::new(10, vec![8, 8, 1, 1, 1]).unwrap());
        assert_eq!(
            g.designated,
            Designated::Merge([3usize, 4].into_iter().collect())
        );
        let g = reduction_gadget(&[1, 1], GadgetVariant::Annex).unwrap();
        assert_eq!(g.game, Game::new(10, vec![8, 8, 1, 1]).unwrap());
        assert_eq!(
            g.designated,
            Designated::Annex {
                annexer: 3,
                annexed: Coalition::singleton(2)
            }
        );
        assert!(reduction_gadget(&[], GadgetVariant::Annex).is_err());
    }

    #[test]
    fn decisions_on_small_instances() {
        for variant in [
            GadgetVariant::SsSplit,
            GadgetVariant::Merge,
            GadgetVariant::Annex,
        ] {
            assert!(reduction_gadget(&[1, 1], variant)
                .unwrap()
                .decide_exact()
                .unwrap());
            assert!(!reduction_gadget(&[1, 2], variant)
                .unwrap()
                .decide_exact()
                .unwrap());
        }
        // the two-unit split in [10; 8, 8, 2] leaves the Banzhaf index at 1/3
        let g = reduction_gadget(&[1, 1], GadgetVariant::BiSplit).unwrap();
        let s = scan_two_way_splits(&g.game, 2, IndexKind::Banzhaf).unwrap();
        assert_eq!(s.neutral, 1);
        // no equal-sum partition: the splitter is a dummy before and after
        let g = reduction_gadget(&[1, 2], GadgetVariant::BiSplit).unwrap();
        let s = scan_two_way_splits(&g.game, 2, IndexKind::Banzhaf).unwrap();
        assert_eq!(s.neutral, 1);
        assert!(
            s.reports[0].payoff_after_total == num_rational::BigRational::from_integer(0.into())
        );
    }

    #[test]
    fn partition_decider() {
        assert!(partition_exists(&[1, 1]));
        assert!(partition_exists(&[3, 1, 1, 2, 1]));
        assert!(!partition_exists(&[1, 2]));
        assert!(!partition_exists(&[2, 3, 4]));
        assert!(!partition_exists(&[5]));
    }
}

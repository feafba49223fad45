use num_rational::BigRational;

use super::split::{mc_payoff, two_way_splits};
use crate::error::{Error, Result};
use crate::exact::IndexKind;
use crate::exec::{Executor, Sequential};
use crate::game::{Game, SplitSpec};
use crate::mc::McConfig;
use crate::rational::from_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct FindSplitConfig {
    pub mc: McConfig,
    pub kind: IndexKind,
    /// A split is accepted when its estimate exceeds the baseline by
    /// `margin_factor · ε`.
    pub margin_factor: f64,
}

impl FindSplitConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Result<Self> {
        Ok(FindSplitConfig {
            mc: McConfig::new(epsilon, delta, seed)?,
            kind: IndexKind::ShapleyShubik,
            margin_factor: 3.0,
        })
    }

    pub fn with_kind(mut self, kind: IndexKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn margin(&self) -> f64 {
        self.margin_factor * self.mc.epsilon
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FindSplitOutcome {
    /// First split whose estimate cleared the margin.
    pub split: Option<SplitSpec>,
    pub baseline: BigRational,
    pub estimate: Option<BigRational>,
    /// Number of splits estimated before stopping.
    pub evaluated: usize,
    pub samples_per_query: u64,
}

impl FindSplitOutcome {
    pub fn is_yes(&self) -> bool {
        self.split.is_some()
    }
}

pub fn find_split_approx(
    game: &Game,
    player: usize,
    epsilon: f64,
    delta: f64,
) -> Result<FindSplitOutcome> {
    find_split_approx_with(
        &Sequential,
        game,
        player,
        &FindSplitConfig::new(epsilon, delta, 0)?,
    )
}

/// Estimates the player's index, then each two-way split in turn, stopping at
/// the first split `v` with `v > v* + margin`.
pub fn find_split_approx_with<E: Executor>(
    exec: &E,
    game: &Game,
    player: usize,
    config: &FindSplitConfig,
) -> Result<FindSplitOutcome> {
    game.check_player(player)?;
    config.mc.validate()?;
    let margin = from_f64(config.margin())
        .filter(|m| *m >= BigRational::from_integer(0.into()))
        .ok_or_else(|| {
            Error::InvalidConfig("margin factor must be finite and non-negative".into())
        })?;
    let baseline = mc_payoff(
        exec,
        game,
        alloc::vec![player],
        config.kind,
        &config.mc.derive(0),
    )?;
    let threshold = &baseline + &margin;
    let mut evaluated = 0;
    for (j, [a, b]) in two_way_splits(game.weight(player)).into_iter().enumerate() {
        let spec = SplitSpec::two_way(player, a, b);
        let out = game.apply_split(&spec)?;
        let v = mc_payoff(
            exec,
            &out.game,
            out.identities,
            config.kind,
            &config.mc.derive(j as u64 + 1),
        )?;
        evaluated += 1;
        if v > threshold {
            return Ok(FindSplitOutcome {
                split: Some(spec),
                baseline,
                estimate: Some(v),
                evaluated,
                samples_per_query: config.mc.samples()?,
            });
        }
    }
    Ok(FindSplitOutcome {
        split: None,
        baseline,
        estimate: None,
        evaluated,
        samples_per_query: config.mc.samples()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(q: u64, w: &[u64]) -> Game {
        Game::new(q, w.to_vec()).unwrap()
    }

    #[test]
    fn finds_clear_gain() {
        for kind in IndexKind::ALL {
            let cfg = FindSplitConfig::new(0.02, 0.01, 1).unwrap().with_kind(kind);
            let out = find_split_approx_with(&Sequential, &g(6, &[2, 2, 2]), 2, &cfg).unwrap();
            assert_eq!(out.split, Some(SplitSpec::two_way(2, 1, 1)));
        }
    }

    #[test]
    fn rejects_dummy_and_neutral() {
        // [14; 8, 16, 2] comes from a PARTITION instance with no solution
        let out = find_split_approx(&g(14, &[8, 16, 2]), 2, 0.02, 0.01).unwrap();
        assert!(!out.is_yes());
        assert_eq!(out.baseline, BigRational::from_integer(0.into()));
        for seed in 0..5 {
            let cfg = FindSplitConfig::new(0.02, 0.01, seed).unwrap();
            assert!(
                !find_split_approx_with(&Sequential, &g(4, &[2, 2, 2]), 2, &cfg)
                    .unwrap()
                    .is_yes()
            );
        }
    }
}

//! Randomized (ε, δ) estimation of power indices.
//!
//! Every estimate is a sample mean `hits / samples` kept as an exact
//! rational. With `k = ⌈ln(2/δ) / (2ε²)⌉` samples Hoeffding's inequality gives
//! `Pr[|estimate − truth| > ε] ≤ δ` for a single query.
//!
//! The sample index space is cut into fixed-size chunks and each chunk draws
//! from its own ChaCha stream keyed by `(seed, query tag, chunk)`, so the
//! result depends only on the configuration, never on how chunks are
//! scheduled.

use alloc::vec::Vec;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{IndexKind, IndexVector};
use crate::exec::{Executor, Sequential};
use crate::game::Game;
use crate::rational::from_u64;

/// Samples drawn from one random stream.
pub const CHUNK_SAMPLES: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub sample_count_override: Option<u64>,
}

impl McConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Result<Self> {
        let cfg = McConfig {
            epsilon,
            delta,
            seed,
            sample_count_override: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.sample_count_override = Some(samples);
        self
    }

    /// Same accuracy parameters, independent random streams.
    pub fn derive(&self, tag: u64) -> Self {
        McConfig {
            seed: mix(self.seed, tag),
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        sample_size(self.epsilon, self.delta)?;
        if self.sample_count_override == Some(0) {
            return Err(Error::InvalidConfig(
                "sample count override must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn samples(&self) -> Result<u64> {
        match self.sample_count_override {
            Some(0) => Err(Error::InvalidConfig(
                "sample count override must be positive".into(),
            )),
            Some(k) => {
                sample_size(self.epsilon, self.delta)?;
                Ok(k)
            }
            None => sample_size(self.epsilon, self.delta),
        }
    }
}

/// `⌈ln(2/δ) / (2ε²)⌉`
pub fn sample_size(epsilon: f64, delta: f64) -> Result<u64> {
    let in_unit = |x: f64| x > 0.0 && x < 1.0;
    if !in_unit(epsilon) {
        return Err(Error::InvalidConfig(alloc::format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if !in_unit(delta) {
        return Err(Error::InvalidConfig(alloc::format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let x = libm::log(2.0 / delta) / (2.0 * epsilon * epsilon);
    if !x.is_finite() || x > 1e18 {
        return Err(Error::InvalidConfig("sample size overflows".into()));
    }
    // Values within floating-point noise of an integer are that integer.
    let nearest = libm::round(x);
    let k = if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        libm::ceil(x)
    };
    Ok((k as u64).max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum McKind {
    ShapleyShubik,
    /// Raw criticality probability η_i / 2^(n−1).
    BanzhafRaw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McEstimate {
    pub kind: McKind,
    pub hits: u64,
    pub samples_used: u64,
}

impl McEstimate {
    pub fn value(&self) -> BigRational {
        from_u64(self.hits, self.samples_used)
    }
}

/// Normalized Banzhaf estimates plus the raw per-player estimates behind them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BanzhafEstimate {
    pub raw: Vec<McEstimate>,
    pub normalized: IndexVector,
}

/// Error bound on each normalized Banzhaf value when every raw estimate is
/// within `epsilon` of its true value and the true raw values sum to
/// `raw_sum`: `2ε·n / raw_sum`. Holds whenever `n·ε ≤ raw_sum / 2`; returns
/// `None` outside that regime. With per-query confidence δ the joint
/// confidence is `1 − n·δ`.
pub fn normalized_error_bound(epsilon: f64, players: usize, raw_sum: f64) -> Option<f64> {
    let n = players as f64;
    if raw_sum > 0.0 && n * epsilon <= raw_sum / 2.0 {
        Some(2.0 * epsilon * n / raw_sum)
    } else {
        None
    }
}

pub fn shapley_mc(game: &Game, player: usize, config: &McConfig) -> Result<McEstimate> {
    shapley_mc_with(&Sequential, game, player, config)
}

/// Estimates φ_i from uniformly random orderings: the player's predecessor
/// set in a uniform permutation is a uniform size `k ∈ {0..n−1}` followed by
/// a uniform `k`-subset, drawn here by a partial Fisher–Yates shuffle.
pub fn shapley_mc_with<E: Executor>(
    exec: &E,
    game: &Game,
    player: usize,
    config: &McConfig,
) -> Result<McEstimate> {
    game.check_player(player)?;
    let samples = config.samples()?;
    let key = mix(config.seed, tag(b'S', player));
    let q = game.quota();
    let wi = game.weight(player);
    let others: Vec<u64> = game
        .weights()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != player)
        .map(|(_, &w)| w)
        .collect();
    let n = game.num_players();
    let hits = run_chunks(exec, samples, key, |rng, count| {
        let mut pool = others.clone();
        let mut hits = 0u64;
        for _ in 0..count {
            let before = rng.random_range(0..n);
            let (chosen, _) = pool.partial_shuffle(rng, before);
            let w: u64 = chosen.iter().sum();
            if w < q && w + wi >= q {
                hits += 1;
            }
        }
        hits
    });
    Ok(McEstimate {
        kind: McKind::ShapleyShubik,
        hits,
        samples_used: samples,
    })
}

/// Raw Banzhaf estimate for one player: the fraction of uniform coalitions of
/// the other players (one fair bit per player) that it is critical for.
pub fn banzhaf_raw_mc_with<E: Executor>(
    exec: &E,
    game: &Game,
    player: usize,
    config: &McConfig,
) -> Result<McEstimate> {
    game.check_player(player)?;
    let samples = config.samples()?;
    let key = mix(config.seed, tag(b'B', player));
    let q = game.quota();
    let wi = game.weight(player);
    let others: Vec<u64> = game
        .weights()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != player)
        .map(|(_, &w)| w)
        .collect();
    let hits = run_chunks(exec, samples, key, |rng, count| {
        let mut hits = 0u64;
        for _ in 0..count {
            let mut w = 0u64;
            for block in others.chunks(64) {
                let bits = rng.next_u64();
                for (b, &wj) in block.iter().enumerate() {
                    if bits >> b & 1 == 1 {
                        w += wj;
                    }
                }
            }
            if w < q && w + wi >= q {
                hits += 1;
            }
        }
        hits
    });
    Ok(McEstimate {
        kind: McKind::BanzhafRaw,
        hits,
        samples_used: samples,
    })
}

pub fn banzhaf_mc(game: &Game, config: &McConfig) -> Result<BanzhafEstimate> {
    banzhaf_mc_with(&Sequential, game, config)
}

/// Raw estimates for every player, then normalized. Each raw estimate carries
/// the (ε, δ) guarantee; see [`normalized_error_bound`] for the normalized
/// values.
pub fn banzhaf_mc_with<E: Executor>(
    exec: &E,
    game: &Game,
    config: &McConfig,
) -> Result<BanzhafEstimate> {
    let raw = (0..game.num_players())
        .map(|i| banzhaf_raw_mc_with(exec, game, i, config))
        .collect::<Result<Vec<_>>>()?;
    let total: u64 = raw.iter().map(|e| e.hits).sum();
    if total == 0 {
        return Err(Error::DegenerateNormalization);
    }
    let values = raw.iter().map(|e| from_u64(e.hits, total)).collect();
    Ok(BanzhafEstimate {
        raw,
        normalized: IndexVector {
            kind: IndexKind::Banzhaf,
            values,
        },
    })
}

fn run_chunks<E, F>(exec: &E, samples: u64, key: u64, body: F) -> u64
where
    E: Executor,
    F: Fn(&mut ChaCha8Rng, u64) -> u64 + Sync + Send,
{
    let chunks = samples.div_ceil(CHUNK_SAMPLES);
    exec.map(chunks as usize, |c| {
        let c = c as u64;
        let count = CHUNK_SAMPLES.min(samples - c * CHUNK_SAMPLES);
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream(c);
        body(&mut rng, count)
    })
    .into_iter()
    .sum()
}

fn tag(domain: u8, index: usize) -> u64 {
    (u64::from(domain) << 56) ^ index as u64
}

/// SplitMix64-style mixing of a seed with a tag.
pub fn mix(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::to_f64;

    fn g(q: u64, w: &[u64]) -> Game {
        Game::new(q, w.to_vec()).unwrap()
    }

    #[test]
    fn sample_sizes() {
        // Reference values from a 50-digit evaluation of the formula.
        assert_eq!(sample_size(0.001, 0.00001).unwrap(), 6_103_037);
        assert_eq!(sample_size(0.01, 0.01).unwrap(), 26_492);
        let delta = 2.0 / (core::f64::consts::E * core::f64::consts::E);
        assert_eq!(sample_size(0.5, delta).unwrap(), 4);
    }

    #[test]
    fn sample_size_rejects_bad_parameters() {
        for (e, d) in [
            (0.0, 0.1),
            (1.0, 0.1),
            (0.1, 0.0),
            (0.1, 1.5),
            (f64::NAN, 0.1),
            (-0.2, 0.1),
        ] {
            assert!(
                matches!(sample_size(e, d), Err(Error::InvalidConfig(_))),
                "{e} {d}"
            );
        }
    }

    #[test]
    fn shapley_estimate_close() {
        let cfg = McConfig::new(0.01, 0.01, 7).unwrap();
        let est = shapley_mc(&g(6, &[2, 2, 2]), 0, &cfg).unwrap();
        assert_eq!(est.samples_used, 26_492);
        assert!((to_f64(&est.value()) - 1.0 / 3.0).abs() <= 0.01);
        let est = shapley_mc(&g(5, &[2, 1, 1, 1, 1]), 0, &cfg).unwrap();
        assert!((to_f64(&est.value()) - 0.4).abs() <= 0.01);
    }

    #[test]
    fn dummies_are_never_sampled_critical() {
        // {1, 2} admits no equal partition, so the small players are dummies
        let game = g(15, &[8, 16, 1, 2]);
        let cfg = McConfig::new(0.05, 0.05, 3).unwrap();
        for p in [2, 3] {
            assert_eq!(shapley_mc(&game, p, &cfg).unwrap().hits, 0);
        }
        let est = banzhaf_mc(&game, &cfg).unwrap();
        assert_eq!(est.raw[2].hits, 0);
        assert_eq!(est.raw[3].hits, 0);
    }

    #[test]
    fn banzhaf_normalized() {
        let cfg = McConfig::new(0.01, 0.01, 11).unwrap();
        let est = banzhaf_mc(&g(6, &[2, 2, 2]), &cfg).unwrap();
        assert_eq!(est.normalized.sum(), from_u64(1, 1));
        // unanimity: each raw value is exactly 1/4 in truth
        for v in &est.normalized.values {
            assert!((to_f64(v) - 1.0 / 3.0).abs() < 0.03);
        }
        let est = banzhaf_mc(&g(3, &[5]), &cfg).unwrap();
        assert_eq!(est.normalized.values, [from_u64(1, 1)]);
        let est = banzhaf_mc(&g(5, &[2, 1, 1, 1, 1]), &cfg).unwrap();
        assert!((to_f64(est.normalized.get(0)) - 5.0 / 17.0).abs() < 0.03);
    }

    #[test]
    fn deterministic_and_override() {
        let cfg = McConfig::new(0.05, 0.1, 99).unwrap().with_samples(10_000);
        let a = shapley_mc(&g(7, &[3, 2, 2, 1, 1]), 1, &cfg).unwrap();
        let b = shapley_mc(&g(7, &[3, 2, 2, 1, 1]), 1, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples_used, 10_000);
        let c = shapley_mc(&g(7, &[3, 2, 2, 1, 1]), 1, &cfg.derive(1)).unwrap();
        assert_ne!(a.hits, c.hits);
    }

    #[test]
    fn error_bound_regime() {
        assert_eq!(normalized_error_bound(0.01, 5, 1.0), Some(0.1));
        assert_eq!(normalized_error_bound(0.2, 5, 1.0), None);
    }
}

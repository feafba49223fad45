//! Random weighted voting games and aggregate statistics on how often
//! two-way splits pay off.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::exact::IndexKind;
use crate::exec::{Executor, Sequential};
use crate::game::Game;
use crate::manipulation::{scan_two_way_splits_with, ScanEngine, ScanSummary};
use crate::mc::{mix, McConfig};
use crate::rational::{from_u64, to_f64};

/// Number of histogram bins over the beneficial fraction `[0, 1]`.
pub const HISTOGRAM_BINS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuotaMode {
    /// `round(U(0, w(N)))`, clamped to `[1, w(N)]`.
    Uniform,
    /// `q = w(N)`.
    Unanimity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentEngine {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub weight_mean: f64,
    pub weight_sigmas: Vec<f64>,
    /// Inclusive range of player counts.
    pub player_range: (usize, usize),
    pub games_per_cell: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Margin a sampled gain must clear; `None` means `2ε`. Ignored by the
    /// exact engine, which compares strictly.
    pub beneficial_margin: Option<f64>,
    pub seed: u64,
    pub engine: ExperimentEngine,
    pub kind: IndexKind,
    pub quota_mode: QuotaMode,
    /// Largest quota the exact engine accepts.
    pub dp_ceiling: u64,
}

impl ExperimentConfig {
    /// μ = 200, σ ∈ {5, 10, …, 50}, n ∈ {5, …, 24}, sampled with
    /// ε = 0.001, δ = 0.00001.
    pub fn full(kind: IndexKind) -> Self {
        ExperimentConfig {
            weight_mean: 200.0,
            weight_sigmas: (1..=10).map(|i| 5.0 * i as f64).collect(),
            player_range: (5, 24),
            games_per_cell: 100,
            epsilon: 0.001,
            delta: 0.00001,
            beneficial_margin: None,
            seed: 0,
            engine: ExperimentEngine::MonteCarlo,
            kind,
            quota_mode: QuotaMode::Uniform,
            dp_ceiling: DEFAULT_DP_CEILING,
        }
    }

    /// Exact engine at μ = 50, σ ∈ {5, 15, 25}, n ∈ {5, …, 12}.
    pub fn desk(kind: IndexKind) -> Self {
        ExperimentConfig {
            weight_mean: 50.0,
            weight_sigmas: alloc::vec![5.0, 15.0, 25.0],
            player_range: (5, 12),
            games_per_cell: 100,
            engine: ExperimentEngine::Exact,
            ..Self::full(kind)
        }
    }

    pub fn margin(&self) -> f64 {
        self.beneficial_margin.unwrap_or(2.0 * self.epsilon)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if !(self.weight_mean.is_finite() && self.weight_mean > 0.0) {
            return bad("weight mean must be positive");
        }
        if self.weight_sigmas.is_empty()
            || self
                .weight_sigmas
                .iter()
                .any(|s| !(s.is_finite() && *s > 0.0))
        {
            return bad("weight sigmas must be a non-empty list of positive numbers");
        }
        let (lo, hi) = self.player_range;
        if lo < 2 || lo > hi {
            return bad("player range must satisfy 2 ≤ min ≤ max");
        }
        if self.games_per_cell == 0 {
            return bad("games per cell must be at least 1");
        }
        McConfig::new(self.epsilon, self.delta, self.seed)?;
        let m = self.margin();
        if !(m.is_finite() && m >= 0.0) {
            return bad("beneficial margin must be non-negative");
        }
        Ok(())
    }
}

pub const DEFAULT_DP_CEILING: u64 = 1_000_000;

/// `round(x)` half away from zero.
fn round_half_away(x: f64) -> f64 {
    libm::round(x)
}

/// Draws one game: `n` uniform in the player range, each weight a rounded
/// normal draw (redrawn until at least 1), and the quota per `quota_mode`.
pub fn generate_game<R: Rng + ?Sized>(
    config: &ExperimentConfig,
    sigma: f64,
    rng: &mut R,
) -> Result<Game> {
    let (lo, hi) = config.player_range;
    let n = rng.random_range(lo..=hi);
    let normal = Normal::new(config.weight_mean, sigma)
        .map_err(|_| Error::InvalidConfig("invalid weight distribution".into()))?;
    let mut weights = Vec::with_capacity(n);
    while weights.len() < n {
        let w = round_half_away(normal.sample(rng));
        if (1.0..1e15).contains(&w) {
            weights.push(w as u64);
        }
    }
    let total: u64 = weights.iter().sum();
    let quota = match config.quota_mode {
        QuotaMode::Uniform => {
            let u: f64 = rng.random::<f64>() * total as f64;
            (round_half_away(u) as u64).clamp(1, total)
        }
        QuotaMode::Unanimity => total,
    };
    Game::new(quota, weights)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameRecord {
    pub sigma_index: usize,
    pub game: Game,
    /// One summary per player; individual split reports are dropped.
    pub scans: Vec<ScanSummary>,
    pub has_beneficial: bool,
    /// Σ beneficial / Σ total over every player's scan; 0 when no player
    /// can split.
    pub beneficial_fraction: BigRational,
    pub players_with_beneficial: usize,
}

impl GameRecord {
    fn new(sigma_index: usize, game: Game, mut scans: Vec<ScanSummary>) -> Self {
        for s in &mut scans {
            s.reports = Vec::new();
        }
        let beneficial: usize = scans.iter().map(|s| s.beneficial).sum();
        let total: usize = scans.iter().map(|s| s.total_splits).sum();
        let beneficial_fraction = if total == 0 {
            BigRational::zero()
        } else {
            from_u64(beneficial as u64, total as u64)
        };
        let players_with_beneficial = scans.iter().filter(|s| s.has_beneficial()).count();
        GameRecord {
            sigma_index,
            game,
            has_beneficial: beneficial > 0,
            beneficial_fraction,
            players_with_beneficial,
            scans,
        }
    }

    pub fn splits(&self) -> (usize, usize, usize, usize) {
        self.scans.iter().fold((0, 0, 0, 0), |(t, b, h, n), s| {
            (
                t + s.total_splits,
                b + s.beneficial,
                h + s.harmful,
                n + s.neutral,
            )
        })
    }
}

/// `min(⌊200·f⌋, 199)`
pub fn histogram_bin(fraction: &BigRational) -> usize {
    let scaled = fraction * BigRational::from_integer(BigInt::from(HISTOGRAM_BINS));
    let bin = scaled.numer().div_floor(scaled.denom());
    bin.to_usize().unwrap_or(0).min(HISTOGRAM_BINS - 1)
}

/// Aggregates over a group of games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellStats {
    /// `None` in the per-player-count marginals and the overall row.
    pub sigma: Option<u64>,
    /// `None` in the per-σ marginals and the overall row.
    pub n_players: Option<usize>,
    pub games: u64,
    pub games_with_beneficial: u64,
    pub splits_total: u64,
    pub splits_beneficial: u64,
    pub splits_harmful: u64,
    pub splits_neutral: u64,
    pub players_scanned: u64,
    pub players_with_beneficial: u64,
    /// Exact sum of the games' beneficial fractions.
    pub fraction_sum: BigRational,
}

impl CellStats {
    fn empty(sigma: Option<u64>, n_players: Option<usize>) -> Self {
        CellStats {
            sigma,
            n_players,
            games: 0,
            games_with_beneficial: 0,
            splits_total: 0,
            splits_beneficial: 0,
            splits_harmful: 0,
            splits_neutral: 0,
            players_scanned: 0,
            players_with_beneficial: 0,
            fraction_sum: BigRational::zero(),
        }
    }

    fn add(&mut self, r: &GameRecord) {
        let (t, b, h, n) = r.splits();
        self.games += 1;
        self.games_with_beneficial += u64::from(r.has_beneficial);
        self.splits_total += t as u64;
        self.splits_beneficial += b as u64;
        self.splits_harmful += h as u64;
        self.splits_neutral += n as u64;
        self.players_scanned += r.scans.len() as u64;
        self.players_with_beneficial += r.players_with_beneficial as u64;
        self.fraction_sum += &r.beneficial_fraction;
    }

    fn ratio(num: u64, den: u64) -> BigRational {
        if den == 0 {
            BigRational::zero()
        } else {
            from_u64(num, den)
        }
    }

    pub fn frac_with_beneficial(&self) -> BigRational {
        Self::ratio(self.games_with_beneficial, self.games)
    }

    /// Mean over games of the per-game beneficial fraction.
    pub fn mean_beneficial_fraction(&self) -> BigRational {
        if self.games == 0 {
            BigRational::zero()
        } else {
            &self.fraction_sum / BigRational::from_integer(BigInt::from(self.games))
        }
    }

    /// Beneficial splits over all splits, pooled across games.
    pub fn pooled_beneficial_fraction(&self) -> BigRational {
        Self::ratio(self.splits_beneficial, self.splits_total)
    }

    pub fn frac_players_with_beneficial(&self) -> BigRational {
        Self::ratio(self.players_with_beneficial, self.players_scanned)
    }

    pub fn frac_with_beneficial_f64(&self) -> f64 {
        to_f64(&self.frac_with_beneficial())
    }

    pub fn mean_beneficial_fraction_f64(&self) -> f64 {
        to_f64(&self.mean_beneficial_fraction())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentStats {
    /// σ values in configuration order, as `f64` bit patterns so the stats
    /// stay `Eq`; see [`ExperimentStats::sigma`].
    pub sigmas: Vec<u64>,
    /// One row per observed `(σ, n)`, ordered by σ index then `n`.
    pub cells: Vec<CellStats>,
    pub by_sigma: Vec<CellStats>,
    pub by_players: Vec<CellStats>,
    pub overall: CellStats,
    pub histogram: Vec<u64>,
}

impl ExperimentStats {
    pub fn sigma(bits: u64) -> f64 {
        f64::from_bits(bits)
    }

    /// Aggregates records; the result depends only on the multiset of
    /// records and the σ list, not on their order.
    pub fn from_records(sigmas: &[f64], records: &[GameRecord]) -> Self {
        let bits: Vec<u64> = sigmas.iter().map(|s| s.to_bits()).collect();
        let mut cells: Vec<CellStats> = Vec::new();
        let mut by_sigma: Vec<CellStats> = bits
            .iter()
            .map(|&b| CellStats::empty(Some(b), None))
            .collect();
        let mut by_players: Vec<CellStats> = Vec::new();
        let mut overall = CellStats::empty(None, None);
        let mut histogram = alloc::vec![0u64; HISTOGRAM_BINS];
        for r in records {
            let s = bits[r.sigma_index];
            let n = r.game.num_players();
            match cells
                .iter_mut()
                .find(|c| c.sigma == Some(s) && c.n_players == Some(n))
            {
                Some(c) => c.add(r),
                None => {
                    let mut c = CellStats::empty(Some(s), Some(n));
                    c.add(r);
                    cells.push(c);
                }
            }
            by_sigma[r.sigma_index].add(r);
            match by_players.iter_mut().find(|c| c.n_players == Some(n)) {
                Some(c) => c.add(r),
                None => {
                    let mut c = CellStats::empty(None, Some(n));
                    c.add(r);
                    by_players.push(c);
                }
            }
            overall.add(r);
            histogram[histogram_bin(&r.beneficial_fraction)] += 1;
        }
        let sigma_pos = |c: &CellStats| bits.iter().position(|&b| Some(b) == c.sigma);
        cells.sort_by_key(|c| (sigma_pos(c), c.n_players));
        by_players.sort_by_key(|c| c.n_players);
        ExperimentStats {
            sigmas: bits,
            cells,
            by_sigma,
            by_players,
            overall,
            histogram,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRun {
    pub records: Vec<GameRecord>,
    pub stats: ExperimentStats,
}

/// Seed of game `game_index` in σ cell `sigma_index`.
pub fn game_seed(seed: u64, sigma_index: usize, game_index: usize) -> u64 {
    mix(mix(seed, sigma_index as u64), game_index as u64)
}

/// Scans every player of `game`.
pub fn analyze_game<E: Executor>(
    exec: &E,
    config: &ExperimentConfig,
    game: &Game,
    seed: u64,
) -> Result<Vec<ScanSummary>> {
    let engine = match config.engine {
        ExperimentEngine::Exact => {
            if game.quota() > config.dp_ceiling {
                return Err(Error::ResourceLimit {
                    quota: game.quota(),
                    ceiling: config.dp_ceiling,
                });
            }
            ScanEngine::Exact
        }
        ExperimentEngine::MonteCarlo => ScanEngine::MonteCarlo {
            config: McConfig::new(config.epsilon, config.delta, seed)?,
            margin: config.margin(),
        },
    };
    (0..game.num_players())
        .map(|p| {
            let engine = match &engine {
                ScanEngine::MonteCarlo { config, margin } => ScanEngine::MonteCarlo {
                    config: config.derive(p as u64),
                    margin: *margin,
                },
                e => e.clone(),
            };
            scan_two_way_splits_with(exec, game, p, config.kind, &engine)
        })
        .collect()
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRun> {
    run_experiment_with(&Sequential, config)
}

/// Generates `games_per_cell` games for each σ and scans every player of
/// every game. Each game has its own random stream, so the output does not
/// depend on how the executor schedules the work.
pub fn run_experiment_with<E: Executor>(
    exec: &E,
    config: &ExperimentConfig,
) -> Result<ExperimentRun> {
    config.validate()?;
    let per = config.games_per_cell;
    let jobs = config.weight_sigmas.len() * per;
    let records = exec
        .map(jobs, |job| -> Result<GameRecord> {
            let (si, gi) = (job / per, job % per);
            let seed = game_seed(config.seed, si, gi);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let game = generate_game(config, config.weight_sigmas[si], &mut rng)?;
            let scans = analyze_game(&Sequential, config, &game, mix(seed, 1))?;
            Ok(GameRecord::new(si, game, scans))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let stats = ExperimentStats::from_records(&config.weight_sigmas, &records);
    Ok(ExperimentRun { records, stats })
}

/// Record for a given game, as the experiment would produce it.
pub fn record_for_game(config: &ExperimentConfig, game: &Game, seed: u64) -> Result<GameRecord> {
    let scans = analyze_game(&Sequential, config, game, seed)?;
    Ok(GameRecord::new(0, game.clone(), scans))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small(kind: IndexKind) -> ExperimentConfig {
        ExperimentConfig {
            games_per_cell: 10,
            ..ExperimentConfig::desk(kind)
        }
    }

    #[test]
    fn generation_is_deterministic_and_in_range() {
        let cfg = ExperimentConfig::full(IndexKind::ShapleyShubik);
        let a = generate_game(&cfg, 50.0, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = generate_game(&cfg, 50.0, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = generate_game(&cfg, 50.0, &mut rng).unwrap();
            assert!((5..=24).contains(&g.num_players()));
            assert!(g.quota() >= 1 && g.quota() <= g.total_weight());
        }
    }

    #[test]
    fn weight_mean_matches_distribution() {
        let cfg = ExperimentConfig {
            player_range: (10, 10),
            ..ExperimentConfig::full(IndexKind::Banzhaf)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut sum = 0u64;
        for _ in 0..1000 {
            sum += generate_game(&cfg, 50.0, &mut rng).unwrap().total_weight();
        }
        let mean = sum as f64 / 10_000.0;
        assert!((mean - 200.0).abs() < 5.0, "{mean}");
    }

    #[test]
    fn bins() {
        assert_eq!(histogram_bin(&from_u64(0, 1)), 0);
        assert_eq!(histogram_bin(&from_u64(1, 201)), 0);
        assert_eq!(histogram_bin(&from_u64(1, 200)), 1);
        assert_eq!(histogram_bin(&from_u64(1, 2)), 100);
        assert_eq!(histogram_bin(&from_u64(1, 1)), 199);
    }

    #[test]
    fn single_game_records() {
        let cfg = small(IndexKind::ShapleyShubik);
        let r = record_for_game(&cfg, &Game::new(5, vec![2, 2, 2]).unwrap(), 0).unwrap();
        assert!(!r.has_beneficial);
        assert_eq!(r.splits(), (3, 0, 3, 0));
        let r = record_for_game(&cfg, &Game::new(6, vec![2, 2, 2]).unwrap(), 0).unwrap();
        assert!(r.has_beneficial);
        assert_eq!(r.beneficial_fraction, from_u64(1, 1));
        let r = record_for_game(&cfg, &Game::new(2, vec![1, 1]).unwrap(), 0).unwrap();
        assert_eq!(r.beneficial_fraction, BigRational::zero());
    }

    #[test]
    fn unanimity_cells_all_beneficial() {
        for kind in IndexKind::ALL {
            let cfg = ExperimentConfig {
                quota_mode: QuotaMode::Unanimity,
                ..small(kind)
            };
            let run = run_experiment(&cfg).unwrap();
            for c in &run.stats.cells {
                assert_eq!(c.frac_with_beneficial(), from_u64(1, 1));
            }
            assert_eq!(run.stats.histogram.iter().sum::<u64>(), 30);
        }
    }

    #[test]
    fn stats_are_order_independent() {
        let cfg = small(IndexKind::Banzhaf);
        let run = run_experiment(&cfg).unwrap();
        let mut rev = run.records.clone();
        rev.reverse();
        assert_eq!(
            ExperimentStats::from_records(&cfg.weight_sigmas, &rev),
            run.stats
        );
        assert_eq!(run_experiment(&cfg).unwrap(), run);
        let total: u64 = run.stats.cells.iter().map(|c| c.games).sum();
        assert_eq!(total, 30);
        assert_eq!(run.stats.overall.games, 30);
    }

    #[test]
    fn ceiling_and_validation() {
        let cfg = ExperimentConfig {
            dp_ceiling: 10,
            ..small(IndexKind::Banzhaf)
        };
        assert!(matches!(
            run_experiment(&cfg),
            Err(Error::ResourceLimit { .. })
        ));
        let cfg = ExperimentConfig {
            player_range: (1, 4),
            ..small(IndexKind::Banzhaf)
        };
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig {
            games_per_cell: 0,
            ..small(IndexKind::Banzhaf)
        };
        assert!(cfg.validate().is_err());
    }
}

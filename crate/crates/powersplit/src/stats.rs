//! Export and re-import of experiment statistics.
//!
//! * cells CSV: `sigma, n_players, games, frac_with_beneficial,
//!   mean_beneficial_fraction`, one row per observed `(σ, n)`;
//! * histogram JSON: `{"bin_width": 0.005, "counts": [200 integers]}`;
//! * stats JSON: every aggregate plus plot series (proportion against σ,
//!   proportion against `n`, histogram). It carries enough to rebuild the
//!   stats exactly.

use num_rational::BigRational;
use powersplit_core::experiments::{CellStats, ExperimentConfig, ExperimentStats, HISTOGRAM_BINS};
use powersplit_core::rational::{to_f64, to_fraction};
use serde::{Deserialize, Serialize};

use crate::formats::{parse_fraction, FormatError};
use crate::report::into_string;

pub const BIN_WIDTH: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellJson {
    pub sigma: Option<f64>,
    pub n_players: Option<usize>,
    pub games: u64,
    pub games_with_beneficial: u64,
    pub splits_total: u64,
    pub splits_beneficial: u64,
    pub splits_harmful: u64,
    pub splits_neutral: u64,
    pub players_scanned: u64,
    pub players_with_beneficial: u64,
    /// Exact sum of per-game beneficial fractions, `"p/q"`.
    pub fraction_sum: String,
    pub frac_with_beneficial: f64,
    pub mean_beneficial_fraction: f64,
    pub pooled_beneficial_fraction: f64,
    pub frac_players_with_beneficial: f64,
}

impl From<&CellStats> for CellJson {
    fn from(c: &CellStats) -> Self {
        CellJson {
            sigma: c.sigma.map(f64::from_bits),
            n_players: c.n_players,
            games: c.games,
            games_with_beneficial: c.games_with_beneficial,
            splits_total: c.splits_total,
            splits_beneficial: c.splits_beneficial,
            splits_harmful: c.splits_harmful,
            splits_neutral: c.splits_neutral,
            players_scanned: c.players_scanned,
            players_with_beneficial: c.players_with_beneficial,
            fraction_sum: to_fraction(&c.fraction_sum),
            frac_with_beneficial: to_f64(&c.frac_with_beneficial()),
            mean_beneficial_fraction: to_f64(&c.mean_beneficial_fraction()),
            pooled_beneficial_fraction: to_f64(&c.pooled_beneficial_fraction()),
            frac_players_with_beneficial: to_f64(&c.frac_players_with_beneficial()),
        }
    }
}

impl CellJson {
    fn to_cell(&self) -> Result<CellStats, FormatError> {
        let fraction_sum: BigRational = parse_fraction(&self.fraction_sum)?;
        Ok(CellStats {
            sigma: self.sigma.map(f64::to_bits),
            n_players: self.n_players,
            games: self.games,
            games_with_beneficial: self.games_with_beneficial,
            splits_total: self.splits_total,
            splits_beneficial: self.splits_beneficial,
            splits_harmful: self.splits_harmful,
            splits_neutral: self.splits_neutral,
            players_scanned: self.players_scanned,
            players_with_beneficial: self.players_with_beneficial,
            fraction_sum,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramJson {
    pub bin_width: f64,
    pub counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub x: f64,
    pub frac_with_beneficial: f64,
    pub mean_beneficial_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub proportion_vs_sigma: Vec<SeriesPoint>,
    pub proportion_vs_n: Vec<SeriesPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub weight_mean: f64,
    pub weight_sigmas: Vec<f64>,
    pub player_range: [usize; 2],
    pub games_per_cell: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub beneficial_margin: f64,
    pub seed: u64,
    pub engine: String,
    pub kind: String,
    pub quota_mode: String,
}

impl From<&ExperimentConfig> for ConfigJson {
    fn from(c: &ExperimentConfig) -> Self {
        use powersplit_core::experiments::{ExperimentEngine, QuotaMode};
        ConfigJson {
            weight_mean: c.weight_mean,
            weight_sigmas: c.weight_sigmas.clone(),
            player_range: [c.player_range.0, c.player_range.1],
            games_per_cell: c.games_per_cell,
            epsilon: c.epsilon,
            delta: c.delta,
            beneficial_margin: match c.engine {
                ExperimentEngine::Exact => 0.0,
                ExperimentEngine::MonteCarlo => c.margin(),
            },
            seed: c.seed,
            engine: match c.engine {
                ExperimentEngine::Exact => "exact",
                ExperimentEngine::MonteCarlo => "monte_carlo",
            }
            .into(),
            kind: c.kind.name().into(),
            quota_mode: match c.quota_mode {
                QuotaMode::Uniform => "uniform",
                QuotaMode::Unanimity => "unanimity",
            }
            .into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigJson>,
    pub sigmas: Vec<f64>,
    pub cells: Vec<CellJson>,
    pub by_sigma: Vec<CellJson>,
    pub by_players: Vec<CellJson>,
    pub overall: CellJson,
    pub series: SeriesJson,
    pub histogram: HistogramJson,
}

fn point(x: f64, c: &CellStats) -> SeriesPoint {
    SeriesPoint {
        x,
        frac_with_beneficial: to_f64(&c.frac_with_beneficial()),
        mean_beneficial_fraction: to_f64(&c.mean_beneficial_fraction()),
    }
}

pub fn histogram_json(stats: &ExperimentStats) -> HistogramJson {
    HistogramJson {
        bin_width: BIN_WIDTH,
        counts: stats.histogram.clone(),
    }
}

pub fn to_json(stats: &ExperimentStats, config: Option<&ExperimentConfig>) -> StatsJson {
    let cells = |v: &[CellStats]| v.iter().map(CellJson::from).collect();
    StatsJson {
        config: config.map(ConfigJson::from),
        sigmas: stats.sigmas.iter().map(|&b| f64::from_bits(b)).collect(),
        cells: cells(&stats.cells),
        by_sigma: cells(&stats.by_sigma),
        by_players: cells(&stats.by_players),
        overall: (&stats.overall).into(),
        series: SeriesJson {
            proportion_vs_sigma: stats
                .by_sigma
                .iter()
                .map(|c| point(f64::from_bits(c.sigma.unwrap_or(0)), c))
                .collect(),
            proportion_vs_n: stats
                .by_players
                .iter()
                .map(|c| point(c.n_players.unwrap_or(0) as f64, c))
                .collect(),
        },
        histogram: histogram_json(stats),
    }
}

/// Rebuilds the stats from their JSON export.
pub fn from_json(j: &StatsJson) -> Result<ExperimentStats, FormatError> {
    if j.histogram.counts.len() != HISTOGRAM_BINS {
        return Err(FormatError::Syntax(format!(
            "histogram must have {HISTOGRAM_BINS} bins"
        )));
    }
    let cells = |v: &[CellJson]| {
        v.iter()
            .map(CellJson::to_cell)
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(ExperimentStats {
        sigmas: j.sigmas.iter().map(|s| s.to_bits()).collect(),
        cells: cells(&j.cells)?,
        by_sigma: cells(&j.by_sigma)?,
        by_players: cells(&j.by_players)?,
        overall: j.overall.to_cell()?,
        histogram: j.histogram.counts.clone(),
    })
}

pub fn import_json(s: &str) -> Result<ExperimentStats, FormatError> {
    from_json(&serde_json::from_str(s)?)
}

/// One row per `(σ, n)` cell.
pub fn cells_csv(stats: &ExperimentStats) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "sigma",
        "n_players",
        "games",
        "frac_with_beneficial",
        "mean_beneficial_fraction",
    ])?;
    for c in &stats.cells {
        w.write_record([
            c.sigma
                .map(|b| f64::from_bits(b).to_string())
                .unwrap_or_default(),
            c.n_players.map(|n| n.to_string()).unwrap_or_default(),
            c.games.to_string(),
            to_f64(&c.frac_with_beneficial()).to_string(),
            to_f64(&c.mean_beneficial_fraction()).to_string(),
        ])?;
    }
    into_string(w)
}

pub fn text(stats: &ExperimentStats) -> String {
    let mut out = String::from("sigma  n   games  with_beneficial  mean_beneficial_fraction\n");
    for c in &stats.cells {
        out += &format!(
            "{:<6} {:<3} {:<6} {:<16.4} {:.4}\n",
            c.sigma.map(f64::from_bits).unwrap_or(f64::NAN),
            c.n_players.unwrap_or(0),
            c.games,
            to_f64(&c.frac_with_beneficial()),
            to_f64(&c.mean_beneficial_fraction())
        );
    }
    let o = &stats.overall;
    out += &format!(
        "overall: {} games, {:.4} with a beneficial split, {:.4} of splits beneficial ({} of {})\n",
        o.games,
        to_f64(&o.frac_with_beneficial()),
        to_f64(&o.pooled_beneficial_fraction()),
        o.splits_beneficial,
        o.splits_total
    );
    out
}

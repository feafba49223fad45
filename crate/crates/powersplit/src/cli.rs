//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on a domain error (invalid game, split,
//! coalition, failed verification), 2 on a usage error (bad flags or
//! parameters). Reports go to standard output, diagnostics to standard
//! error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use powersplit_core::exact::{self, IndexKind};
use powersplit_core::experiments::{
    run_experiment_with, ExperimentConfig, ExperimentEngine, QuotaMode,
};
use powersplit_core::manipulation::{
    annex_benefit, annex_monotonicity_probe, check_annex_bounds, check_split_bounds,
    find_split_approx_with, merge_benefit, partition_exists, reduction_gadget,
    scan_k_way_splits_with, FindSplitConfig, GadgetVariant, ScanEngine,
};
use powersplit_core::mc::{banzhaf_mc_with, shapley_mc_with, McConfig};
use powersplit_core::{Coalition, Game, SplitSpec};
use serde::Serialize;
use serde_json::{json, Value};

use crate::exec::{resolve_threads, with_pool, Rayon};
use crate::formats::{
    display_rational, index_values_json, load_game, parse_fraction, FormatError, GameJson,
};
use crate::report::{
    AnnexBoundsJson, AnnexJson, FindSplitJson, GadgetJson, McInfo, MergeJson, ProbeJson, ScanJson,
    SplitBoundsJson, WitnessJson,
};
use crate::{stats, verify};

#[derive(Debug, Parser)]
#[command(
    name = "powersplit",
    version,
    about = "Power indices and false-name manipulation in weighted voting games"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: $POWERSPLIT_THREADS, else one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(alias = "shapley-shubik", alias = "shapley_shubik", alias = "ss")]
    Shapley,
    #[value(
        alias = "banzhaf-normalized",
        alias = "banzhaf_normalized",
        alias = "bz"
    )]
    Banzhaf,
}

impl From<KindArg> for IndexKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Shapley => IndexKind::ShapleyShubik,
            KindArg::Banzhaf => IndexKind::Banzhaf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Exact,
    #[value(alias = "monte-carlo", alias = "monte_carlo")]
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    All,
    BiSplit,
    SsSplit,
    Merge,
    Annex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Desk,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuotaArg {
    Uniform,
    Unanimity,
}

#[derive(Debug, Args)]
pub struct GameArg {
    /// Inline game "q;w1,w2,..." or a path to a text/JSON game file.
    #[arg(long)]
    pub game: String,
}

#[derive(Debug, Args)]
pub struct KindFlag {
    /// Power index.
    #[arg(long, value_enum, default_value_t = KindArg::Shapley)]
    pub kind: KindArg,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Additive error of each sampled estimate.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Failure probability of each sampled estimate.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SampleArgs {
    fn config(&self, epsilon: f64, delta: f64) -> Result<McConfig, CliError> {
        Ok(McConfig::new(
            self.epsilon.unwrap_or(epsilon),
            self.delta.unwrap_or(delta),
            self.seed,
        )?)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Power index of every player.
    Index {
        #[command(flatten)]
        game: GameArg,
        #[command(flatten)]
        kind: KindFlag,
        #[arg(long, value_enum, default_value_t = EngineArg::Exact)]
        engine: EngineArg,
        #[command(flatten)]
        sampling: SampleArgs,
        /// Fixed sample count per estimate (sampling engine).
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Every split of a player into k identities and its effect.
    Scan {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        player: usize,
        /// Number of identities.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        kind: KindFlag,
        #[arg(long, value_enum, default_value_t = EngineArg::Exact)]
        engine: EngineArg,
        #[command(flatten)]
        sampling: SampleArgs,
        /// Margin a sampled gain must clear (default 2ε).
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Sampled search for a beneficial two-way split.
    FindSplit {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        player: usize,
        #[command(flatten)]
        kind: KindFlag,
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Effect of merging a coalition into one player.
    Merge {
        #[command(flatten)]
        game: GameArg,
        /// Comma-separated players.
        #[arg(long, value_delimiter = ',', required = true)]
        coalition: Vec<usize>,
        #[command(flatten)]
        kind: KindFlag,
    },
    /// Effect of one player annexing a coalition.
    Annex {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        annexer: usize,
        /// Comma-separated annexed players.
        #[arg(long, value_delimiter = ',', required = true)]
        coalition: Vec<usize>,
        #[command(flatten)]
        kind: KindFlag,
    },
    /// Annexations where a heavier target yields less power.
    ProbeMonotonicity {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        annexer: usize,
        #[command(flatten)]
        kind: KindFlag,
    },
    /// Checks the split bounds (--player, --split) or the annexation
    /// inequalities (--annexer, --coalition).
    Bounds {
        #[command(flatten)]
        game: GameArg,
        #[arg(long, conflicts_with = "annexer", requires = "split")]
        player: Option<usize>,
        /// Two parts "a,b".
        #[arg(long, value_delimiter = ',')]
        split: Option<Vec<u64>>,
        #[arg(long, requires = "coalition")]
        annexer: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        coalition: Option<Vec<usize>>,
    },
    /// Games built from a PARTITION instance.
    Gadget {
        /// Comma-separated positive integers.
        #[arg(long, value_delimiter = ',', required = true)]
        instance: Vec<u64>,
        #[arg(long, value_enum, default_value_t = VariantArg::All)]
        variant: VariantArg,
        /// Decide the designated manipulation with the exact engine.
        #[arg(long)]
        decide: bool,
    },
    /// Random-game study of beneficial splits.
    Experiment {
        #[arg(long, value_enum, default_value_t = PresetArg::Desk)]
        preset: PresetArg,
        #[command(flatten)]
        kind: KindFlag,
        /// Comma-separated weight standard deviations.
        #[arg(long, value_delimiter = ',')]
        sigmas: Option<Vec<f64>>,
        /// Mean weight.
        #[arg(long)]
        mean: Option<f64>,
        /// Player counts "lo-hi".
        #[arg(long, value_parser = parse_range)]
        players: Option<(usize, usize)>,
        #[arg(long)]
        games_per_cell: Option<usize>,
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
        #[arg(long, value_enum, default_value_t = QuotaArg::Uniform)]
        quota_mode: QuotaArg,
        #[command(flatten)]
        sampling: SampleArgs,
        /// Margin a sampled gain must clear (default 2ε).
        #[arg(long)]
        margin: Option<f64>,
        /// Largest quota the exact engine accepts.
        #[arg(long)]
        dp_ceiling: Option<u64>,
        /// Directory receiving cells.csv, histogram.json and stats.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in fixture table and randomized invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s.split_once('-').unwrap_or((s, s));
    let p = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("{s:?} is not a range \"lo-hi\""))
    };
    Ok((p(lo)?, p(hi)?))
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<powersplit_core::Error> for CliError {
    fn from(e: powersplit_core::Error) -> Self {
        use powersplit_core::Error as E;
        match e {
            E::InvalidConfig(_) | E::KWayGuard { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Invalid(inner) => inner.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// A command's result: JSON, plus text and CSV renderings.
pub struct Report {
    pub json: Value,
    pub text: Option<String>,
    pub csv: Option<String>,
    /// Exit status on success.
    pub code: i32,
}

impl Report {
    fn new<T: Serialize>(value: &T) -> Self {
        Report {
            json: serde_json::to_value(value).expect("report serializes"),
            text: None,
            csv: None,
            code: 0,
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone().unwrap_or_else(|| flat_csv(&self.json)),
            Format::Text => self.text.clone().unwrap_or_else(|| {
                let mut s = String::new();
                text_value(&mut s, "", &self.json, 0);
                s
            }),
        }
    }
}

fn as_rational(v: &Value) -> Option<String> {
    let o = v.as_object()?;
    if o.len() != 3 {
        return None;
    }
    let n = o.get("numerator")?.as_str()?;
    let d = o.get("denominator")?.as_str()?;
    o.get("decimal")?;
    parse_fraction(&format!("{n}/{d}"))
        .ok()
        .map(|r| display_rational(&r))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn text_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    let label = if key.is_empty() {
        String::new()
    } else {
        format!("{key}: ")
    };
    if let Some(r) = as_rational(v) {
        out.push_str(&format!("{pad}{label}{r}\n"));
        return;
    }
    match v {
        Value::Object(o) => {
            if o.len() == 2 && o.contains_key("quota") && o.contains_key("weights")
                || o.get("label").is_some()
            {
                if let Ok(g) = serde_json::from_value::<GameJson>(v.clone()) {
                    out.push_str(&format!(
                        "{pad}{label}{}\n",
                        crate::report::game_display(&g)
                    ));
                    return;
                }
            }
            if !key.is_empty() {
                out.push_str(&format!("{pad}{key}:\n"));
            }
            let d = if key.is_empty() { depth } else { depth + 1 };
            for (k, x) in o {
                text_value(out, k, x, d);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push_str(&format!("{pad}{label}[{}]\n", items.join(", ")));
        }
        Value::Array(a) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in a.iter().enumerate() {
                text_value(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        other => out.push_str(&format!("{pad}{label}{}\n", scalar(other))),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(o) => {
            if let (Some(n), Some(d)) = (o.get("numerator"), o.get("denominator")) {
                if o.len() == 3 {
                    rows.push((prefix.to_string(), format!("{}/{}", scalar(n), scalar(d))));
                    return;
                }
            }
            for (k, x) in o {
                flatten(&join(k), x, rows);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

/// `field,value` rows for reports without a natural table.
fn flat_csv(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"]).expect("in-memory write");
    for (k, x) in rows {
        w.write_record([k, x]).expect("in-memory write");
    }
    crate::report::into_string(w).expect("in-memory write")
}

fn coalition(v: &[usize]) -> Coalition {
    v.iter().fold(Coalition::empty(), |c, &p| c.with(p))
}

fn index_cmd(
    game: &Game,
    kind: IndexKind,
    engine: EngineArg,
    cfg: Option<McConfig>,
) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct IndexJson {
        game: GameJson,
        kind: &'static str,
        engine: &'static str,
        values: Vec<crate::formats::PlayerValue>,
        #[serde(skip_serializing_if = "Option::is_none")]
        critical_counts: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        monte_carlo: Option<McInfo>,
    }
    let (values, critical_counts, monte_carlo) = match engine {
        EngineArg::Exact => {
            let v = exact::index_with(&Rayon, game, kind, 0);
            let counts = (kind == IndexKind::Banzhaf).then(|| {
                exact::banzhaf_counts_all_dp(game)
                    .counts
                    .iter()
                    .map(|c| c.to_string())
                    .collect()
            });
            (v, counts, None)
        }
        EngineArg::Mc => {
            let cfg = cfg.expect("sampling config");
            let (v, used) = match kind {
                IndexKind::ShapleyShubik => {
                    let est = (0..game.num_players())
                        .map(|p| shapley_mc_with(&Rayon, game, p, &cfg.derive(p as u64)))
                        .collect::<Result<Vec<_>, _>>()?;
                    let used = est.first().map_or(0, |e| e.samples_used);
                    let values = est.iter().map(|e| e.value()).collect();
                    (exact::IndexVector { kind, values }, used)
                }
                IndexKind::Banzhaf => {
                    let est = banzhaf_mc_with(&Rayon, game, &cfg)?;
                    let used = est.raw.first().map_or(0, |e| e.samples_used);
                    (est.normalized, used)
                }
            };
            let info = McInfo {
                epsilon: cfg.epsilon,
                delta: cfg.delta,
                seed: cfg.seed,
                samples_used: used,
            };
            (v, None, Some(info))
        }
    };
    let j = IndexJson {
        game: game.into(),
        kind: kind.name(),
        engine: engine_name(engine),
        values: index_values_json(&values),
        critical_counts,
        monte_carlo,
    };
    let mut text = format!(
        "game {}, {} ({} engine)\n",
        crate::report::game_display(&j.game),
        j.kind,
        j.engine
    );
    for (p, v) in values.values.iter().enumerate() {
        text += &format!("  player {p}: {}\n", display_rational(v));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["player", "numerator", "denominator", "decimal"])
        .map_err(io_err)?;
    for v in &j.values {
        w.write_record([
            v.player.to_string(),
            v.value.numerator.clone(),
            v.value.denominator.clone(),
            v.value.decimal.clone(),
        ])
        .map_err(io_err)?;
    }
    let csv = crate::report::into_string(w).map_err(io_err)?;
    let mut r = Report::new(&j);
    r.text = Some(text);
    r.csv = Some(csv);
    Ok(r)
}

fn engine_name(e: EngineArg) -> &'static str {
    match e {
        EngineArg::Exact => "exact",
        EngineArg::Mc => "monte_carlo",
    }
}

fn experiment_config(cmd: &Command) -> Result<ExperimentConfig, CliError> {
    let Command::Experiment {
        preset,
        kind,
        sigmas,
        mean,
        players,
        games_per_cell,
        engine,
        quota_mode,
        sampling,
        margin,
        dp_ceiling,
        ..
    } = cmd
    else {
        unreachable!("experiment command")
    };
    let kind = kind.kind.into();
    let mut c = match preset {
        PresetArg::Desk => ExperimentConfig::desk(kind),
        PresetArg::Full => ExperimentConfig::full(kind),
    };
    if let Some(s) = sigmas {
        c.weight_sigmas = s.clone();
    }
    if let Some(m) = mean {
        c.weight_mean = *m;
    }
    if let Some(p) = players {
        c.player_range = *p;
    }
    if let Some(g) = games_per_cell {
        c.games_per_cell = *g;
    }
    if let Some(e) = engine {
        c.engine = match e {
            EngineArg::Exact => ExperimentEngine::Exact,
            EngineArg::Mc => ExperimentEngine::MonteCarlo,
        };
    }
    c.quota_mode = match quota_mode {
        QuotaArg::Uniform => QuotaMode::Uniform,
        QuotaArg::Unanimity => QuotaMode::Unanimity,
    };
    if let Some(e) = sampling.epsilon {
        c.epsilon = e;
    }
    if let Some(d) = sampling.delta {
        c.delta = d;
    }
    c.seed = sampling.seed;
    c.beneficial_margin = *margin;
    if let Some(d) = dp_ceiling {
        c.dp_ceiling = *d;
    }
    c.validate()?;
    Ok(c)
}

fn execute(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Index {
            game,
            kind,
            engine,
            sampling,
            samples,
        } => {
            let cfg = match engine {
                EngineArg::Mc => {
                    let c = sampling.config(0.01, 0.01)?;
                    let c = samples.map_or(c, |k| c.with_samples(k));
                    c.validate()?;
                    Some(c)
                }
                EngineArg::Exact => None,
            };
            let g = load_game(&game.game)?;
            index_cmd(&g, kind.kind.into(), *engine, cfg)
        }
        Command::Scan {
            game,
            player,
            k,
            kind,
            engine,
            sampling,
            margin,
        } => {
            let scan_engine = match engine {
                EngineArg::Exact => ScanEngine::Exact,
                EngineArg::Mc => {
                    let config = sampling.config(0.01, 0.01)?;
                    ScanEngine::MonteCarlo {
                        config,
                        margin: margin.unwrap_or(2.0 * config.epsilon),
                    }
                }
            };
            if !(2..=powersplit_core::manipulation::MAX_K_WAY).contains(k) {
                return Err(powersplit_core::Error::KWayGuard {
                    k: *k,
                    max: powersplit_core::manipulation::MAX_K_WAY,
                }
                .into());
            }
            let g = load_game(&game.game)?;
            let s =
                scan_k_way_splits_with(&Rayon, &g, *player, *k, kind.kind.into(), &scan_engine)?;
            let mut j = ScanJson::new(&g, *k, &s);
            if let ScanEngine::MonteCarlo { config, margin } = &scan_engine {
                j.engine = "monte_carlo";
                j.margin = Some(*margin);
                j.monte_carlo = Some(McInfo {
                    epsilon: config.epsilon,
                    delta: config.delta,
                    seed: config.seed,
                    samples_used: config.samples()?,
                });
            }
            let mut r = Report::new(&j);
            r.text = Some(j.text());
            r.csv = Some(j.csv().map_err(io_err)?);
            Ok(r)
        }
        Command::FindSplit {
            game,
            player,
            kind,
            sampling,
        } => {
            let mc = sampling.config(0.01, 0.01)?;
            let cfg = FindSplitConfig {
                mc,
                ..FindSplitConfig::new(mc.epsilon, mc.delta, mc.seed)?
            }
            .with_kind(kind.kind.into());
            let g = load_game(&game.game)?;
            let o = find_split_approx_with(&Rayon, &g, *player, &cfg)?;
            Ok(Report::new(&FindSplitJson::new(
                &g, *player, cfg.kind, &cfg, &o,
            )))
        }
        Command::Merge {
            game,
            coalition: c,
            kind,
        } => {
            let g = load_game(&game.game)?;
            let m = merge_benefit(&g, &coalition(c), kind.kind.into())?;
            Ok(Report::new(&MergeJson::new(&g, &m)))
        }
        Command::Annex {
            game,
            annexer,
            coalition: c,
            kind,
        } => {
            let g = load_game(&game.game)?;
            let a = annex_benefit(&g, *annexer, &coalition(c), kind.kind.into())?;
            Ok(Report::new(&AnnexJson::new(&g, &a)))
        }
        Command::ProbeMonotonicity {
            game,
            annexer,
            kind,
        } => {
            let g = load_game(&game.game)?;
            let kind: IndexKind = kind.kind.into();
            let witnesses = annex_monotonicity_probe(&g, *annexer, kind)?;
            let after = (0..g.num_players())
                .map(|j| {
                    if j == *annexer {
                        return Ok(None);
                    }
                    Ok(Some(
                        (&annex_benefit(&g, *annexer, &Coalition::singleton(j), kind)?
                            .payoff_after)
                            .into(),
                    ))
                })
                .collect::<Result<Vec<_>, powersplit_core::Error>>()?;
            let j = ProbeJson {
                game: (&g).into(),
                annexer: *annexer,
                kind: kind.name(),
                after,
                witnesses: witnesses
                    .into_iter()
                    .map(|(i, j, k)| WitnessJson { i, j, k })
                    .collect(),
            };
            Ok(Report::new(&j))
        }
        Command::Bounds {
            game,
            player,
            split,
            annexer,
            coalition: c,
        } => match (player, split, annexer, c) {
            (Some(p), Some(parts), None, _) => {
                if parts.len() != 2 {
                    return Err(CliError::Usage(
                        "--split takes exactly two parts \"a,b\"".into(),
                    ));
                }
                let g = load_game(&game.game)?;
                let b = check_split_bounds(&g, &SplitSpec::two_way(*p, parts[0], parts[1]))?;
                Ok(Report::new(&SplitBoundsJson::new(&g, &b)))
            }
            (None, None, Some(a), Some(c)) => {
                let g = load_game(&game.game)?;
                let b = check_annex_bounds(&g, *a, &coalition(c))?;
                Ok(Report::new(&AnnexBoundsJson::new(&g, &b)))
            }
            _ => Err(CliError::Usage(
                "bounds needs either --player with --split, or --annexer with --coalition".into(),
            )),
        },
        Command::Gadget {
            instance,
            variant,
            decide,
        } => {
            let variants: Vec<GadgetVariant> = match variant {
                VariantArg::All => GadgetVariant::ALL.to_vec(),
                VariantArg::BiSplit => vec![GadgetVariant::BiSplit],
                VariantArg::SsSplit => vec![GadgetVariant::SsSplit],
                VariantArg::Merge => vec![GadgetVariant::Merge],
                VariantArg::Annex => vec![GadgetVariant::Annex],
            };
            let partition = partition_exists(instance);
            let gadgets = variants
                .into_iter()
                .map(|v| {
                    let gd = reduction_gadget(instance, v)?;
                    let beneficial = if *decide {
                        Some(gd.decide_exact()?)
                    } else {
                        None
                    };
                    Ok(GadgetJson::new(instance, &gd, partition, beneficial))
                })
                .collect::<Result<Vec<_>, powersplit_core::Error>>()?;
            Ok(Report::new(
                &json!({ "instance": instance, "partition_exists": partition, "gadgets": gadgets }),
            ))
        }
        Command::Experiment { out, .. } => {
            let cfg = experiment_config(cmd)?;
            let run = run_experiment_with(&Rayon, &cfg)?;
            let sj = stats::to_json(&run.stats, Some(&cfg));
            let cells = stats::cells_csv(&run.stats).map_err(io_err)?;
            if let Some(dir) = out {
                fs::create_dir_all(dir).map_err(io_err)?;
                let pretty = |v: &dyn erased::Ser| v.pretty();
                fs::write(dir.join("cells.csv"), &cells).map_err(io_err)?;
                fs::write(
                    dir.join("histogram.json"),
                    pretty(&stats::histogram_json(&run.stats)),
                )
                .map_err(io_err)?;
                fs::write(dir.join("stats.json"), pretty(&sj)).map_err(io_err)?;
            }
            let mut r = Report::new(&sj);
            r.text = Some(stats::text(&run.stats));
            r.csv = Some(cells);
            Ok(r)
        }
        Command::Verify {
            suite,
            trials,
            seed,
        } => {
            let results = verify::run(&verify::VerifyOptions {
                suite: *suite,
                trials: *trials,
                seed: *seed,
            });
            let code = verify::exit_code(&results);
            let rows: Vec<Value> = results
                .iter()
                .map(|r| json!({ "suite": r.suite, "name": r.name, "passed": r.passed, "detail": r.detail }))
                .collect();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "name", "passed", "detail"])
                .map_err(io_err)?;
            for r in &results {
                w.write_record([
                    r.suite,
                    &r.name,
                    if r.passed { "true" } else { "false" },
                    &r.detail,
                ])
                .map_err(io_err)?;
            }
            let mut r = Report::new(&json!({ "passed": code == 0, "checks": rows }));
            r.text = Some(verify::render_table(&results));
            r.csv = Some(crate::report::into_string(w).map_err(io_err)?);
            r.code = code;
            Ok(r)
        }
    }
}

mod erased {
    pub trait Ser {
        fn pretty(&self) -> String;
    }

    impl<T: serde::Serialize> Ser for T {
        fn pretty(&self) -> String {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

/// Parses `args`, runs the command and writes the report; returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    let threads = match resolve_threads(cli.threads) {
        Ok(t) => t,
        Err(m) => {
            let _ = writeln!(stderr, "error: {m}");
            return 2;
        }
    };
    let result =
        with_pool(threads, || execute(&cli.command)).unwrap_or_else(|m| Err(CliError::Usage(m)));
    match result {
        Ok(report) => {
            if let Err(e) = stdout.write_all(report.render(cli.format).as_bytes()) {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
            if report.code != 0 {
                let _ = writeln!(stderr, "error: verification failed");
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}

//! Serializable forms of analysis results.

use num_rational::BigRational;
use powersplit_core::manipulation::{
    AnnexBoundReport, AnnexReport, Designated, FindSplitOutcome, Gadget, MergeReport, ScanSummary,
    SplitBoundReport, SplitReport,
};
use powersplit_core::rational::to_fraction;
use powersplit_core::{Coalition, Game, IndexKind};
use serde::Serialize;

use crate::formats::{display_rational, GameJson, RationalJson};

pub fn kind_name(kind: IndexKind) -> &'static str {
    kind.name()
}

fn r(x: &BigRational) -> RationalJson {
    x.into()
}

#[derive(Debug, Clone, Serialize)]
pub struct McInfo {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub samples_used: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitJson {
    pub player: usize,
    pub parts: Vec<u64>,
    pub before: RationalJson,
    pub after: RationalJson,
    pub gain_ratio: Option<RationalJson>,
    pub classification: &'static str,
}

impl From<&SplitReport> for SplitJson {
    fn from(s: &SplitReport) -> Self {
        SplitJson {
            player: s.spec.player,
            parts: s.spec.parts.clone(),
            before: r(&s.payoff_before),
            after: r(&s.payoff_after_total),
            gain_ratio: s.gain_ratio.as_ref().map(r),
            classification: s.classification.name(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanJson {
    pub game: GameJson,
    pub player: usize,
    pub kind: &'static str,
    pub engine: &'static str,
    pub identities: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<McInfo>,
    pub total_splits: usize,
    pub beneficial: usize,
    pub harmful: usize,
    pub neutral: usize,
    pub best: Option<SplitJson>,
    pub reports: Vec<SplitJson>,
}

impl ScanJson {
    pub fn new(game: &Game, identities: usize, s: &ScanSummary) -> Self {
        ScanJson {
            game: game.into(),
            player: s.player,
            kind: kind_name(s.kind),
            engine: "exact",
            identities,
            margin: None,
            monte_carlo: None,
            total_splits: s.total_splits,
            beneficial: s.beneficial,
            harmful: s.harmful,
            neutral: s.neutral,
            best: s.best.as_ref().map(SplitJson::from),
            reports: s.reports.iter().map(SplitJson::from).collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!(
            "game {}, player {}, {} ({} engine), {}-way splits\n",
            game_display(&self.game),
            self.player,
            self.kind,
            self.engine,
            self.identities
        );
        out += &format!(
            "{} splits: {} beneficial, {} harmful, {} neutral\n",
            self.total_splits, self.beneficial, self.harmful, self.neutral
        );
        for s in &self.reports {
            out += &format!(
                "  {:<12} {} -> {}  {}\n",
                parts_label(&s.parts),
                s.before.fraction(),
                s.after.fraction(),
                s.classification
            );
        }
        if let Some(b) = &self.best {
            out += &format!(
                "best: {} after {}\n",
                parts_label(&b.parts),
                b.after.display()
            );
        }
        out
    }

    /// Rows `player, j, before, after, class`. `j` is the first part of a
    /// two-way split and the `+`-joined parts otherwise.
    pub fn csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["player", "j", "before", "after", "class"])?;
        for s in &self.reports {
            let j = if s.parts.len() == 2 {
                s.parts[0].to_string()
            } else {
                parts_label(&s.parts)
            };
            w.write_record([
                s.player.to_string(),
                j,
                s.before.fraction(),
                s.after.fraction(),
                s.classification.to_string(),
            ])?;
        }
        into_string(w)
    }
}

pub(crate) fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String, csv::Error> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn parts_label(parts: &[u64]) -> String {
    parts
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join("+")
}

pub fn game_display(g: &GameJson) -> String {
    let w: Vec<String> = g.weights.iter().map(u64::to_string).collect();
    format!("[{}; {}]", g.quota, w.join(", "))
}

impl RationalJson {
    pub fn fraction(&self) -> String {
        if self.denominator == "1" {
            self.numerator.clone()
        } else {
            format!("{}/{}", self.numerator, self.denominator)
        }
    }

    pub fn display(&self) -> String {
        match self.to_rational() {
            Ok(x) => display_rational(&x),
            Err(_) => self.fraction(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MergeJson {
    pub game: GameJson,
    pub coalition: Vec<usize>,
    pub kind: &'static str,
    pub before: RationalJson,
    pub after: RationalJson,
    pub classification: &'static str,
    pub beneficial: bool,
}

impl MergeJson {
    pub fn new(game: &Game, m: &MergeReport) -> Self {
        MergeJson {
            game: game.into(),
            coalition: m.coalition.to_vec(),
            kind: kind_name(m.kind),
            before: r(&m.payoff_before),
            after: r(&m.payoff_after),
            classification: m.classification.name(),
            beneficial: m.beneficial(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnexJson {
    pub game: GameJson,
    pub annexer: usize,
    pub annexed: Vec<usize>,
    pub kind: &'static str,
    pub before: RationalJson,
    pub after: RationalJson,
    pub classification: &'static str,
    pub beneficial: bool,
}

impl AnnexJson {
    pub fn new(game: &Game, a: &AnnexReport) -> Self {
        AnnexJson {
            game: game.into(),
            annexer: a.annexer,
            annexed: a.annexed.to_vec(),
            kind: kind_name(a.kind),
            before: r(&a.payoff_before),
            after: r(&a.payoff_after),
            classification: a.classification.name(),
            beneficial: a.beneficial,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeJson {
    pub game: GameJson,
    pub annexer: usize,
    pub kind: &'static str,
    /// Index of the merged player after annexing each single player.
    pub after: Vec<Option<RationalJson>>,
    pub witnesses: Vec<WitnessJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitBoundsJson {
    pub game: GameJson,
    pub player: usize,
    pub parts: Vec<u64>,
    pub shapley_before: RationalJson,
    pub shapley_after: RationalJson,
    pub shapley_ratio: Option<RationalJson>,
    pub shapley_range: [RationalJson; 2],
    pub banzhaf_before: RationalJson,
    pub banzhaf_after: RationalJson,
    pub banzhaf_ratio: Option<RationalJson>,
    pub banzhaf_range: [RationalJson; 2],
    pub eta_before: String,
    pub eta_after: String,
    pub holds: bool,
}

impl SplitBoundsJson {
    pub fn new(game: &Game, b: &SplitBoundReport) -> Self {
        let n = b.players as u64;
        let q = |a: u64, d: u64| r(&powersplit_core::rational::from_u64(a, d));
        SplitBoundsJson {
            game: game.into(),
            player: b.spec.player,
            parts: b.spec.parts.clone(),
            shapley_before: r(&b.shapley_before),
            shapley_after: r(&b.shapley_after),
            shapley_ratio: b.shapley_ratio.as_ref().map(r),
            shapley_range: [q(2, n + 1), q(2 * n, n + 1)],
            banzhaf_before: r(&b.banzhaf_before),
            banzhaf_after: r(&b.banzhaf_after),
            banzhaf_ratio: b.banzhaf_ratio.as_ref().map(r),
            banzhaf_range: [q(1, n), q(2, 1)],
            eta_before: b.eta_before.to_string(),
            eta_after: b.eta_after.to_string(),
            holds: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnexBoundsJson {
    pub game: GameJson,
    pub annexer: usize,
    pub annexed: Vec<usize>,
    pub shapley_before: RationalJson,
    pub shapley_after: RationalJson,
    pub banzhaf_before: RationalJson,
    pub banzhaf_after: RationalJson,
    pub monotonicity_comparisons: usize,
    pub holds: bool,
}

impl AnnexBoundsJson {
    pub fn new(game: &Game, b: &AnnexBoundReport) -> Self {
        AnnexBoundsJson {
            game: game.into(),
            annexer: b.annexer,
            annexed: b.annexed.to_vec(),
            shapley_before: r(&b.shapley_before),
            shapley_after: r(&b.shapley_after),
            banzhaf_before: r(&b.banzhaf_before),
            banzhaf_after: r(&b.banzhaf_after),
            monotonicity_comparisons: b.monotonicity_comparisons,
            holds: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignatedJson {
    pub role: &'static str,
    pub players: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GadgetJson {
    pub instance: Vec<u64>,
    pub variant: &'static str,
    pub game: GameJson,
    pub designated: DesignatedJson,
    pub kinds: Vec<&'static str>,
    pub partition_exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beneficial: Option<bool>,
}

impl GadgetJson {
    pub fn new(instance: &[u64], g: &Gadget, partition: bool, beneficial: Option<bool>) -> Self {
        let designated = match &g.designated {
            Designated::Splitter(p) => DesignatedJson {
                role: "splitter",
                players: vec![*p],
            },
            Designated::Merge(s) => DesignatedJson {
                role: "merge",
                players: s.to_vec(),
            },
            Designated::Annex { annexer, annexed } => {
                let mut players = vec![*annexer];
                players.extend(annexed.iter());
                DesignatedJson {
                    role: "annexer_then_annexed",
                    players,
                }
            }
        };
        GadgetJson {
            instance: instance.to_vec(),
            variant: g.variant.name(),
            game: (&g.game).into(),
            designated,
            kinds: g.variant.kinds().iter().map(|k| k.name()).collect(),
            partition_exists: partition,
            beneficial,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FindSplitJson {
    pub game: GameJson,
    pub player: usize,
    pub kind: &'static str,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub margin: f64,
    pub samples_per_query: u64,
    pub answer: &'static str,
    pub split: Option<Vec<u64>>,
    pub baseline: RationalJson,
    pub estimate: Option<RationalJson>,
    pub evaluated: usize,
}

impl FindSplitJson {
    pub fn new(
        game: &Game,
        player: usize,
        kind: IndexKind,
        cfg: &powersplit_core::manipulation::FindSplitConfig,
        o: &FindSplitOutcome,
    ) -> Self {
        FindSplitJson {
            game: game.into(),
            player,
            kind: kind_name(kind),
            epsilon: cfg.mc.epsilon,
            delta: cfg.mc.delta,
            seed: cfg.mc.seed,
            margin: cfg.margin(),
            samples_per_query: o.samples_per_query,
            answer: if o.is_yes() { "yes" } else { "no" },
            split: o.split.as_ref().map(|s| s.parts.clone()),
            baseline: r(&o.baseline),
            estimate: o.estimate.as_ref().map(r),
            evaluated: o.evaluated,
        }
    }
}

pub fn coalition_label(c: &Coalition) -> String {
    c.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn fraction(x: &BigRational) -> String {
    to_fraction(x)
}

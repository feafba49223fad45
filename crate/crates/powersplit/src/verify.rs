//! Built-in fixture table and randomized invariant suites.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;
use powersplit_core::exact::{self, IndexKind};
use powersplit_core::manipulation::{
    annex_benefit, annex_monotonicity_probe, check_annex_bounds, check_split_bounds,
    evaluate_split, high_quota_split_recommendation, partition_exists, reduction_gadget,
    scan_k_way_splits, scan_two_way_splits, unanimity_split_recommendation, Classification,
    GadgetVariant,
};
use powersplit_core::mc::{banzhaf_mc, sample_size, shapley_mc, McConfig};
use powersplit_core::rational::{from_u64, to_f64, to_fraction};
use powersplit_core::{Coalition, Game, MergeSpec, Sequential, SplitSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = fn() -> Result<String, String>;

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Suite {
    All,
    Fixtures,
    Oracle,
    Bounds,
    Gadgets,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            suite: Suite::All,
            trials: 200,
            seed: 0,
        }
    }
}

fn g(q: u64, w: &[u64]) -> Game {
    Game::new(q, w.to_vec()).expect("fixture game is valid")
}

fn r(n: u64, d: u64) -> BigRational {
    from_u64(n, d)
}

fn eta(c: &powersplit_core::CriticalCounts) -> Vec<u64> {
    c.counts
        .iter()
        .map(|x| u64::try_from(x).expect("small count"))
        .collect()
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn expect_frac(what: &str, got: &BigRational, want: &BigRational) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!(
            "{what}: got {}, expected {}",
            to_fraction(got),
            to_fraction(want)
        ))
    }
}

fn expect(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn two_way(
    game: &Game,
    player: usize,
    kind: IndexKind,
) -> Result<powersplit_core::manipulation::SplitReport, String> {
    let s = scan_two_way_splits(game, player, kind).map_err(e)?;
    s.reports
        .into_iter()
        .next()
        .ok_or_else(|| "no split available".to_string())
}

fn fx_coalitions() -> Result<String, String> {
    let game = g(6, &[2, 2, 2]);
    expect(
        game.evaluate(&Coalition::from_mask(0b111))
            .map_err(e)?
            .is_win(),
        "grand coalition must win",
    )?;
    expect(
        !game
            .evaluate(&Coalition::from_mask(0b011))
            .map_err(e)?
            .is_win(),
        "{0,1} must lose",
    )?;
    expect(
        !game.evaluate(&Coalition::empty()).map_err(e)?.is_win(),
        "empty coalition must lose",
    )?;
    expect(
        game.is_unanimity() && game.total_weight() == 6,
        "[6;2,2,2] is a unanimity game of weight 6",
    )?;
    expect(
        !g(5, &[2, 2, 2]).is_unanimity(),
        "[5;2,2,2] is not a unanimity game",
    )?;
    let game = g(5, &[2, 1, 1, 1, 1]);
    expect(
        game.is_critical(&Coalition::from_mask(0b01110), 0)
            .map_err(e)?,
        "player 0 critical for {1,2,3}",
    )?;
    expect(
        !game
            .is_critical(&Coalition::from_mask(0b00010), 0)
            .map_err(e)?,
        "player 0 not critical for {1}",
    )?;
    Ok("win/lose/critical as expected".into())
}

fn fx_transforms() -> Result<String, String> {
    let out = g(6, &[2, 2, 2])
        .apply_split(&SplitSpec::two_way(2, 1, 1))
        .map_err(e)?;
    expect_eq("split", out.game.weights(), &[2, 2, 1, 1][..])?;
    let out = g(6, &[5, 5])
        .apply_split(&SplitSpec::new(1, vec![1; 5]))
        .map_err(e)?;
    expect_eq(
        "five-way split",
        out.game.weights(),
        &[5, 1, 1, 1, 1, 1][..],
    )?;
    let out = g(9, &[3, 3, 2, 1, 1, 1])
        .apply_merge(&MergeSpec {
            coalition: Coalition::from_mask(0b11),
        })
        .map_err(e)?;
    expect_eq("merge", out.game.weights(), &[2, 1, 1, 1, 6][..])?;
    let out = g(11, &[6, 5, 1, 1, 1, 1, 1])
        .apply_merge(&MergeSpec {
            coalition: Coalition::from_mask(0b101),
        })
        .map_err(e)?;
    let mut w = out.game.weights().to_vec();
    w.sort_unstable();
    expect_eq("annexation multiset", w, vec![1, 1, 1, 1, 5, 7])?;
    Ok("split and merge layouts as expected".into())
}

fn fx_indices() -> Result<String, String> {
    let ss = |q, w: &[u64]| exact::index(&g(q, w), IndexKind::ShapleyShubik).values;
    let bz = |q, w: &[u64]| exact::index(&g(q, w), IndexKind::Banzhaf).values;
    expect_eq("[6;2,2,2] φ", ss(6, &[2, 2, 2]), vec![r(1, 3); 3])?;
    expect_frac("[5;2,1,1,1,1] φ_0", &ss(5, &[2, 1, 1, 1, 1])[0], &r(2, 5))?;
    expect_frac(
        "[6;5,1,1,1,1,1] φ_0",
        &ss(6, &[5, 1, 1, 1, 1, 1])[0],
        &r(5, 6),
    )?;
    expect_eq("[4;2,2,2] φ", ss(4, &[2, 2, 2]), vec![r(1, 3); 3])?;
    expect_eq("[10;2,2,2,2,2] φ", ss(10, &[2; 5]), vec![r(1, 5); 5])?;
    let counts = exact::banzhaf_counts_all_dp(&g(5, &[2, 1, 1, 1, 1]));
    expect_eq("[5;2,1,1,1,1] η", eta(&counts), vec![5, 3, 3, 3, 3])?;
    expect_eq(
        "[5;2,1,1,1,1] β",
        bz(5, &[2, 1, 1, 1, 1]),
        vec![r(5, 17), r(3, 17), r(3, 17), r(3, 17), r(3, 17)],
    )?;
    let counts = exact::banzhaf_counts_all_dp(&g(11, &[6, 5, 1, 1, 1, 1, 1]));
    expect_eq(
        "[11;6,5,1,1,1,1,1] η",
        eta(&counts),
        vec![33, 31, 1, 1, 1, 1, 1],
    )?;
    expect_frac(
        "[11;6,5,1,1,1,1,1] β_0",
        &bz(11, &[6, 5, 1, 1, 1, 1, 1])[0],
        &r(33, 69),
    )?;
    let counts = exact::banzhaf_counts_all_dp(&g(4, &[1, 1, 1, 1, 2]));
    expect_eq("[4;1,1,1,1,2] η", eta(&counts), vec![4, 4, 4, 4, 10])?;
    expect_frac("[4;1,1,1,1,2] β_4", &bz(4, &[1, 1, 1, 1, 2])[4], &r(5, 13))?;
    expect_eq(
        "[4;2,2,1,1] β",
        bz(4, &[2, 2, 1, 1])[2..].to_vec(),
        vec![r(1, 6); 2],
    )?;
    expect_frac(
        "[9;2,1,1,1,6] β of the merged player",
        &bz(9, &[2, 1, 1, 1, 6])[4],
        &r(8, 20),
    )?;
    Ok("exact index values as expected".into())
}

fn fx_advantageous() -> Result<String, String> {
    for kind in IndexKind::ALL {
        let rep = two_way(&g(6, &[2, 2, 2]), 2, kind)?;
        expect_eq(
            "classification",
            rep.classification,
            Classification::Beneficial,
        )?;
        expect_eq("gain ratio", rep.gain_ratio, Some(r(3, 2)))?;
    }
    Ok("[6;2,2,2]: gain 3/2 under both indices".into())
}

fn fx_disadvantageous() -> Result<String, String> {
    let ss = two_way(&g(5, &[2, 2, 2]), 2, IndexKind::ShapleyShubik)?;
    expect_eq("Shapley–Shubik ratio", ss.gain_ratio, Some(r(1, 2)))?;
    let bz = two_way(&g(5, &[2, 2, 2]), 2, IndexKind::Banzhaf)?;
    expect_eq("Banzhaf ratio", bz.gain_ratio, Some(r(3, 4)))?;
    expect(
        ss.classification == Classification::Harmful
            && bz.classification == Classification::Harmful,
        "harmful",
    )?;
    Ok("[5;2,2,2]: loss factors 2 and 4/3".into())
}

fn fx_neutral() -> Result<String, String> {
    for kind in IndexKind::ALL {
        let rep = two_way(&g(4, &[2, 2, 2]), 2, kind)?;
        expect_eq(
            "classification",
            rep.classification,
            Classification::Neutral,
        )?;
    }
    Ok("[4;2,2,2]: neutral under both indices".into())
}

fn fx_index_dependent() -> Result<String, String> {
    let game = g(5, &[2, 1, 1, 1, 1]);
    let ss = two_way(&game, 0, IndexKind::ShapleyShubik)?;
    let bz = two_way(&game, 0, IndexKind::Banzhaf)?;
    expect_frac("φ before", &ss.payoff_before, &r(2, 5))?;
    expect_frac("β before", &bz.payoff_before, &r(5, 17))?;
    expect_frac("φ after", &ss.payoff_after_total, &r(1, 3))?;
    expect_frac("β after", &bz.payoff_after_total, &r(1, 3))?;
    expect_eq("Shapley–Shubik", ss.classification, Classification::Harmful)?;
    expect_eq("Banzhaf", bz.classification, Classification::Beneficial)?;
    Ok("[5;2,1,1,1,1]: harmful for Shapley–Shubik, beneficial for Banzhaf".into())
}

fn fx_bloc_paradox() -> Result<String, String> {
    let game = g(11, &[6, 5, 1, 1, 1, 1, 1]);
    let bz = annex_benefit(&game, 0, &Coalition::singleton(2), IndexKind::Banzhaf).map_err(e)?;
    expect_frac("β before", &bz.payoff_before, &r(33, 69))?;
    expect_frac("β after", &bz.payoff_after, &r(17, 36))?;
    expect(!bz.beneficial, "Banzhaf annexation must not be beneficial")?;
    let ss =
        annex_benefit(&game, 0, &Coalition::singleton(2), IndexKind::ShapleyShubik).map_err(e)?;
    expect(
        ss.classification != Classification::Harmful,
        "Shapley–Shubik annexation must not be harmful",
    )?;
    Ok("annexing a unit player: β 33/69 → 17/36".into())
}

fn fx_annex_non_monotone() -> Result<String, String> {
    let game = g(9, &[3, 3, 2, 1, 1, 1]);
    let heavy = annex_benefit(&game, 0, &Coalition::singleton(1), IndexKind::Banzhaf).map_err(e)?;
    let light = annex_benefit(&game, 0, &Coalition::singleton(2), IndexKind::Banzhaf).map_err(e)?;
    expect_frac("annex weight 3", &heavy.payoff_after, &r(8, 20))?;
    expect_frac("annex weight 2", &light.payoff_after, &r(7, 17))?;
    let w = annex_monotonicity_probe(&game, 0, IndexKind::Banzhaf).map_err(e)?;
    expect(w.contains(&(0, 1, 2)), "probe must report (0, 1, 2)")?;
    let w = annex_monotonicity_probe(&game, 0, IndexKind::ShapleyShubik).map_err(e)?;
    expect(w.is_empty(), "Shapley–Shubik probe must be empty")?;
    Ok("8/20 < 7/17, witness (0, 1, 2)".into())
}

/// Every two-way split of `[6;5,5]` leaves the other player with a veto
/// (the identities' weights sum to 5 < 6), so the identities share 1/3.
fn fx_k_way_two() -> Result<String, String> {
    let s = scan_k_way_splits(&g(6, &[5, 5]), 1, 2, IndexKind::ShapleyShubik).map_err(e)?;
    expect_eq("splits", s.total_splits, 2)?;
    for rep in &s.reports {
        expect_frac("after", &rep.payoff_after_total, &r(1, 3))?;
        expect_eq(
            "classification",
            rep.classification,
            Classification::Harmful,
        )?;
    }
    Ok("[6;5,5] into 2 identities: 1/2 → 1/3 (harmful, ratio 2/3)".into())
}

fn fx_k_way_many() -> Result<String, String> {
    let s = scan_k_way_splits(&g(6, &[5, 5]), 1, 5, IndexKind::ShapleyShubik).map_err(e)?;
    expect_eq("splits", s.total_splits, 1)?;
    expect_frac("after", &s.reports[0].payoff_after_total, &r(1, 6))?;
    expect_eq("ratio", s.reports[0].gain_ratio.clone(), Some(r(1, 3)))?;
    let s = scan_k_way_splits(&g(7, &[6, 6]), 1, 6, IndexKind::ShapleyShubik).map_err(e)?;
    expect_eq("ratio", s.reports[0].gain_ratio.clone(), Some(r(2, 7)))?;
    Ok("[6;5,5] into 5: ratio 1/3; [7;6,6] into 6: loss factor 7/2".into())
}

fn fx_tight_instances() -> Result<String, String> {
    for n in 3..=8u64 {
        let up = check_split_bounds(
            &g(2 * n, &vec![2; n as usize]),
            &SplitSpec::two_way(n as usize - 1, 1, 1),
        )
        .map_err(e)?;
        expect_eq("upper tight ratio", up.shapley_ratio, Some(r(2 * n, n + 1)))?;
        let down = check_split_bounds(
            &g(2 * n - 1, &vec![2; n as usize]),
            &SplitSpec::two_way(n as usize - 1, 1, 1),
        )
        .map_err(e)?;
        expect_eq("lower tight ratio", down.shapley_ratio, Some(r(2, n + 1)))?;
    }
    for n in 5..=10u64 {
        let mut w = vec![1; n as usize - 1];
        w.push(2);
        let rep = check_split_bounds(&g(n - 1, &w), &SplitSpec::two_way(n as usize - 1, 1, 1))
            .map_err(e)?;
        expect_frac("β_n", &rep.banzhaf_before, &r(n, n * n - 4 * n + 8))?;
    }
    Ok("tight instances at n = 3..8 and 5..10".into())
}

fn fx_banzhaf_loss() -> Result<String, String> {
    let k = 4u64;
    let n = 2 * k as usize;
    let mut w = vec![1; n - 1];
    w.push(4 * k);
    let game = g(3 * k, &w);
    let spec = SplitSpec::two_way(n - 1, 2 * k, 2 * k);
    let rep = check_split_bounds(&game, &spec).map_err(e)?;
    let ratio = rep.banzhaf_ratio.clone().ok_or("undefined ratio")?;
    expect(
        ratio < r(1, 1) && ratio > r(1, n as u64),
        "ratio must lie in (1/n, 1)",
    )?;
    let out = game.apply_split(&spec).map_err(e)?;
    let counts = exact::banzhaf_counts_all_dp(&out.game);
    expect_eq(
        "η of an identity",
        counts.counts[out.identities[0]].to_string(),
        (1u64 << (n - 1)).to_string(),
    )?;
    // 2·C(2k−2, k−1) = 2·C(6, 3) = 40
    expect_eq(
        "η of a unit player",
        counts.counts[0].to_string(),
        "40".to_string(),
    )?;
    Ok(format!(
        "[12;1×7,16] split (8,8): ratio {}",
        to_fraction(&ratio)
    ))
}

fn fx_recommendations() -> Result<String, String> {
    expect_eq(
        "[6;2,2,2]",
        unanimity_split_recommendation(&g(6, &[2, 2, 2])),
        Some(SplitSpec::two_way(0, 1, 1)),
    )?;
    expect_eq(
        "[5;2,2,2]",
        unanimity_split_recommendation(&g(5, &[2, 2, 2])),
        None,
    )?;
    let game = g(10, &[4, 3, 3]);
    let spec = unanimity_split_recommendation(&game).ok_or("no recommendation for [10;4,3,3]")?;
    expect_eq("[10;4,3,3]", &spec, &SplitSpec::two_way(0, 2, 2))?;
    for kind in IndexKind::ALL {
        let rep = evaluate_split(&game, &spec, kind).map_err(e)?;
        expect_eq(
            "recommended split",
            rep.classification,
            Classification::Beneficial,
        )?;
    }
    let mut w = vec![10; 6];
    w.push(7);
    let game = g(65, &w);
    let spec =
        high_quota_split_recommendation(&game, 6).ok_or("no recommendation for [65;10×6,7]")?;
    expect_eq("[65;10×6,7]", &spec, &SplitSpec::two_way(6, 4, 3))?;
    let rep = evaluate_split(&game, &spec, IndexKind::ShapleyShubik).map_err(e)?;
    expect_eq(
        "recommended split",
        rep.classification,
        Classification::Beneficial,
    )?;
    expect_eq(
        "[6;2,2,2] high quota",
        high_quota_split_recommendation(&g(6, &[2, 2, 2]), 2),
        None,
    )?;
    Ok("both recommendations confirmed by the exact engine".into())
}

fn fx_gadgets() -> Result<String, String> {
    let bi = reduction_gadget(&[1, 1], GadgetVariant::BiSplit).map_err(e)?;
    expect_eq("bi_split game", &bi.game, &g(10, &[8, 8, 2]))?;
    // the unit-unit split of [10;8,8,2] keeps β at exactly 1/3
    let rep = two_way(&bi.game, 2, IndexKind::Banzhaf)?;
    expect_eq(
        "bi_split split",
        rep.classification,
        Classification::Neutral,
    )?;
    let no = reduction_gadget(&[1, 2], GadgetVariant::BiSplit).map_err(e)?;
    let rep = two_way(&no.game, 2, IndexKind::Banzhaf)?;
    expect(
        rep.payoff_before.is_zero() && rep.payoff_after_total.is_zero(),
        "dummy must stay a dummy",
    )?;
    for v in [
        GadgetVariant::SsSplit,
        GadgetVariant::Merge,
        GadgetVariant::Annex,
    ] {
        expect(
            reduction_gadget(&[1, 1], v)
                .map_err(e)?
                .decide_exact()
                .map_err(e)?,
            v.name(),
        )?;
        expect(
            !reduction_gadget(&[1, 2], v)
                .map_err(e)?
                .decide_exact()
                .map_err(e)?,
            v.name(),
        )?;
    }
    Ok("{1,1} and {1,2} gadgets as expected".into())
}

fn fx_sample_sizes() -> Result<String, String> {
    let k = sample_size(0.001, 0.00001).map_err(e)?;
    expect(
        k.abs_diff(6_103_037) <= 1,
        &format!("sample_size(0.001, 0.00001) = {k}"),
    )?;
    expect_eq(
        "sample_size(0.01, 0.01)",
        sample_size(0.01, 0.01).map_err(e)?,
        26_492,
    )?;
    expect_eq(
        "sample_size(0.5, 0.5)",
        sample_size(0.5, 0.5).map_err(e)?,
        3,
    )?;
    Ok(format!("k(0.001, 0.00001) = {k}"))
}

fn fx_mc_estimates() -> Result<String, String> {
    let cfg = McConfig::new(0.01, 0.01, 7).map_err(e)?;
    let est = shapley_mc(&g(5, &[2, 1, 1, 1, 1]), 0, &cfg).map_err(e)?;
    let err = (to_f64(&est.value()) - 0.4).abs();
    expect(
        err <= 0.01,
        &format!("Shapley–Shubik estimate off by {err}"),
    )?;
    let b = banzhaf_mc(&g(5, &[2, 1, 1, 1, 1]), &cfg).map_err(e)?;
    let err = (to_f64(b.normalized.get(0)) - 5.0 / 17.0).abs();
    expect(err <= 0.03, &format!("Banzhaf estimate off by {err}"))?;
    let dummy = shapley_mc(&g(14, &[8, 16, 2]), 2, &cfg).map_err(e)?;
    expect_eq("dummy hits", dummy.hits, 0)?;
    Ok("estimates within tolerance; dummy estimate exactly 0".into())
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "coalition-evaluation",
            check: fx_coalitions,
        },
        Fixture {
            name: "split-and-merge-layout",
            check: fx_transforms,
        },
        Fixture {
            name: "exact-index-values",
            check: fx_indices,
        },
        Fixture {
            name: "advantageous-split",
            check: fx_advantageous,
        },
        Fixture {
            name: "disadvantageous-split",
            check: fx_disadvantageous,
        },
        Fixture {
            name: "neutral-split",
            check: fx_neutral,
        },
        Fixture {
            name: "index-dependent-verdict",
            check: fx_index_dependent,
        },
        Fixture {
            name: "bloc-paradox",
            check: fx_bloc_paradox,
        },
        Fixture {
            name: "annexation-non-monotonicity",
            check: fx_annex_non_monotone,
        },
        Fixture {
            name: "k-way-two-identities",
            check: fx_k_way_two,
        },
        Fixture {
            name: "k-way-unit-identities",
            check: fx_k_way_many,
        },
        Fixture {
            name: "tight-split-instances",
            check: fx_tight_instances,
        },
        Fixture {
            name: "banzhaf-split-loss",
            check: fx_banzhaf_loss,
        },
        Fixture {
            name: "split-recommendations",
            check: fx_recommendations,
        },
        Fixture {
            name: "reduction-gadgets",
            check: fx_gadgets,
        },
        Fixture {
            name: "sample-sizes",
            check: fx_sample_sizes,
        },
        Fixture {
            name: "sampled-estimates",
            check: fx_mc_estimates,
        },
    ]
}

pub fn run_fixtures(table: &[Fixture]) -> Vec<CheckResult> {
    table
        .iter()
        .map(|f| {
            let res = std::panic::catch_unwind(f.check).unwrap_or_else(|_| Err("panicked".into()));
            let (passed, detail) = match res {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                suite: "fixtures",
                name: f.name.to_string(),
                passed,
                detail,
            }
        })
        .collect()
}

/// A random game with `2..=max_n` players, weights in `1..=max_w` and a
/// uniform quota in `1..=w(N)`.
pub fn random_game<R: Rng>(rng: &mut R, max_n: usize, max_w: u64) -> Game {
    let n = rng.random_range(2..=max_n);
    let w: Vec<u64> = (0..n).map(|_| rng.random_range(1..=max_w)).collect();
    let total: u64 = w.iter().sum();
    Game::new(rng.random_range(1..=total), w).expect("random game is valid")
}

fn result(suite: &'static str, name: &str, failures: &[String], detail: String) -> CheckResult {
    CheckResult {
        suite,
        name: name.to_string(),
        passed: failures.is_empty(),
        detail: match failures.first() {
            None => detail,
            Some(f) => format!("{} failure(s), first: {f}", failures.len()),
        },
    }
}

/// Exact DP against exhaustive enumeration.
pub fn oracle_suite(trials: usize, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for t in 0..trials {
        let game = random_game(&mut rng, 10, 25);
        for kind in IndexKind::ALL {
            let en = exact::index_with(&Sequential, &game, kind, 12);
            let dp = exact::index_with(&Sequential, &game, kind, 0);
            if en != dp {
                failures.push(format!("trial {t}: {game} {}", kind.name()));
            }
        }
    }
    vec![result(
        "oracle",
        "dp-equals-enumeration",
        &failures,
        format!("{trials} games, both indices"),
    )]
}

/// Split bounds on random two-way splits, annexation inequalities on random
/// single-player annexations.
pub fn bounds_suite(trials: usize, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut worst_bz: Option<BigRational> = None;
    let mut done = 0;
    while done < trials {
        let game = random_game(&mut rng, 12, 20);
        let p = rng.random_range(0..game.num_players());
        let w = game.weight(p);
        if w < 2 {
            continue;
        }
        let a = rng.random_range(1..w);
        done += 1;
        match check_split_bounds(&game, &SplitSpec::two_way(p, a, w - a)) {
            Ok(rep) => {
                if let Some(x) = rep.banzhaf_ratio {
                    let scaled = x * BigRational::from_integer((game.num_players() as u64).into());
                    if worst_bz.as_ref().is_none_or(|b| scaled < *b) {
                        worst_bz = Some(scaled);
                    }
                }
            }
            Err(err) => failures.push(err.to_string()),
        }
    }
    let worst = worst_bz
        .map(|x| format!(", smallest n·(Banzhaf ratio) {:.4}", to_f64(&x)))
        .unwrap_or_default();
    let split = result(
        "bounds",
        "two-way-split-bounds",
        &failures,
        format!("{trials} splits{worst}"),
    );

    let mut failures = Vec::new();
    let annexations = trials.div_ceil(2);
    for _ in 0..annexations {
        let game = random_game(&mut rng, 10, 20);
        let n = game.num_players();
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        if let Err(err) = check_annex_bounds(&game, i, &Coalition::singleton(j)) {
            failures.push(err.to_string());
        }
    }
    let annex = result(
        "bounds",
        "annexation-inequalities",
        &failures,
        format!("{annexations} annexations"),
    );
    vec![split, annex]
}

/// Random PARTITION instances against the gadgets' exact verdicts. The
/// split variant for Banzhaf is checked against what its game actually
/// does: the identities' total equals the original index exactly.
pub fn gadget_suite(trials: usize, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let instances: Vec<Vec<u64>> = (0..trials)
        .map(|_| {
            let k = rng.random_range(2..=8);
            (0..k).map(|_| rng.random_range(1..=10)).collect()
        })
        .collect();
    let yes = instances.iter().filter(|a| partition_exists(a)).count();
    for v in [
        GadgetVariant::SsSplit,
        GadgetVariant::Merge,
        GadgetVariant::Annex,
    ] {
        let mut failures = Vec::new();
        for a in &instances {
            match reduction_gadget(a, v).and_then(|g| g.decide_exact()) {
                Ok(d) if d == partition_exists(a) => {}
                Ok(d) => failures.push(format!("{a:?}: gadget says {d}")),
                Err(err) => failures.push(format!("{a:?}: {err}")),
            }
        }
        out.push(result(
            "gadgets",
            v.name(),
            &failures,
            format!(
                "{} instances ({yes} with a partition) agree",
                instances.len()
            ),
        ));
    }
    let mut failures = Vec::new();
    for a in &instances {
        let check = || -> Result<bool, powersplit_core::Error> {
            let gd = reduction_gadget(a, GadgetVariant::BiSplit)?;
            let s = scan_two_way_splits(&gd.game, gd.game.num_players() - 1, IndexKind::Banzhaf)?;
            let rep = &s.reports[0];
            let dummy = rep.payoff_before.is_zero() && rep.payoff_after_total.is_zero();
            Ok(rep.classification == Classification::Neutral && dummy != partition_exists(a))
        };
        match check() {
            Ok(true) => {}
            Ok(false) => failures.push(format!("{a:?}")),
            Err(err) => failures.push(format!("{a:?}: {err}")),
        }
    }
    out.push(result(
        "gadgets",
        "bi_split",
        &failures,
        format!(
            "{} instances: split neutral, splitter a dummy iff no partition",
            instances.len()
        ),
    ));
    out
}

/// Sampled estimates on `[5;2,1,1,1,1]` with ε = 0.02, δ = 0.05: the share
/// of runs missing by more than ε stays within δ plus a binomial margin.
pub fn mc_suite(runs: usize, seed: u64) -> Vec<CheckResult> {
    let game = g(5, &[2, 1, 1, 1, 1]);
    let exact_value = 0.4;
    let mut misses = 0;
    for run in 0..runs {
        let cfg = McConfig::new(0.02, 0.05, seed.wrapping_add(run as u64)).expect("valid accuracy");
        let est = shapley_mc(&game, 0, &cfg).expect("valid game");
        if (to_f64(&est.value()) - exact_value).abs() > 0.02 {
            misses += 1;
        }
    }
    let frac = misses as f64 / runs.max(1) as f64;
    let failures = if frac <= 0.08 {
        vec![]
    } else {
        vec![format!("{misses}/{runs} runs off by more than ε")]
    };
    vec![result(
        "mc",
        "hoeffding-contract",
        &failures,
        format!("{misses}/{runs} runs off by more than ε"),
    )]
}

pub fn run(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let all = opts.suite == Suite::All;
    if all || opts.suite == Suite::Fixtures {
        out.extend(run_fixtures(&fixtures()));
    }
    if all || opts.suite == Suite::Oracle {
        out.extend(oracle_suite(opts.trials, opts.seed));
    }
    if all || opts.suite == Suite::Bounds {
        out.extend(bounds_suite(opts.trials, opts.seed));
    }
    if all || opts.suite == Suite::Gadgets {
        out.extend(gadget_suite(opts.trials.min(100), opts.seed));
    }
    if all || opts.suite == Suite::Mc {
        out.extend(mc_suite(opts.trials.min(100), opts.seed));
    }
    out
}

pub fn render_table(results: &[CheckResult]) -> String {
    let width = results
        .iter()
        .map(|r| r.suite.len() + r.name.len() + 1)
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    for r in results {
        let id = format!("{}/{}", r.suite, r.name);
        let _ = writeln!(
            s,
            "{}  {id:<width$}  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(s, "{} checks, {} failed", results.len(), failed);
    s
}

pub fn exit_code(results: &[CheckResult]) -> i32 {
    if results.iter().all(|r| r.passed) {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_table_passes() {
        let res = run_fixtures(&fixtures());
        for r in &res {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn corrupted_fixture_fails() {
        fn corrupted() -> Result<String, String> {
            let rep = two_way(&g(6, &[2, 2, 2]), 2, IndexKind::ShapleyShubik)?;
            expect_eq("gain ratio", rep.gain_ratio, Some(r(2, 1)))?;
            Ok(String::new())
        }
        let mut table = fixtures();
        table.push(Fixture {
            name: "corrupted-gain",
            check: corrupted,
        });
        let res = run_fixtures(&table);
        assert_eq!(exit_code(&res), 1);
        let table = render_table(&res);
        assert!(table.contains("FAIL  fixtures/corrupted-gain"));
    }

    #[test]
    fn randomized_suites_are_deterministic() {
        let opts = VerifyOptions {
            suite: Suite::Bounds,
            trials: 30,
            seed: 7,
        };
        assert_eq!(run(&opts), run(&opts));
        assert_eq!(exit_code(&run(&opts)), 0);
    }
}

//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use powersplit::exec::{with_pool, Rayon};
use powersplit::verify::random_game;
use powersplit_core::exact::{self, IndexKind};
use powersplit_core::experiments::{run_experiment_with, ExperimentConfig, QuotaMode};
use powersplit_core::manipulation::{
    annex_benefit, annex_monotonicity_probe, reduction_gadget, scan_k_way_splits,
    scan_two_way_splits, Classification, GadgetVariant,
};
use powersplit_core::mc::{sample_size, shapley_mc, McConfig};
use powersplit_core::rational::{from_u64, to_f64, to_fraction};
use powersplit_core::{AnnexSpec, Coalition, Game, Sequential, SplitSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn g(q: u64, w: &[u64]) -> Game {
    Game::new(q, w.to_vec()).unwrap()
}

fn r(n: u64, d: u64) -> BigRational {
    from_u64(n, d)
}

fn frac(x: &BigRational) -> String {
    to_fraction(x)
}

/// Collects failing items of a multi-part criterion.
#[derive(Default)]
struct Items {
    failed: Vec<String>,
    checked: usize,
}

impl Items {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed.push(what());
        }
    }

    fn outcome(self, summary: String) -> Outcome {
        if self.failed.is_empty() {
            Outcome {
                passed: true,
                detail: summary,
            }
        } else {
            Outcome {
                passed: false,
                detail: format!("{summary}; failed: {}", self.failed.join("; ")),
            }
        }
    }
}

fn two_way(
    game: &Game,
    player: usize,
    kind: IndexKind,
) -> powersplit_core::manipulation::SplitReport {
    scan_two_way_splits(game, player, kind)
        .unwrap()
        .reports
        .remove(0)
}

fn worked_examples() -> Outcome {
    let start = Instant::now();
    let mut it = Items::default();
    for kind in IndexKind::ALL {
        let rep = two_way(&g(6, &[2, 2, 2]), 2, kind);
        it.check(rep.gain_ratio == Some(r(3, 2)), || {
            format!("[6;2,2,2] {} gain {:?}", kind.name(), rep.gain_ratio)
        });
    }
    let ss = two_way(&g(5, &[2, 2, 2]), 2, IndexKind::ShapleyShubik);
    it.check(ss.gain_ratio == Some(r(1, 2)), || {
        "[5;2,2,2] Shapley loss factor".into()
    });
    let bz = two_way(&g(5, &[2, 2, 2]), 2, IndexKind::Banzhaf);
    it.check(bz.gain_ratio == Some(r(3, 4)), || {
        "[5;2,2,2] Banzhaf loss factor".into()
    });
    for kind in IndexKind::ALL {
        let rep = two_way(&g(4, &[2, 2, 2]), 2, kind);
        it.check(rep.classification == Classification::Neutral, || {
            format!("[4;2,2,2] {}", kind.name())
        });
    }

    let game = g(5, &[2, 1, 1, 1, 1]);
    let ss = two_way(&game, 0, IndexKind::ShapleyShubik);
    let bz = two_way(&game, 0, IndexKind::Banzhaf);
    it.check(
        ss.payoff_before == r(2, 5) && bz.payoff_before == r(5, 17),
        || "[5;2,1,1,1,1] before".into(),
    );
    it.check(
        ss.payoff_after_total == r(1, 3) && bz.payoff_after_total == r(1, 3),
        || "[5;2,1,1,1,1] after".into(),
    );
    it.check(
        ss.classification == Classification::Harmful
            && bz.classification == Classification::Beneficial,
        || "[5;2,1,1,1,1] opposite classifications".into(),
    );

    let game = g(11, &[6, 5, 1, 1, 1, 1, 1]);
    let bz = annex_benefit(&game, 0, &Coalition::singleton(2), IndexKind::Banzhaf).unwrap();
    it.check(
        bz.payoff_before == r(33, 69) && bz.payoff_after == r(17, 36),
        || {
            format!(
                "bloc annexation β {} → {}",
                frac(&bz.payoff_before),
                frac(&bz.payoff_after)
            )
        },
    );
    it.check(!bz.beneficial, || {
        "bloc annexation beneficial for Banzhaf".into()
    });
    let ss = annex_benefit(&game, 0, &Coalition::singleton(2), IndexKind::ShapleyShubik).unwrap();
    it.check(ss.classification != Classification::Harmful, || {
        "bloc annexation harmful for Shapley".into()
    });

    let game = g(9, &[3, 3, 2, 1, 1, 1]);
    let heavy = annex_benefit(&game, 0, &Coalition::singleton(1), IndexKind::Banzhaf).unwrap();
    let light = annex_benefit(&game, 0, &Coalition::singleton(2), IndexKind::Banzhaf).unwrap();
    it.check(
        heavy.payoff_after == r(8, 20) && light.payoff_after == r(7, 17),
        || "annexation 8/20 vs 7/17".into(),
    );
    let probe = annex_monotonicity_probe(&game, 0, IndexKind::Banzhaf).unwrap();
    it.check(probe.contains(&(0, 1, 2)), || {
        "monotonicity witness (0, 1, 2) missing".into()
    });

    let two = scan_k_way_splits(&g(6, &[5, 5]), 1, 2, IndexKind::ShapleyShubik).unwrap();
    for rep in &two.reports {
        it.check(rep.classification == Classification::Beneficial && rep.gain_ratio == Some(r(4, 3)), || {
            format!(
                "[6;5,5] split {:?} expected beneficial at ratio 4/3, exact engine gives {} at ratio {}",
                rep.spec.parts,
                rep.classification.name(),
                rep.gain_ratio.as_ref().map(frac).unwrap_or_default()
            )
        });
    }
    let five = scan_k_way_splits(&g(6, &[5, 5]), 1, 5, IndexKind::ShapleyShubik).unwrap();
    it.check(
        five.reports.len() == 1
            && five.reports[0].classification == Classification::Harmful
            && five.reports[0].gain_ratio == Some(r(1, 3)),
        || "[6;5,5] 5-way split".into(),
    );
    let six = scan_k_way_splits(&g(7, &[6, 6]), 1, 6, IndexKind::ShapleyShubik).unwrap();
    it.check(six.reports[0].gain_ratio == Some(r(2, 7)), || {
        "[7;6,6] 6-way loss factor".into()
    });

    let elapsed = start.elapsed();
    it.check(elapsed < Duration::from_secs(1), || {
        format!("runtime {elapsed:?} ≥ 1 s")
    });
    let n = it.checked;
    it.outcome(format!("{n} items, {elapsed:.2?}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut it = Items::default();
    for t in 0..1000 {
        let game = random_game(&mut rng, 10, 25);
        for kind in IndexKind::ALL {
            let dp = exact::index_with(&Sequential, &game, kind, 0);
            let en = exact::index_with(&Sequential, &game, kind, 12);
            it.check(dp == en, || format!("trial {t} {game} {}", kind.name()));
        }
    }
    let elapsed = start.elapsed();
    it.check(elapsed < Duration::from_secs(60), || {
        format!("runtime {elapsed:?}")
    });
    it.outcome(format!("1000 games, both indices, {elapsed:.2?}"))
}

fn counts(game: &Game) -> Vec<BigUint> {
    exact::banzhaf_counts_all_dp(game).counts
}

fn bound_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut it = Items::default();
    let mut splits = 0;
    while splits < 2000 {
        let game = random_game(&mut rng, 12, 20);
        let p = rng.random_range(0..game.num_players());
        let w = game.weight(p);
        if w < 2 {
            continue;
        }
        splits += 1;
        let a = rng.random_range(1..w);
        let out = game.apply_split(&SplitSpec::two_way(p, a, w - a)).unwrap();
        let (i1, i2) = (out.identities[0], out.identities[1]);
        let n = game.num_players() as u64;

        let phi = exact::index(&game, IndexKind::ShapleyShubik).values[p].clone();
        let ss = exact::index(&out.game, IndexKind::ShapleyShubik);
        let phi2 = ss.get(i1) + ss.get(i2);
        it.check(phi2 >= &phi * r(2, n + 1), || {
            format!("Shapley lower bound: {game} split {a}+{}", w - a)
        });
        it.check(phi2 <= &phi * r(2 * n, n + 1), || {
            format!("Shapley upper bound: {game} split {a}+{}", w - a)
        });

        let eta = counts(&game);
        let eta2 = counts(&out.game);
        it.check(&eta2[i1] + &eta2[i2] == &eta[p] * 2u32, || {
            format!("critical-count identity: {game}")
        });
        let total = |c: &[BigUint]| c.iter().fold(BigUint::zero(), |s, x| s + x);
        let beta = BigRational::new(eta[p].clone().into(), total(&eta).into());
        let beta2 = BigRational::new((&eta2[i1] + &eta2[i2]).into(), total(&eta2).into());
        it.check(beta2 >= &beta * r(1, n + 1), || {
            format!("Banzhaf lower bound: {game}")
        });
        it.check(beta2 <= &beta * r(2, 1), || {
            format!("Banzhaf upper bound: {game}")
        });
    }

    for _ in 0..1000 {
        let game = random_game(&mut rng, 10, 20);
        let n = game.num_players();
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let out = game
            .apply_annex(&AnnexSpec {
                annexer: i,
                annexed: Coalition::singleton(j),
            })
            .unwrap();
        let ss_before = exact::index(&game, IndexKind::ShapleyShubik).values[i].clone();
        let ss_after = exact::index(&out.game, IndexKind::ShapleyShubik).values[out.merged].clone();
        it.check(ss_before <= ss_after && ss_after <= r(1, 1), || {
            format!("Shapley annexation: {game} {i}←{j}")
        });
        let bz_before = exact::index(&game, IndexKind::Banzhaf).values[i].clone();
        let bz_after = exact::index(&out.game, IndexKind::Banzhaf).values[out.merged].clone();
        it.check(
            &bz_before / BigRational::from_integer(2.into()) <= bz_after && bz_after <= r(1, 1),
            || format!("Banzhaf annexation halving: {game} {i}←{j}"),
        );
        if game.weight(i) <= game.weight(j) {
            it.check(bz_after >= bz_before, || {
                format!("Banzhaf annexation of a heavier player: {game} {i}←{j}")
            });
        }
        for k in (0..n).filter(|&k| k != i && k != j && game.weight(k) <= game.weight(j)) {
            let other = game
                .apply_annex(&AnnexSpec {
                    annexer: i,
                    annexed: Coalition::singleton(k),
                })
                .unwrap();
            let v =
                exact::index(&other.game, IndexKind::ShapleyShubik).values[other.merged].clone();
            it.check(v <= ss_after, || {
                format!("Shapley annexation monotonicity: {game} {i}←{j} vs {k}")
            });
        }
    }
    let n = it.checked;
    it.outcome(format!("2000 splits, 1000 annexations, {n} inequalities"))
}

fn tight_instances() -> Outcome {
    let mut it = Items::default();
    for n in 3..=8u64 {
        let ratio = |q| {
            two_way(
                &g(q, &vec![2; n as usize]),
                n as usize - 1,
                IndexKind::ShapleyShubik,
            )
            .gain_ratio
        };
        it.check(ratio(2 * n) == Some(r(2 * n, n + 1)), || {
            format!("[{};2×{n}]", 2 * n)
        });
        it.check(ratio(2 * n - 1) == Some(r(2, n + 1)), || {
            format!("[{};2×{n}]", 2 * n - 1)
        });
    }
    for n in 5..=10u64 {
        let mut w = vec![1; n as usize - 1];
        w.push(2);
        let beta = exact::index(&g(n - 1, &w), IndexKind::Banzhaf).values[n as usize - 1].clone();
        it.check(beta == r(n, n * n - 4 * n + 8), || {
            format!("β_n at n = {n}: {}", frac(&beta))
        });
    }
    it.outcome("n = 3..8 and 5..10".into())
}

fn brute_force_partition(a: &[u64]) -> bool {
    let total: u64 = a.iter().sum();
    total.is_multiple_of(2)
        && (0u32..1 << a.len()).any(|m| {
            (0..a.len())
                .filter(|&i| m >> i & 1 == 1)
                .map(|i| a[i])
                .sum::<u64>()
                * 2
                == total
        })
}

fn gadgets() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut instances: Vec<Vec<u64>> = Vec::new();
    // half the instances are built to have a partition
    while instances.len() < 50 {
        let k = rng.random_range(2..=12);
        let mut a: Vec<u64> = (0..k).map(|_| rng.random_range(1..=20)).collect();
        if instances.len().is_multiple_of(2) {
            let half = k / 2;
            let s: i64 =
                a[..half].iter().sum::<u64>() as i64 - a[half..].iter().sum::<u64>() as i64;
            if s != 0 {
                let fix = s.unsigned_abs();
                if fix > 20 {
                    continue;
                }
                a.push(fix);
            }
            if a.len() > 12 {
                continue;
            }
        }
        instances.push(a);
    }
    let yes = instances
        .iter()
        .filter(|a| brute_force_partition(a))
        .count();
    let mut it = Items::default();
    let mut summary = Vec::new();
    for v in GadgetVariant::ALL {
        let mut agree = 0;
        let mut first_miss = None;
        for a in &instances {
            let d = reduction_gadget(a, v).unwrap().decide_exact().unwrap();
            if d == brute_force_partition(a) {
                agree += 1;
            } else if first_miss.is_none() {
                first_miss = Some(a.clone());
            }
        }
        summary.push(format!("{} {agree}/50", v.name()));
        it.check(agree == instances.len(), || {
            format!(
                "{} disagrees with PARTITION on {} instances, e.g. {:?}",
                v.name(),
                50 - agree,
                first_miss.unwrap()
            )
        });
    }
    let elapsed = start.elapsed();
    it.check(elapsed < Duration::from_secs(120), || {
        format!("runtime {elapsed:?}")
    });
    it.outcome(format!(
        "{yes} yes-instances; {}; {elapsed:.2?}",
        summary.join(", ")
    ))
}

fn monte_carlo() -> Outcome {
    let mut it = Items::default();
    let game = g(5, &[2, 1, 1, 1, 1]);
    let exact_value = exact::index(&game, IndexKind::ShapleyShubik).values[0].clone();
    let mut misses = 0;
    for run in 0..400u64 {
        let est = shapley_mc(&game, 0, &McConfig::new(0.02, 0.05, run).unwrap()).unwrap();
        if (to_f64(&est.value()) - to_f64(&exact_value)).abs() > 0.02 {
            misses += 1;
        }
    }
    let frac = misses as f64 / 400.0;
    it.check(frac <= 0.08, || {
        format!("{misses}/400 runs off by more than ε")
    });
    let k = sample_size(0.001, 0.00001).unwrap();
    // ⌈ln(200000) / (2·10⁻⁶)⌉ evaluated at 50 digits
    it.check(k.abs_diff(6_103_037) <= 1, || {
        format!("sample_size(0.001, 0.00001) = {k}")
    });
    it.outcome(format!(
        "{misses}/400 runs off by more than ε; sample_size(0.001, 0.00001) = {k}"
    ))
}

fn empirical_study() -> Outcome {
    let start = Instant::now();
    let mut it = Items::default();
    let mut summary = Vec::new();
    for kind in IndexKind::ALL {
        let cfg = ExperimentConfig {
            seed: 42,
            ..ExperimentConfig::desk(kind)
        };
        let run = with_pool(1, || run_experiment_with(&Rayon, &cfg))
            .unwrap()
            .unwrap();
        let o = &run.stats.overall;
        let with = o.frac_with_beneficial_f64();
        let pooled = to_f64(&o.pooled_beneficial_fraction());
        summary.push(format!(
            "{}: {} games, {:.3} with a beneficial split, {:.3} of splits beneficial",
            kind.name(),
            o.games,
            with,
            pooled
        ));
        it.check(o.games == 300, || format!("{} games", o.games));
        it.check(with >= 0.75, || {
            format!("{} games with a beneficial split {with:.3}", kind.name())
        });
        it.check(pooled <= 0.55, || {
            format!("{} beneficial-split fraction {pooled:.3}", kind.name())
        });

        let control = ExperimentConfig {
            quota_mode: QuotaMode::Unanimity,
            games_per_cell: 20,
            ..cfg
        };
        let run = run_experiment_with(&Sequential, &control).unwrap();
        for c in &run.stats.cells {
            it.check(c.frac_with_beneficial() == r(1, 1), || {
                format!(
                    "{} unanimity cell σ={:?} n={:?}",
                    kind.name(),
                    c.sigma.map(f64::from_bits),
                    c.n_players
                )
            });
        }
    }
    let elapsed = start.elapsed();
    it.check(elapsed < Duration::from_secs(600), || {
        format!("runtime {elapsed:?}")
    });
    it.outcome(format!("{}; {elapsed:.1?}", summary.join("; ")))
}

fn cli(args: &[&str], threads: Option<&str>) -> Vec<u8> {
    let mut c = Command::new(env!("CARGO_BIN_EXE_powersplit"));
    c.args(args).env_remove("POWERSPLIT_THREADS");
    if let Some(t) = threads {
        c.env("POWERSPLIT_THREADS", t);
    }
    let out = c.output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn determinism() -> Outcome {
    let mut it = Items::default();
    let commands: Vec<Vec<String>> = [7u64, 8]
        .iter()
        .flat_map(|seed| {
            let s = seed.to_string();
            vec![
                vec!["verify", "--suite", "all", "--trials", "100", "--seed", &s],
                vec![
                    "index",
                    "--game",
                    "13;5,4,3,3,2,1",
                    "--kind",
                    "banzhaf",
                    "--engine",
                    "mc",
                    "--seed",
                    &s,
                    "--format",
                    "json",
                ],
                vec![
                    "scan",
                    "--game",
                    "9;4,3,2,2",
                    "--player",
                    "0",
                    "--engine",
                    "mc",
                    "--epsilon",
                    "0.02",
                    "--seed",
                    &s,
                    "--format",
                    "csv",
                ],
                vec![
                    "find-split",
                    "--game",
                    "6;2,2,2",
                    "--player",
                    "2",
                    "--seed",
                    &s,
                    "--format",
                    "json",
                ],
                vec![
                    "experiment",
                    "--games-per-cell",
                    "4",
                    "--players",
                    "5-8",
                    "--seed",
                    &s,
                    "--format",
                    "json",
                ],
            ]
            .into_iter()
            .map(|v| v.into_iter().map(String::from).collect())
            .collect::<Vec<Vec<String>>>()
        })
        .collect();
    for cmd in &commands {
        let args: Vec<&str> = cmd.iter().map(String::as_str).collect();
        let base = cli(&args, Some("1"));
        it.check(cli(&args, Some("1")) == base, || {
            format!("{args:?} repeated")
        });
        for t in ["2", "4", "8"] {
            it.check(cli(&args, Some(t)) == base, || {
                format!("{args:?} with {t} workers")
            });
        }
        let mut flag = args.clone();
        flag.extend(["--threads", "3"]);
        it.check(cli(&flag, None) == base, || {
            format!("{args:?} with --threads 3")
        });
    }
    let n = it.checked;
    it.outcome(format!("{} commands, {n} comparisons", commands.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("worked-example fixtures", worked_examples),
        ("oracle equivalence", oracle_equivalence),
        ("bound suite", bound_suite),
        ("tight instances", tight_instances),
        ("reduction gadgets", gadgets),
        ("sampling contract", monte_carlo),
        ("scaled empirical study", empirical_study),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!(
            "criterion {} ({name}): {}  {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.passed {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 8 criteria pass");
    } else {
        println!("acceptance: criteria {failed:?} failed");
        std::process::exit(1);
    }
}

//! Acceptance suite: every release-gating criterion, one test per
//! criterion, each printing a `[PASS]`/`[FAIL]` line. Tolerances are pinned
//! here, in code; statistical criteria run with fixed seeds so they are
//! deterministic.
//!
//! Run with `cargo test -p mermin-core --test acceptance -- --nocapture`.

use rand::Rng;

use mermin_core::*;

/// Local alias: the crate exports its own `Result`.
type CheckResult = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn run_criterion(number: u32, what: &str, body: impl FnOnce() -> CheckResult) {
    match body() {
        Ok(()) => println!("[PASS] criterion {number:>2}: {what}"),
        Err(reason) => {
            println!("[FAIL] criterion {number:>2}: {what}: {reason}");
            panic!("criterion {number} failed: {reason}");
        }
    }
}

/// Deterministic batch of pseudo-random rational set distributions.
fn random_distributions(count: usize, seed: u64) -> Vec<SetDistribution> {
    let mut rng = rng::rng_from_seed(seed);
    (0..count)
        .map(|_| loop {
            let pairs: Vec<(InstructionSet, Rational)> = InstructionSet::all()
                .iter()
                .map(|s| {
                    let numer = rng.random_range(0i64..100);
                    let denom = rng.random_range(1i64..50);
                    (*s, rational(numer, denom))
                })
                .collect();
            if let Ok(d) = SetDistribution::from_weights(&pairs) {
                break d;
            }
        })
        .collect()
}

/// Deterministic batch of synthetic G9 distributions.
fn random_counts(count: usize, seed: u64) -> Vec<DistributionCounts> {
    let mut rng = rng::rng_from_seed(seed);
    (0..count)
        .map(|_| {
            DistributionCounts::new(
                rng.random_range(0..1_000_000),
                rng.random_range(0..1_000_000),
                rng.random_range(0..1_000_000),
                rng.random_range(0..1_000_000),
            )
        })
        .collect()
}

const TALLY_23: [u64; 9] = [
    1_000_000, 250_191, 250_332, 250_191, 1_000_000, 625_225, 250_332, 625_225, 1_000_000,
];
const COLUMN_23: [u64; 4] = [62_874, 187_317, 187_458, 562_351];

#[test]
fn criterion_01_exact_joint_probabilities() {
    run_criterion(1, "joint probabilities exactly 1/2 at 0° and 1/8 at 120°", || {
        let deg = |d: i32| Angle::new(d);
        for outcome in [JointOutcome::RR, JointOutcome::GG] {
            let p0 = joint_probability_exact(outcome, deg(0));
            ensure!(p0 == Some(rational(1, 2)), "{outcome} at 0°: {p0:?}");
            let p120 = joint_probability_exact(outcome, deg(120));
            ensure!(p120 == Some(rational(1, 8)), "{outcome} at 120°: {p120:?}");
        }
        ensure!(
            joint_probability(JointOutcome::RR, deg(0)) == 0.5,
            "f64 value at 0° not exact"
        );
        ensure!(
            joint_probability(JointOutcome::GG, deg(120)) == 0.125,
            "f64 value at 120° not exact"
        );
        Ok(())
    });
}

#[test]
fn criterion_02_sampled_facts() {
    run_criterion(2, "9M-trial run: case (a) exactly 1, case (b) within ±0.001 of 0.25", || {
        let report = run_quantum_experiment(9_000_000, SettingPolicy::UniformRandom, 42)
            .map_err(|e| e.to_string())?;
        let case_a = report.case_a_same_fraction();
        ensure!(case_a == Some(1.0), "case (a) fraction {case_a:?}");
        let case_b = report.case_b_same_fraction().expect("case (b) trials exist");
        ensure!(
            (case_b - 0.25).abs() <= 0.001,
            "case (b) aggregate {case_b} outside ±0.001"
        );
        Ok(())
    });
}

#[test]
fn criterion_03_bell_bound_by_enumeration() {
    run_criterion(3, "agreement ∈ {1/3, 1} for all 8 sets; 1000 random mixtures ≥ 1/3", || {
        for s in InstructionSet::all() {
            let f = s.case_b_agreement_fraction();
            ensure!(
                f == rational(1, 3) || f == rational(1, 1),
                "set {s} has fraction {}",
                fmt_rational(f)
            );
        }
        for (k, d) in random_distributions(1000, 0xB0B).iter().enumerate() {
            let f = mixture_case_b_fraction(d).map_err(|e| e.to_string())?;
            ensure!(
                f >= rational(1, 3),
                "mixture {k} has fraction {} below 1/3",
                fmt_rational(f)
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_04_one_one_two_mixture_fractions() {
    run_criterion(4, "1:1:2 mixture reproduces the exact nine fractions", || {
        let fractions = mixture_per_pair_fractions(&one_one_two_distribution())
            .map_err(|e| e.to_string())?;
        let expected = [
            rational(1, 1),
            rational(1, 4),
            rational(1, 4),
            rational(1, 4),
            rational(1, 1),
            rational(1, 2),
            rational(1, 4),
            rational(1, 2),
            rational(1, 1),
        ];
        ensure!(
            fractions == expected,
            "fractions {:?}",
            fractions.map(fmt_rational)
        );
        Ok(())
    });
}

#[test]
fn criterion_05_relation_23_tally_bands() {
    run_criterion(5, "relation 23 at 1M vectors lands in the ±3σ count bands", || {
        let cfg = McConfig::new("23", 42);
        let tally = run_simulation(&cfg).map_err(|e| e.to_string())?;
        for idx in [1usize, 5, 9] {
            ensure!(
                tally.counts[idx - 1] == 1_000_000,
                "case (a) row {idx} is {}",
                tally.counts[idx - 1]
            );
        }
        let band = |t: &TallyTable, pair: &str, center: i64, width: i64| -> CheckResult {
            let c = t.count(pair.parse().unwrap()) as i64;
            if (c - center).abs() <= width {
                Ok(())
            } else {
                Err(format!("pair {pair}: count {c} outside {center}±{width}"))
            }
        };
        for pair in ["12", "13", "21", "31"] {
            band(&tally, pair, 250_000, 1_300)?;
        }
        for pair in ["23", "32"] {
            band(&tally, pair, 625_000, 1_500)?;
        }
        // Band placement sanity: the published counts sit inside them.
        ensure!((250_191i64 - 250_000).abs() <= 1_300, "published 12-count outside band");
        ensure!((250_332i64 - 250_000).abs() <= 1_300, "published 13-count outside band");
        ensure!((625_225i64 - 625_000).abs() <= 1_500, "published 23-count outside band");
        Ok(())
    });
}

#[test]
fn criterion_06_three_eighths_across_relations() {
    run_criterion(6, "all 12 relations within ±0.002 of 0.375; analytic value exactly 3/8", || {
        ensure!(
            expected_case_b_same_fraction(rational(1, 4)) == rational(3, 8),
            "analytic expectation is not 3/8"
        );
        let tables = run_all_relations(1_000_000, 0.25, 42).map_err(|e| e.to_string())?;
        ensure!(tables.len() == 12, "expected 12 tables, got {}", tables.len());
        for t in &tables {
            let f = case_b_same_fraction(t);
            ensure!(
                (f - 0.375).abs() <= 0.002,
                "relation {}: fraction {f} outside ±0.002",
                t.relation
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_07_recovery_exactness() {
    run_criterion(7, "reference tally recovers exactly; 1000 random round-trips exact", || {
        let d = recover_from_counts(&TALLY_23, 1_000_000).map_err(|e| e.to_string())?;
        ensure!(
            d.as_array() == COLUMN_23,
            "recovered {:?}",
            d.as_array()
        );
        for (k, d) in random_counts(1000, 0xACE).iter().enumerate() {
            let tally = synthesize_tally(d);
            let back = recover_from_counts(&tally, d.total()).map_err(|e| e.to_string())?;
            ensure!(back == *d, "round-trip {k} returned {back:?}, expected {d:?}");
        }
        Ok(())
    });
}

#[test]
fn criterion_08_different_over_same_identity() {
    run_criterion(8, "Different/Same = 2 on reference, recovered, and random counts", || {
        let reference = DistributionCounts::new(62_874, 187_317, 187_458, 562_351);
        let sd = same_different_ratio(&reference).map_err(|e| e.to_string())?;
        ensure!(sd.same == 1_874_252, "Same = {}", sd.same);
        ensure!(sd.different == 3_748_504, "Different = {}", sd.different);
        ensure!(sd.ratio == rational(2, 1), "ratio {}", fmt_rational(sd.ratio));

        let tables = run_all_relations(200_000, 0.25, 7).map_err(|e| e.to_string())?;
        for t in &tables {
            let d = recover_distribution(t).map_err(|e| e.to_string())?;
            let sd = same_different_ratio(&d).map_err(|e| e.to_string())?;
            ensure!(
                sd.ratio == rational(2, 1),
                "relation {}: ratio {}",
                t.relation,
                fmt_rational(sd.ratio)
            );
        }
        for d in random_counts(1000, 0xD1CE) {
            if d.n2 + d.n3 + d.n4 == 0 {
                continue;
            }
            let sd = same_different_ratio(&d).map_err(|e| e.to_string())?;
            ensure!(sd.ratio == rational(2, 1), "random counts {d:?}: ratio not 2");
        }
        Ok(())
    });
}

#[test]
fn criterion_09_decomposition_identity() {
    run_criterion(9, "case (b) fraction = 1/3 + (2/3)(N1/n) exactly; 1/3 at N1 = 0", || {
        for d in random_counts(1000, 0xFEED) {
            if d.total() == 0 {
                continue;
            }
            let dec = decompose_case_b_fraction(&d).map_err(|e| e.to_string())?;
            let expected =
                rational(1, 3) + rational(2, 3) * rational(d.n1 as i64, d.total() as i64);
            ensure!(
                dec.total == expected,
                "counts {d:?}: total {} ≠ {}",
                fmt_rational(dec.total),
                fmt_rational(expected)
            );
        }
        let no_g1 = DistributionCounts::new(0, 11, 22, 33);
        let dec = decompose_case_b_fraction(&no_g1).map_err(|e| e.to_string())?;
        ensure!(dec.total == rational(1, 3), "N1 = 0 total {}", fmt_rational(dec.total));
        Ok(())
    });
}

#[test]
fn criterion_10_hull_verdicts() {
    run_criterion(10, "uniform 1/4 outside with w1 = −1/8; uniform 3/8 inside with exact weights", || {
        let quarter = hull_membership(&HullQuery::uniform_case_b(rational(1, 4)))
            .map_err(|e| e.to_string())?;
        ensure!(!quarter.feasible, "1/4 target reported feasible");
        match quarter.certificate {
            Some(HullCertificate::NegativeWeight { label, weight }) => {
                ensure!(
                    label == G9Label::G1 && weight == rational(-1, 8),
                    "certificate {label} = {}",
                    fmt_rational(weight)
                );
            }
            other => return Err(format!("unexpected certificate {other:?}")),
        }

        let three_eighths = hull_membership(&HullQuery::uniform_case_b(rational(3, 8)))
            .map_err(|e| e.to_string())?;
        ensure!(three_eighths.feasible, "3/8 target reported infeasible");
        let w = three_eighths
            .weight_values()
            .ok_or("missing weights on feasible verdict")?;
        let expected = [rational(1, 16), rational(5, 16), rational(5, 16), rational(5, 16)];
        ensure!(w == expected, "weights {:?}", w.map(fmt_rational));
        Ok(())
    });
}

#[test]
fn criterion_11_superdet_scenario() {
    run_criterion(11, "set-conditioned run: case (b) ≈ 1/4 and uniform dials within ±0.002; exact tables", || {
        let scenario = build_superdet_scenario();
        for s in scenario.sets() {
            let f = scenario.per_set_case_b_same_fraction(*s);
            ensure!(
                f == Some(rational(1, 4)),
                "set {s}: case (b) fraction {f:?} (exact check)"
            );
        }
        ensure!(
            scenario.aggregate_pair_marginal() == [rational(1, 9); 9],
            "aggregate dial marginal not uniform (exact check)"
        );

        let run = simulate_superdet(&scenario, 9_000_000, 42).map_err(|e| e.to_string())?;
        ensure!(
            run.facts.case_a_same_fraction() == Some(1.0),
            "case (a) fraction {:?}",
            run.facts.case_a_same_fraction()
        );
        for pair in SettingPair::case_b() {
            let f = run.facts.same_fraction(pair).expect("pair occurred");
            ensure!(
                (f - 0.25).abs() <= 0.002,
                "pair {pair}: same fraction {f} outside ±0.002"
            );
        }
        for pair in SettingPair::all() {
            let f = run.facts.pair_frequency(pair).expect("trials exist");
            ensure!(
                (f - 1.0 / 9.0).abs() <= 0.002,
                "pair {pair}: frequency {f} outside ±0.002"
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_12_relation_enumeration() {
    run_criterion(12, "exactly 12 relations; excluded pairs are the transposed settings", || {
        let matrix = build_realm_matrix();
        let relations = enumerate_functional_relations(&matrix);
        let labels: Vec<String> = relations.iter().map(|r| r.label()).collect();
        let expected = ["23", "26", "27", "28", "34", "36", "38", "46", "47", "48", "67", "78"];
        ensure!(labels == expected, "labels {labels:?}");
        for (r1, r2, pairs) in [(2, 4, "12/21"), (3, 7, "13/31"), (6, 8, "23/32")] {
            ensure!(
                !rows_qualify(&matrix, r1, r2).map_err(|e| e.to_string())?,
                "rows {r1},{r2} (settings {pairs}) unexpectedly qualify"
            );
        }
        let qualifying = (1..=9)
            .flat_map(|a| ((a + 1)..=9).map(move |b| (a, b)))
            .filter(|(a, b)| rows_qualify(&matrix, *a, *b).unwrap())
            .count();
        ensure!(qualifying == 12, "{qualifying} qualifying row pairs over all 36");
        Ok(())
    });
}

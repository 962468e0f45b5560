//! Cross-module invariants, mostly property-based.

use proptest::prelude::*;

use mermin_core::*;

fn counts_strategy() -> impl Strategy<Value = DistributionCounts> {
    (0u64..500_000, 0u64..500_000, 0u64..500_000, 0u64..500_000)
        .prop_map(|(n1, n2, n3, n4)| DistributionCounts::new(n1, n2, n3, n4))
}

fn weights_strategy() -> impl Strategy<Value = SetDistribution> {
    proptest::array::uniform8(0i64..1000)
        .prop_filter("at least one positive weight", |w| w.iter().any(|x| *x > 0))
        .prop_map(|w| {
            let pairs: Vec<(InstructionSet, Rational)> = InstructionSet::all()
                .iter()
                .zip(w)
                .map(|(s, x)| (*s, rational(x, 1)))
                .collect();
            SetDistribution::from_weights(&pairs).expect("nonnegative, nonzero")
        })
}

proptest! {
    #[test]
    fn recovery_round_trips_any_distribution(d in counts_strategy()) {
        let tally = synthesize_tally(&d);
        prop_assert_eq!(recover_from_counts(&tally, d.total()).unwrap(), d);
    }

    #[test]
    fn different_over_same_is_two(d in counts_strategy()) {
        prop_assume!(d.n2 + d.n3 + d.n4 > 0);
        let sd = same_different_ratio(&d).unwrap();
        prop_assert_eq!(sd.ratio, rational(2, 1));
        prop_assert_eq!(sd.different, 2 * sd.same);
        prop_assert_eq!(sd.same, 2 * (d.n2 + d.n3 + d.n4));
    }

    #[test]
    fn decomposition_identity_is_exact(d in counts_strategy()) {
        prop_assume!(d.total() > 0);
        let n = d.total() as i64;
        let dec = decompose_case_b_fraction(&d).unwrap();
        prop_assert_eq!(dec.base, rational(1, 3));
        prop_assert_eq!(
            dec.total,
            rational(1, 3) + rational(2, 3) * rational(d.n1 as i64, n)
        );
        // The decomposed total is the synthesized tally's exact fraction.
        let tally = synthesize_tally(&d);
        let case_b_sum: u64 = SettingPair::case_b().iter().map(|p| tally[p.slot()]).sum();
        prop_assert_eq!(dec.total, rational(case_b_sum as i64, 6 * n));
        if d.n1 == 0 {
            prop_assert_eq!(dec.total, rational(1, 3));
        } else {
            prop_assert!(dec.total > rational(1, 3));
        }
    }

    #[test]
    fn decomposition_increases_with_uniform_color_share(
        n1 in 0u64..10_000,
        bump in 1u64..10_000,
        rest in 1u64..10_000,
    ) {
        // Same total, more G9-1: the case (b) fraction strictly grows.
        let low = DistributionCounts::new(n1, rest + bump, 0, 0);
        let high = DistributionCounts::new(n1 + bump, rest, 0, 0);
        prop_assert_eq!(low.total(), high.total());
        let f_low = decompose_case_b_fraction(&low).unwrap().total;
        let f_high = decompose_case_b_fraction(&high).unwrap().total;
        prop_assert!(f_low < f_high);
    }

    #[test]
    fn every_mixture_sits_on_or_above_the_bound(d in weights_strategy()) {
        let f = mixture_case_b_fraction(&d).unwrap();
        prop_assert!(f >= rational(1, 3));
        // Equality exactly when the uniform-color sets carry no weight.
        let uniform_weight = d.weight("RRR".parse().unwrap()) + d.weight("GGG".parse().unwrap());
        if uniform_weight == rational(0, 1) {
            prop_assert_eq!(f, rational(1, 3));
        } else {
            prop_assert!(f > rational(1, 3));
        }
    }

    #[test]
    fn mixture_statistics_are_mirror_invariant(d in weights_strategy()) {
        let mirrored = d.mirrored();
        prop_assert_eq!(
            mixture_per_pair_fractions(&d).unwrap(),
            mixture_per_pair_fractions(&mirrored).unwrap()
        );
        prop_assert_eq!(
            mixture_case_b_fraction(&d).unwrap(),
            mixture_case_b_fraction(&mirrored).unwrap()
        );
    }

    #[test]
    fn mixture_fractions_agree_with_g9_columns(d in weights_strategy()) {
        // Dual route: per-pair agreement fractions computed from responses
        // must equal the weight put on columns with −1 at that pair.
        let by_responses = mixture_per_pair_fractions(&d).unwrap();
        let total = InstructionSet::all()
            .iter()
            .map(|s| d.weight(*s))
            .sum::<Rational>();
        for (slot, pair) in SettingPair::all().iter().enumerate() {
            let by_columns: Rational = InstructionSet::all()
                .iter()
                .filter(|s| g9_vector(**s).at(*pair) == -1)
                .map(|s| d.weight(*s))
                .sum::<Rational>()
                / total;
            prop_assert_eq!(by_responses[slot], by_columns);
        }
        // Case (a) pairs agree for every distribution.
        for idx in [1usize, 5, 9] {
            prop_assert_eq!(by_responses[idx - 1], rational(1, 1));
        }
    }

    #[test]
    fn uniform_case_b_target_feasible_iff_at_least_one_third(
        num in 0i64..=100,
    ) {
        let f = rational(num, 100);
        let verdict = hull_membership(&HullQuery::uniform_case_b(f)).unwrap();
        prop_assert_eq!(verdict.feasible, f >= rational(1, 3));
        if let Some(w) = verdict.weight_values() {
            let total: Rational = w.iter().copied().sum();
            prop_assert_eq!(total, rational(1, 1));
            // w1 = (3f − 1)/2 pins the unique combination.
            prop_assert_eq!(w[0], (rational(3, 1) * f - rational(1, 1)) / rational(2, 1));
        }
    }

    #[test]
    fn feasible_targets_are_reproduced_exactly(
        w_raw in proptest::array::uniform4(0i64..100),
    ) {
        // Build a point inside the hull from nonnegative weights, then
        // check the solver finds weights that regenerate it.
        prop_assume!(w_raw.iter().sum::<i64>() > 0);
        let total: i64 = w_raw.iter().sum();
        let w: Vec<Rational> = w_raw.iter().map(|x| rational(*x, total)).collect();
        let vertices = HullQuery::vertices();
        let mut target = [rational(0, 1); 9];
        for coord in 0..9 {
            target[coord] = (0..4).map(|i| w[i] * vertices[i][coord]).sum();
        }
        let verdict = hull_membership(&HullQuery::new(target)).unwrap();
        prop_assert!(verdict.feasible);
        let found = verdict.weight_values().unwrap();
        for coord in 0..9 {
            let combo: Rational = (0..4).map(|i| found[i] * vertices[i][coord]).sum();
            prop_assert_eq!(combo, target[coord]);
        }
    }

    #[test]
    fn tally_csv_counts_round_trip(d in counts_strategy()) {
        prop_assume!(d.total() > 0);
        let counts = synthesize_tally(&d);
        let table = TallyTable {
            relation: "23".to_string(),
            n_vectors: d.total(),
            p_minus: 0.25,
            seed: 0,
            rng: "chacha8".to_string(),
            counts,
            column_draws: d.as_array(),
        };
        let parsed = TallyTable::from_csv_counts(&table.to_csv_string()).unwrap();
        prop_assert_eq!(parsed, counts);
    }
}

#[test]
fn recovered_counts_equal_simulator_draw_records() {
    // recover ∘ run_simulation agrees with the simulator's own per-column
    // draw counts, exactly, for every relation.
    for relation in ["23", "26", "27", "28", "34", "36", "38", "46", "47", "48", "67", "78"] {
        let cfg = McConfig {
            relation: relation.to_string(),
            n_vectors: 40_000,
            p_minus: 0.25,
            seed: 2026,
        };
        let tally = run_simulation(&cfg).unwrap();
        let recovered = recover_distribution(&tally).unwrap();
        assert_eq!(
            recovered.as_array(),
            tally.column_draws,
            "relation {relation}"
        );
    }
}

#[test]
fn generated_vectors_keep_case_a_rows_minus() {
    // Structural invariant of every generated tally: case (a) rows equal n.
    let tables = run_all_relations(20_000, 0.4, 77).unwrap();
    for t in tables {
        for idx in [1usize, 5, 9] {
            assert_eq!(t.counts[idx - 1], t.n_vectors);
        }
    }
}

#[test]
fn empirical_outcome_frequencies_track_exact_probabilities() {
    // 4σ guard per outcome, fixed seeds, n = 10⁵ per pair.
    let n = 100_000u64;
    for (pair, seed) in [("11", 31u64), ("12", 32), ("23", 33)] {
        let pair: SettingPair = pair.parse().unwrap();
        let report = run_quantum_experiment(n, SettingPolicy::Fixed(pair), seed).unwrap();
        let counts = report.counts(pair);
        let theta = pair.theta();
        for (outcome, observed) in [
            (JointOutcome::RR, counts.rr),
            (JointOutcome::RG, counts.rg),
            (JointOutcome::GR, counts.gr),
            (JointOutcome::GG, counts.gg),
        ] {
            let p = joint_probability(outcome, theta);
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            let f = observed as f64 / n as f64;
            assert!(
                (f - p).abs() <= 4.0 * sigma.max(1e-9),
                "pair {pair} outcome {outcome}: {f} vs {p}"
            );
        }
    }
}

#[test]
fn instruction_simulation_tracks_mixture_fractions_at_four_sigma() {
    let d: SetDistribution = "GGR:2,RRG:1,GRG:3,RRR:1".parse().unwrap();
    let n = 180_000u64;
    let report = simulate_instruction_sets(&d, n, 404).unwrap();
    let exact = mixture_per_pair_fractions(&d).unwrap();
    for (pair, e) in SettingPair::all().iter().zip(exact) {
        let e = mermin_core::ratio::to_f64(e);
        let n_pair = report.counts(*pair).n as f64;
        let f = report.same_fraction(*pair).unwrap();
        let sigma = (e * (1.0 - e) / n_pair).sqrt();
        assert!(
            (f - e).abs() <= 4.0 * sigma.max(1e-9),
            "pair {pair}: {f} vs {e}"
        );
    }
}

#[test]
fn superdet_scenario_invariants_hold_exactly() {
    let scenario = build_superdet_scenario();
    // Per-set case (b) agreement is 1/4; aggregate dial marginal uniform.
    for s in scenario.sets() {
        assert_eq!(scenario.per_set_case_b_same_fraction(*s), Some(rational(1, 4)));
    }
    assert_eq!(scenario.aggregate_pair_marginal(), [rational(1, 9); 9]);
    // Statistical independence fails: two sets disagree on some pair weight.
    let p: SettingPair = "12".parse().unwrap();
    let w1 = scenario.case_b_weight("RRG".parse().unwrap(), p).unwrap();
    let w2 = scenario.case_b_weight("GRG".parse().unwrap(), p).unwrap();
    assert_ne!(w1, w2);
}

#[test]
fn quantum_trials_iterator_and_chunked_runner_agree_on_structure() {
    // Different streams, same contract: case (a) trials always match.
    let records: Vec<TrialRecord> = sample_trials(SettingPolicy::UniformRandom, 20_000, 8).collect();
    for r in &records {
        if r.pair.case() == CaseLabel::A {
            assert!(r.outcome.is_same());
        }
    }
    let report = FactsReport::from_trials("quantum", "uniform", 8, records);
    assert_eq!(report.case_a_same_fraction(), Some(1.0));
}

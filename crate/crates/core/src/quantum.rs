//! Singlet-state statistics for the Mermin device.
//!
//! The device's joint outcome law depends only on the relative dial angle θ:
//! matching colors occur with probability ½·cos²(θ/2) each for RR and GG,
//! mixed colors with ½·sin²(θ/2) each for RG and GR. At the device's two
//! relative angles this gives Fact 1 (θ = 0°: outcomes always match, half RR
//! and half GG) and Fact 2 (θ = 120°: outcomes match 1/4 of the time,
//! 1/8 RR and 1/8 GG).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::device::{CaseLabel, Color, SettingPair};
use crate::error::{Error, Result};
use crate::ratio::{rational, to_f64, Rational};
use crate::rng::{run_chunked, RNG_NAME};

/// Joint outcome of one trial: Alice's flash and Bob's flash.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JointOutcome {
    pub alice: Color,
    pub bob: Color,
}

impl JointOutcome {
    pub const RR: JointOutcome = JointOutcome { alice: Color::R, bob: Color::R };
    pub const RG: JointOutcome = JointOutcome { alice: Color::R, bob: Color::G };
    pub const GR: JointOutcome = JointOutcome { alice: Color::G, bob: Color::R };
    pub const GG: JointOutcome = JointOutcome { alice: Color::G, bob: Color::G };

    /// The four outcomes in the fixed order RR, RG, GR, GG.
    pub const ALL: [JointOutcome; 4] = [Self::RR, Self::RG, Self::GR, Self::GG];

    pub fn is_same(self) -> bool {
        self.alice == self.bob
    }
}

impl std::fmt::Display for JointOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.alice, self.bob)
    }
}

/// One recorded trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub pair: SettingPair,
    pub outcome: JointOutcome,
    pub trial_index: u64,
}

/// cos²(θ/2) as an exact rational, for the whole-degree angles where the
/// value is rational (the device only ever produces θ = 0° or 120°).
fn half_angle_cos_sq_exact(theta: crate::device::Angle) -> Option<Rational> {
    match theta.degrees() {
        0 => Some(rational(1, 1)),
        60 => Some(rational(3, 4)),
        90 => Some(rational(1, 2)),
        120 => Some(rational(1, 4)),
        180 => Some(rational(0, 1)),
        _ => None,
    }
}

/// Exact joint probability of `outcome` at relative angle `theta`.
///
/// Defined for the angles whose half-angle cosine squared is rational,
/// which covers every angle the device produces.
pub fn joint_probability_exact(
    outcome: JointOutcome,
    theta: crate::device::Angle,
) -> Option<Rational> {
    let c = half_angle_cos_sq_exact(theta)?;
    Some(if outcome.is_same() {
        rational(1, 2) * c
    } else {
        rational(1, 2) * (rational(1, 1) - c)
    })
}

/// Joint probability of `outcome` at relative angle `theta`.
///
/// Matching outcomes: ½·cos²(θ/2); mixed outcomes: ½·sin²(θ/2). Uses the
/// exact rational value where one exists (all such values are dyadic, so
/// the f64 is exact there) and floating-point trig otherwise.
pub fn joint_probability(outcome: JointOutcome, theta: crate::device::Angle) -> f64 {
    if let Some(p) = joint_probability_exact(outcome, theta) {
        return to_f64(p);
    }
    let half = theta.radians() / 2.0;
    if outcome.is_same() {
        0.5 * half.cos().powi(2)
    } else {
        0.5 * half.sin().powi(2)
    }
}

/// How each trial's setting pair is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SettingPolicy {
    /// Alice and Bob dial independently and uniformly; all nine pairs
    /// occur with frequency 1/9.
    UniformRandom,
    /// Every trial uses the same pair.
    Fixed(SettingPair),
}

impl std::fmt::Display for SettingPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SettingPolicy::UniformRandom => write!(f, "uniform"),
            SettingPolicy::Fixed(p) => write!(f, "fixed:{p}"),
        }
    }
}

/// Sample one joint outcome at `pair` by inverse CDF over the four-outcome
/// distribution. Deterministic for a given generator state.
pub fn sample_trial(pair: SettingPair, rng: &mut ChaCha8Rng) -> JointOutcome {
    let theta = pair.theta();
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for outcome in JointOutcome::ALL {
        acc += joint_probability(outcome, theta);
        if u < acc {
            return outcome;
        }
    }
    // Total mass is 1; reachable only through the last outcome's rounding.
    JointOutcome::GG
}

/// Per-pair outcome counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub n: u64,
    pub rr: u64,
    pub rg: u64,
    pub gr: u64,
    pub gg: u64,
}

impl PairCounts {
    pub fn record(&mut self, outcome: JointOutcome) {
        self.n += 1;
        match (outcome.alice, outcome.bob) {
            (Color::R, Color::R) => self.rr += 1,
            (Color::R, Color::G) => self.rg += 1,
            (Color::G, Color::R) => self.gr += 1,
            (Color::G, Color::G) => self.gg += 1,
        }
    }

    pub fn same(&self) -> u64 {
        self.rr + self.gg
    }

    /// Fraction of same-color outcomes, `None` when the pair never occurred.
    pub fn same_fraction(&self) -> Option<f64> {
        (self.n > 0).then(|| self.same() as f64 / self.n as f64)
    }

    pub(crate) fn merge(self, other: PairCounts) -> PairCounts {
        PairCounts {
            n: self.n + other.n,
            rr: self.rr + other.rr,
            rg: self.rg + other.rg,
            gr: self.gr + other.gr,
            gg: self.gg + other.gg,
        }
    }
}

/// Outcome statistics of a run, per setting pair plus case aggregates.
///
/// The report stores raw counts; every fraction is derived from them, so
/// the two can never disagree. Seed and generator identity are recorded so
/// a published run can be reproduced bit for bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactsReport {
    /// Which model produced the run (`quantum`, `instruction-mixture`, ...).
    pub model: String,
    pub policy: String,
    pub n_trials: u64,
    pub seed: u64,
    pub rng: String,
    /// Counts indexed by pair slot (pair order 11, 12, ..., 33).
    pub pairs: [PairCounts; 9],
}

impl FactsReport {
    pub fn new(model: &str, policy: &str, n_trials: u64, seed: u64) -> Self {
        FactsReport {
            model: model.to_string(),
            policy: policy.to_string(),
            n_trials,
            seed,
            rng: RNG_NAME.to_string(),
            pairs: [PairCounts::default(); 9],
        }
    }

    /// Build a report by replaying recorded trials.
    pub fn from_trials(
        model: &str,
        policy: &str,
        seed: u64,
        trials: impl IntoIterator<Item = TrialRecord>,
    ) -> Self {
        let mut report = FactsReport::new(model, policy, 0, seed);
        for t in trials {
            report.pairs[t.pair.slot()].record(t.outcome);
            report.n_trials += 1;
        }
        report
    }

    pub fn counts(&self, pair: SettingPair) -> &PairCounts {
        &self.pairs[pair.slot()]
    }

    pub fn same_fraction(&self, pair: SettingPair) -> Option<f64> {
        self.counts(pair).same_fraction()
    }

    /// Frequency of `pair` among all trials.
    pub fn pair_frequency(&self, pair: SettingPair) -> Option<f64> {
        (self.n_trials > 0).then(|| self.counts(pair).n as f64 / self.n_trials as f64)
    }

    fn aggregate_same_fraction(&self, case: CaseLabel) -> Option<f64> {
        let (mut same, mut n) = (0u64, 0u64);
        for p in SettingPair::all() {
            if p.case() == case {
                same += self.counts(p).same();
                n += self.counts(p).n;
            }
        }
        (n > 0).then(|| same as f64 / n as f64)
    }

    /// Same-color fraction over all case (a) trials.
    pub fn case_a_same_fraction(&self) -> Option<f64> {
        self.aggregate_same_fraction(CaseLabel::A)
    }

    /// Same-color fraction over all case (b) trials.
    pub fn case_b_same_fraction(&self) -> Option<f64> {
        self.aggregate_same_fraction(CaseLabel::B)
    }

    /// Table form: `pair,n,rr,rg,gr,gg,same_fraction`, one row per pair.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("pair,n,rr,rg,gr,gg,same_fraction\n");
        for p in SettingPair::all() {
            let c = self.counts(p);
            let frac = c
                .same_fraction()
                .map(|f| format!("{f}"))
                .unwrap_or_default();
            out.push_str(&format!(
                "{p},{},{},{},{},{},{frac}\n",
                c.n, c.rr, c.rg, c.gr, c.gg
            ));
        }
        out
    }

    pub(crate) fn merge(mut self, other: FactsReport) -> FactsReport {
        self.n_trials += other.n_trials;
        for (a, b) in self.pairs.iter_mut().zip(other.pairs) {
            *a = a.merge(b);
        }
        self
    }
}

impl Default for FactsReport {
    fn default() -> Self {
        FactsReport::new("", "", 0, 0)
    }
}

fn pick_pair(policy: SettingPolicy, rng: &mut ChaCha8Rng) -> SettingPair {
    match policy {
        SettingPolicy::Fixed(p) => p,
        SettingPolicy::UniformRandom => {
            let pairs = SettingPair::all();
            pairs[rng.random_range(0..9)]
        }
    }
}

/// Sequentially generate `n_trials` recorded trials from one stream.
pub fn sample_trials(
    policy: SettingPolicy,
    n_trials: u64,
    seed: u64,
) -> impl Iterator<Item = TrialRecord> {
    let mut rng = crate::rng::rng_from_seed(seed);
    (0..n_trials).map(move |trial_index| {
        let pair = pick_pair(policy, &mut rng);
        let outcome = sample_trial(pair, &mut rng);
        TrialRecord { pair, outcome, trial_index }
    })
}

/// Run the device for `n_trials` and tabulate outcome statistics.
///
/// Chunked and parallel; the result depends only on `(policy, n_trials,
/// seed)`. Rejects `n_trials == 0`.
pub fn run_quantum_experiment(
    n_trials: u64,
    policy: SettingPolicy,
    seed: u64,
) -> Result<FactsReport> {
    if n_trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let merged = run_chunked(
        n_trials,
        seed,
        |rng, len| {
            let mut report = FactsReport::default();
            for _ in 0..len {
                let pair = pick_pair(policy, rng);
                let outcome = sample_trial(pair, rng);
                report.pairs[pair.slot()].record(outcome);
            }
            report.n_trials = len;
            report
        },
        FactsReport::merge,
    );
    Ok(FactsReport {
        model: "quantum".to_string(),
        policy: policy.to_string(),
        seed,
        rng: RNG_NAME.to_string(),
        ..merged
    })
}

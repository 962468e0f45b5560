//! Instruction-set local realism for the Mermin device.
//!
//! An instruction set is a hidden triple of colors carried identically by
//! both particles of a pair; each detector flashes the color the set assigns
//! to its dial. Every two-color set agrees at exactly 2 of the 6 mixed-dial
//! pairs (fraction 1/3), and RRR/GGG agree everywhere, so any mixture agrees
//! in at least 1/3 of case (b) trials — the Bell bound this device makes
//! vivid. The module also builds the set-conditioned dial weighting under
//! which instruction sets reproduce the 1/4 case (b) agreement by violating
//! statistical independence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::device::{CaseLabel, Color, Setting, SettingPair};
use crate::error::{Error, Result};
use crate::quantum::{FactsReport, JointOutcome};
use crate::ratio::{fmt_rational, parse_rational, rational, to_f64, Rational};
use crate::rng::{run_chunked, RNG_NAME};

/// A 3-color response rule: the color produced at settings 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct InstructionSet {
    colors: [Color; 3],
}

impl InstructionSet {
    pub const fn new(colors: [Color; 3]) -> Self {
        InstructionSet { colors }
    }

    /// All 8 sets, ordered by code (RRR, RRG, RGR, RGG, GRR, GRG, GGR, GGG).
    pub fn all() -> [InstructionSet; 8] {
        let mut out = [InstructionSet::new([Color::R; 3]); 8];
        for (code, slot) in out.iter_mut().enumerate() {
            *slot = Self::from_code(code);
        }
        out
    }

    /// 3-bit code with R = 0, G = 1, setting 1 as the high bit.
    pub fn code(self) -> usize {
        self.colors
            .iter()
            .fold(0, |acc, c| (acc << 1) | usize::from(*c == Color::G))
    }

    fn from_code(code: usize) -> Self {
        let bit = |k: usize| {
            if code >> (2 - k) & 1 == 1 {
                Color::G
            } else {
                Color::R
            }
        };
        InstructionSet::new([bit(0), bit(1), bit(2)])
    }

    /// Color produced when a detector dialed to `setting` measures a
    /// particle carrying this set. Both particles respond identically.
    pub fn respond(self, setting: Setting) -> Color {
        self.colors[usize::from(setting.value()) - 1]
    }

    /// Flip all three colors. An involution; a set and its mirror produce
    /// the same agreement pattern.
    pub fn mirror(self) -> InstructionSet {
        InstructionSet::new([
            self.colors[0].mirror(),
            self.colors[1].mirror(),
            self.colors[2].mirror(),
        ])
    }

    /// RRR or GGG.
    pub fn is_uniform_color(self) -> bool {
        self.colors[0] == self.colors[1] && self.colors[1] == self.colors[2]
    }

    /// Do the two detectors flash the same color at `pair`?
    pub fn agrees_at(self, pair: SettingPair) -> bool {
        self.respond(pair.alice()) == self.respond(pair.bob())
    }

    /// Joint outcome this set produces at `pair`.
    pub fn outcome_at(self, pair: SettingPair) -> JointOutcome {
        JointOutcome {
            alice: self.respond(pair.alice()),
            bob: self.respond(pair.bob()),
        }
    }

    /// Exact fraction of the six case (b) pairs where both detectors flash
    /// the same color: 1/3 for every two-color set, 1 for RRR and GGG.
    pub fn case_b_agreement_fraction(self) -> Rational {
        let agree = SettingPair::case_b()
            .iter()
            .filter(|p| self.agrees_at(**p))
            .count() as i64;
        rational(agree, 6)
    }
}

/// Deterministic response of instruction set `s` at `setting`.
pub fn respond(s: InstructionSet, setting: Setting) -> Color {
    s.respond(setting)
}

/// See [`InstructionSet::case_b_agreement_fraction`].
pub fn case_b_agreement_fraction(s: InstructionSet) -> Rational {
    s.case_b_agreement_fraction()
}

impl fmt::Display for InstructionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.colors[0], self.colors[1], self.colors[2])
    }
}

impl FromStr for InstructionSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut colors = [Color::R; 3];
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 3 {
            return Err(Error::ParseInstructionSet(s.to_string()));
        }
        for (slot, c) in colors.iter_mut().zip(chars) {
            *slot = match c {
                'R' => Color::R,
                'G' => Color::G,
                _ => return Err(Error::ParseInstructionSet(s.to_string())),
            };
        }
        Ok(InstructionSet::new(colors))
    }
}

impl TryFrom<String> for InstructionSet {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<InstructionSet> for String {
    fn from(s: InstructionSet) -> String {
        s.to_string()
    }
}

/// A weighting over the 8 instruction sets.
///
/// Weights are exact nonnegative rationals and need not be normalized;
/// every statistic divides by the total, so Bell-bound assertions stay
/// exact. Parses from `"GGR:1,GRG:1,GRR:2"` (weights may be integers or
/// fractions like `1/3`) and from the equivalent JSON object
/// `{"GGR": "1", ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, String>", into = "BTreeMap<String, String>")]
pub struct SetDistribution {
    weights: [Rational; 8],
}

impl SetDistribution {
    /// Build from explicit (set, weight) pairs. Rejects negative weights
    /// and duplicate sets; an all-zero weighting is rejected.
    pub fn from_weights(pairs: &[(InstructionSet, Rational)]) -> Result<Self> {
        let mut weights = [rational(0, 1); 8];
        let mut seen = [false; 8];
        for (set, w) in pairs {
            if *w.numer() < 0 {
                return Err(Error::NegativeWeight {
                    set: set.to_string(),
                    weight: fmt_rational(*w),
                });
            }
            if seen[set.code()] {
                return Err(Error::ParseDistribution(format!("duplicate set {set}")));
            }
            seen[set.code()] = true;
            weights[set.code()] = *w;
        }
        let d = SetDistribution { weights };
        if d.total() == rational(0, 1) {
            return Err(Error::EmptyDistribution);
        }
        Ok(d)
    }

    /// Uniform weighting over all 8 sets.
    pub fn uniform() -> Self {
        SetDistribution { weights: [rational(1, 8); 8] }
    }

    /// Point mass on a single set.
    pub fn pure(set: InstructionSet) -> Self {
        let mut weights = [rational(0, 1); 8];
        weights[set.code()] = rational(1, 1);
        SetDistribution { weights }
    }

    pub fn weight(&self, set: InstructionSet) -> Rational {
        self.weights[set.code()]
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().copied().sum()
    }

    /// Exact weight of `set` after normalization.
    pub fn normalized_weight(&self, set: InstructionSet) -> Rational {
        self.weight(set) / self.total()
    }

    /// True when every set carries the same weight as its mirror, which is
    /// what splits case (a) agreement evenly between RR and GG.
    pub fn is_mirror_balanced(&self) -> bool {
        InstructionSet::all()
            .iter()
            .all(|s| self.weight(*s) == self.weight(s.mirror()))
    }

    /// The same weighting with each set replaced by its mirror.
    pub fn mirrored(&self) -> SetDistribution {
        let mut weights = [rational(0, 1); 8];
        for s in InstructionSet::all() {
            weights[s.mirror().code()] = self.weight(s);
        }
        SetDistribution { weights }
    }

    /// Cumulative normalized weights in code order, for inverse-CDF draws.
    fn cumulative_f64(&self) -> [f64; 8] {
        let total = to_f64(self.total());
        let mut acc = 0.0;
        let mut out = [0.0; 8];
        for (slot, w) in out.iter_mut().zip(&self.weights) {
            acc += to_f64(*w) / total;
            *slot = acc;
        }
        out[7] = 1.0;
        out
    }

    fn sample(&self, cumulative: &[f64; 8], rng: &mut ChaCha8Rng) -> InstructionSet {
        let u: f64 = rng.random();
        let code = cumulative.iter().position(|c| u < *c).unwrap_or(7);
        InstructionSet::from_code(code)
    }
}

impl fmt::Display for SetDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = InstructionSet::all()
            .iter()
            .filter(|s| self.weight(**s) != rational(0, 1))
            .map(|s| format!("{s}:{}", fmt_rational(self.weight(*s))))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for SetDistribution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in s.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (name, weight) = item
                .split_once(':')
                .ok_or_else(|| Error::ParseDistribution(format!("missing ':' in {item:?}")))?;
            let set: InstructionSet = name.trim().parse()?;
            let w = parse_rational(weight)?;
            pairs.push((set, w));
        }
        SetDistribution::from_weights(&pairs)
    }
}

impl TryFrom<BTreeMap<String, String>> for SetDistribution {
    type Error = Error;
    fn try_from(map: BTreeMap<String, String>) -> Result<Self> {
        let mut pairs = Vec::new();
        for (name, weight) in map {
            pairs.push((name.parse()?, parse_rational(&weight)?));
        }
        SetDistribution::from_weights(&pairs)
    }
}

impl From<SetDistribution> for BTreeMap<String, String> {
    fn from(d: SetDistribution) -> Self {
        InstructionSet::all()
            .iter()
            .filter(|s| d.weight(**s) != rational(0, 1))
            .map(|s| (s.to_string(), fmt_rational(d.weight(*s))))
            .collect()
    }
}

/// Exact same-color fraction at each of the nine pairs when every produced
/// set is measured equally often at every pair (statistical independence).
pub fn mixture_per_pair_fractions(d: &SetDistribution) -> Result<[Rational; 9]> {
    let total = d.total();
    if total == rational(0, 1) {
        return Err(Error::EmptyDistribution);
    }
    let mut out = [rational(0, 1); 9];
    for (slot, pair) in out.iter_mut().zip(SettingPair::all()) {
        *slot = InstructionSet::all()
            .iter()
            .filter(|s| s.agrees_at(pair))
            .map(|s| d.weight(*s))
            .sum::<Rational>()
            / total;
    }
    Ok(out)
}

/// Exact case (b) agreement fraction of a mixture: 1/3 on the two-color
/// mass plus 1 on the RRR/GGG mass, hence never below 1/3.
pub fn mixture_case_b_fraction(d: &SetDistribution) -> Result<Rational> {
    let total = d.total();
    if total == rational(0, 1) {
        return Err(Error::EmptyDistribution);
    }
    let weighted: Rational = InstructionSet::all()
        .iter()
        .map(|s| d.weight(*s) * s.case_b_agreement_fraction())
        .sum();
    Ok(weighted / total)
}

/// Simulate the device with hidden instruction sets drawn from `d` and the
/// setting pair drawn uniformly per trial.
pub fn simulate_instruction_sets(
    d: &SetDistribution,
    n_trials: u64,
    seed: u64,
) -> Result<FactsReport> {
    if n_trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if d.total() == rational(0, 1) {
        return Err(Error::EmptyDistribution);
    }
    let cumulative = d.cumulative_f64();
    let pairs = SettingPair::all();
    let merged = run_chunked(
        n_trials,
        seed,
        |rng, len| {
            let mut report = FactsReport::default();
            for _ in 0..len {
                let set = d.sample(&cumulative, rng);
                let pair = pairs[rng.random_range(0..9)];
                report.pairs[pair.slot()].record(set.outcome_at(pair));
            }
            report.n_trials = len;
            report
        },
        FactsReport::merge,
    );
    Ok(FactsReport {
        model: "instruction-mixture".to_string(),
        policy: "uniform".to_string(),
        seed,
        rng: RNG_NAME.to_string(),
        ..merged
    })
}

/// Set-conditioned dial weighting under which the six two-color sets
/// reproduce the 1/4 case (b) agreement.
///
/// Production is uniform over the six two-color sets. Conditional on the
/// emitted set, the two case (b) pairs that complete its doubled class are
/// dialed twice as often as the other four, while the three case (a) pairs
/// keep probability 1/9 each. Aggregated over production the nine pairs
/// stay uniform, so the conspiracy is invisible in the dial marginals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperdetScenario {
    /// The six two-color sets in code order.
    sets: [InstructionSet; 6],
    /// Case (b) weighting per set, aligned with `sets`. Rows are indexed by
    /// the case (b) pairs in pair order (12, 13, 21, 23, 31, 32) and each
    /// row sums to 1.
    #[serde(with = "case_b_weight_rows")]
    case_b_weights: [[Rational; 6]; 6],
}

mod case_b_weight_rows {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::ratio::{fmt_rational, parse_rational, rational, Rational};

    pub fn serialize<S: Serializer>(
        rows: &[[Rational; 6]; 6],
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = rows
            .iter()
            .map(|row| row.iter().map(|r| fmt_rational(*r)).collect())
            .collect();
        serde::Serialize::serialize(&strings, ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<[[Rational; 6]; 6], D::Error> {
        let strings = Vec::<Vec<String>>::deserialize(de)?;
        if strings.len() != 6 || strings.iter().any(|r| r.len() != 6) {
            return Err(serde::de::Error::custom("expected a 6x6 table"));
        }
        let mut out = [[rational(0, 1); 6]; 6];
        for (row, src) in out.iter_mut().zip(&strings) {
            for (slot, s) in row.iter_mut().zip(src) {
                *slot = parse_rational(s).map_err(serde::de::Error::custom)?;
            }
        }
        Ok(out)
    }
}

impl SuperdetScenario {
    pub fn sets(&self) -> &[InstructionSet; 6] {
        &self.sets
    }

    /// Conditional case (b) weight of `pair` given the emitted `set`.
    pub fn case_b_weight(&self, set: InstructionSet, pair: SettingPair) -> Option<Rational> {
        if pair.case() != CaseLabel::B {
            return None;
        }
        let row = self.sets.iter().position(|s| *s == set)?;
        let col = SettingPair::case_b().iter().position(|p| *p == pair)?;
        Some(self.case_b_weights[row][col])
    }

    /// Full conditional dial distribution over the nine pairs given `set`:
    /// 1/9 for each case (a) pair, (2/3) x case-b-weight for the rest.
    pub fn pair_distribution(&self, set: InstructionSet) -> Option<[Rational; 9]> {
        let row = self.sets.iter().position(|s| *s == set)?;
        let mut out = [rational(0, 1); 9];
        let mut b = 0;
        for (slot, pair) in out.iter_mut().zip(SettingPair::all()) {
            *slot = match pair.case() {
                CaseLabel::A => rational(1, 9),
                CaseLabel::B => {
                    let w = self.case_b_weights[row][b];
                    b += 1;
                    rational(2, 3) * w
                }
            };
        }
        Some(out)
    }

    /// Exact case (b) agreement fraction conditional on `set`.
    pub fn per_set_case_b_same_fraction(&self, set: InstructionSet) -> Option<Rational> {
        let row = self.sets.iter().position(|s| *s == set)?;
        Some(
            SettingPair::case_b()
                .iter()
                .enumerate()
                .filter(|(_, p)| set.agrees_at(**p))
                .map(|(k, _)| self.case_b_weights[row][k])
                .sum(),
        )
    }

    /// Dial-pair marginal aggregated over the (uniform) production
    /// distribution; uniform 1/9 per pair for the built scenario.
    pub fn aggregate_pair_marginal(&self) -> [Rational; 9] {
        let mut out = [rational(0, 1); 9];
        for set in self.sets {
            let dist = self.pair_distribution(set).expect("set is in scenario");
            for (slot, p) in out.iter_mut().zip(dist) {
                *slot += rational(1, 6) * p;
            }
        }
        out
    }
}

/// Build the set-conditioned weighting: the emitted set's doubled class is
/// the transposed pair of settings `{odd, odd-1}` (cyclically), where `odd`
/// is the set's minority-color setting. This is the unique assignment of
/// doubled classes to mirror classes that keeps the aggregate dial marginal
/// uniform while giving every set a case (b) agreement fraction of 1/4.
pub fn build_superdet_scenario() -> SuperdetScenario {
    let two_color: Vec<InstructionSet> = InstructionSet::all()
        .into_iter()
        .filter(|s| !s.is_uniform_color())
        .collect();
    let sets: [InstructionSet; 6] = two_color.try_into().expect("six two-color sets");

    let case_b = SettingPair::case_b();
    let mut case_b_weights = [[rational(0, 1); 6]; 6];
    for (row, set) in sets.iter().enumerate() {
        let odd = odd_setting(*set);
        let partner = match odd.value() {
            1 => Setting::S3,
            2 => Setting::S1,
            _ => Setting::S2,
        };
        for (col, pair) in case_b.iter().enumerate() {
            let doubled = {
                let (a, b) = (pair.alice(), pair.bob());
                (a == odd && b == partner) || (a == partner && b == odd)
            };
            case_b_weights[row][col] = if doubled { rational(2, 8) } else { rational(1, 8) };
        }
    }
    SuperdetScenario { sets, case_b_weights }
}

/// The setting where a two-color set shows its minority color.
fn odd_setting(set: InstructionSet) -> Setting {
    for s in Setting::ALL {
        let others: Vec<Color> = Setting::ALL
            .iter()
            .filter(|t| **t != s)
            .map(|t| set.respond(*t))
            .collect();
        if others[0] == others[1] && set.respond(s) != others[0] {
            return s;
        }
    }
    unreachable!("uniform-color set has no odd setting")
}

/// Outcome of a set-conditioned run: device statistics plus the per-set
/// pair counts that exhibit the statistical-independence violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperdetRunReport {
    pub facts: FactsReport,
    /// Trials per (emitted set, dialed pair); rows follow `scenario.sets()`,
    /// columns the pair order.
    pub set_pair_counts: [[u64; 9]; 6],
}

#[derive(Default)]
struct SuperdetAccum {
    facts: FactsReport,
    set_pair_counts: [[u64; 9]; 6],
}

/// Simulate the set-conditioned scenario for `n_trials`.
pub fn simulate_superdet(
    scenario: &SuperdetScenario,
    n_trials: u64,
    seed: u64,
) -> Result<SuperdetRunReport> {
    if n_trials == 0 {
        return Err(Error::ZeroTrials);
    }
    // Cumulative conditional pair distribution per set, in pair order.
    let mut cumulative = [[0.0f64; 9]; 6];
    for (row, set) in scenario.sets.iter().enumerate() {
        let dist = scenario.pair_distribution(*set).expect("set in scenario");
        let mut acc = 0.0;
        for (slot, w) in cumulative[row].iter_mut().zip(dist) {
            acc += to_f64(w);
            *slot = acc;
        }
        cumulative[row][8] = 1.0;
    }
    let pairs = SettingPair::all();
    let sets = scenario.sets;

    let merged = run_chunked(
        n_trials,
        seed,
        |rng, len| {
            let mut acc = SuperdetAccum::default();
            for _ in 0..len {
                let row = rng.random_range(0..6);
                let set = sets[row];
                let u: f64 = rng.random();
                let slot = cumulative[row].iter().position(|c| u < *c).unwrap_or(8);
                let pair = pairs[slot];
                acc.facts.pairs[slot].record(set.outcome_at(pair));
                acc.set_pair_counts[row][slot] += 1;
            }
            acc.facts.n_trials = len;
            acc
        },
        |mut a, b| {
            a.facts = a.facts.merge(b.facts);
            for (row_a, row_b) in a.set_pair_counts.iter_mut().zip(b.set_pair_counts) {
                for (x, y) in row_a.iter_mut().zip(row_b) {
                    *x += y;
                }
            }
            a
        },
    );
    Ok(SuperdetRunReport {
        facts: FactsReport {
            model: "superdet".to_string(),
            policy: "set-conditioned".to_string(),
            seed,
            rng: RNG_NAME.to_string(),
            ..merged.facts
        },
        set_pair_counts: merged.set_pair_counts,
    })
}

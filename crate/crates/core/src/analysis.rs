//! Adjudication layer: recover the G9 distribution behind a tally, verify
//! the Different/Same and 1/3 + excess identities, and decide convex-hull
//! membership of a target correlation vector.
//!
//! Everything here is exact rational or integer arithmetic; floating point
//! appears only when rendering.

use serde::{Deserialize, Serialize};

use crate::device::{CaseLabel, SettingPair};
use crate::error::{Error, Result};
use crate::monte_carlo::TallyTable;
use crate::ratio::{fmt_rational, rational, Rational};
use crate::realm::{G9Label, G9Vector};
use crate::solve::{solve_exact, Solution};

/// Occurrence counts of the four G9 columns behind a tally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionCounts {
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub n4: u64,
}

impl DistributionCounts {
    pub fn new(n1: u64, n2: u64, n3: u64, n4: u64) -> Self {
        DistributionCounts { n1, n2, n3, n4 }
    }

    pub fn total(&self) -> u64 {
        self.n1 + self.n2 + self.n3 + self.n4
    }

    pub fn count(&self, label: G9Label) -> u64 {
        match label {
            G9Label::G1 => self.n1,
            G9Label::G2 => self.n2,
            G9Label::G3 => self.n3,
            G9Label::G4 => self.n4,
        }
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.n1, self.n2, self.n3, self.n4]
    }
}

/// The exact tally a batch of G9 vectors with these counts produces:
/// each pair's count is the sum of the drawing columns' −1 indicators.
pub fn synthesize_tally(d: &DistributionCounts) -> [u64; 9] {
    let mut counts = [0u64; 9];
    for label in G9Label::ALL {
        let n = d.count(label);
        for (slot, e) in counts.iter_mut().zip(label.vector().entries()) {
            if e == -1 {
                *slot += n;
            }
        }
    }
    counts
}

fn slot(pair: &str) -> usize {
    pair.parse::<SettingPair>().expect("valid pair literal").slot()
}

/// Recover (N1, N2, N3, N4) from a 9-count tally of `n` G9 vectors.
///
/// Solves the linear system N1+N2 = count(12), N1+N3 = count(13),
/// N1+N4 = count(23), ΣNi = n in closed form with exact integers, then
/// verifies that the recovered counts reproduce the entire tally. Any
/// failure (case (a) counts ≠ n, fractional or negative solution,
/// transposed-pair mismatch) means the tally was not generated by G9
/// vectors and is rejected.
pub fn recover_from_counts(counts: &[u64; 9], n: u64) -> Result<DistributionCounts> {
    let c12 = counts[slot("12")] as i128;
    let c13 = counts[slot("13")] as i128;
    let c23 = counts[slot("23")] as i128;
    let sum = c12 + c13 + c23;
    let twice_n1 = sum - n as i128;
    if twice_n1 < 0 {
        return Err(Error::InconsistentTally(format!(
            "counts at 12, 13, 23 sum to {sum}, below n = {n}"
        )));
    }
    if twice_n1 % 2 != 0 {
        return Err(Error::InconsistentTally(format!(
            "counts at 12, 13, 23 minus n is odd ({twice_n1}), so N1 is not an integer"
        )));
    }
    let n1 = twice_n1 / 2;
    let (n2, n3, n4) = (c12 - n1, c13 - n1, c23 - n1);
    for (name, v) in [("N2", n2), ("N3", n3), ("N4", n4)] {
        if v < 0 {
            return Err(Error::InconsistentTally(format!("{name} = {v} is negative")));
        }
    }
    let d = DistributionCounts::new(n1 as u64, n2 as u64, n3 as u64, n4 as u64);
    let synthesized = synthesize_tally(&d);
    let mismatch = SettingPair::all()
        .into_iter()
        .find(|p| counts[p.slot()] != synthesized[p.slot()]);
    if let Some(pair) = mismatch {
        return Err(Error::InconsistentTally(format!(
            "count at pair {pair} is {}, but the recovered counts imply {}",
            counts[pair.slot()],
            synthesized[pair.slot()]
        )));
    }
    Ok(d)
}

/// Recover the G9 distribution behind a simulation tally.
pub fn recover_distribution(t: &TallyTable) -> Result<DistributionCounts> {
    recover_from_counts(&t.counts, t.n_vectors)
}

/// Case (b) agreement bookkeeping for the two-color columns alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SameDifferent {
    /// Case (b) −1 results contributed by G9-2/3/4: each contributes 2.
    pub same: u64,
    /// Case (b) +1 results, all from G9-2/3/4: each contributes 4.
    pub different: u64,
    /// different / same, exactly 2 whenever defined.
    #[serde(with = "crate::ratio::serde_rational")]
    pub ratio: Rational,
}

/// Subtract the uniform-color column's contribution and take the ratio of
/// mixed to matching case (b) results: exactly 2 for any distribution with
/// at least one two-color vector. An all-G9-1 distribution is rejected as
/// undefined.
pub fn same_different_ratio(d: &DistributionCounts) -> Result<SameDifferent> {
    let two_color = d.n2 + d.n3 + d.n4;
    if two_color == 0 {
        return Err(Error::RatioUndefined);
    }
    let same = 2 * two_color;
    let different = 4 * two_color;
    Ok(SameDifferent {
        same,
        different,
        ratio: rational(different as i64, same as i64),
    })
}

/// The case (b) same-outcome fraction split into the two-color floor and
/// the uniform-color excess.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseBDecomposition {
    /// Always 1/3: the two-color columns' exact agreement rate.
    #[serde(with = "crate::ratio::serde_rational")]
    pub base: Rational,
    /// (2/3)·(N1/n): what the uniform-color column adds.
    #[serde(with = "crate::ratio::serde_rational")]
    pub excess: Rational,
    /// base + excess; equals the tally's case (b) fraction exactly.
    #[serde(with = "crate::ratio::serde_rational")]
    pub total: Rational,
}

/// Decompose the case (b) fraction as 1/3 + (2/3)(N1/n).
pub fn decompose_case_b_fraction(d: &DistributionCounts) -> Result<CaseBDecomposition> {
    let n = d.total();
    if n == 0 {
        return Err(Error::ZeroTrials);
    }
    let base = rational(1, 3);
    let excess = rational(2, 3) * rational(d.n1 as i64, n as i64);
    Ok(CaseBDecomposition { base, excess, total: base + excess })
}

/// A hull-membership query: can the target same-outcome fractions be
/// written as a convex combination of the four G9 fraction columns?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullQuery {
    /// Per-pair same-outcome fractions, in pair order. Case (a) components
    /// must be exactly 1.
    #[serde(with = "crate::ratio::serde_rational_array")]
    pub target: [Rational; 9],
}

impl HullQuery {
    pub fn new(target: [Rational; 9]) -> Self {
        HullQuery { target }
    }

    /// Target with every case (b) component equal to `f` (case (a) = 1).
    pub fn uniform_case_b(f: Rational) -> Self {
        let mut target = [rational(1, 1); 9];
        for p in SettingPair::case_b() {
            target[p.slot()] = f;
        }
        HullQuery { target }
    }

    /// The vertex set: the four G9 columns mapped to fraction space.
    pub fn vertices() -> [[Rational; 9]; 4] {
        G9Label::ALL.map(|label| label.vector().fraction_vector())
    }

    /// Target matching one G9 column exactly.
    pub fn vertex(label: G9Label) -> Self {
        HullQuery { target: label.vector().fraction_vector() }
    }
}

/// Why a target lies outside the hull.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HullCertificate {
    /// The unique affine combination exists but needs a negative weight.
    NegativeWeight {
        label: G9Label,
        #[serde(with = "crate::ratio::serde_rational")]
        weight: Rational,
    },
    /// No affine combination reproduces the target; the equation at `pair`
    /// is the one that fails.
    NoExactCombination { pair: SettingPair },
}

impl std::fmt::Display for HullCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HullCertificate::NegativeWeight { label, weight } => {
                write!(f, "w{} = {} < 0", label.slot() + 1, fmt_rational(*weight))
            }
            HullCertificate::NoExactCombination { pair } => {
                write!(f, "no exact combination matches the target at pair {pair}")
            }
        }
    }
}

/// Verdict of a hull-membership query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullVerdict {
    pub feasible: bool,
    /// Convex weights on G9-1..G9-4 when feasible.
    pub weights: Option<[String; 4]>,
    pub certificate: Option<HullCertificate>,
}

impl HullVerdict {
    fn feasible(weights: [Rational; 4]) -> Self {
        HullVerdict {
            feasible: true,
            weights: Some(weights.map(fmt_rational)),
            certificate: None,
        }
    }

    fn infeasible(certificate: HullCertificate) -> Self {
        HullVerdict { feasible: false, weights: None, certificate: Some(certificate) }
    }

    /// Parsed weights, when feasible.
    pub fn weight_values(&self) -> Option<[Rational; 4]> {
        let strings = self.weights.as_ref()?;
        let mut out = [rational(0, 1); 4];
        for (slot, s) in out.iter_mut().zip(strings) {
            *slot = crate::ratio::parse_rational(s).ok()?;
        }
        Some(out)
    }
}

/// Decide hull membership by exact linear solve plus a sign check.
///
/// The four vertices are affinely independent, so the nine coordinate
/// equations plus normalization pin the weights uniquely whenever any
/// affine combination exists; membership then reduces to nonnegativity.
/// Targets whose case (a) components differ from 1 are rejected.
pub fn hull_membership(q: &HullQuery) -> Result<HullVerdict> {
    for p in SettingPair::all() {
        if p.case() == CaseLabel::A && q.target[p.slot()] != rational(1, 1) {
            return Err(Error::CaseATargetNotUnit {
                pair: p.to_string(),
                value: fmt_rational(q.target[p.slot()]),
            });
        }
    }
    let vertices = HullQuery::vertices();
    // Rows 0..9: coordinate equations; row 9: weights sum to 1.
    let mut a: Vec<Vec<Rational>> = (0..9)
        .map(|coord| vertices.iter().map(|v| v[coord]).collect())
        .collect();
    let mut b: Vec<Rational> = q.target.to_vec();
    a.push(vec![rational(1, 1); 4]);
    b.push(rational(1, 1));

    match solve_exact(&a, &b) {
        Solution::Unique(w) => {
            for (label, weight) in G9Label::ALL.iter().zip(&w) {
                if *weight.numer() < 0 {
                    return Ok(HullVerdict::infeasible(HullCertificate::NegativeWeight {
                        label: *label,
                        weight: *weight,
                    }));
                }
            }
            let weights: [Rational; 4] = [w[0], w[1], w[2], w[3]];
            Ok(HullVerdict::feasible(weights))
        }
        Solution::Inconsistent { row } => {
            let pair = SettingPair::from_index(row + 1).unwrap_or_else(|_| {
                // Row 9 is the normalization row; it cannot fail alone, but
                // map it somewhere deterministic if it ever does.
                SettingPair::from_index(1).expect("pair 11 exists")
            });
            Ok(HullVerdict::infeasible(HullCertificate::NoExactCombination { pair }))
        }
        Solution::Underdetermined => Err(Error::DegenerateVertices),
    }
}

/// Same-outcome fraction vector of a tally, for hull queries.
pub fn tally_fraction_target(counts: &[u64; 9], n: u64) -> Result<[Rational; 9]> {
    if n == 0 {
        return Err(Error::ZeroTrials);
    }
    let mut out = [rational(0, 1); 9];
    for (slot, c) in out.iter_mut().zip(counts) {
        *slot = rational(*c as i64, n as i64);
    }
    Ok(out)
}

/// Check that a G9 vector batch honors the structural constraint that
/// case (a) rows are always −1.
pub fn case_a_rows_all_minus(v: &G9Vector) -> bool {
    [1usize, 5, 9]
        .iter()
        .all(|r| v.at_row(*r).expect("valid row") == -1)
}

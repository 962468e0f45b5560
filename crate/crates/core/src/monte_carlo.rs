//! Monte Carlo tallies of G9 vectors generated through a functional
//! relation's domain.
//!
//! Each generated vector starts from two independent ±1 domain values
//! (each −1 with probability `p_minus`, 0.25 by default, so matching
//! outcomes appear in the domain rows about a quarter of the time); the
//! relation maps the pair to one of the four G9 columns, and the tally
//! accumulates the −1 count per setting pair. One million vectors stand in
//! for nine million device trials. At `p_minus` = 1/4 the expected case (b)
//! same-outcome fraction is exactly 3/8: the uniform-color column arrives
//! with probability 1/16 and every column contributes 1/3 otherwise.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::device::{CaseLabel, SettingPair};
use crate::error::{Error, Result};
use crate::ratio::{rational, Rational};
use crate::realm::{
    build_realm_matrix, enumerate_functional_relations, relation_by_label, FunctionalRelation,
    G9Label,
};
use crate::rng::{derive_seed, run_chunked, RNG_NAME};

/// Configuration of one tally run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    /// Digraph label of the functional relation, e.g. "23".
    pub relation: String,
    pub n_vectors: u64,
    /// Probability that a domain coordinate is −1.
    pub p_minus: f64,
    pub seed: u64,
}

impl McConfig {
    pub fn new(relation: &str, seed: u64) -> Self {
        McConfig {
            relation: relation.to_string(),
            n_vectors: 1_000_000,
            p_minus: 0.25,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_vectors == 0 {
            return Err(Error::ZeroTrials);
        }
        if !(0.0..=1.0).contains(&self.p_minus) || self.p_minus.is_nan() {
            return Err(Error::InvalidProbability(self.p_minus));
        }
        Ok(())
    }
}

/// Per-pair −1 counts over a run of generated G9 vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallyTable {
    pub relation: String,
    pub n_vectors: u64,
    pub p_minus: f64,
    pub seed: u64,
    pub rng: String,
    /// Number of −1 results per setting pair, in pair order.
    pub counts: [u64; 9],
    /// How often each column was drawn, in label order; kept as an
    /// independent record so the tally can be cross-checked.
    pub column_draws: [u64; 4],
}

impl TallyTable {
    pub fn count(&self, pair: SettingPair) -> u64 {
        self.counts[pair.slot()]
    }

    /// Table layout: header of pair labels, one row of counts.
    pub fn to_csv_string(&self) -> String {
        let header: Vec<String> = SettingPair::all().iter().map(|p| p.to_string()).collect();
        let row: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        format!("{}\n{}\n", header.join(","), row.join(","))
    }

    /// Parse a 9-count table in the CSV layout written by `to_csv_string`.
    /// Configuration fields are not recoverable from the CSV and default.
    pub fn from_csv_counts(text: &str) -> Result<[u64; 9]> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        {
            let headers = reader.headers()?.clone();
            let expected: Vec<String> =
                SettingPair::all().iter().map(|p| p.to_string()).collect();
            if headers.iter().collect::<Vec<_>>() != expected {
                return Err(Error::Csv(format!(
                    "expected header {}, got {:?}",
                    expected.join(","),
                    headers
                )));
            }
        }
        let record = reader
            .records()
            .next()
            .ok_or_else(|| Error::Csv("missing counts row".to_string()))??;
        let mut counts = [0u64; 9];
        for (slot, field) in counts.iter_mut().zip(record.iter()) {
            *slot = field
                .trim()
                .parse()
                .map_err(|_| Error::Csv(format!("bad count {field:?}")))?;
        }
        Ok(counts)
    }
}

/// Fraction of −1 results over all case (b) cells of a tally.
pub fn case_b_same_fraction(t: &TallyTable) -> f64 {
    case_b_fraction_of_counts(&t.counts, t.n_vectors)
}

/// As [`case_b_same_fraction`], for a bare counts table.
pub fn case_b_fraction_of_counts(counts: &[u64; 9], n: u64) -> f64 {
    let sum: u64 = SettingPair::all()
        .iter()
        .filter(|p| p.case() == CaseLabel::B)
        .map(|p| counts[p.slot()])
        .sum();
    sum as f64 / (6 * n) as f64
}

/// Exact expected case (b) same-outcome fraction for a domain-coordinate
/// −1 probability of `p_minus`: p² + (1 − p²)/3, which is 3/8 at p = 1/4.
pub fn expected_case_b_same_fraction(p_minus: Rational) -> Rational {
    let p1 = p_minus * p_minus;
    p1 + (rational(1, 1) - p1) * rational(1, 3)
}

struct Accum {
    counts: [u64; 9],
    column_draws: [u64; 4],
}

impl Default for Accum {
    fn default() -> Self {
        Accum { counts: [0; 9], column_draws: [0; 4] }
    }
}

fn run_with_relation(cfg: &McConfig, relation: &FunctionalRelation) -> TallyTable {
    // Precomputed −1 indicators per column, so the hot loop is table adds.
    let indicators: [[u64; 9]; 4] = G9Label::ALL.map(|label| {
        label
            .vector()
            .entries()
            .map(|e| if e == -1 { 1u64 } else { 0 })
    });
    let lookup: [G9Label; 4] = {
        let mut out = [G9Label::G1; 4];
        for (slot, (a, b)) in out
            .iter_mut()
            .zip([(-1i8, -1i8), (-1, 1), (1, -1), (1, 1)])
        {
            *slot = relation.apply(a, b).expect("±1 domain");
        }
        out
    };
    let p = cfg.p_minus;

    let merged = run_chunked(
        cfg.n_vectors,
        cfg.seed,
        |rng, len| {
            let mut acc = Accum::default();
            for _ in 0..len {
                let a = usize::from(rng.random::<f64>() >= p);
                let b = usize::from(rng.random::<f64>() >= p);
                let label = lookup[a * 2 + b];
                acc.column_draws[label.slot()] += 1;
                let ind = &indicators[label.slot()];
                for (c, i) in acc.counts.iter_mut().zip(ind) {
                    *c += i;
                }
            }
            acc
        },
        |mut x, y| {
            for (a, b) in x.counts.iter_mut().zip(y.counts) {
                *a += b;
            }
            for (a, b) in x.column_draws.iter_mut().zip(y.column_draws) {
                *a += b;
            }
            x
        },
    );
    TallyTable {
        relation: relation.label(),
        n_vectors: cfg.n_vectors,
        p_minus: cfg.p_minus,
        seed: cfg.seed,
        rng: RNG_NAME.to_string(),
        counts: merged.counts,
        column_draws: merged.column_draws,
    }
}

/// Generate `cfg.n_vectors` G9 vectors through the configured relation and
/// tally −1 results per setting pair. Deterministic per seed; rejects an
/// unknown relation label.
pub fn run_simulation(cfg: &McConfig) -> Result<TallyTable> {
    cfg.validate()?;
    let matrix = build_realm_matrix();
    let relation = relation_by_label(&matrix, &cfg.relation)?;
    Ok(run_with_relation(cfg, &relation))
}

/// Run all twelve relations in label order with per-relation sub-seeds
/// derived as `derive_seed(master_seed, label-as-number)`.
pub fn run_all_relations(n_vectors: u64, p_minus: f64, master_seed: u64) -> Result<Vec<TallyTable>> {
    let probe = McConfig {
        relation: "23".to_string(),
        n_vectors,
        p_minus,
        seed: master_seed,
    };
    probe.validate()?;
    let matrix = build_realm_matrix();
    Ok(enumerate_functional_relations(&matrix)
        .iter()
        .map(|relation| {
            let label_num: u64 = relation.label().parse().expect("numeric label");
            let cfg = McConfig {
                relation: relation.label(),
                n_vectors,
                p_minus,
                seed: derive_seed(master_seed, label_num),
            };
            run_with_relation(&cfg, relation)
        })
        .collect())
}

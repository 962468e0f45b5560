//! Consolidated run: every model, tally, identity, and hull verdict in one
//! document, reproducible from a single seed.

use serde::{Deserialize, Serialize};

use crate::analysis::{
    decompose_case_b_fraction, hull_membership, recover_distribution, same_different_ratio,
    CaseBDecomposition, DistributionCounts, HullQuery, HullVerdict, SameDifferent,
};
use crate::device::SettingPair;
use crate::error::Result;
use crate::instructions::{
    build_superdet_scenario, mixture_case_b_fraction, mixture_per_pair_fractions,
    simulate_superdet, InstructionSet, SetDistribution, SuperdetRunReport, SuperdetScenario,
};
use crate::monte_carlo::{case_b_same_fraction, run_all_relations, TallyTable};
use crate::quantum::{run_quantum_experiment, FactsReport, SettingPolicy};
use crate::ratio::{fmt_rational, rational, to_f64, Rational};
use crate::realm::{build_realm_matrix, enumerate_functional_relations, RealmMatrix};
use crate::rng::derive_seed;

/// Parameters of a consolidated run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub seed: u64,
    /// Device trials for the quantum and set-conditioned runs.
    pub n_trials: u64,
    /// G9 vectors per Monte Carlo relation run.
    pub n_vectors: u64,
    pub p_minus: f64,
}

impl ReportConfig {
    pub fn new(seed: u64) -> Self {
        ReportConfig { seed, n_trials: 9_000_000, n_vectors: 1_000_000, p_minus: 0.25 }
    }
}

/// Case (b) agreement of each instruction set, by enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellBoundSection {
    /// (set, exact case (b) agreement fraction) for all eight sets.
    pub per_set: Vec<(String, String)>,
    /// The enumerated minimum: 1/3.
    pub minimum: String,
}

/// Exact statistics of the 1:1:2 two-color mixture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixtureSection {
    pub distribution: SetDistribution,
    #[serde(with = "crate::ratio::serde_rational_array")]
    pub per_pair_fractions: [Rational; 9],
    #[serde(with = "crate::ratio::serde_rational")]
    pub case_b_fraction: Rational,
}

/// The set-conditioned weighting and a simulated run of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperdetSection {
    pub scenario: SuperdetScenario,
    pub run: SuperdetRunReport,
}

/// The realm matrix and its functional relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealmSection {
    pub matrix: RealmMatrix,
    /// (digraph label, setting-pair name) for the twelve relations.
    pub relations: Vec<(String, String)>,
    /// The three excluded row pairs, as setting-pair names.
    pub excluded: Vec<String>,
}

/// Recovery and identities for one relation's tally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoverySection {
    pub relation: String,
    pub counts: DistributionCounts,
    pub same_different: SameDifferent,
    pub decomposition: CaseBDecomposition,
    pub case_b_fraction: f64,
}

/// A named hull query and its verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedHullVerdict {
    pub name: String,
    pub query: HullQuery,
    pub verdict: HullVerdict,
}

/// The consolidated document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullReport {
    pub config: ReportConfig,
    pub quantum: FactsReport,
    pub bell_bound: BellBoundSection,
    pub mixture: MixtureSection,
    pub superdet: SuperdetSection,
    pub realm: RealmSection,
    pub monte_carlo: Vec<TallyTable>,
    pub recovery: Vec<RecoverySection>,
    pub hull: Vec<NamedHullVerdict>,
}

/// The 1:1:2 mixture of the three two-color classes.
pub fn one_one_two_distribution() -> SetDistribution {
    "GGR:1,GRG:1,GRR:2".parse().expect("valid literal")
}

/// Run every component and assemble the document.
///
/// Component sub-seeds are derived from the master seed with fixed indices
/// (quantum 101, set-conditioned run 102, Monte Carlo master 103), so the
/// whole document is a pure function of the config.
pub fn full_report(config: ReportConfig) -> Result<FullReport> {
    let quantum = run_quantum_experiment(
        config.n_trials,
        SettingPolicy::UniformRandom,
        derive_seed(config.seed, 101),
    )?;

    let per_set: Vec<(String, String)> = InstructionSet::all()
        .iter()
        .map(|s| (s.to_string(), fmt_rational(s.case_b_agreement_fraction())))
        .collect();
    let minimum = InstructionSet::all()
        .iter()
        .map(|s| s.case_b_agreement_fraction())
        .min()
        .expect("eight sets");
    let bell_bound = BellBoundSection { per_set, minimum: fmt_rational(minimum) };

    let distribution = one_one_two_distribution();
    let mixture = MixtureSection {
        per_pair_fractions: mixture_per_pair_fractions(&distribution)?,
        case_b_fraction: mixture_case_b_fraction(&distribution)?,
        distribution,
    };

    let scenario = build_superdet_scenario();
    let run = simulate_superdet(&scenario, config.n_trials, derive_seed(config.seed, 102))?;
    let superdet = SuperdetSection { scenario, run };

    let matrix = build_realm_matrix();
    let relations = enumerate_functional_relations(&matrix)
        .iter()
        .map(|r| (r.label(), r.pair_name()))
        .collect();
    let realm = RealmSection {
        matrix,
        relations,
        excluded: vec!["12&21".into(), "13&31".into(), "23&32".into()],
    };

    let monte_carlo =
        run_all_relations(config.n_vectors, config.p_minus, derive_seed(config.seed, 103))?;

    let recovery = monte_carlo
        .iter()
        .map(|t| {
            let counts = recover_distribution(t)?;
            Ok(RecoverySection {
                relation: t.relation.clone(),
                counts,
                same_different: same_different_ratio(&counts)?,
                decomposition: decompose_case_b_fraction(&counts)?,
                case_b_fraction: case_b_same_fraction(t),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let hull = vec![
        named_hull("uniform case (b) 1/4 (device statistics)", rational(1, 4))?,
        named_hull("uniform case (b) 3/8 (tally statistics)", rational(3, 8))?,
    ];

    Ok(FullReport {
        config,
        quantum,
        bell_bound,
        mixture,
        superdet,
        realm,
        monte_carlo,
        recovery,
        hull,
    })
}

fn named_hull(name: &str, f: Rational) -> Result<NamedHullVerdict> {
    let query = HullQuery::uniform_case_b(f);
    let verdict = hull_membership(&query)?;
    Ok(NamedHullVerdict { name: name.to_string(), query, verdict })
}

fn md_row(cells: &[String]) -> String {
    format!("| {} |\n", cells.join(" | "))
}

fn md_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = md_row(header);
    out.push_str(&md_row(&vec!["---".to_string(); header.len()]));
    for row in rows {
        out.push_str(&md_row(row));
    }
    out.push('\n');
    out
}

fn pair_header(first: &str) -> Vec<String> {
    let mut h = vec![first.to_string()];
    h.extend(SettingPair::all().iter().map(|p| p.to_string()));
    h
}

impl FullReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable rendering with one table per section.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let cfg = &self.config;
        out.push_str("# Mermin device report\n\n");
        out.push_str(&format!(
            "seed: {} | rng: {} | device trials: {} | vectors per relation: {} | p_minus: {}\n\n",
            cfg.seed, self.quantum.rng, cfg.n_trials, cfg.n_vectors, cfg.p_minus
        ));

        out.push_str("## Quantum run: same-color fraction per setting pair\n\n");
        let mut row = vec!["fraction".to_string()];
        row.extend(SettingPair::all().iter().map(|p| {
            self.quantum
                .same_fraction(*p)
                .map(|f| format!("{f:.4}"))
                .unwrap_or_else(|| "n/a".into())
        }));
        out.push_str(&md_table(&pair_header("quantum"), &[row]));
        out.push_str(&format!(
            "case (a) aggregate: {} | case (b) aggregate: {}\n\n",
            self.quantum
                .case_a_same_fraction()
                .map(|f| format!("{f:.6}"))
                .unwrap_or_else(|| "n/a".into()),
            self.quantum
                .case_b_same_fraction()
                .map(|f| format!("{f:.6}"))
                .unwrap_or_else(|| "n/a".into()),
        ));

        out.push_str("## Instruction sets: case (b) agreement by enumeration\n\n");
        let rows: Vec<Vec<String>> = self
            .bell_bound
            .per_set
            .iter()
            .map(|(s, f)| vec![s.clone(), f.clone()])
            .collect();
        out.push_str(&md_table(&["set".into(), "case (b) agreement".into()], &rows));
        out.push_str(&format!(
            "minimum over all sets: {} — no mixture can agree less often\n\n",
            self.bell_bound.minimum
        ));

        out.push_str("## 1:1:2 two-color mixture: exact same-color fractions\n\n");
        let mut row = vec![self.mixture.distribution.to_string()];
        row.extend(
            self.mixture
                .per_pair_fractions
                .iter()
                .map(|f| format!("{:.2}", to_f64(*f))),
        );
        out.push_str(&md_table(&pair_header("mixture"), &[row]));
        out.push_str(&format!(
            "case (b) total: {}\n\n",
            fmt_rational(self.mixture.case_b_fraction)
        ));

        out.push_str("## Set-conditioned dial weighting\n\n");
        out.push_str("Case (b) dial weights conditional on the emitted set:\n\n");
        let mut header = vec!["set".to_string()];
        header.extend(SettingPair::case_b().iter().map(|p| p.to_string()));
        let rows: Vec<Vec<String>> = self
            .superdet
            .scenario
            .sets()
            .iter()
            .map(|s| {
                let mut row = vec![s.to_string()];
                row.extend(SettingPair::case_b().iter().map(|p| {
                    fmt_rational(
                        self.superdet
                            .scenario
                            .case_b_weight(*s, *p)
                            .expect("case (b) pair"),
                    )
                }));
                row
            })
            .collect();
        out.push_str(&md_table(&header, &rows));
        let facts = &self.superdet.run.facts;
        let mut row = vec!["fraction".to_string()];
        row.extend(SettingPair::all().iter().map(|p| {
            facts
                .same_fraction(*p)
                .map(|f| format!("{f:.4}"))
                .unwrap_or_else(|| "n/a".into())
        }));
        out.push_str("Simulated same-color fraction per pair:\n\n");
        out.push_str(&md_table(&pair_header("run"), &[row]));
        out.push_str(&format!(
            "case (a): {} | case (b): {} — both device facts from instruction sets, \
             at the price of set-dependent dial frequencies\n\n",
            facts
                .case_a_same_fraction()
                .map(|f| format!("{f:.6}"))
                .unwrap_or_else(|| "n/a".into()),
            facts
                .case_b_same_fraction()
                .map(|f| format!("{f:.6}"))
                .unwrap_or_else(|| "n/a".into()),
        ));

        out.push_str("## Realm matrix R9-4\n\n");
        let rows: Vec<Vec<String>> = self
            .realm
            .matrix
            .columns()
            .iter()
            .map(|c| {
                let mut row = vec![
                    c.label.to_string(),
                    format!("{} {}", c.sources.0, c.sources.1),
                ];
                row.extend(c.vector.entries().iter().map(|e| format!("{e:+}")));
                row
            })
            .collect();
        let mut header = vec!["column".to_string(), "sets".to_string()];
        header.extend(SettingPair::all().iter().map(|p| p.to_string()));
        out.push_str(&md_table(&header, &rows));
        out.push_str(&format!(
            "functional relations ({}): {}\n\nexcluded row pairs: {}\n\n",
            self.realm.relations.len(),
            self.realm
                .relations
                .iter()
                .map(|(l, p)| format!("{l} ({p})"))
                .collect::<Vec<_>>()
                .join(", "),
            self.realm.excluded.join(", ")
        ));

        out.push_str("## Monte Carlo tallies: total −1 results per setting pair\n\n");
        let rows: Vec<Vec<String>> = self
            .monte_carlo
            .iter()
            .map(|t| {
                let mut row = vec![t.relation.clone()];
                row.extend(t.counts.iter().map(|c| c.to_string()));
                row
            })
            .collect();
        out.push_str(&md_table(&pair_header("relation"), &rows));

        out.push_str("## Recovered G9 distributions and identities\n\n");
        let rows: Vec<Vec<String>> = self
            .recovery
            .iter()
            .map(|r| {
                vec![
                    r.relation.clone(),
                    r.counts.n1.to_string(),
                    r.counts.n2.to_string(),
                    r.counts.n3.to_string(),
                    r.counts.n4.to_string(),
                    r.same_different.same.to_string(),
                    r.same_different.different.to_string(),
                    fmt_rational(r.same_different.ratio),
                    format!("{:.6}", r.case_b_fraction),
                    format!(
                        "{} + {}",
                        fmt_rational(r.decomposition.base),
                        fmt_rational(r.decomposition.excess)
                    ),
                ]
            })
            .collect();
        out.push_str(&md_table(
            &[
                "relation".into(),
                "N1".into(),
                "N2".into(),
                "N3".into(),
                "N4".into(),
                "same".into(),
                "different".into(),
                "different/same".into(),
                "case (b) fraction".into(),
                "decomposition".into(),
            ],
            &rows,
        ));

        out.push_str("## Hull membership\n\n");
        let rows: Vec<Vec<String>> = self
            .hull
            .iter()
            .map(|h| {
                vec![
                    h.name.clone(),
                    if h.verdict.feasible { "inside".into() } else { "outside".into() },
                    h.verdict
                        .weights
                        .as_ref()
                        .map(|w| w.join(", "))
                        .unwrap_or_else(|| "—".into()),
                    h.verdict
                        .certificate
                        .as_ref()
                        .map(|c| c.to_string())
                        .unwrap_or_else(|| "—".into()),
                ]
            })
            .collect();
        out.push_str(&md_table(
            &["target".into(), "verdict".into(), "weights".into(), "certificate".into()],
            &rows,
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::parse_rational;

    fn small_config() -> ReportConfig {
        ReportConfig { seed: 1234, n_trials: 90_000, n_vectors: 30_000, p_minus: 0.25 }
    }

    #[test]
    fn report_sections_are_consistent() {
        let report = full_report(small_config()).unwrap();
        assert_eq!(report.monte_carlo.len(), 12);
        assert_eq!(report.recovery.len(), 12);
        for r in &report.recovery {
            assert_eq!(r.same_different.ratio, rational(2, 1));
            assert!((r.case_b_fraction - 0.375).abs() < 0.01, "{}", r.relation);
        }
        assert!(!report.hull[0].verdict.feasible);
        assert!(report.hull[1].verdict.feasible);
        assert_eq!(report.bell_bound.minimum, "1/3");
        assert_eq!(report.quantum.case_a_same_fraction(), Some(1.0));
        assert_eq!(
            report.mixture.case_b_fraction,
            parse_rational("1/3").unwrap()
        );
    }

    #[test]
    fn report_is_reproducible() {
        let a = full_report(small_config()).unwrap();
        let b = full_report(small_config()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_markdown(), b.to_markdown());
    }

    #[test]
    fn markdown_contains_every_section() {
        let report = full_report(small_config()).unwrap();
        let md = report.to_markdown();
        for heading in [
            "## Quantum run",
            "## Instruction sets",
            "## 1:1:2 two-color mixture",
            "## Set-conditioned dial weighting",
            "## Realm matrix R9-4",
            "## Monte Carlo tallies",
            "## Recovered G9 distributions",
            "## Hull membership",
        ] {
            assert!(md.contains(heading), "missing {heading}");
        }
        assert!(md.contains("w1 = -1/8 < 0"));
    }

    #[test]
    fn json_round_trip() {
        let report = full_report(small_config()).unwrap();
        let back: FullReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(report, back);
    }
}

//! Plain-text table rendering for CLI output.

use mermin_core::{
    fmt_rational, CaseBDecomposition, DistributionCounts, FactsReport, HullQuery, HullVerdict,
    RealmMatrix, SameDifferent, SetDistribution, SettingPair, SuperdetRunReport,
    SuperdetScenario, TallyTable,
};

fn fraction_or(f: Option<f64>, fallback: &str) -> String {
    f.map(|x| format!("{x:.6}")).unwrap_or_else(|| fallback.to_string())
}

fn rule(width: usize) -> String {
    "-".repeat(width)
}

/// Fixed-width row of the nine pair labels.
fn pair_label_row(first: &str) -> String {
    let mut out = format!("{first:<10}");
    for p in SettingPair::all() {
        out.push_str(&format!("{:>10}", p.to_string()));
    }
    out
}

pub fn facts_text(report: &FactsReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "model: {} | policy: {} | trials: {} | seed: {} | rng: {}\n\n",
        report.model, report.policy, report.n_trials, report.seed, report.rng
    ));
    out.push_str(&pair_label_row("pair"));
    out.push('\n');
    out.push_str(&rule(100));
    out.push('\n');
    for (name, value) in [
        ("n", SettingPair::all().map(|p| report.counts(p).n.to_string())),
        ("rr", SettingPair::all().map(|p| report.counts(p).rr.to_string())),
        ("rg", SettingPair::all().map(|p| report.counts(p).rg.to_string())),
        ("gr", SettingPair::all().map(|p| report.counts(p).gr.to_string())),
        ("gg", SettingPair::all().map(|p| report.counts(p).gg.to_string())),
        (
            "same",
            SettingPair::all().map(|p| {
                report
                    .same_fraction(p)
                    .map(|f| format!("{f:.4}"))
                    .unwrap_or_else(|| "-".into())
            }),
        ),
    ] {
        out.push_str(&format!("{name:<10}"));
        for v in value {
            out.push_str(&format!("{v:>10}"));
        }
        out.push('\n');
    }
    out.push('\n');
    out.push_str(&format!(
        "case (a) same fraction: {}\ncase (b) same fraction: {}\n",
        fraction_or(report.case_a_same_fraction(), "n/a"),
        fraction_or(report.case_b_same_fraction(), "n/a"),
    ));
    out
}

pub fn mixture_text(
    d: &SetDistribution,
    fractions: &[mermin_core::Rational; 9],
    case_b: mermin_core::Rational,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("distribution: {d}\n"));
    out.push_str(&format!("mirror-balanced: {}\n\n", d.is_mirror_balanced()));
    out.push_str(&pair_label_row("pair"));
    out.push('\n');
    out.push_str(&rule(100));
    out.push('\n');
    out.push_str(&format!("{:<10}", "fraction"));
    for f in fractions {
        out.push_str(&format!("{:>10.2}", mermin_core::ratio::to_f64(*f)));
    }
    out.push('\n');
    out.push_str(&format!("{:<10}", "exact"));
    for f in fractions {
        out.push_str(&format!("{:>10}", fmt_rational(*f)));
    }
    out.push('\n');
    out.push_str(&format!(
        "\ncase (b) agreement fraction: {} (bound: every mixture is >= 1/3)\n",
        fmt_rational(case_b)
    ));
    out
}

pub fn mixture_csv(fractions: &[mermin_core::Rational; 9]) -> String {
    let header: Vec<String> = SettingPair::all().iter().map(|p| p.to_string()).collect();
    let row: Vec<String> = fractions
        .iter()
        .map(|f| format!("{:.4}", mermin_core::ratio::to_f64(*f)))
        .collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

pub fn scenario_text(scenario: &SuperdetScenario) -> String {
    let mut out = String::new();
    out.push_str("case (b) dial weights conditional on the emitted set:\n\n");
    out.push_str(&format!("{:<8}", "set"));
    for p in SettingPair::case_b() {
        out.push_str(&format!("{:>8}", p.to_string()));
    }
    out.push_str(&format!("{:>12}", "case (b)"));
    out.push('\n');
    out.push_str(&rule(68));
    out.push('\n');
    for s in scenario.sets() {
        out.push_str(&format!("{:<8}", s.to_string()));
        for p in SettingPair::case_b() {
            out.push_str(&format!(
                "{:>8}",
                fmt_rational(scenario.case_b_weight(*s, p).expect("case (b) pair"))
            ));
        }
        out.push_str(&format!(
            "{:>12}",
            fmt_rational(scenario.per_set_case_b_same_fraction(*s).expect("set in scenario"))
        ));
        out.push('\n');
    }
    out.push_str(
        "\naggregate dial marginal: 1/9 per pair (the weighting is invisible marginally)\n",
    );
    out
}

pub fn superdet_text(scenario: &SuperdetScenario, run: &SuperdetRunReport) -> String {
    let mut out = scenario_text(scenario);
    out.push('\n');
    out.push_str(&facts_text(&run.facts));
    out.push_str("\ntrials per (emitted set, dialed pair):\n\n");
    out.push_str(&pair_label_row("set"));
    out.push('\n');
    out.push_str(&rule(100));
    out.push('\n');
    for (s, row) in scenario.sets().iter().zip(&run.set_pair_counts) {
        out.push_str(&format!("{:<10}", s.to_string()));
        for c in row {
            out.push_str(&format!("{c:>10}"));
        }
        out.push('\n');
    }
    out
}

pub fn realm_text(matrix: &RealmMatrix) -> String {
    let mut out = String::new();
    out.push_str("realm matrix R9-4 (−1 = same color):\n\n");
    out.push_str(&format!("{:<8}{:<10}", "column", "sets"));
    for p in SettingPair::all() {
        out.push_str(&format!("{:>4}", p.to_string()));
    }
    out.push('\n');
    out.push_str(&rule(54));
    out.push('\n');
    for col in matrix.columns() {
        out.push_str(&format!(
            "{:<8}{:<10}",
            col.label.to_string(),
            format!("{} {}", col.sources.0, col.sources.1)
        ));
        for e in col.vector.entries() {
            out.push_str(&format!("{e:>4}"));
        }
        out.push('\n');
    }
    out
}

pub fn relations_text(relations: &[mermin_core::FunctionalRelation]) -> String {
    let mut out = String::new();
    out.push_str(&format!("\nfunctional relations ({}):\n", relations.len()));
    for r in relations {
        out.push_str(&format!(
            "  {}  rows {:?} (settings {}) determine the other seven rows\n",
            r.label(),
            r.domain_rows(),
            r.pair_name()
        ));
    }
    out.push_str("\nexcluded row pairs: 12&21, 13&31, 23&32 (transposed settings carry identical rows)\n");
    out
}

pub fn tally_text(t: &TallyTable) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "relation: {} | vectors: {} | p_minus: {} | seed: {} | rng: {}\n\n",
        t.relation, t.n_vectors, t.p_minus, t.seed, t.rng
    ));
    out.push_str(&pair_label_row("pair"));
    out.push('\n');
    out.push_str(&rule(100));
    out.push('\n');
    out.push_str(&format!("{:<10}", "minus"));
    for c in t.counts {
        out.push_str(&format!("{c:>10}"));
    }
    out.push('\n');
    out.push_str(&format!(
        "\ncase (b) same fraction: {:.6}\n",
        mermin_core::case_b_same_fraction(t)
    ));
    out
}

pub fn tally_matrix_text(tables: &[TallyTable]) -> String {
    let mut out = String::new();
    out.push_str(&pair_label_row("relation"));
    out.push('\n');
    out.push_str(&rule(100));
    out.push('\n');
    for t in tables {
        out.push_str(&format!("{:<10}", t.relation));
        for c in t.counts {
            out.push_str(&format!("{c:>10}"));
        }
        out.push('\n');
    }
    out
}

pub fn recovery_text(
    relation: Option<&str>,
    d: &DistributionCounts,
    sd: Option<&SameDifferent>,
    dec: &CaseBDecomposition,
) -> String {
    let mut out = String::new();
    if let Some(r) = relation {
        out.push_str(&format!("relation: {r}\n"));
    }
    out.push_str(&format!(
        "N1 = {} | N2 = {} | N3 = {} | N4 = {} | n = {}\n",
        d.n1,
        d.n2,
        d.n3,
        d.n4,
        d.total()
    ));
    match sd {
        Some(sd) => out.push_str(&format!(
            "same = {} | different = {} | different/same = {}\n",
            sd.same,
            sd.different,
            fmt_rational(sd.ratio)
        )),
        None => out.push_str("same/different ratio undefined: no two-color vectors\n"),
    }
    out.push_str(&format!(
        "case (b) fraction = {} + {} = {}\n",
        fmt_rational(dec.base),
        fmt_rational(dec.excess),
        fmt_rational(dec.total)
    ));
    out
}

pub fn distribution_matrix_csv(rows: &[(String, DistributionCounts)]) -> String {
    let mut out = String::from("relation,n1,n2,n3,n4\n");
    for (relation, d) in rows {
        out.push_str(&format!("{relation},{},{},{},{}\n", d.n1, d.n2, d.n3, d.n4));
    }
    out
}

pub fn hull_text(query: &HullQuery, verdict: &HullVerdict) -> String {
    let mut out = String::new();
    out.push_str("target same-outcome fractions:\n  ");
    for (p, f) in SettingPair::all().iter().zip(&query.target) {
        out.push_str(&format!("{p}={} ", fmt_rational(*f)));
    }
    out.push('\n');
    if verdict.feasible {
        let weights = verdict.weights.as_ref().expect("feasible verdict has weights");
        out.push_str("verdict: feasible (inside the hull of the four G9 fraction columns)\n");
        out.push_str(&format!(
            "weights: G9-1={} G9-2={} G9-3={} G9-4={}\n",
            weights[0], weights[1], weights[2], weights[3]
        ));
    } else {
        let cert = verdict.certificate.as_ref().expect("infeasible verdict has certificate");
        out.push_str("verdict: infeasible (outside the hull of the four G9 fraction columns)\n");
        out.push_str(&format!("certificate: {cert}\n"));
    }
    out
}

//! Statistics of the Mermin device and its would-be local-realist rivals.
//!
//! The device: a source emits a particle pair per trial; two detectors with
//! three-position dials each flash R or G. Dialed alike (case (a)) they
//! always match; dialed differently (case (b)) they match 1/4 of the time.
//! This crate implements, side by side:
//!
//! * the singlet-state outcome law behind those facts and a seeded sampler
//!   for it ([`quantum`]);
//! * deterministic instruction sets, whose mixtures can never match less
//!   than 1/3 of the time in case (b), plus the set-conditioned dial
//!   weighting that sidesteps the bound by violating statistical
//!   independence ([`instructions`]);
//! * the G9/realm-matrix reformulation of instruction sets, its twelve
//!   functional relations, and Monte Carlo tallies generated through them
//!   ([`realm`], [`monte_carlo`]);
//! * exact recovery of the G9 distribution behind any tally, the
//!   Different/Same = 2 and 1/3 + (2/3)(N1/n) identities, and convex-hull
//!   membership of target correlations ([`analysis`]);
//! * a consolidated, seed-reproducible document covering all of the above
//!   ([`report`]).
//!
//! Identities are checked in exact rational arithmetic; simulations are
//! chunked so results never depend on thread count.

pub mod analysis;
pub mod device;
pub mod error;
pub mod instructions;
pub mod monte_carlo;
pub mod quantum;
pub mod ratio;
pub mod realm;
pub mod report;
pub mod rng;
mod solve;

pub use analysis::{
    decompose_case_b_fraction, hull_membership, recover_distribution, recover_from_counts,
    same_different_ratio, synthesize_tally, CaseBDecomposition, DistributionCounts,
    HullCertificate, HullQuery, HullVerdict, SameDifferent,
};
pub use device::{classify, settings_to_theta, Angle, CaseLabel, Color, Setting, SettingPair};
pub use error::{Error, Result};
pub use instructions::{
    build_superdet_scenario, case_b_agreement_fraction, mixture_case_b_fraction,
    mixture_per_pair_fractions, respond, simulate_instruction_sets, simulate_superdet,
    InstructionSet, SetDistribution, SuperdetRunReport, SuperdetScenario,
};
pub use monte_carlo::{
    case_b_same_fraction, expected_case_b_same_fraction, run_all_relations, run_simulation,
    McConfig, TallyTable,
};
pub use quantum::{
    joint_probability, joint_probability_exact, run_quantum_experiment, sample_trial,
    sample_trials, FactsReport, JointOutcome, PairCounts, SettingPolicy, TrialRecord,
};
pub use ratio::{fmt_rational, parse_rational, rational, Rational};
pub use realm::{
    build_realm_matrix, enumerate_functional_relations, g9_vector, relation_by_label,
    rows_qualify, FunctionalRelation, G9Column, G9Label, G9Vector, RealmMatrix,
};
pub use report::{full_report, one_one_two_distribution, FullReport, ReportConfig};

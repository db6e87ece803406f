//! Entropy inequalities on the majorization lattice: single-instance checks,
//! seeded sweeps, counterexample search and an exact rational oracle.

pub mod checks;
pub mod exact;
pub mod fixtures;
pub mod sampling;
pub mod sweep;

pub use checks::{
    check_corollary1, check_corollary2, check_coupling_aggregation, check_coupling_majorization,
    check_equality_condition_subadd, check_modularity, check_subadditivity, check_supermodularity,
    delta_supermod, is_modular_order, CheckResult, EQ_TOL,
};
pub use exact::{oracle_exact_check, ExactOrder, ExactPmf, ExactPredicate};
pub use sweep::{
    search_counterexamples, sweep_verify, Predicate, SignWitnesses, SweepConfig,
    VerificationReport, Violation, Witness,
};

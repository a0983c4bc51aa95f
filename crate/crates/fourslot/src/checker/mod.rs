//! Explicit-state verification: reachability, invariant checking with
//! counterexample traces, induction for state and transition invariants,
//! and the scripted safety proof.

mod domain;
mod induction;
mod pair_induction;
mod reach;
mod report;
mod state_check;
mod sweep;

pub mod proof;

pub use domain::{domain_count, for_each_state};
pub use induction::{check_inductive, check_inductive_subject_to, nontrivial_commands, Support, SupportMap};
pub use pair_induction::{
    check_inductive_transition, ExtendDirection, PairSupport, TransitionObligations,
};
pub use proof::{implies_on_bounded_domain, implies_on_reachable, run_paper_proof, ProofContext, ProofOutcome};
pub use reach::{explore, Budget, ExploreError, ReachSet};
pub use report::{CheckReport, Trace, Verdict};
pub use state_check::check_state_invariant;
pub use sweep::{
    check_transition_invariant, pair_trace, sweep_pairs, CompositionOutcome, PairFailure,
    SweepResult,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CheckerError {
    #[error(transparent)]
    Explore(#[from] ExploreError),
    #[error("pair budget exceeded after {visited} big-step pairs")]
    PairBudget { visited: u64 },
    #[error("support {name} has not been verified")]
    UnverifiedSupport { name: String },
}

/// Runs one obligation per command, on the thread pool where there is
/// one.
#[cfg(not(target_arch = "wasm32"))]
pub(crate) fn par_map_commands<T: Send>(
    f: impl Fn(crate::model::CommandId) -> T + Sync,
) -> Vec<T> {
    use rayon::prelude::*;
    crate::model::CommandId::ALL.par_iter().map(|&c| f(c)).collect()
}

#[cfg(target_arch = "wasm32")]
pub(crate) fn par_map_commands<T: Send>(
    f: impl Fn(crate::model::CommandId) -> T + Sync,
) -> Vec<T> {
    crate::model::CommandId::ALL.iter().map(|&c| f(c)).collect()
}

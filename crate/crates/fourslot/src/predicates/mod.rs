//! Named state and state-pair predicates over the transition system.
//!
//! Every condition used by the safety argument lives in the catalog under
//! a stable name: the race-freedom conditions, the stamp-monotonicity and
//! freshness bounds, and the auxiliary invariants that support their
//! induction proofs. Two catalog entries (`AUX_RI`, `FRESH1_TEMPORAL`,
//! and the swapped-index reading `AUX_F_SWAPPED`) are deliberately kept
//! even though they fail on the reachable system; tests document the
//! counterexamples.

mod catalog;
mod combine;
mod pred;

pub use catalog::{catalog, Catalog, CatalogEntry};
pub use combine::{compose, conjoin, implies_on, Composed};
pub use pred::{PairPredicate, StatePredicate};

//! Simpson's four-slot asynchronous communication mechanism, together
//! with the machinery to check that it is safe.
//!
//! The four-slot mechanism lets one writer thread and one reader thread
//! share a register without ever blocking each other: four non-atomic
//! data slots (two pairs of two) are coordinated through four atomic
//! control bits so that the two threads never touch the same slot at the
//! same time. This crate provides:
//!
//! - [`acm`]: executable mechanisms, from the plain algorithm to an
//!   instrumented build with a runtime race detector and a history
//!   recorder;
//! - [`model`]: the algorithm as a finite transition system with one
//!   atomic command per labelled step;
//! - [`predicates`]: the named catalog of state and state-pair
//!   predicates over that system (race freedom, stamp monotonicity,
//!   freshness bounds, and their supporting invariants);
//! - [`checker`]: breadth-first reachability, invariant checking with
//!   counterexample traces, induction engines for state and transition
//!   invariants, and the scripted end-to-end safety proof;
//! - [`harness`]: a concurrent fuzzing harness over the instrumented
//!   mechanism plus history checks for coherence, freshness, payload
//!   integrity, and linearizability, the last cross-validated against
//!   an exhaustive search oracle.
//!
//! The `fourslot` binary fronts all of it: `explore`, `prove`, `fuzz`,
//! `lincheck`, and `catalog` subcommands.

pub mod acm;
pub mod checker;
pub mod harness;
pub mod model;
pub mod predicates;

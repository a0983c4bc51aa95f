//! Concurrent test harness over the instrumented mechanism: seeded
//! interleaving runs, history recording, and the history checks:
//! coherence, freshness, payload integrity, and linearizability.

mod checks;
mod history;
mod linearize;
mod run;

pub use checks::{
    check_coherence, check_freshness, check_payload_integrity, check_write_order,
    freshness_window, CheckFailure, INITIAL_STAMP,
};
pub use history::{History, HistoryError, OpInterval};
pub use linearize::{check_linearizable, linearizable_by_search, payload_for};
pub use run::{run_concurrent, HarnessError, JitterProfile, RunConfig, RunOutcome};

//! Executable four-slot mechanisms.
//!
//! Three builds of the same algorithm:
//!
//! - [`plain`]: the bare mechanism, four non-atomic slots and four
//!   atomic control bits behind `write` and `read`;
//! - [`stamped`]: every write round is numbered and the stamp travels
//!   with the payload, so reads return `(value, stamp)`;
//! - [`instrumented`]: the stamped build plus per-slot access guards
//!   (a runtime race detector), an event recorder, optional per-step
//!   pacing for interleaving diversity, and the negative-control
//!   mutations.
//!
//! Constructors hand back a writer half and a reader half; each half is
//! single-owner, which pins the one-writer/one-reader contract at the
//! type level. All control-bit accesses use sequentially consistent
//! ordering; the correctness argument assumes interleaving semantics
//! and nothing weaker.

mod history;
mod instrumented;
mod plain;
mod stamped;

pub use history::{HistoryEvent, RaceReport, Stamp, BOT};
pub use instrumented::{
    instrumented, merge_events, InstrumentedConfig, InstrumentedReader, InstrumentedWriter,
    NoPacer, Pacer, RaceCheck, StepPoint,
};
pub use plain::{four_slot, ControlSnapshot, Reader, Writer};
pub use stamped::{stamped_four_slot, StampedReader, StampedWriter};

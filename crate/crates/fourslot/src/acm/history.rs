//! Events recorded by the instrumented build.

use crate::model::Side;

/// Write-round stamp as recorded at run time. The sentinel for
/// never-written slots sits below every real stamp.
pub type Stamp = i64;

/// Stamp of a slot that has never been written.
pub const BOT: Stamp = -1;

/// One recorded event. `seq` comes from a single shared counter, so the
/// merged log of both threads is totally ordered.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HistoryEvent {
    WriteInvoke { seq: u64, stamp: Stamp, payload: u64 },
    WriteReturn { seq: u64 },
    ReadInvoke { seq: u64 },
    ReadReturn { seq: u64, stamp: Stamp, payload: u64 },
    SlotEnter { seq: u64, side: Side, pair: u8, slot: u8 },
    SlotExit { seq: u64, side: Side, pair: u8, slot: u8 },
}

impl HistoryEvent {
    pub fn seq(&self) -> u64 {
        match *self {
            HistoryEvent::WriteInvoke { seq, .. }
            | HistoryEvent::WriteReturn { seq }
            | HistoryEvent::ReadInvoke { seq }
            | HistoryEvent::ReadReturn { seq, .. }
            | HistoryEvent::SlotEnter { seq, .. }
            | HistoryEvent::SlotExit { seq, .. } => seq,
        }
    }

    pub fn side(&self) -> Side {
        match self {
            HistoryEvent::WriteInvoke { .. } | HistoryEvent::WriteReturn { .. } => Side::Writer,
            HistoryEvent::ReadInvoke { .. } | HistoryEvent::ReadReturn { .. } => Side::Reader,
            HistoryEvent::SlotEnter { side, .. } | HistoryEvent::SlotExit { side, .. } => *side,
        }
    }
}

/// A detected race on one slot: both sides were inside the same slot at
/// the same time.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RaceReport {
    pub pair: u8,
    pub slot: u8,
    /// The stamp of the write round in flight.
    pub writer_stamp: Stamp,
    /// Which read (counting from 1) was in flight.
    pub reader_round: u64,
}

impl std::fmt::Display for RaceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "race on slot [{}][{}]: write round {} against read #{}",
            self.pair, self.slot, self.writer_stamp, self.reader_round
        )
    }
}

//! The instrumented mechanism: stamped, with per-slot access guards, an
//! event recorder, per-step pacing hooks, and the negative-control
//! mutations.
//!
//! Slot payloads are deliberately moved word by word through relaxed
//! per-word atomics. A genuine race then shows up twice over: the access
//! guard trips, and the torn payload/stamp mismatch is caught by the
//! history checks. Keeping the words individually atomic means even a
//! racy run stays well-defined, so the detector itself is trustworthy.

use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, AtomicU8, Ordering::Relaxed, Ordering::SeqCst};
use std::sync::{Arc, Mutex};

use crate::model::{Mutation, Side};

use super::history::{HistoryEvent, RaceReport, Stamp, BOT};

const GUARD_WRITER: u8 = 1;
const GUARD_READER: u8 = 2;

/// Where a pacing hook fires inside an operation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepPoint {
    /// Before each atomic control step.
    BeforeControlStep,
    /// Just before entering the slot.
    BeforeSlotAccess,
    /// Between the sub-word moves of the slot copy.
    BetweenSlotWords,
}

/// Per-thread delay injection. The harness supplies the profiles.
pub trait Pacer: Send {
    fn pace(&mut self, point: StepPoint);
}

/// No delays.
pub struct NoPacer;

impl Pacer for NoPacer {
    fn pace(&mut self, _point: StepPoint) {}
}

fn pack(value: u8, stamp: Stamp) -> u64 {
    ((stamp + 1) as u64) << 1 | value as u64
}

fn unpack(word: u64) -> (u8, Stamp) {
    ((word & 1) as u8, (word >> 1) as i64 - 1)
}

struct SlotCell {
    guard: AtomicU8,
    // payload low, payload high, stamp low, stamp high
    words: [AtomicU32; 4],
}

impl SlotCell {
    fn new(payload: u64, stamp: Stamp) -> SlotCell {
        let s = stamp as u64;
        SlotCell {
            guard: AtomicU8::new(0),
            words: [
                AtomicU32::new(payload as u32),
                AtomicU32::new((payload >> 32) as u32),
                AtomicU32::new(s as u32),
                AtomicU32::new((s >> 32) as u32),
            ],
        }
    }

    fn store(&self, payload: u64, stamp: Stamp, pacer: &mut dyn Pacer) {
        let s = stamp as u64;
        let words = [
            payload as u32,
            (payload >> 32) as u32,
            s as u32,
            (s >> 32) as u32,
        ];
        for (i, w) in words.into_iter().enumerate() {
            if i > 0 {
                pacer.pace(StepPoint::BetweenSlotWords);
            }
            self.words[i].store(w, Relaxed);
        }
    }

    fn load(&self, pacer: &mut dyn Pacer) -> (u64, Stamp) {
        let mut words = [0u32; 4];
        for (i, word) in words.iter_mut().enumerate() {
            if i > 0 {
                pacer.pace(StepPoint::BetweenSlotWords);
            }
            *word = self.words[i].load(Relaxed);
        }
        let payload = words[0] as u64 | (words[1] as u64) << 32;
        let stamp = (words[2] as u64 | (words[3] as u64) << 32) as i64;
        (payload, stamp)
    }
}

struct RaceShared {
    raced: AtomicBool,
    report: Mutex<Option<RaceReport>>,
}

/// Shared handle for asking whether any access guard tripped.
#[derive(Clone)]
pub struct RaceCheck {
    inner: Arc<RaceShared>,
}

impl RaceCheck {
    pub fn race(&self) -> Option<RaceReport> {
        if self.inner.raced.load(SeqCst) {
            *self.inner.report.lock().unwrap()
        } else {
            None
        }
    }
}

struct Shared {
    slots: [[SlotCell; 2]; 2],
    index: [AtomicU64; 2],
    latest: AtomicU8,
    reading: AtomicU8,
    clock: AtomicU64,
    reader_rounds: AtomicU64,
    writer_in_op: AtomicBool,
    reader_in_op: AtomicBool,
    race: Arc<RaceShared>,
    abort_on_race: bool,
}

impl Shared {
    fn seq(&self) -> u64 {
        self.clock.fetch_add(1, SeqCst)
    }

    fn trip_race(&self, pair: u8, slot: u8, writer_stamp: Stamp) {
        let report = RaceReport {
            pair,
            slot,
            writer_stamp,
            reader_round: self.reader_rounds.load(SeqCst),
        };
        {
            let mut slot = self.race.report.lock().unwrap();
            slot.get_or_insert(report);
        }
        self.race.raced.store(true, SeqCst);
        if self.abort_on_race {
            panic!("{report}");
        }
    }
}

/// Build options for the instrumented mechanism.
#[derive(Clone, Copy, Debug)]
pub struct InstrumentedConfig {
    pub mutation: Option<Mutation>,
    /// Record slot-enter/exit events alongside the operation events.
    pub record_slot_events: bool,
    /// Hard cap on each side's event log; hitting it is a panic, never a
    /// silent truncation.
    pub log_capacity: usize,
    /// Panic the offending thread as soon as a guard trips. When off,
    /// races are only latched for later inspection, which lets the
    /// negative controls harvest corrupted histories.
    pub abort_on_race: bool,
}

impl Default for InstrumentedConfig {
    fn default() -> InstrumentedConfig {
        InstrumentedConfig {
            mutation: None,
            record_slot_events: true,
            log_capacity: 1 << 22,
            abort_on_race: true,
        }
    }
}

pub struct InstrumentedWriter {
    shared: Arc<Shared>,
    cfg: InstrumentedConfig,
    wp: u8,
    wi: u8,
    wtm: Stamp,
    events: Vec<HistoryEvent>,
    pacer: Box<dyn Pacer>,
}

pub struct InstrumentedReader {
    shared: Arc<Shared>,
    cfg: InstrumentedConfig,
    rp: u8,
    ri: u8,
    rtm: Stamp,
    events: Vec<HistoryEvent>,
    pacer: Box<dyn Pacer>,
}

/// Builds the instrumented mechanism and splits it.
pub fn instrumented(
    initial: u64,
    cfg: InstrumentedConfig,
    writer_pacer: Box<dyn Pacer>,
    reader_pacer: Box<dyn Pacer>,
) -> (InstrumentedWriter, InstrumentedReader, RaceCheck) {
    let race = Arc::new(RaceShared {
        raced: AtomicBool::new(false),
        report: Mutex::new(None),
    });
    let shared = Arc::new(Shared {
        slots: [
            [SlotCell::new(initial, 0), SlotCell::new(initial, BOT)],
            [SlotCell::new(initial, 1), SlotCell::new(initial, BOT)],
        ],
        index: [AtomicU64::new(pack(0, 0)), AtomicU64::new(pack(0, 1))],
        latest: AtomicU8::new(1),
        reading: AtomicU8::new(0),
        clock: AtomicU64::new(0),
        reader_rounds: AtomicU64::new(0),
        writer_in_op: AtomicBool::new(false),
        reader_in_op: AtomicBool::new(false),
        race: race.clone(),
        abort_on_race: cfg.abort_on_race,
    });
    (
        InstrumentedWriter {
            shared: shared.clone(),
            cfg,
            wp: 1,
            wi: 0,
            wtm: 1,
            events: Vec::new(),
            pacer: writer_pacer,
        },
        InstrumentedReader {
            shared,
            cfg,
            rp: 0,
            ri: 0,
            rtm: 0,
            events: Vec::new(),
            pacer: reader_pacer,
        },
        RaceCheck { inner: race },
    )
}

fn push_event(events: &mut Vec<HistoryEvent>, capacity: usize, e: HistoryEvent) {
    assert!(
        events.len() < capacity,
        "history log overflow at {} events",
        events.len()
    );
    events.push(e);
}

impl InstrumentedWriter {
    pub fn write(&mut self, payload: u64) {
        let s = self.shared.clone();
        assert!(
            !s.writer_in_op.swap(true, SeqCst),
            "write is not reentrant: a second writer is a contract violation"
        );
        let stamp = self.wtm + 1;
        self.record(HistoryEvent::WriteInvoke {
            seq: s.seq(),
            stamp,
            payload,
        });

        self.pacer.pace(StepPoint::BeforeControlStep); // a-2
        assert!(self.wtm < Stamp::MAX, "write-round counter exhausted");
        self.wtm += 1;
        self.wp = 1 - s.reading.load(SeqCst);

        self.pacer.pace(StepPoint::BeforeControlStep); // a-1
        self.wi = 1 - unpack(s.index[self.wp as usize].load(SeqCst)).0;

        self.pacer.pace(StepPoint::BeforeSlotAccess); // a
        let (wp, wi) = (self.wp, self.wi);
        let cell = &s.slots[wp as usize][wi as usize];
        let prev = cell.guard.fetch_or(GUARD_WRITER, SeqCst);
        if prev & GUARD_READER != 0 {
            s.trip_race(wp, wi, self.wtm);
        }
        if self.cfg.record_slot_events {
            self.record(HistoryEvent::SlotEnter {
                seq: s.seq(),
                side: Side::Writer,
                pair: wp,
                slot: wi,
            });
        }
        cell.store(payload, self.wtm, self.pacer.as_mut());
        cell.guard.fetch_and(!GUARD_WRITER, SeqCst);
        if self.cfg.record_slot_events {
            self.record(HistoryEvent::SlotExit {
                seq: s.seq(),
                side: Side::Writer,
                pair: wp,
                slot: wi,
            });
        }

        self.pacer.pace(StepPoint::BeforeControlStep); // a+1
        if self.cfg.mutation == Some(Mutation::SwapA1A2) {
            s.latest.store(self.wp, SeqCst);
        } else {
            s.index[self.wp as usize].store(pack(self.wi, self.wtm), SeqCst);
        }

        self.pacer.pace(StepPoint::BeforeControlStep); // a+2
        if self.cfg.mutation == Some(Mutation::SwapA1A2) {
            s.index[self.wp as usize].store(pack(self.wi, self.wtm), SeqCst);
        } else {
            s.latest.store(self.wp, SeqCst);
        }

        self.record(HistoryEvent::WriteReturn { seq: s.seq() });
        s.writer_in_op.store(false, SeqCst);
    }

    pub fn stamp(&self) -> Stamp {
        self.wtm
    }

    pub fn into_events(self) -> Vec<HistoryEvent> {
        self.events
    }

    fn record(&mut self, e: HistoryEvent) {
        push_event(&mut self.events, self.cfg.log_capacity, e);
    }
}

impl InstrumentedReader {
    pub fn read(&mut self) -> (u64, Stamp) {
        let s = self.shared.clone();
        assert!(
            !s.reader_in_op.swap(true, SeqCst),
            "read is not reentrant: a second reader is a contract violation"
        );
        s.reader_rounds.fetch_add(1, SeqCst);
        self.record(HistoryEvent::ReadInvoke { seq: s.seq() });

        self.pacer.pace(StepPoint::BeforeControlStep); // b-3
        if self.cfg.mutation == Some(Mutation::SwapB3B2) {
            s.reading.store(self.rp, SeqCst);
        } else {
            self.rp = s.latest.load(SeqCst);
        }

        self.pacer.pace(StepPoint::BeforeControlStep); // b-2
        match self.cfg.mutation {
            Some(Mutation::DropB2) => {}
            Some(Mutation::SwapB3B2) => self.rp = s.latest.load(SeqCst),
            _ => s.reading.store(self.rp, SeqCst),
        }

        self.pacer.pace(StepPoint::BeforeControlStep); // b-1
        let (ri, rtm) = unpack(s.index[self.rp as usize].load(SeqCst));
        self.ri = ri;
        self.rtm = rtm;

        self.pacer.pace(StepPoint::BeforeSlotAccess); // b
        let (rp, ri) = (self.rp, self.ri);
        let cell = &s.slots[rp as usize][ri as usize];
        let prev = cell.guard.fetch_or(GUARD_READER, SeqCst);
        if prev & GUARD_WRITER != 0 {
            // The in-flight write's stamp is whatever sits in the slot's
            // stamp words; report the guard state instead of guessing.
            s.trip_race(rp, ri, self.rtm);
        }
        if self.cfg.record_slot_events {
            self.record(HistoryEvent::SlotEnter {
                seq: s.seq(),
                side: Side::Reader,
                pair: rp,
                slot: ri,
            });
        }
        let (payload, stamp) = cell.load(self.pacer.as_mut());
        cell.guard.fetch_and(!GUARD_READER, SeqCst);
        if self.cfg.record_slot_events {
            self.record(HistoryEvent::SlotExit {
                seq: s.seq(),
                side: Side::Reader,
                pair: rp,
                slot: ri,
            });
        }
        self.rtm = stamp;

        let seq = s.seq();
        self.record(HistoryEvent::ReadReturn {
            seq,
            stamp,
            payload,
        });
        s.reader_in_op.store(false, SeqCst);
        (payload, stamp) // b+1
    }

    pub fn into_events(self) -> Vec<HistoryEvent> {
        self.events
    }

    fn record(&mut self, e: HistoryEvent) {
        push_event(&mut self.events, self.cfg.log_capacity, e);
    }
}

/// Merges both sides' event logs into one sequence ordered by the shared
/// recording clock.
pub fn merge_events(
    writer: Vec<HistoryEvent>,
    reader: Vec<HistoryEvent>,
) -> Vec<HistoryEvent> {
    let mut all = writer;
    all.extend(reader);
    all.sort_by_key(|e| e.seq());
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(cfg: InstrumentedConfig) -> (InstrumentedWriter, InstrumentedReader, RaceCheck) {
        instrumented(0, cfg, Box::new(NoPacer), Box::new(NoPacer))
    }

    #[test]
    fn serial_write_then_read_records_four_operation_events() {
        let (mut w, mut r, _race) = build(InstrumentedConfig {
            record_slot_events: false,
            ..Default::default()
        });
        w.write(7);
        assert_eq!(r.read(), (7, 2));
        let log = merge_events(w.into_events(), r.into_events());
        assert_eq!(log.len(), 4);
        assert!(matches!(log[0], HistoryEvent::WriteInvoke { stamp: 2, payload: 7, .. }));
        assert!(matches!(log[1], HistoryEvent::WriteReturn { .. }));
        assert!(matches!(log[2], HistoryEvent::ReadInvoke { .. }));
        assert!(matches!(log[3], HistoryEvent::ReadReturn { stamp: 2, payload: 7, .. }));
    }

    #[test]
    fn write_invoke_stamps_count_up_from_two() {
        let (mut w, _r, _race) = build(InstrumentedConfig::default());
        for k in 0..5 {
            w.write(k);
        }
        let stamps: Vec<Stamp> = w
            .into_events()
            .into_iter()
            .filter_map(|e| match e {
                HistoryEvent::WriteInvoke { stamp, .. } => Some(stamp),
                _ => None,
            })
            .collect();
        assert_eq!(stamps, vec![2, 3, 4, 5, 6]);
    }

    #[test]
    fn slot_enters_and_exits_nest() {
        let (mut w, mut r, _race) = build(InstrumentedConfig::default());
        for k in 0..10 {
            w.write(k);
            r.read();
        }
        let log = merge_events(w.into_events(), r.into_events());
        let mut open: Option<(Side, u8, u8)> = None;
        for e in log {
            match e {
                HistoryEvent::SlotEnter { side, pair, slot, .. } => {
                    // Serial run: at most one access open at a time.
                    assert!(open.is_none());
                    open = Some((side, pair, slot));
                }
                HistoryEvent::SlotExit { side, pair, slot, .. } => {
                    assert_eq!(open.take(), Some((side, pair, slot)));
                }
                _ => {}
            }
        }
        assert!(open.is_none());
    }

    #[test]
    fn guard_trips_when_both_sides_hold_the_same_slot() {
        // Drive the guard directly: a reader parked in the slot the
        // writer then stores to must trip the detector.
        let (w, r, race) = build(InstrumentedConfig {
            abort_on_race: false,
            ..Default::default()
        });
        let cell = &w.shared.slots[1][1];
        cell.guard.fetch_or(GUARD_READER, SeqCst);
        let mut w = w;
        w.write(5); // first write targets slot [1][1]
        assert!(race.race().is_some());
        drop(r);
    }

    #[test]
    fn operations_take_a_fixed_number_of_steps() {
        // Wait-freedom, concretely: a write paces 4 control steps plus
        // one slot access; a read paces 3 control steps plus one slot
        // access plus the return. Nothing loops.
        use std::sync::atomic::AtomicUsize;
        struct Counting(std::sync::Arc<(AtomicUsize, AtomicUsize)>);
        impl Pacer for Counting {
            fn pace(&mut self, point: StepPoint) {
                match point {
                    StepPoint::BeforeControlStep => self.0 .0.fetch_add(1, SeqCst),
                    StepPoint::BeforeSlotAccess => self.0 .1.fetch_add(1, SeqCst),
                    StepPoint::BetweenSlotWords => 0,
                };
            }
        }
        let wcounts = std::sync::Arc::new((AtomicUsize::new(0), AtomicUsize::new(0)));
        let rcounts = std::sync::Arc::new((AtomicUsize::new(0), AtomicUsize::new(0)));
        let (mut w, mut r, _race) = instrumented(
            0,
            InstrumentedConfig::default(),
            Box::new(Counting(wcounts.clone())),
            Box::new(Counting(rcounts.clone())),
        );
        for _ in 0..10 {
            w.write(1);
            r.read();
        }
        assert_eq!(wcounts.0.load(SeqCst), 10 * 4);
        assert_eq!(wcounts.1.load(SeqCst), 10);
        assert_eq!(rcounts.0.load(SeqCst), 10 * 3);
        assert_eq!(rcounts.1.load(SeqCst), 10);
    }

    #[test]
    #[should_panic(expected = "history log overflow")]
    fn log_overflow_is_loud() {
        let (mut w, _r, _race) = build(InstrumentedConfig {
            log_capacity: 3,
            ..Default::default()
        });
        w.write(1);
        w.write(2);
    }
}

//! The timestamped mechanism: each write round is numbered and the
//! stamp travels with the payload.

use std::cell::UnsafeCell;
use std::sync::atomic::{AtomicU64, AtomicU8, Ordering::SeqCst};
use std::sync::Arc;

use super::history::{Stamp, BOT};

// An index entry packs (slot value, stamp) into one atomic word so the
// publish at a+1 stays a single indivisible access. Stamps are offset by
// one so the sentinel encodes as zero.
fn pack(value: u8, stamp: Stamp) -> u64 {
    debug_assert!(stamp >= BOT);
    ((stamp + 1) as u64) << 1 | value as u64
}

fn unpack(word: u64) -> (u8, Stamp) {
    ((word & 1) as u8, (word >> 1) as i64 - 1)
}

struct Shared<T> {
    slots: [[UnsafeCell<(T, Stamp)>; 2]; 2],
    index: [AtomicU64; 2],
    latest: AtomicU8,
    reading: AtomicU8,
}

// Same discipline as the plain build: the control bits keep the two
// sides out of each other's slot, and each half is single-owner.
unsafe impl<T: Copy + Send> Sync for Shared<T> {}

pub struct StampedWriter<T> {
    shared: Arc<Shared<T>>,
    wp: u8,
    wi: u8,
    wtm: Stamp,
}

pub struct StampedReader<T> {
    shared: Arc<Shared<T>>,
    rp: u8,
    ri: u8,
    rtm: Stamp,
}

/// Builds the stamped mechanism. Slot [0][0] holds the initial value at
/// stamp 0, slot [1][0] at stamp 1; the other two slots are unwritten.
pub fn stamped_four_slot<T: Copy + Send>(initial: T) -> (StampedWriter<T>, StampedReader<T>) {
    let shared = Arc::new(Shared {
        slots: [
            [
                UnsafeCell::new((initial, 0)),
                UnsafeCell::new((initial, BOT)),
            ],
            [
                UnsafeCell::new((initial, 1)),
                UnsafeCell::new((initial, BOT)),
            ],
        ],
        index: [AtomicU64::new(pack(0, 0)), AtomicU64::new(pack(0, 1))],
        latest: AtomicU8::new(1),
        reading: AtomicU8::new(0),
    });
    (
        StampedWriter {
            shared: shared.clone(),
            wp: 1,
            wi: 0,
            wtm: 1,
        },
        StampedReader {
            shared,
            rp: 0,
            ri: 0,
            rtm: 0,
        },
    )
}

impl<T: Copy + Send> StampedWriter<T> {
    pub fn write(&mut self, w: T) {
        let s = &*self.shared;
        // The round counter must never wrap.
        assert!(self.wtm < Stamp::MAX, "write-round counter exhausted");
        self.wtm += 1; // a-2
        self.wp = 1 - s.reading.load(SeqCst);
        self.wi = 1 - unpack(s.index[self.wp as usize].load(SeqCst)).0; // a-1
        unsafe {
            *s.slots[self.wp as usize][self.wi as usize].get() = (w, self.wtm); // a
        }
        s.index[self.wp as usize].store(pack(self.wi, self.wtm), SeqCst); // a+1
        s.latest.store(self.wp, SeqCst); // a+2
    }

    /// The stamp of the last completed write round.
    pub fn stamp(&self) -> Stamp {
        self.wtm
    }
}

impl<T: Copy + Send> StampedReader<T> {
    /// Fetches the freshest published value with its round stamp.
    pub fn read(&mut self) -> (T, Stamp) {
        let s = &*self.shared;
        self.rp = s.latest.load(SeqCst); // b-3
        s.reading.store(self.rp, SeqCst); // b-2
        let (ri, rtm) = unpack(s.index[self.rp as usize].load(SeqCst)); // b-1
        self.ri = ri;
        self.rtm = rtm;
        let (y, rtm) = unsafe { *s.slots[self.rp as usize][self.ri as usize].get() }; // b
        self.rtm = rtm;
        (y, rtm) // b+1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_packing_round_trips() {
        for value in 0..2u8 {
            for stamp in [BOT, 0, 1, 7, 1_000_000] {
                assert_eq!(unpack(pack(value, stamp)), (value, stamp));
            }
        }
    }

    #[test]
    fn initial_read_returns_stamp_one() {
        let (_w, mut r) = stamped_four_slot(11u64);
        assert_eq!(r.read(), (11, 1));
    }

    #[test]
    fn write_stamps_count_up_from_two() {
        let (mut w, mut r) = stamped_four_slot(0u64);
        for k in 1..=5u64 {
            w.write(100 + k);
            assert_eq!(w.stamp(), k as i64 + 1);
        }
        assert_eq!(r.read(), (105, 6));
    }

    #[test]
    fn serial_read_stamps_never_decrease() {
        let (mut w, mut r) = stamped_four_slot(0u64);
        let mut last = 0;
        for k in 0..50 {
            if k % 3 == 0 {
                w.write(k);
            }
            let (_, stamp) = r.read();
            assert!(stamp >= last);
            last = stamp;
        }
    }

    #[test]
    fn concurrent_read_stamps_never_decrease() {
        let (mut w, mut r) = stamped_four_slot(0u64);
        let writer = std::thread::spawn(move || {
            for v in 0..20_000u64 {
                w.write(v);
            }
        });
        let mut last = 0;
        for _ in 0..20_000 {
            let (_, stamp) = r.read();
            assert!(stamp >= last, "stamp went back: {last} -> {stamp}");
            last = stamp;
        }
        writer.join().unwrap();
    }
}

//! The bare four-slot mechanism.

use std::cell::UnsafeCell;
use std::sync::atomic::{AtomicU8, Ordering::SeqCst};
use std::sync::Arc;

struct Shared<T> {
    slots: [[UnsafeCell<T>; 2]; 2],
    index: [AtomicU8; 2],
    latest: AtomicU8,
    reading: AtomicU8,
}

// The algorithm guarantees the two sides never touch the same slot at
// the same time, and each half is single-owner, so the unsynchronized
// slot cells are only ever accessed by one thread at a time.
unsafe impl<T: Copy + Send> Sync for Shared<T> {}

/// Read-only view of the four control bits.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ControlSnapshot {
    pub index: [u8; 2],
    pub latest: u8,
    pub reading: u8,
}

/// The writer half. Exactly one thread may own it.
pub struct Writer<T> {
    shared: Arc<Shared<T>>,
    wp: u8,
    wi: u8,
}

/// The reader half. Exactly one thread may own it.
pub struct Reader<T> {
    shared: Arc<Shared<T>>,
    rp: u8,
    ri: u8,
}

/// Builds a mechanism holding `initial` and splits it into its two
/// halves. The initial value is published at pair 1.
pub fn four_slot<T: Copy + Send>(initial: T) -> (Writer<T>, Reader<T>) {
    let shared = Arc::new(Shared {
        slots: [
            [UnsafeCell::new(initial), UnsafeCell::new(initial)],
            [UnsafeCell::new(initial), UnsafeCell::new(initial)],
        ],
        index: [AtomicU8::new(0), AtomicU8::new(0)],
        latest: AtomicU8::new(1),
        reading: AtomicU8::new(0),
    });
    (
        Writer {
            shared: shared.clone(),
            wp: 1,
            wi: 0,
        },
        Reader {
            shared,
            rp: 0,
            ri: 0,
        },
    )
}

impl<T: Copy + Send> Writer<T> {
    /// Stores `w`. Wait-free: five steps, no loops, no blocking.
    pub fn write(&mut self, w: T) {
        let s = &*self.shared;
        self.wp = 1 - s.reading.load(SeqCst); // a-2
        self.wi = 1 - s.index[self.wp as usize].load(SeqCst); // a-1
        unsafe {
            // a: the only non-indivisible access.
            *s.slots[self.wp as usize][self.wi as usize].get() = w;
        }
        s.index[self.wp as usize].store(self.wi, SeqCst); // a+1
        s.latest.store(self.wp, SeqCst); // a+2
    }

    pub fn control(&self) -> ControlSnapshot {
        snapshot(&self.shared)
    }
}

impl<T: Copy + Send> Reader<T> {
    /// Fetches the freshest published value. Wait-free: four steps plus
    /// the return.
    pub fn read(&mut self) -> T {
        let s = &*self.shared;
        self.rp = s.latest.load(SeqCst); // b-3
        s.reading.store(self.rp, SeqCst); // b-2
        self.ri = s.index[self.rp as usize].load(SeqCst); // b-1
        unsafe { *s.slots[self.rp as usize][self.ri as usize].get() } // b, b+1
    }

    pub fn control(&self) -> ControlSnapshot {
        snapshot(&self.shared)
    }
}

fn snapshot<T>(s: &Shared<T>) -> ControlSnapshot {
    ControlSnapshot {
        index: [s.index[0].load(SeqCst), s.index[1].load(SeqCst)],
        latest: s.latest.load(SeqCst),
        reading: s.reading.load(SeqCst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initialization_publishes_pair_one() {
        let (w, _r) = four_slot(7u64);
        assert_eq!(
            w.control(),
            ControlSnapshot {
                index: [0, 0],
                latest: 1,
                reading: 0
            }
        );
    }

    #[test]
    fn immediate_read_returns_the_initial_value() {
        let (_w, mut r) = four_slot(42u64);
        assert_eq!(r.read(), 42);
        // A second read with no intervening write sees the same value.
        assert_eq!(r.read(), 42);
    }

    #[test]
    fn serial_write_then_read() {
        let (mut w, mut r) = four_slot(0u64);
        w.write(5);
        assert_eq!(r.read(), 5);
    }

    #[test]
    fn first_write_lands_in_slot_one_one() {
        let (mut w, _r) = four_slot(0u64);
        w.write(9);
        assert_eq!(
            w.control(),
            ControlSnapshot {
                index: [0, 1],
                latest: 1,
                reading: 0
            }
        );
        // The second write flips pair 1's slot index back.
        w.write(10);
        assert_eq!(w.control().index, [0, 0]);
    }

    #[test]
    fn interleaved_values_are_always_ones_that_were_written() {
        let (mut w, mut r) = four_slot(0u64);
        let writer = std::thread::spawn(move || {
            for v in 1..=10_000u64 {
                w.write(v);
            }
        });
        for _ in 0..10_000 {
            let v = r.read();
            assert!(v <= 10_000);
        }
        writer.join().unwrap();
    }
}

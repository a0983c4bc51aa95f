//! History checks: coherence, freshness, and payload integrity.

use std::collections::HashMap;

use crate::acm::Stamp;

use super::history::History;

/// The stamps carried by the two initial slots; a fresh mechanism
/// publishes stamp 1.
pub const INITIAL_STAMP: Stamp = 1;

/// A failed check, with enough context to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckFailure {
    /// Read `index`'s stamp went backwards.
    Coherence {
        index: usize,
        previous: Stamp,
        current: Stamp,
    },
    /// Read `index` returned a stamp outside its freshness window.
    Freshness {
        index: usize,
        stamp: Stamp,
        window: (Stamp, Stamp),
    },
    /// Read `index` returned a payload that no write (and not the
    /// initial value) produced under that stamp.
    Payload {
        index: usize,
        stamp: Stamp,
        payload: u64,
    },
    /// Writer stamps did not strictly increase.
    WriteOrder { index: usize },
}

/// Passes iff read stamps are non-decreasing in reader order.
pub fn check_coherence(h: &History) -> Result<(), CheckFailure> {
    let mut prev: Option<Stamp> = None;
    for (i, r) in h.reads().iter().enumerate() {
        if let Some(p) = prev {
            if r.stamp < p {
                return Err(CheckFailure::Coherence {
                    index: i,
                    previous: p,
                    current: r.stamp,
                });
            }
        }
        prev = Some(r.stamp);
    }
    Ok(())
}

/// The freshness window of one read: `P` is the stamp of the last write
/// returning before the read's invoke (or the initial stamp), `F` the
/// stamp of the last write invoked before the read's return (or the
/// initial stamp).
pub fn freshness_window(h: &History, read_index: usize) -> (Stamp, Stamp) {
    let r = h.reads()[read_index];
    let mut p = INITIAL_STAMP;
    let mut f = INITIAL_STAMP;
    for w in h.writes() {
        if w.ret < r.invoke {
            p = p.max(w.stamp);
        }
        if w.invoke < r.ret {
            f = f.max(w.stamp);
        }
    }
    (p, f)
}

/// Passes iff every read's stamp lies inside its freshness window.
/// Single-writer operations are interval-ordered, so one forward scan
/// with two write cursors covers every read.
pub fn check_freshness(h: &History) -> Result<(), CheckFailure> {
    let writes = h.writes();
    let mut p = INITIAL_STAMP;
    let mut f = INITIAL_STAMP;
    let mut returned = 0usize; // writes with ret < read.invoke so far
    let mut invoked = 0usize; // writes with invoke < read.ret so far
    for (i, r) in h.reads().iter().enumerate() {
        while returned < writes.len() && writes[returned].ret < r.invoke {
            p = p.max(writes[returned].stamp);
            returned += 1;
        }
        while invoked < writes.len() && writes[invoked].invoke < r.ret {
            f = f.max(writes[invoked].stamp);
            invoked += 1;
        }
        if r.stamp < p || r.stamp > f {
            return Err(CheckFailure::Freshness {
                index: i,
                stamp: r.stamp,
                window: (p, f),
            });
        }
    }
    Ok(())
}

/// Passes iff every read returns a payload actually produced by the
/// write with that stamp (or the initial value for the initial stamps);
/// this is the torn-read detector.
pub fn check_payload_integrity(h: &History, initial_payload: u64) -> Result<(), CheckFailure> {
    let by_stamp: HashMap<Stamp, u64> = h.writes().iter().map(|w| (w.stamp, w.payload)).collect();
    for (i, r) in h.reads().iter().enumerate() {
        let expected = if r.stamp == 0 || r.stamp == 1 {
            Some(initial_payload)
        } else {
            by_stamp.get(&r.stamp).copied()
        };
        if expected != Some(r.payload) {
            return Err(CheckFailure::Payload {
                index: i,
                stamp: r.stamp,
                payload: r.payload,
            });
        }
    }
    Ok(())
}

/// Passes iff write stamps strictly increase in writer order.
pub fn check_write_order(h: &History) -> Result<(), CheckFailure> {
    for (i, pair) in h.writes().windows(2).enumerate() {
        if pair[1].stamp <= pair[0].stamp {
            return Err(CheckFailure::WriteOrder { index: i + 1 });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acm::HistoryEvent;

    /// Builds a history from op tuples `(is_write, invoke, ret, stamp)`.
    fn synthetic(ops: &[(bool, u64, u64, Stamp)]) -> History {
        let mut events = Vec::new();
        for &(is_write, invoke, ret, stamp) in ops {
            if is_write {
                events.push(HistoryEvent::WriteInvoke {
                    seq: invoke,
                    stamp,
                    payload: stamp as u64,
                });
                events.push(HistoryEvent::WriteReturn { seq: ret });
            } else {
                events.push(HistoryEvent::ReadInvoke { seq: invoke });
                events.push(HistoryEvent::ReadReturn {
                    seq: ret,
                    stamp,
                    payload: stamp as u64,
                });
            }
        }
        History::new(events).unwrap()
    }

    #[test]
    fn non_decreasing_read_stamps_pass() {
        let h = synthetic(&[
            (false, 0, 1, 1),
            (false, 2, 3, 1),
            (false, 4, 5, 3),
            (false, 6, 7, 3),
            (false, 8, 9, 5),
        ]);
        assert!(check_coherence(&h).is_ok());
    }

    #[test]
    fn decreasing_read_stamps_fail_at_the_right_index() {
        let h = synthetic(&[(false, 0, 1, 1), (false, 2, 3, 3), (false, 4, 5, 2)]);
        assert_eq!(
            check_coherence(&h),
            Err(CheckFailure::Coherence {
                index: 2,
                previous: 3,
                current: 2
            })
        );
    }

    #[test]
    fn read_after_a_write_gets_exactly_that_stamp_window() {
        // Write with stamp 7 fully precedes the read, write 8 starts
        // after the read returns.
        let h = synthetic(&[
            (true, 0, 1, 7),
            (false, 2, 3, 7),
            (true, 4, 5, 8),
        ]);
        assert_eq!(freshness_window(&h, 0), (7, 7));
        assert!(check_freshness(&h).is_ok());
    }

    #[test]
    fn read_overlapping_two_writes_accepts_the_whole_window() {
        // Write 6 precedes; writes 7 and 8 overlap the read.
        for (stamp, ok) in [(6, true), (7, true), (8, true), (5, false), (9, false)] {
            let h = synthetic(&[
                (true, 0, 1, 6),
                (true, 2, 5, 7),
                (false, 3, 8, stamp),
                (true, 6, 9, 8),
            ]);
            assert_eq!(freshness_window(&h, 0), (6, 8));
            assert_eq!(check_freshness(&h).is_ok(), ok, "stamp {stamp}");
        }
    }

    #[test]
    fn reads_with_no_writes_must_return_the_initial_stamp() {
        let h = synthetic(&[(false, 0, 1, 1), (false, 2, 3, 1)]);
        assert!(check_freshness(&h).is_ok());
        let h = synthetic(&[(false, 0, 1, 2)]);
        assert!(check_freshness(&h).is_err());
    }

    #[test]
    fn torn_payload_is_caught() {
        let mut events = vec![
            HistoryEvent::WriteInvoke { seq: 0, stamp: 2, payload: 100 },
            HistoryEvent::WriteReturn { seq: 1 },
            HistoryEvent::ReadInvoke { seq: 2 },
            HistoryEvent::ReadReturn { seq: 3, stamp: 2, payload: 101 },
        ];
        let h = History::new(events.clone()).unwrap();
        assert!(matches!(
            check_payload_integrity(&h, 0),
            Err(CheckFailure::Payload { index: 0, .. })
        ));
        events[3] = HistoryEvent::ReadReturn { seq: 3, stamp: 2, payload: 100 };
        let h = History::new(events).unwrap();
        assert!(check_payload_integrity(&h, 0).is_ok());
    }
}

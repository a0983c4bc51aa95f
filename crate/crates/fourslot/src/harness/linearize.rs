//! Linearizability of recorded histories against register semantics.
//!
//! Two routes: a specialized rule for one-writer/one-reader registers
//! (write order + coherence + freshness window + stamp existence), and
//! an exhaustive search over linearization orders used as the oracle on
//! small histories. The two must agree; a test and the acceptance suite
//! cross-validate them.

use std::collections::HashSet;

use crate::acm::Stamp;
use crate::model::Side;

use super::checks::{
    check_coherence, check_freshness, check_write_order, INITIAL_STAMP,
};
use super::history::{History, OpInterval};

/// The specialized register rule. For a single-writer/single-reader
/// register, a history is linearizable exactly when writes are applied
/// in stamp order, read stamps never decrease, every read's stamp falls
/// in its freshness window, and every returned stamp names a real write
/// (or the initial value).
pub fn check_linearizable(h: &History) -> bool {
    if check_write_order(h).is_err() {
        return false;
    }
    if check_coherence(h).is_err() || check_freshness(h).is_err() {
        return false;
    }
    let known: HashSet<Stamp> = h.writes().iter().map(|w| w.stamp).collect();
    h.reads()
        .iter()
        .all(|r| r.stamp == INITIAL_STAMP || known.contains(&r.stamp))
}

/// Exhaustive linearization search: tries every assignment of
/// linearization points consistent with real-time order, under register
/// semantics (a read returns the latest preceding write's stamp, or the
/// initial stamp). Only intended for histories of at most about a dozen
/// operations.
pub fn linearizable_by_search(h: &History) -> bool {
    let mut ops: Vec<OpInterval> = Vec::new();
    ops.extend_from_slice(h.writes());
    ops.extend_from_slice(h.reads());
    assert!(
        ops.len() <= 20,
        "exhaustive search is for small histories only"
    );
    let full: u32 = (1u32 << ops.len()) - 1;
    let mut dead: HashSet<(u32, Stamp)> = HashSet::new();
    search(&ops, full, INITIAL_STAMP, &mut dead)
}

fn search(ops: &[OpInterval], remaining: u32, value: Stamp, dead: &mut HashSet<(u32, Stamp)>) -> bool {
    if remaining == 0 {
        return true;
    }
    if dead.contains(&(remaining, value)) {
        return false;
    }
    for i in 0..ops.len() {
        if remaining & (1 << i) == 0 {
            continue;
        }
        // `i` can only linearize first if no other remaining operation
        // fully precedes it in real time.
        let mut minimal = true;
        for j in 0..ops.len() {
            if i != j && remaining & (1 << j) != 0 && ops[j].ret < ops[i].invoke {
                minimal = false;
                break;
            }
        }
        if !minimal {
            continue;
        }
        match ops[i].side {
            Side::Writer => {
                if search(ops, remaining & !(1 << i), ops[i].stamp, dead) {
                    return true;
                }
            }
            Side::Reader => {
                if ops[i].stamp == value && search(ops, remaining & !(1 << i), value, dead) {
                    return true;
                }
            }
        }
    }
    dead.insert((remaining, value));
    false
}

/// Distinct payload for the write round with the given stamp; the
/// mechanism's initial value uses the stamp-1 payload.
pub fn payload_for(stamp: Stamp) -> u64 {
    (stamp as u64)
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .rotate_left(17)
        ^ 0xD6E8_FEB8_6659_FD93
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::acm::HistoryEvent;

    fn write(seq: &mut u64, stamp: Stamp) -> Vec<HistoryEvent> {
        let s = *seq;
        *seq += 2;
        vec![
            HistoryEvent::WriteInvoke { seq: s, stamp, payload: payload_for(stamp) },
            HistoryEvent::WriteReturn { seq: s + 1 },
        ]
    }

    fn read(seq: &mut u64, stamp: Stamp) -> Vec<HistoryEvent> {
        let s = *seq;
        *seq += 2;
        vec![
            HistoryEvent::ReadInvoke { seq: s },
            HistoryEvent::ReadReturn { seq: s + 1, stamp, payload: payload_for(stamp) },
        ]
    }

    #[test]
    fn serial_alternation_is_linearizable_by_both_routes() {
        let mut seq = 0;
        let mut events = Vec::new();
        for stamp in 2..=5 {
            events.extend(write(&mut seq, stamp));
            events.extend(read(&mut seq, stamp));
        }
        let h = History::new(events).unwrap();
        assert!(check_linearizable(&h));
        assert!(linearizable_by_search(&h));
    }

    #[test]
    fn stale_read_after_a_full_write_fails_both_routes() {
        let mut seq = 0;
        let mut events = Vec::new();
        events.extend(write(&mut seq, 2));
        events.extend(write(&mut seq, 3));
        // Read returns stamp 2 although write 3 fully precedes it.
        events.extend(read(&mut seq, 2));
        let h = History::new(events).unwrap();
        assert!(!check_linearizable(&h));
        assert!(!linearizable_by_search(&h));
    }

    #[test]
    fn read_overlapping_a_write_may_return_either_side() {
        for stamp in [2, 3] {
            let events = vec![
                HistoryEvent::WriteInvoke { seq: 0, stamp: 2, payload: payload_for(2) },
                HistoryEvent::WriteReturn { seq: 1 },
                // Write 3 overlaps the read.
                HistoryEvent::WriteInvoke { seq: 2, stamp: 3, payload: payload_for(3) },
                HistoryEvent::ReadInvoke { seq: 3 },
                HistoryEvent::ReadReturn { seq: 4, stamp, payload: payload_for(stamp) },
                HistoryEvent::WriteReturn { seq: 5 },
            ];
            let h = History::new(events).unwrap();
            assert!(check_linearizable(&h), "stamp {stamp}");
            assert!(linearizable_by_search(&h), "stamp {stamp}");
        }
    }

    #[test]
    fn fabricated_stamp_fails_both_routes() {
        // Write 2 fully precedes the read; write 4 overlaps it. Stamp 3
        // lies inside the freshness window but was never written.
        let events = vec![
            HistoryEvent::WriteInvoke { seq: 0, stamp: 2, payload: payload_for(2) },
            HistoryEvent::WriteReturn { seq: 1 },
            HistoryEvent::WriteInvoke { seq: 2, stamp: 4, payload: payload_for(4) },
            HistoryEvent::ReadInvoke { seq: 3 },
            HistoryEvent::ReadReturn { seq: 4, stamp: 3, payload: payload_for(3) },
            HistoryEvent::WriteReturn { seq: 5 },
        ];
        let h = History::new(events).unwrap();
        assert!(!check_linearizable(&h));
        assert!(!linearizable_by_search(&h));
    }
}

//! Recorded histories: validation, operation intervals, and the
//! line-delimited dump/load format.

use thiserror::Error;

use crate::acm::{HistoryEvent, Stamp};
use crate::model::Side;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HistoryError {
    #[error("event {at}: {why}")]
    Malformed { at: usize, why: String },
    #[error("line {line}: {why}")]
    Parse { line: usize, why: String },
}

/// One completed operation: its invoke/return positions in the recording
/// order, the round stamp, and the payload.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OpInterval {
    pub side: Side,
    pub invoke: u64,
    pub ret: u64,
    pub stamp: Stamp,
    pub payload: u64,
}

/// A validated, totally ordered event log of one concurrent run.
#[derive(Clone, Debug)]
pub struct History {
    pub events: Vec<HistoryEvent>,
    writes: Vec<OpInterval>,
    reads: Vec<OpInterval>,
}

impl History {
    /// Validates well-nesting and extracts the operation intervals:
    /// strictly increasing recording indices, alternating invoke/return
    /// per side, and slot accesses enclosed in an operation of their own
    /// side.
    pub fn new(mut events: Vec<HistoryEvent>) -> Result<History, HistoryError> {
        events.sort_by_key(|e| e.seq());
        for (i, w) in events.windows(2).enumerate() {
            if w[0].seq() == w[1].seq() {
                return Err(HistoryError::Malformed {
                    at: i,
                    why: "duplicate recording index".to_string(),
                });
            }
        }

        let mut writes = Vec::new();
        let mut reads = Vec::new();
        let mut open_write: Option<(u64, Stamp, u64)> = None;
        let mut open_read: Option<u64> = None;
        let mut in_slot: [bool; 2] = [false, false];

        for (i, e) in events.iter().enumerate() {
            let fail = |why: &str| HistoryError::Malformed {
                at: i,
                why: why.to_string(),
            };
            match *e {
                HistoryEvent::WriteInvoke { seq, stamp, payload } => {
                    if open_write.is_some() {
                        return Err(fail("write invoked while one is in flight"));
                    }
                    open_write = Some((seq, stamp, payload));
                }
                HistoryEvent::WriteReturn { seq } => match open_write.take() {
                    Some((invoke, stamp, payload)) => writes.push(OpInterval {
                        side: Side::Writer,
                        invoke,
                        ret: seq,
                        stamp,
                        payload,
                    }),
                    None => return Err(fail("write returned without an invoke")),
                },
                HistoryEvent::ReadInvoke { seq } => {
                    if open_read.is_some() {
                        return Err(fail("read invoked while one is in flight"));
                    }
                    open_read = Some(seq);
                }
                HistoryEvent::ReadReturn { seq, stamp, payload } => match open_read.take() {
                    Some(invoke) => reads.push(OpInterval {
                        side: Side::Reader,
                        invoke,
                        ret: seq,
                        stamp,
                        payload,
                    }),
                    None => return Err(fail("read returned without an invoke")),
                },
                HistoryEvent::SlotEnter { side, .. } => {
                    let idx = side_index(side);
                    if in_slot[idx] {
                        return Err(fail("slot entered twice without an exit"));
                    }
                    let in_op = match side {
                        Side::Writer => open_write.is_some(),
                        Side::Reader => open_read.is_some(),
                    };
                    if !in_op {
                        return Err(fail("slot access outside an operation"));
                    }
                    in_slot[idx] = true;
                }
                HistoryEvent::SlotExit { side, .. } => {
                    let idx = side_index(side);
                    if !in_slot[idx] {
                        return Err(fail("slot exit without an enter"));
                    }
                    in_slot[idx] = false;
                }
            }
        }
        if open_write.is_some() || open_read.is_some() || in_slot[0] || in_slot[1] {
            return Err(HistoryError::Malformed {
                at: events.len(),
                why: "log ends mid-operation".to_string(),
            });
        }
        Ok(History {
            events,
            writes,
            reads,
        })
    }

    /// Completed writes in writer order.
    pub fn writes(&self) -> &[OpInterval] {
        &self.writes
    }

    /// Completed reads in reader order.
    pub fn reads(&self) -> &[OpInterval] {
        &self.reads
    }

    /// One event per line: `seq side kind pair slot stamp payload`, with
    /// `-` for fields a kind does not carry. Stable and diffable.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let line = match *e {
                HistoryEvent::WriteInvoke { seq, stamp, payload } => {
                    format!("{seq} w wi - - {stamp} {payload}")
                }
                HistoryEvent::WriteReturn { seq } => format!("{seq} w wr - - - -"),
                HistoryEvent::ReadInvoke { seq } => format!("{seq} r ri - - - -"),
                HistoryEvent::ReadReturn { seq, stamp, payload } => {
                    format!("{seq} r rr - - {stamp} {payload}")
                }
                HistoryEvent::SlotEnter { seq, side, pair, slot } => {
                    format!("{seq} {} se {pair} {slot} - -", side_letter(side))
                }
                HistoryEvent::SlotExit { seq, side, pair, slot } => {
                    format!("{seq} {} sx {pair} {slot} - -", side_letter(side))
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn load(text: &str) -> Result<History, HistoryError> {
        let mut events = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |why: &str| HistoryError::Parse {
                line: lineno + 1,
                why: why.to_string(),
            };
            let parts: Vec<&str> = line.split_ascii_whitespace().collect();
            if parts.len() != 7 {
                return Err(err("expected 7 fields"));
            }
            let seq: u64 = parts[0].parse().map_err(|_| err("bad index"))?;
            let side = match parts[1] {
                "w" => Side::Writer,
                "r" => Side::Reader,
                _ => return Err(err("bad side")),
            };
            let num = |s: &str| -> Result<u64, HistoryError> {
                s.parse().map_err(|_| err("bad number"))
            };
            let stamp = |s: &str| -> Result<Stamp, HistoryError> {
                s.parse().map_err(|_| err("bad stamp"))
            };
            let e = match parts[2] {
                "wi" => HistoryEvent::WriteInvoke {
                    seq,
                    stamp: stamp(parts[5])?,
                    payload: num(parts[6])?,
                },
                "wr" => HistoryEvent::WriteReturn { seq },
                "ri" => HistoryEvent::ReadInvoke { seq },
                "rr" => HistoryEvent::ReadReturn {
                    seq,
                    stamp: stamp(parts[5])?,
                    payload: num(parts[6])?,
                },
                "se" => HistoryEvent::SlotEnter {
                    seq,
                    side,
                    pair: num(parts[3])? as u8,
                    slot: num(parts[4])? as u8,
                },
                "sx" => HistoryEvent::SlotExit {
                    seq,
                    side,
                    pair: num(parts[3])? as u8,
                    slot: num(parts[4])? as u8,
                },
                _ => return Err(err("unknown event kind")),
            };
            events.push(e);
        }
        History::new(events)
    }
}

fn side_index(side: Side) -> usize {
    match side {
        Side::Writer => 0,
        Side::Reader => 1,
    }
}

fn side_letter(side: Side) -> &'static str {
    match side {
        Side::Writer => "w",
        Side::Reader => "r",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wi(seq: u64, stamp: Stamp, payload: u64) -> HistoryEvent {
        HistoryEvent::WriteInvoke { seq, stamp, payload }
    }

    #[test]
    fn serial_history_validates() {
        let h = History::new(vec![
            wi(0, 2, 77),
            HistoryEvent::WriteReturn { seq: 1 },
            HistoryEvent::ReadInvoke { seq: 2 },
            HistoryEvent::ReadReturn { seq: 3, stamp: 2, payload: 77 },
        ])
        .unwrap();
        assert_eq!(h.writes().len(), 1);
        assert_eq!(h.reads().len(), 1);
        assert_eq!(h.reads()[0].stamp, 2);
    }

    #[test]
    fn unmatched_return_is_rejected() {
        let err = History::new(vec![HistoryEvent::WriteReturn { seq: 0 }]).unwrap_err();
        assert!(matches!(err, HistoryError::Malformed { .. }));
    }

    #[test]
    fn truncated_log_is_rejected() {
        let err = History::new(vec![wi(0, 2, 5)]).unwrap_err();
        assert!(matches!(err, HistoryError::Malformed { .. }));
    }

    #[test]
    fn dump_load_round_trips() {
        let h = History::new(vec![
            wi(0, 2, 123),
            HistoryEvent::SlotEnter { seq: 1, side: Side::Writer, pair: 1, slot: 1 },
            HistoryEvent::SlotExit { seq: 2, side: Side::Writer, pair: 1, slot: 1 },
            HistoryEvent::WriteReturn { seq: 3 },
            HistoryEvent::ReadInvoke { seq: 4 },
            HistoryEvent::ReadReturn { seq: 5, stamp: 2, payload: 123 },
        ])
        .unwrap();
        let text = h.dump();
        let h2 = History::load(&text).unwrap();
        assert_eq!(h.events, h2.events);
        assert_eq!(text, h2.dump());
    }
}

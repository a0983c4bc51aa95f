//! Global states of the two-thread transition system.

use std::fmt;

/// Write-round stamp. `None` is the "never written" sentinel and orders
/// below every natural, which keeps all stamp comparisons total.
pub type Stamp = Option<u8>;

/// Formats a stamp as `#n`, or `#_` for the sentinel.
pub fn fmt_stamp(s: Stamp) -> String {
    match s {
        Some(n) => format!("#{n}"),
        None => "#_".to_string(),
    }
}

/// Writer program counter. Each value names the labelled step the writer
/// will execute next; `Am2` doubles as the idle position between rounds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum WriterPc {
    Am2,
    Am1,
    A,
    Ap1,
    Ap2,
}

impl WriterPc {
    pub const ALL: [WriterPc; 5] = [
        WriterPc::Am2,
        WriterPc::Am1,
        WriterPc::A,
        WriterPc::Ap1,
        WriterPc::Ap2,
    ];

    pub fn next(self) -> WriterPc {
        match self {
            WriterPc::Am2 => WriterPc::Am1,
            WriterPc::Am1 => WriterPc::A,
            WriterPc::A => WriterPc::Ap1,
            WriterPc::Ap1 => WriterPc::Ap2,
            WriterPc::Ap2 => WriterPc::Am2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WriterPc::Am2 => "a-2",
            WriterPc::Am1 => "a-1",
            WriterPc::A => "a",
            WriterPc::Ap1 => "a+1",
            WriterPc::Ap2 => "a+2",
        }
    }
}

/// Reader program counter; `Bm3` doubles as the idle position.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ReaderPc {
    Bm3,
    Bm2,
    Bm1,
    B,
    Bp1,
}

impl ReaderPc {
    pub const ALL: [ReaderPc; 5] = [
        ReaderPc::Bm3,
        ReaderPc::Bm2,
        ReaderPc::Bm1,
        ReaderPc::B,
        ReaderPc::Bp1,
    ];

    pub fn next(self) -> ReaderPc {
        match self {
            ReaderPc::Bm3 => ReaderPc::Bm2,
            ReaderPc::Bm2 => ReaderPc::Bm1,
            ReaderPc::Bm1 => ReaderPc::B,
            ReaderPc::B => ReaderPc::Bp1,
            ReaderPc::Bp1 => ReaderPc::Bm3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ReaderPc::Bm3 => "b-3",
            ReaderPc::Bm2 => "b-2",
            ReaderPc::Bm1 => "b-1",
            ReaderPc::B => "b",
            ReaderPc::Bp1 => "b+1",
        }
    }
}

/// One entry of the shared slot index: the live slot number of a pair,
/// stamped with the round that published it (stampless in the plain build).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct IndexEntry {
    pub value: u8,
    pub stamp: Stamp,
}

/// Full valuation of the shared, local, and program-counter variables of
/// the writer/reader pair. Payloads are abstracted to the stamp of the
/// round that stored them.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GlobalState {
    pub alpha: WriterPc,
    pub beta: ReaderPc,
    pub wp: u8,
    pub wi: u8,
    pub rp: u8,
    pub ri: u8,
    pub reading: u8,
    pub latest: u8,
    pub li: [IndexEntry; 2],
    pub slots: [[Stamp; 2]; 2],
    pub wtm: Stamp,
    pub rtm: Stamp,
    pub y_stamp: Stamp,
    /// Writer rounds started; used only for the exploration bound.
    pub writer_rounds: u8,
    /// Reader rounds started; used only for the exploration bound.
    pub reader_rounds: u8,
}

impl GlobalState {
    /// Projection onto the control-state fields (program counters, the
    /// four control bits, both locals, and index values). Stamps and
    /// round counters are dropped; saturation diagnostics compare these
    /// projections across bounds.
    pub fn control_projection(&self) -> ControlProjection {
        ControlProjection {
            alpha: self.alpha,
            beta: self.beta,
            wp: self.wp,
            wi: self.wi,
            rp: self.rp,
            ri: self.ri,
            reading: self.reading,
            latest: self.latest,
            li_values: [self.li[0].value, self.li[1].value],
        }
    }
}

/// Stamp-free projection of a state.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ControlProjection {
    pub alpha: WriterPc,
    pub beta: ReaderPc,
    pub wp: u8,
    pub wi: u8,
    pub rp: u8,
    pub ri: u8,
    pub reading: u8,
    pub latest: u8,
    pub li_values: [u8; 2],
}

// Canonical text form: one line, fixed field order, used for trace dumps
// and golden tests.
impl fmt::Display for GlobalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} wp={} wi={} rp={} ri={} reading={} latest={} \
             li0={}{} li1={}{} d00={} d01={} d10={} d11={} wtm={} rtm={} y={} rounds={}/{}",
            self.alpha.label(),
            self.beta.label(),
            self.wp,
            self.wi,
            self.rp,
            self.ri,
            self.reading,
            self.latest,
            self.li[0].value,
            fmt_stamp(self.li[0].stamp),
            self.li[1].value,
            fmt_stamp(self.li[1].stamp),
            fmt_stamp(self.slots[0][0]),
            fmt_stamp(self.slots[0][1]),
            fmt_stamp(self.slots[1][0]),
            fmt_stamp(self.slots[1][1]),
            fmt_stamp(self.wtm),
            fmt_stamp(self.rtm),
            fmt_stamp(self.y_stamp),
            self.writer_rounds,
            self.reader_rounds,
        )
    }
}

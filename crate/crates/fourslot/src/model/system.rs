//! The bounded transition system: initial state, enabledness, and the
//! per-command successor function.

use super::command::{CommandId, Side};
use super::field::{Field, FieldSet, LI_TM_FIELDS, LI_VAL_FIELDS};
use super::state::{GlobalState, IndexEntry, ReaderPc, Stamp, WriterPc};

/// Which decoration of the mechanism the system models.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    /// Control bits and slots only; no stamps anywhere.
    Plain,
    /// Every write round is numbered and slots/index entries carry the
    /// stamp of the round that stored them.
    Timestamped,
}

/// Negative-control edits of the step semantics. Each one breaks the
/// update order the algorithm depends on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mutation {
    /// The reader never publishes the pair it is about to read.
    DropB2,
    /// The writer publishes `latest` before the slot index.
    SwapA1A2,
    /// The reader publishes its stale pair before fetching `latest`.
    SwapB3B2,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [Mutation::DropB2, Mutation::SwapA1A2, Mutation::SwapB3B2];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::DropB2 => "drop-b-2",
            Mutation::SwapA1A2 => "swap-a+1-a+2",
            Mutation::SwapB3B2 => "swap-b-3-b-2",
        }
    }

    pub fn from_name(name: &str) -> Option<Mutation> {
        Mutation::ALL.into_iter().find(|m| m.name() == name)
    }
}

/// A finite transition system over [`GlobalState`]: the single initial
/// state, the ten commands, and a bound of `round_bound` rounds per side.
#[derive(Clone, Copy, Debug)]
pub struct TransitionSystem {
    pub variant: Variant,
    pub round_bound: u8,
    pub mutation: Option<Mutation>,
    /// When set, reader commands are never enabled; used to check
    /// writer-thread-only invariants.
    pub writer_only: bool,
}

impl TransitionSystem {
    pub fn new(variant: Variant, round_bound: u8) -> TransitionSystem {
        assert!(round_bound >= 1, "round bound must be at least 1");
        assert!(round_bound <= 200, "round bound capped at 200");
        TransitionSystem {
            variant,
            round_bound,
            mutation: None,
            writer_only: false,
        }
    }

    pub fn with_mutation(mut self, mutation: Option<Mutation>) -> TransitionSystem {
        self.mutation = mutation;
        self
    }

    pub fn writer_only(mut self) -> TransitionSystem {
        self.writer_only = true;
        self
    }

    /// The initialization state. Pair 1 holds the freshest initial value
    /// and is published in `latest`; the writer idles before `a-2`, the
    /// reader before `b-3`.
    pub fn initial_state(&self) -> GlobalState {
        let ts = self.variant == Variant::Timestamped;
        let st = |n: u8| -> Stamp { if ts { Some(n) } else { None } };
        GlobalState {
            alpha: WriterPc::Am2,
            beta: ReaderPc::Bm3,
            wp: 1,
            wi: 0,
            rp: 0,
            ri: 0,
            reading: 0,
            latest: 1,
            li: [
                IndexEntry { value: 0, stamp: st(0) },
                IndexEntry { value: 0, stamp: st(1) },
            ],
            slots: [[st(0), None], [st(1), None]],
            wtm: st(1),
            rtm: st(0),
            y_stamp: None,
            writer_rounds: 0,
            reader_rounds: 0,
        }
    }

    /// The command the writer would run in `s`, if any.
    fn writer_command(&self, s: &GlobalState) -> Option<CommandId> {
        let c = match s.alpha {
            WriterPc::Am2 => CommandId::Am2,
            WriterPc::Am1 => CommandId::Am1,
            WriterPc::A => CommandId::A,
            WriterPc::Ap1 => CommandId::Ap1,
            WriterPc::Ap2 => CommandId::Ap2,
        };
        if c == CommandId::Am2 && s.writer_rounds >= self.round_bound {
            return None;
        }
        Some(c)
    }

    fn reader_command(&self, s: &GlobalState) -> Option<CommandId> {
        if self.writer_only {
            return None;
        }
        let c = match s.beta {
            ReaderPc::Bm3 => CommandId::Bm3,
            ReaderPc::Bm2 => CommandId::Bm2,
            ReaderPc::Bm1 => CommandId::Bm1,
            ReaderPc::B => CommandId::B,
            ReaderPc::Bp1 => CommandId::Bp1,
        };
        if c == CommandId::Bm3 && s.reader_rounds >= self.round_bound {
            return None;
        }
        Some(c)
    }

    /// The set of commands enabled in `s`: at most one per side.
    pub fn enabled(&self, s: &GlobalState) -> Vec<CommandId> {
        let mut v = Vec::with_capacity(2);
        if let Some(c) = self.writer_command(s) {
            v.push(c);
        }
        if let Some(c) = self.reader_command(s) {
            v.push(c);
        }
        v
    }

    pub fn is_enabled(&self, s: &GlobalState, c: CommandId) -> bool {
        match c.side() {
            Side::Writer => self.writer_command(s) == Some(c),
            Side::Reader => self.reader_command(s) == Some(c),
        }
    }

    /// Applies the labelled assignment of `c` and advances the issuing
    /// side's counter by one label. Panics if `c` is not enabled: that is
    /// a contract violation, not a reachable error.
    pub fn step(&self, s: &GlobalState, c: CommandId) -> GlobalState {
        assert!(
            self.is_enabled(s, c),
            "stepping disabled command {} in {}",
            c.label(),
            s
        );
        let ts = self.variant == Variant::Timestamped;
        let mutation = self.mutation;
        let mut n = *s;
        match c {
            CommandId::Am2 => {
                if ts {
                    n.wtm = Some(s.wtm.expect("timestamped state has a round counter") + 1);
                }
                n.wp = 1 - s.reading;
                n.writer_rounds = s.writer_rounds + 1;
            }
            CommandId::Am1 => {
                n.wi = 1 - s.li[s.wp as usize].value;
            }
            CommandId::A => {
                if ts {
                    n.slots[s.wp as usize][s.wi as usize] = s.wtm;
                }
            }
            CommandId::Ap1 => {
                if mutation == Some(Mutation::SwapA1A2) {
                    n.latest = s.wp;
                } else {
                    n.li[s.wp as usize] = IndexEntry {
                        value: s.wi,
                        stamp: if ts { s.wtm } else { None },
                    };
                }
            }
            CommandId::Ap2 => {
                if mutation == Some(Mutation::SwapA1A2) {
                    n.li[s.wp as usize] = IndexEntry {
                        value: s.wi,
                        stamp: if ts { s.wtm } else { None },
                    };
                } else {
                    n.latest = s.wp;
                }
            }
            CommandId::Bm3 => {
                if mutation == Some(Mutation::SwapB3B2) {
                    n.reading = s.rp;
                } else {
                    n.rp = s.latest;
                }
                n.reader_rounds = s.reader_rounds + 1;
            }
            CommandId::Bm2 => match mutation {
                Some(Mutation::DropB2) => {}
                Some(Mutation::SwapB3B2) => n.rp = s.latest,
                _ => n.reading = s.rp,
            },
            CommandId::Bm1 => {
                let entry = s.li[s.rp as usize];
                n.ri = entry.value;
                if ts {
                    n.rtm = entry.stamp;
                }
            }
            CommandId::B => {
                if ts {
                    let stamp = s.slots[s.rp as usize][s.ri as usize];
                    n.rtm = stamp;
                    n.y_stamp = stamp;
                }
            }
            CommandId::Bp1 => {}
        }
        match c.side() {
            Side::Writer => n.alpha = s.alpha.next(),
            Side::Reader => n.beta = s.beta.next(),
        }
        n
    }

    /// All `(command, successor)` pairs from `s`.
    pub fn successors(&self, s: &GlobalState) -> Vec<(CommandId, GlobalState)> {
        self.enabled(s)
            .into_iter()
            .map(|c| (c, self.step(s, c)))
            .collect()
    }

    /// Fields the command reads under this system's mutation, guard
    /// included.
    pub fn command_reads(&self, c: CommandId) -> FieldSet {
        match (self.mutation, c) {
            (Some(Mutation::SwapA1A2), CommandId::Ap1) => {
                FieldSet::of(&[Field::Alpha, Field::Wp])
            }
            (Some(Mutation::SwapA1A2), CommandId::Ap2) => {
                FieldSet::of(&[Field::Alpha, Field::Wp, Field::Wi, Field::Wtm])
            }
            (Some(Mutation::DropB2), CommandId::Bm2) => FieldSet::of(&[Field::Beta]),
            (Some(Mutation::SwapB3B2), CommandId::Bm3) => {
                FieldSet::of(&[Field::Beta, Field::Rp, Field::ReaderRounds])
            }
            (Some(Mutation::SwapB3B2), CommandId::Bm2) => {
                FieldSet::of(&[Field::Beta, Field::Latest])
            }
            _ => c.reads(),
        }
    }

    /// Fields the command may write under this system's mutation.
    pub fn command_writes(&self, c: CommandId) -> FieldSet {
        match (self.mutation, c) {
            (Some(Mutation::SwapA1A2), CommandId::Ap1) => {
                FieldSet::of(&[Field::Alpha, Field::Latest])
            }
            (Some(Mutation::SwapA1A2), CommandId::Ap2) => FieldSet::of(&[Field::Alpha])
                .union(LI_VAL_FIELDS)
                .union(LI_TM_FIELDS),
            (Some(Mutation::DropB2), CommandId::Bm2) => FieldSet::of(&[Field::Beta]),
            (Some(Mutation::SwapB3B2), CommandId::Bm3) => {
                FieldSet::of(&[Field::Beta, Field::Reading, Field::ReaderRounds])
            }
            (Some(Mutation::SwapB3B2), CommandId::Bm2) => {
                FieldSet::of(&[Field::Beta, Field::Rp])
            }
            _ => c.writes(),
        }
    }

    /// Non-PC, non-bookkeeping fields written under this system's
    /// mutation.
    pub fn command_writes_data(&self, c: CommandId) -> FieldSet {
        self.command_writes(c)
            .without(Field::Alpha)
            .without(Field::Beta)
            .without(Field::WriterRounds)
            .without(Field::ReaderRounds)
    }
}

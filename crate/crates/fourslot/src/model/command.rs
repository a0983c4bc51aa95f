//! The ten labelled atomic commands and their static metadata.

use super::field::{Field, FieldSet, LI_TM_FIELDS, LI_VAL_FIELDS, SLOT_FIELDS};
use super::state::{ReaderPc, WriterPc};

/// Which thread issues a command.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Writer,
    Reader,
}

/// Identifier of one labelled step. The identifier names the program
/// position; the effect executed there can be swapped by a mutation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CommandId {
    Am2,
    Am1,
    A,
    Ap1,
    Ap2,
    Bm3,
    Bm2,
    Bm1,
    B,
    Bp1,
}

impl CommandId {
    /// All commands in label order `a-2 < a-1 < … < b+1`; ties in trace
    /// reconstruction are broken by this order.
    pub const ALL: [CommandId; 10] = [
        CommandId::Am2,
        CommandId::Am1,
        CommandId::A,
        CommandId::Ap1,
        CommandId::Ap2,
        CommandId::Bm3,
        CommandId::Bm2,
        CommandId::Bm1,
        CommandId::B,
        CommandId::Bp1,
    ];

    pub fn side(self) -> Side {
        match self {
            CommandId::Am2 | CommandId::Am1 | CommandId::A | CommandId::Ap1 | CommandId::Ap2 => {
                Side::Writer
            }
            _ => Side::Reader,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CommandId::Am2 => "a-2",
            CommandId::Am1 => "a-1",
            CommandId::A => "a",
            CommandId::Ap1 => "a+1",
            CommandId::Ap2 => "a+2",
            CommandId::Bm3 => "b-3",
            CommandId::Bm2 => "b-2",
            CommandId::Bm1 => "b-1",
            CommandId::B => "b",
            CommandId::Bp1 => "b+1",
        }
    }

    pub fn from_label(label: &str) -> Option<CommandId> {
        CommandId::ALL.into_iter().find(|c| c.label() == label)
    }

    /// The writer PC at which this command is enabled, if it is a writer
    /// command.
    pub fn writer_pc(self) -> Option<WriterPc> {
        match self {
            CommandId::Am2 => Some(WriterPc::Am2),
            CommandId::Am1 => Some(WriterPc::Am1),
            CommandId::A => Some(WriterPc::A),
            CommandId::Ap1 => Some(WriterPc::Ap1),
            CommandId::Ap2 => Some(WriterPc::Ap2),
            _ => None,
        }
    }

    pub fn reader_pc(self) -> Option<ReaderPc> {
        match self {
            CommandId::Bm3 => Some(ReaderPc::Bm3),
            CommandId::Bm2 => Some(ReaderPc::Bm2),
            CommandId::Bm1 => Some(ReaderPc::Bm1),
            CommandId::B => Some(ReaderPc::B),
            CommandId::Bp1 => Some(ReaderPc::Bp1),
            _ => None,
        }
    }

    /// Fields the unmutated command reads, including its own program
    /// counter (the guard) and the bound counter where the bound applies.
    pub fn reads(self) -> FieldSet {
        match self {
            CommandId::Am2 => FieldSet::of(&[
                Field::Alpha,
                Field::Reading,
                Field::Wtm,
                Field::WriterRounds,
            ]),
            CommandId::Am1 => {
                FieldSet::of(&[Field::Alpha, Field::Wp]).union(LI_VAL_FIELDS)
            }
            CommandId::A => FieldSet::of(&[Field::Alpha, Field::Wp, Field::Wi, Field::Wtm]),
            CommandId::Ap1 => FieldSet::of(&[Field::Alpha, Field::Wp, Field::Wi, Field::Wtm]),
            CommandId::Ap2 => FieldSet::of(&[Field::Alpha, Field::Wp]),
            CommandId::Bm3 => {
                FieldSet::of(&[Field::Beta, Field::Latest, Field::ReaderRounds])
            }
            CommandId::Bm2 => FieldSet::of(&[Field::Beta, Field::Rp]),
            CommandId::Bm1 => FieldSet::of(&[Field::Beta, Field::Rp])
                .union(LI_VAL_FIELDS)
                .union(LI_TM_FIELDS),
            CommandId::B => {
                FieldSet::of(&[Field::Beta, Field::Rp, Field::Ri]).union(SLOT_FIELDS)
            }
            CommandId::Bp1 => FieldSet::of(&[Field::Beta]),
        }
    }

    /// Fields the unmutated command may write, including its program
    /// counter.
    pub fn writes(self) -> FieldSet {
        match self {
            CommandId::Am2 => FieldSet::of(&[
                Field::Alpha,
                Field::Wp,
                Field::Wtm,
                Field::WriterRounds,
            ]),
            CommandId::Am1 => FieldSet::of(&[Field::Alpha, Field::Wi]),
            CommandId::A => FieldSet::of(&[Field::Alpha]).union(SLOT_FIELDS),
            CommandId::Ap1 => FieldSet::of(&[Field::Alpha])
                .union(LI_VAL_FIELDS)
                .union(LI_TM_FIELDS),
            CommandId::Ap2 => FieldSet::of(&[Field::Alpha, Field::Latest]),
            CommandId::Bm3 => {
                FieldSet::of(&[Field::Beta, Field::Rp, Field::ReaderRounds])
            }
            CommandId::Bm2 => FieldSet::of(&[Field::Beta, Field::Reading]),
            CommandId::Bm1 => FieldSet::of(&[Field::Beta, Field::Ri, Field::Rtm]),
            CommandId::B => FieldSet::of(&[Field::Beta, Field::Rtm, Field::YStamp]),
            CommandId::Bp1 => FieldSet::of(&[Field::Beta]),
        }
    }

    /// Non-PC, non-bookkeeping fields written; the write set that matters
    /// when classifying induction obligations.
    pub fn writes_data(self) -> FieldSet {
        self.writes()
            .without(Field::Alpha)
            .without(Field::Beta)
            .without(Field::WriterRounds)
            .without(Field::ReaderRounds)
    }

    /// Index variables through which the command reads a control array
    /// (the slot index array); slot-payload addressing does not count.
    pub fn control_index_reads(self) -> FieldSet {
        match self {
            CommandId::Am1 => FieldSet::of(&[Field::Wp]),
            CommandId::Bm1 => FieldSet::of(&[Field::Rp]),
            _ => FieldSet::EMPTY,
        }
    }
}

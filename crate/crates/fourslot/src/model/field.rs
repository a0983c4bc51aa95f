//! Named state fields and field sets.
//!
//! Predicates declare which fields they read and commands declare which
//! fields they read and write. The induction engine enumerates exactly
//! those fields and leaves the rest at defaults, which is equivalent to
//! quantifying over the whole bounded domain as long as the declarations
//! are accurate (a property test cross-checks them by perturbation).

/// One scalar field of a [`GlobalState`](super::GlobalState).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
#[repr(u8)]
pub enum Field {
    Alpha = 0,
    Beta,
    Wp,
    Wi,
    Rp,
    Ri,
    Reading,
    Latest,
    LiVal0,
    LiVal1,
    LiTm0,
    LiTm1,
    Slot00,
    Slot01,
    Slot10,
    Slot11,
    Wtm,
    Rtm,
    YStamp,
    WriterRounds,
    ReaderRounds,
}

impl Field {
    pub const COUNT: usize = 21;

    pub const ALL: [Field; Field::COUNT] = [
        Field::Alpha,
        Field::Beta,
        Field::Wp,
        Field::Wi,
        Field::Rp,
        Field::Ri,
        Field::Reading,
        Field::Latest,
        Field::LiVal0,
        Field::LiVal1,
        Field::LiTm0,
        Field::LiTm1,
        Field::Slot00,
        Field::Slot01,
        Field::Slot10,
        Field::Slot11,
        Field::Wtm,
        Field::Rtm,
        Field::YStamp,
        Field::WriterRounds,
        Field::ReaderRounds,
    ];
}

/// Small bitset over [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug)]
pub struct FieldSet(u32);

impl FieldSet {
    pub const EMPTY: FieldSet = FieldSet(0);

    pub const fn of(fields: &[Field]) -> FieldSet {
        let mut bits = 0u32;
        let mut i = 0;
        while i < fields.len() {
            bits |= 1 << fields[i] as u32;
            i += 1;
        }
        FieldSet(bits)
    }

    pub const fn union(self, other: FieldSet) -> FieldSet {
        FieldSet(self.0 | other.0)
    }

    pub const fn intersects(self, other: FieldSet) -> bool {
        self.0 & other.0 != 0
    }

    pub const fn contains(self, field: Field) -> bool {
        self.0 & (1 << field as u32) != 0
    }

    pub const fn with(self, field: Field) -> FieldSet {
        FieldSet(self.0 | (1 << field as u32))
    }

    pub const fn without(self, field: Field) -> FieldSet {
        FieldSet(self.0 & !(1 << field as u32))
    }

    pub fn iter(self) -> impl Iterator<Item = Field> {
        Field::ALL.into_iter().filter(move |f| self.contains(*f))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

/// The slot stamp field addressed by `(pair, index)`.
pub const fn slot_field(pair: u8, index: u8) -> Field {
    match (pair, index) {
        (0, 0) => Field::Slot00,
        (0, 1) => Field::Slot01,
        (1, 0) => Field::Slot10,
        _ => Field::Slot11,
    }
}

/// All four slot stamp fields.
pub const SLOT_FIELDS: FieldSet = FieldSet::of(&[
    Field::Slot00,
    Field::Slot01,
    Field::Slot10,
    Field::Slot11,
]);

/// Both index-entry stamp fields.
pub const LI_TM_FIELDS: FieldSet = FieldSet::of(&[Field::LiTm0, Field::LiTm1]);

/// Both index-entry value fields.
pub const LI_VAL_FIELDS: FieldSet = FieldSet::of(&[Field::LiVal0, Field::LiVal1]);

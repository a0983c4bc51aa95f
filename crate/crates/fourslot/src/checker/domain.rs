//! Enumeration of the bounded syntactic state domain.
//!
//! Induction obligations quantify over *all* well-formed states within
//! the bounded stamp domain, not just reachable ones. Enumerating every
//! field of every state is infeasible, but an obligation can only depend
//! on the fields its predicates and command declare, so the enumerator
//! walks exactly a declared field set and pins everything else to the
//! initial state's values. Round counters follow the round stamp unless
//! explicitly enumerated.

use crate::model::{Field, FieldSet, GlobalState, ReaderPc, Stamp, TransitionSystem, Variant, WriterPc};

/// Per-field domain sizes for round bound `k`: bits have two values,
/// program counters five, stamps range over the sentinel plus `0..=k+1`,
/// the round stamp over `0..=k+1`, and round counters over `0..=k`.
fn domain_size(field: Field, k: u8) -> u32 {
    match field {
        Field::Alpha | Field::Beta => 5,
        Field::Wp
        | Field::Wi
        | Field::Rp
        | Field::Ri
        | Field::Reading
        | Field::Latest
        | Field::LiVal0
        | Field::LiVal1 => 2,
        Field::Wtm => k as u32 + 2,
        Field::WriterRounds | Field::ReaderRounds => k as u32 + 1,
        _ => k as u32 + 3,
    }
}

fn stamp_value(raw: u32) -> Stamp {
    if raw == 0 {
        None
    } else {
        Some((raw - 1) as u8)
    }
}

fn apply(s: &mut GlobalState, field: Field, raw: u32) {
    match field {
        Field::Alpha => s.alpha = WriterPc::ALL[raw as usize],
        Field::Beta => s.beta = ReaderPc::ALL[raw as usize],
        Field::Wp => s.wp = raw as u8,
        Field::Wi => s.wi = raw as u8,
        Field::Rp => s.rp = raw as u8,
        Field::Ri => s.ri = raw as u8,
        Field::Reading => s.reading = raw as u8,
        Field::Latest => s.latest = raw as u8,
        Field::LiVal0 => s.li[0].value = raw as u8,
        Field::LiVal1 => s.li[1].value = raw as u8,
        Field::LiTm0 => s.li[0].stamp = stamp_value(raw),
        Field::LiTm1 => s.li[1].stamp = stamp_value(raw),
        Field::Slot00 => s.slots[0][0] = stamp_value(raw),
        Field::Slot01 => s.slots[0][1] = stamp_value(raw),
        Field::Slot10 => s.slots[1][0] = stamp_value(raw),
        Field::Slot11 => s.slots[1][1] = stamp_value(raw),
        Field::Wtm => s.wtm = Some(raw as u8),
        Field::Rtm => s.rtm = stamp_value(raw),
        Field::YStamp => s.y_stamp = stamp_value(raw),
        Field::WriterRounds => s.writer_rounds = raw as u8,
        Field::ReaderRounds => s.reader_rounds = raw as u8,
    }
}

/// Number of states the field set spans at bound `k`.
pub fn domain_count(fields: FieldSet, k: u8) -> u64 {
    fields
        .iter()
        .map(|f| domain_size(f, k) as u64)
        .product()
}

/// Calls `visit` for every valuation of `fields` over the bounded
/// domain, with all other fields left at `base`'s values. Stops early
/// and returns `false` if `visit` does.
pub fn for_each_state(
    ts: &TransitionSystem,
    base: &GlobalState,
    fields: FieldSet,
    visit: &mut dyn FnMut(&GlobalState) -> bool,
) -> bool {
    assert_eq!(
        ts.variant,
        Variant::Timestamped,
        "induction domains are defined over the timestamped system"
    );
    let k = ts.round_bound;
    let fs: Vec<Field> = fields.iter().collect();
    let sizes: Vec<u32> = fs.iter().map(|f| domain_size(*f, k)).collect();
    let mut raw = vec![0u32; fs.len()];
    let follow_wtm = !fields.contains(Field::WriterRounds);
    let mut state = *base;
    for (i, f) in fs.iter().enumerate() {
        apply(&mut state, *f, raw[i]);
    }

    loop {
        if follow_wtm {
            // Keep the bound counter consistent with the round stamp so
            // that round-entry guards see the bound the stamp implies.
            state.writer_rounds = state.wtm.map_or(0, |w| w.saturating_sub(1)).min(k);
        }
        if !visit(&state) {
            return false;
        }
        // Odometer tick; only touched fields are re-applied.
        let mut i = 0;
        loop {
            if i == fs.len() {
                return true;
            }
            raw[i] += 1;
            if raw[i] < sizes[i] {
                apply(&mut state, fs[i], raw[i]);
                break;
            }
            raw[i] = 0;
            apply(&mut state, fs[i], 0);
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FieldSet;

    #[test]
    fn empty_field_set_visits_exactly_the_base_state() {
        let ts = TransitionSystem::new(Variant::Timestamped, 4);
        let mut n = 0;
        for_each_state(&ts, &ts.initial_state(), FieldSet::EMPTY, &mut |s| {
            assert_eq!(*s, ts.initial_state());
            n += 1;
            true
        });
        assert_eq!(n, 1);
    }

    #[test]
    fn counts_match_the_product_of_domain_sizes() {
        let ts = TransitionSystem::new(Variant::Timestamped, 2);
        let fields = FieldSet::of(&[Field::Alpha, Field::Wp, Field::Wtm, Field::Rtm]);
        assert_eq!(domain_count(fields, 2), 5 * 2 * 4 * 5);
        let mut n = 0u64;
        for_each_state(&ts, &ts.initial_state(), fields, &mut |_| {
            n += 1;
            true
        });
        assert_eq!(n, 5 * 2 * 4 * 5);
    }

    #[test]
    fn early_stop_propagates() {
        let ts = TransitionSystem::new(Variant::Timestamped, 2);
        let fields = FieldSet::of(&[Field::Wp, Field::Wi]);
        let mut n = 0;
        let complete = for_each_state(&ts, &ts.initial_state(), fields, &mut |_| {
            n += 1;
            n < 3
        });
        assert!(!complete);
        assert_eq!(n, 3);
    }
}

//! Finite transition-system semantics of the four-slot mechanism.
//!
//! Both the plain and the timestamped mechanism are encoded as explicit
//! transition systems over [`GlobalState`]: ten deterministic commands,
//! one per labelled step, each guarded by the issuing side's program
//! counter. A round bound keeps the timestamped system finite; stamps are
//! the only unbounded data and they are capped by the bound.

mod command;
mod field;
mod state;
mod system;

pub use command::{CommandId, Side};
pub use field::{slot_field, Field, FieldSet, LI_TM_FIELDS, LI_VAL_FIELDS, SLOT_FIELDS};
pub use state::{
    fmt_stamp, ControlProjection, GlobalState, IndexEntry, ReaderPc, Stamp, WriterPc,
};
pub use system::{Mutation, TransitionSystem, Variant};

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(k: u8) -> TransitionSystem {
        TransitionSystem::new(Variant::Timestamped, k)
    }

    #[test]
    fn timestamped_initialization() {
        let s = ts(4).initial_state();
        assert_eq!(s.wtm, Some(1));
        assert_eq!(s.rtm, Some(0));
        assert_eq!(s.latest, 1);
        assert_eq!(s.reading, 0);
        assert_eq!(s.li[0], IndexEntry { value: 0, stamp: Some(0) });
        assert_eq!(s.li[1], IndexEntry { value: 0, stamp: Some(1) });
        assert_eq!(s.slots, [[Some(0), None], [Some(1), None]]);
        assert_eq!(s.y_stamp, None);
    }

    #[test]
    fn plain_initialization() {
        let s = TransitionSystem::new(Variant::Plain, 1).initial_state();
        assert_eq!((s.li[0].value, s.li[1].value), (0, 0));
        assert_eq!((s.wp, s.wi, s.rp, s.ri), (1, 0, 0, 0));
        assert_eq!((s.latest, s.reading), (1, 0));
        assert_eq!(s.wtm, None);
        assert_eq!(s.slots, [[None; 2]; 2]);
    }

    #[test]
    fn both_counters_start_at_round_entry() {
        for k in [1, 2, 7] {
            let s = ts(k).initial_state();
            assert_eq!(s.alpha, WriterPc::Am2);
            assert_eq!(s.beta, ReaderPc::Bm3);
        }
    }

    #[test]
    fn step_am2_from_initial() {
        let sys = ts(4);
        let s = sys.step(&sys.initial_state(), CommandId::Am2);
        assert_eq!(s.wp, 1);
        assert_eq!(s.wtm, Some(2));
        assert_eq!(s.alpha, WriterPc::Am1);
    }

    #[test]
    fn step_bm3_from_initial() {
        let sys = ts(4);
        let s = sys.step(&sys.initial_state(), CommandId::Bm3);
        assert_eq!(s.rp, 1);
        assert_eq!(s.beta, ReaderPc::Bm2);
    }

    #[test]
    fn step_bm1_captures_index_entry() {
        let sys = ts(4);
        let mut s = sys.initial_state();
        s.beta = ReaderPc::Bm1;
        s.rp = 0;
        s.li[0] = IndexEntry { value: 0, stamp: Some(0) };
        let n = sys.step(&s, CommandId::Bm1);
        assert_eq!(n.ri, 0);
        assert_eq!(n.rtm, Some(0));
        assert_eq!(n.beta, ReaderPc::B);
    }

    #[test]
    fn enabled_initially_is_round_entry_pair() {
        let sys = ts(4);
        assert_eq!(
            sys.enabled(&sys.initial_state()),
            vec![CommandId::Am2, CommandId::Bm3]
        );
    }

    #[test]
    fn enabled_mid_round() {
        let sys = ts(4);
        let mut s = sys.initial_state();
        s.alpha = WriterPc::A;
        s.beta = ReaderPc::B;
        assert_eq!(sys.enabled(&s), vec![CommandId::A, CommandId::B]);
    }

    #[test]
    fn writer_disabled_when_rounds_exhausted() {
        let sys = ts(4);
        let mut s = sys.initial_state();
        s.writer_rounds = 4;
        s.wtm = Some(5);
        assert_eq!(sys.enabled(&s), vec![CommandId::Bm3]);
    }

    #[test]
    fn bounded_state_deadlocks_when_both_sides_exhausted() {
        let sys = ts(1);
        let mut s = sys.initial_state();
        s.writer_rounds = 1;
        s.reader_rounds = 1;
        assert!(sys.successors(&s).is_empty());
    }

    #[test]
    fn at_most_two_successors_and_deterministic() {
        let sys = ts(2);
        let mut frontier = vec![sys.initial_state()];
        let mut seen = std::collections::HashSet::new();
        while let Some(s) = frontier.pop() {
            if !seen.insert(s) {
                continue;
            }
            let succ = sys.successors(&s);
            assert!(succ.len() <= 2);
            for (c, n) in &succ {
                assert_eq!(sys.step(&s, *c), *n);
                frontier.push(*n);
            }
        }
    }

    #[test]
    fn each_step_moves_exactly_one_counter_one_label() {
        let sys = ts(2);
        let mut frontier = vec![sys.initial_state()];
        let mut seen = std::collections::HashSet::new();
        while let Some(s) = frontier.pop() {
            if !seen.insert(s) {
                continue;
            }
            for (c, n) in sys.successors(&s) {
                match c.side() {
                    Side::Writer => {
                        assert_eq!(n.alpha, s.alpha.next());
                        assert_eq!(n.beta, s.beta);
                    }
                    Side::Reader => {
                        assert_eq!(n.beta, s.beta.next());
                        assert_eq!(n.alpha, s.alpha);
                    }
                }
                frontier.push(n);
            }
        }
    }

    #[test]
    #[should_panic(expected = "disabled command")]
    fn stepping_disabled_command_is_a_contract_violation() {
        let sys = ts(4);
        sys.step(&sys.initial_state(), CommandId::A);
    }

    #[test]
    fn canonical_text_form_is_stable() {
        let sys = ts(4);
        let init = sys.initial_state();
        assert_eq!(
            init.to_string(),
            "alpha=a-2 beta=b-3 wp=1 wi=0 rp=0 ri=0 reading=0 latest=1 \
             li0=0#0 li1=0#1 d00=#0 d01=#_ d10=#1 d11=#_ wtm=#1 rtm=#0 y=#_ rounds=0/0"
        );
    }

    #[test]
    fn serial_write_round_targets_slot_one_one_then_zero() {
        // Two full writer rounds with the reader idle.
        let sys = ts(4);
        let mut s = sys.initial_state();
        for c in [CommandId::Am2, CommandId::Am1, CommandId::A, CommandId::Ap1, CommandId::Ap2] {
            s = sys.step(&s, c);
        }
        assert_eq!((s.wp, s.wi), (1, 1));
        assert_eq!(s.slots[1][1], Some(2));
        assert_eq!(s.li[1], IndexEntry { value: 1, stamp: Some(2) });
        assert_eq!(s.latest, 1);
        for c in [CommandId::Am2, CommandId::Am1, CommandId::A, CommandId::Ap1, CommandId::Ap2] {
            s = sys.step(&s, c);
        }
        // Second round stays on pair 1 and flips the slot index back.
        assert_eq!((s.wp, s.wi), (1, 0));
        assert_eq!(s.slots[1][0], Some(3));
        assert_eq!(s.li[1], IndexEntry { value: 0, stamp: Some(3) });
    }
}

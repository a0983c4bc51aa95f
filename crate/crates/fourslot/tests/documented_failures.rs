//! Conditions kept in the catalog even though the mechanical check
//! refutes them. Each failure is pinned here with a replayable
//! counterexample so the record stays honest: the supported readings
//! hold, the refuted readings fail, and nothing in the proof script
//! depends on the refuted ones.

use fourslot::checker::{
    check_state_invariant, check_transition_invariant, explore, Budget, Verdict,
};
use fourslot::model::{TransitionSystem, Variant};
use fourslot::predicates::catalog;

fn system() -> TransitionSystem {
    TransitionSystem::new(Variant::Timestamped, 4)
}

/// The auxiliary claim "outside announce/index-fetch the reader's slot
/// equals the published index of its pair" is refuted: the writer may
/// republish the reader's pair right under a parked reader. The reader
/// then reads the older slot of that pair, which is exactly why this
/// claim is not needed for race freedom.
#[test]
fn aux_ri_is_refuted_on_the_reachable_system() {
    let ts = system();
    let reach = explore(&ts, &Budget::default()).unwrap();
    let report = check_state_invariant(catalog().state("AUX_RI"), &reach);
    assert_eq!(report.verdict, Verdict::Fails);
    let trace = report.counterexample.expect("counterexample trace");
    trace.replay(&ts).unwrap();
    let bad = trace.states.last().unwrap();
    assert_ne!(bad.ri, bad.li[bad.rp as usize].value);
}

/// Of the two index orders for the fetched-slot stamp equation, the
/// pair-then-slot order holds and the swapped order fails.
#[test]
fn swapped_slot_indexing_is_refuted() {
    let ts = system();
    let reach = explore(&ts, &Budget::default()).unwrap();
    let c = catalog();
    assert_eq!(
        check_state_invariant(c.state("AUX_f"), &reach).verdict,
        Verdict::Holds
    );
    let report = check_state_invariant(c.state("AUX_F_SWAPPED"), &reach);
    assert_eq!(report.verdict, Verdict::Fails);
    report.counterexample.unwrap().replay(&ts).unwrap();
}

/// Removing the announce step breaks race freedom itself: without
/// `reading`, the writer cannot steer away from the pair the reader is
/// on, and a state with both threads in the same slot becomes reachable.
#[test]
fn dropping_the_announce_step_makes_the_race_state_reachable() {
    let ts = system().with_mutation(Some(fourslot::model::Mutation::DropB2));
    let reach = explore(&ts, &Budget::default()).unwrap();
    let report = check_state_invariant(catalog().state("RACE_FREEDOM"), &reach);
    assert_eq!(report.verdict, Verdict::Fails);
    let trace = report.counterexample.expect("counterexample trace");
    trace.replay(&ts).unwrap();
    let bad = trace.states.last().unwrap();
    assert_eq!((bad.wp, bad.wi), (bad.rp, bad.ri));
}

/// Of the two orientations of the freshness upper bound, the one with
/// the finished read first holds; the inverted orientation claims a read
/// can never return a stamp issued after an earlier announce-window
/// state, which overlap makes false.
#[test]
fn inverted_freshness_orientation_is_refuted() {
    let ts = system();
    let reach = explore(&ts, &Budget::default()).unwrap();
    let c = catalog();
    let good = check_transition_invariant(c.pair("FRESH1"), &reach, 1_000_000_000).unwrap();
    assert_eq!(good.verdict, Verdict::Holds);
    let bad = check_transition_invariant(c.pair("FRESH1_TEMPORAL"), &reach, 1_000_000_000).unwrap();
    assert_eq!(bad.verdict, Verdict::Fails);
    let trace = bad.counterexample.expect("pair counterexample");
    trace.replay(&ts).unwrap();
    let split = trace.pair_split.unwrap();
    let (first, last) = (&trace.states[split], trace.states.last().unwrap());
    // The pair violates the inverted orientation: announce-window state
    // first, finished read later, returned stamp beyond the earlier
    // counter.
    assert_eq!(first.beta, fourslot::model::ReaderPc::Bm2);
    assert_eq!(last.beta, fourslot::model::ReaderPc::Bp1);
    let rtm = last.rtm.map(|v| v as i64).unwrap_or(-1);
    let wtm = first.wtm.map(|v| v as i64).unwrap_or(-1);
    assert!(rtm >= wtm + 1);
}

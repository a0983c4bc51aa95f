//! Reachability engine against the independent depth-first oracle, with
//! the expected counts frozen.

mod common;

use fourslot::checker::{explore, Budget};
use fourslot::model::{TransitionSystem, Variant};

fn ts(k: u8) -> TransitionSystem {
    TransitionSystem::new(Variant::Timestamped, k)
}

/// Frozen reachability counts for the timestamped system, computed by
/// the depth-first oracle: (k, states, transitions).
const EXPECTED: [(u8, usize, usize); 4] = [
    (1, 62, 98),
    (2, 401, 686),
    (3, 1690, 3001),
    (4, 5551, 10052),
];

#[test]
fn engine_and_oracle_agree_on_frozen_counts() {
    for (k, states, transitions) in EXPECTED {
        let system = ts(k);
        let oracle = common::dfs_oracle(&system);
        assert_eq!(oracle.states, states, "oracle states at k={k}");
        assert_eq!(oracle.transitions, transitions, "oracle transitions at k={k}");
        let reach = explore(&system, &Budget::default()).unwrap();
        assert_eq!(reach.state_count(), states, "engine states at k={k}");
        assert_eq!(reach.transition_count(), transitions, "engine transitions at k={k}");
    }
}

#[test]
fn engine_and_oracle_agree_on_the_plain_variant() {
    for k in 1..=4 {
        let system = TransitionSystem::new(Variant::Plain, k);
        let oracle = common::dfs_oracle(&system);
        let reach = explore(&system, &Budget::default()).unwrap();
        assert_eq!(reach.state_count(), oracle.states, "k={k}");
        assert_eq!(reach.transition_count(), oracle.transitions, "k={k}");
    }
}

#[test]
fn control_projection_saturates_by_bound_seven() {
    // The stamp-free projection stops growing once the bound admits
    // every control alignment; that happens between bounds 6 and 7.
    let p6 = common::dfs_projections(&ts(6));
    let p7 = common::dfs_projections(&ts(7));
    assert_eq!(p6, p7);
    assert_eq!(p6.len(), 1104);
}

#[test]
fn all_sixteen_control_bit_combinations_reachable_by_bound_three() {
    let reach = explore(&ts(3), &Budget::default()).unwrap();
    let combos: std::collections::HashSet<(u8, u8, u8, u8)> = reach
        .states
        .iter()
        .map(|s| (s.latest, s.reading, s.li[0].value, s.li[1].value))
        .collect();
    assert_eq!(combos.len(), 16);
}
